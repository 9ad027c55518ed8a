#pragma once

#include <string>
#include <vector>

#include "certsynt/architecture.hpp"
#include "certsynt/ltl.hpp"
#include "certsynt/machine.hpp"
#include "certsynt/verification.hpp"

namespace certsynt {

/// A specification file: architecture plus the conjunct texts as written.
/// The raw texts are kept so that load -> save -> load is the identity.
struct SpecFile {
  Architecture arch;
  std::vector<std::string> conjunct_texts;

  ConjunctiveSpec parse_conjuncts() const { return parse_spec(conjunct_texts); }
};

/// JSON schema:
/// {
///   "processes":   [{"name": "...", "inputs": [...], "outputs": [...]}, ...],
///   "env_outputs": [...],
///   "conjuncts":   ["<LTL text>", ...]
/// }
/// Loading validates the architecture (hard errors throw InvalidInput) and
/// parses every conjunct; warnings are returned to the caller via validate().
SpecFile load_spec_file(const std::string& path);
SpecFile spec_from_json_text(const std::string& text);
std::string spec_to_json_text(const SpecFile& spec);
void save_spec_file(const SpecFile& spec, const std::string& path);

std::string machine_to_json_text(const Machine& m);
Machine machine_from_json_text(const std::string& text);
Machine load_machine_file(const std::string& path);
void save_machine_file(const Machine& m, const std::string& path);

/// GraphViz export: states annotated with their output letters, edges with
/// input letters (one edge per defined input letter).
std::string machine_to_dot(const Machine& m, const std::string& title = "machine");

std::string report_to_json_text(const VerificationReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace certsynt
