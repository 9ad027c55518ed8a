#include "certsynt/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sat_internal.hpp"

namespace certsynt {

SolverBackend SolverBackend::embedded(double timeout_sec) {
  SolverBackend b;
  b.kind = Kind::Embedded;
  b.timeout_sec = timeout_sec;
  return b;
}

SolverBackend SolverBackend::external(std::string path, double timeout_sec,
                                      std::string work_dir) {
  SolverBackend b;
  b.kind = Kind::External;
  b.path = std::move(path);
  b.timeout_sec = timeout_sec;
  b.work_dir = std::move(work_dir);
  return b;
}

namespace {

bool model_satisfies(const Model& model, const CnfInstance& cnf) {
  if (model.value.size() < static_cast<size_t>(cnf.num_vars) + 1) return false;
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int l : clause) {
      if (l > 0 ? model.value[static_cast<size_t>(l)] : !model.value[static_cast<size_t>(-l)]) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace

namespace internal {

SolveResult solve_external(const CnfInstance& cnf, const std::string& path, double timeout_sec,
                           const std::string& work_dir) {
  static int serial = 0;
  const std::string file = work_dir + "/certsynt_" + std::to_string(::getpid()) + "_" +
                           std::to_string(serial++) + ".cnf";
  {
    std::ofstream os(file);
    if (!os) throw IoError("cannot write DIMACS file " + file);
    to_dimacs(cnf, os);
    if (!os.flush()) throw IoError("cannot write DIMACS file " + file);
  }

  int pipefd[2];
  if (::pipe(pipefd) != 0) throw IoError("pipe failed: " + std::string(std::strerror(errno)));
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    throw IoError("fork failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    // Own process group, so a timeout kill reaches the solver's children too.
    ::setpgid(0, 0);
    ::dup2(pipefd[1], STDOUT_FILENO);
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    ::execlp(path.c_str(), path.c_str(), file.c_str(), static_cast<char*>(nullptr));
    std::fprintf(stderr, "exec %s failed: %s\n", path.c_str(), std::strerror(errno));
    ::_exit(127);
  }
  ::setpgid(pid, pid);  // mirror the child; one of the two calls wins the race
  ::close(pipefd[1]);

  std::string output;
  bool timed_out = false;
  const auto start = std::chrono::steady_clock::now();
  char buf[4096];
  while (true) {
    int wait_ms = -1;
    if (timeout_sec > 0) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const double remaining = timeout_sec - elapsed;
      if (remaining <= 0) {
        timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(remaining * 1000) + 1;
    }
    struct pollfd pfd = {pipefd[0], POLLIN, 0};
    const int pr = ::poll(&pfd, 1, wait_ms);
    if (pr == 0) {
      timed_out = true;
      break;
    }
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    const ssize_t got = ::read(pipefd[0], buf, sizeof buf);
    if (got <= 0) break;  // EOF or error: the child is done writing
    output.append(buf, static_cast<size_t>(got));
  }
  ::close(pipefd[0]);
  int wstatus = 0;
  if (timed_out) {
    if (::kill(-pid, SIGKILL) != 0) ::kill(pid, SIGKILL);
    ::waitpid(pid, &wstatus, 0);
    ::remove(file.c_str());
    SolveResult res;
    res.status = SolveStatus::Unknown;
    res.info = "external solver killed after timeout";
    return res;
  }
  ::waitpid(pid, &wstatus, 0);
  ::remove(file.c_str());
  if (WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 127)
    throw IoError("cannot launch external solver '" + path + "'");

  SolveResult res;
  std::istringstream is(output);
  std::string line;
  std::vector<int> lits;
  bool answered = false;
  while (std::getline(is, line)) {
    if (line.rfind("s ", 0) == 0) {
      answered = true;
      if (line.find("UNSATISFIABLE") != std::string::npos)
        res.status = SolveStatus::Unsat;
      else if (line.find("SATISFIABLE") != std::string::npos)
        res.status = SolveStatus::Sat;
      else
        res.status = SolveStatus::Unknown;
    } else if (line.rfind("v", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
      std::istringstream vs(line.substr(1));
      int l;
      while (vs >> l)
        if (l != 0) lits.push_back(l);
    }
  }
  if (!answered) {
    res.status = SolveStatus::Unknown;
    res.info = "external solver produced no status line";
    return res;
  }
  if (res.status == SolveStatus::Sat) {
    res.model.value.assign(static_cast<size_t>(cnf.num_vars) + 1, false);
    for (int l : lits) {
      const int v = std::abs(l);
      if (v > cnf.num_vars)
        throw InvalidInput("external solver mentions out-of-range variable " +
                           std::to_string(v));
      res.model.value[static_cast<size_t>(v)] = l > 0;
    }
  }
  if (res.status == SolveStatus::Unknown) res.info = "external solver answered unknown";
  return res;
}

}  // namespace internal

SolveResult solve(const CnfInstance& cnf, const SolverBackend& backend) {
  SolveResult res = backend.kind == SolverBackend::Kind::Embedded
                        ? internal::solve_embedded(cnf, backend.timeout_sec)
                        : internal::solve_external(cnf, backend.path, backend.timeout_sec,
                                                   backend.work_dir);
  if (res.status == SolveStatus::Sat && !model_satisfies(res.model, cnf)) {
    if (backend.kind == SolverBackend::Kind::External)
      throw InvalidInput("external solver returned a model that violates the instance");
    throw std::logic_error("embedded solver returned a model that violates the instance");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Model decoding
// ---------------------------------------------------------------------------

namespace {

bool model_var(const Model& model, const VariableRegistry& registry, const std::string& name) {
  const int v = registry.find(name);
  if (v == 0) throw std::logic_error("decode: encoding variable missing: " + name);
  return model[v];
}

}  // namespace

std::vector<ProcessMachines> decode(const Model& model, const EncodingLayout& layout,
                                    const VariableRegistry& registry) {
  std::vector<ProcessMachines> out;
  const bool mealy = layout.mode == SemanticsMode::Mealy;
  for (size_t j = 0; j < layout.process_names.size(); ++j) {
    const std::string& pname = layout.process_names[j];
    const int n_t = layout.strategy_size[j];
    const int n_g = layout.cert_size[j];

    ProcessMachines pm;
    Machine& s = pm.local_strategy;
    s.inputs = layout.inputs[j];
    s.outputs = layout.label_vars[j];
    s.assoc_outputs = layout.assoc_vars[j];
    s.mealy = mealy;
    for (int t = 0; t < n_t; ++t) s.add_state("t" + std::to_string(t));
    for (int t = 0; t < n_t; ++t) {
      auto& st = s.states[static_cast<size_t>(t)];
      for (uint32_t i = 0; i < s.cube_count(); ++i) {
        int succ = -1;
        for (int t2 = 0; t2 < n_t; ++t2) {
          if (!model_var(model, registry, varname::trans_t(pname, t, i, t2))) continue;
          if (succ >= 0)
            throw std::logic_error("decode: two strategy successors for " + pname + " state " +
                                   std::to_string(t));
          succ = t2;
        }
        st.succ[i] = succ;
      }
      const uint32_t label_cubes = mealy ? s.cube_count() : 1;
      for (uint32_t i = 0; i < label_cubes; ++i) {
        uint32_t mask = 0;
        for (size_t b = 0; b < s.outputs.size(); ++b) {
          const int tag = mealy ? static_cast<int>(i) : -1;
          if (model_var(model, registry, varname::out_t(pname, t, tag, s.outputs[b])))
            mask |= 1u << b;
        }
        if (mealy)
          st.out[i] = mask;
        else
          st.label = mask;
      }
    }

    Machine& g = pm.certificate;
    g.inputs = layout.inputs[j];
    g.outputs = layout.guarantee_outputs[j];
    g.mealy = mealy;
    for (int u = 0; u < n_g; ++u) g.add_state("u" + std::to_string(u));
    for (int u = 0; u < n_g; ++u) {
      auto& st = g.states[static_cast<size_t>(u)];
      for (uint32_t i = 0; i < g.cube_count(); ++i) {
        int succ = -1;
        for (int u2 = 0; u2 < n_g; ++u2) {
          if (!model_var(model, registry, varname::trans_g(pname, u, i, u2))) continue;
          if (succ >= 0)
            throw std::logic_error("decode: two certificate successors for " + pname +
                                   " state " + std::to_string(u));
          succ = u2;
        }
        if (succ < 0)
          throw std::logic_error("decode: certificate of " + pname + " is not total at state " +
                                 std::to_string(u));
        st.succ[i] = succ;
      }
      const uint32_t label_cubes = mealy ? g.cube_count() : 1;
      for (uint32_t i = 0; i < label_cubes; ++i) {
        uint32_t mask = 0;
        for (size_t b = 0; b < g.outputs.size(); ++b) {
          const int tag = mealy ? static_cast<int>(i) : -1;
          if (model_var(model, registry, varname::out_g(pname, u, tag, g.outputs[b])))
            mask |= 1u << b;
        }
        if (mealy)
          st.out[i] = mask;
        else
          st.label = mask;
      }
    }
    out.push_back(std::move(pm));
  }
  return out;
}

}  // namespace certsynt
