#include "certsynt/ltl.hpp"

#include <algorithm>
#include <cctype>

#include "certsynt/architecture.hpp"

namespace certsynt {

namespace ltl {

static FormulaPtr node(LtlKind k, std::string atom, std::vector<FormulaPtr> kids) {
  auto n = std::make_shared<LtlFormula>();
  n->kind = k;
  n->atom = std::move(atom);
  n->children = std::move(kids);
  return n;
}

FormulaPtr atom(std::string name) { return node(LtlKind::Atom, std::move(name), {}); }
FormulaPtr tru() { return node(LtlKind::True, "", {}); }
FormulaPtr fls() { return node(LtlKind::False, "", {}); }
FormulaPtr mk_not(FormulaPtr a) { return node(LtlKind::Not, "", {std::move(a)}); }
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
  return node(LtlKind::And, "", {std::move(a), std::move(b)});
}
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
  return node(LtlKind::Or, "", {std::move(a), std::move(b)});
}
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) {
  return node(LtlKind::Implies, "", {std::move(a), std::move(b)});
}
FormulaPtr mk_next(FormulaPtr a) { return node(LtlKind::Next, "", {std::move(a)}); }
FormulaPtr mk_until(FormulaPtr a, FormulaPtr b) {
  return node(LtlKind::Until, "", {std::move(a), std::move(b)});
}
FormulaPtr mk_eventually(FormulaPtr a) {
  return node(LtlKind::Eventually, "", {std::move(a)});
}
FormulaPtr mk_globally(FormulaPtr a) {
  return node(LtlKind::Globally, "", {std::move(a)});
}

}  // namespace ltl

bool ltl_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->atom != b->atom ||
      a->children.size() != b->children.size())
    return false;
  for (size_t i = 0; i < a->children.size(); ++i)
    if (!ltl_equal(a->children[i], b->children[i])) return false;
  return true;
}

namespace {

// Rendering precedence; higher binds tighter.
int prec_of(LtlKind k) {
  switch (k) {
    case LtlKind::Atom:
    case LtlKind::True:
    case LtlKind::False:
      return 100;
    case LtlKind::Not:
    case LtlKind::Next:
    case LtlKind::Eventually:
    case LtlKind::Globally:
      return 90;
    case LtlKind::Until:
      return 80;
    case LtlKind::And:
      return 70;
    case LtlKind::Or:
      return 60;
    case LtlKind::Implies:
      return 50;
  }
  return 0;
}

void render(const FormulaPtr& f, std::string& out, int parent_prec) {
  const int p = prec_of(f->kind);
  const bool parens = p < parent_prec;
  if (parens) out += '(';
  switch (f->kind) {
    case LtlKind::Atom:
      out += f->atom;
      break;
    case LtlKind::True:
      out += "true";
      break;
    case LtlKind::False:
      out += "false";
      break;
    case LtlKind::Not:
      out += '!';
      render(f->children[0], out, p + 1);
      break;
    case LtlKind::Next:
      out += "X ";
      render(f->children[0], out, p);
      break;
    case LtlKind::Eventually:
      out += "F ";
      render(f->children[0], out, p);
      break;
    case LtlKind::Globally:
      out += "G ";
      render(f->children[0], out, p);
      break;
    case LtlKind::Until:
      render(f->children[0], out, p + 1);  // right associative
      out += " U ";
      render(f->children[1], out, p);
      break;
    case LtlKind::And:
      render(f->children[0], out, p);  // left associative
      out += " && ";
      render(f->children[1], out, p + 1);
      break;
    case LtlKind::Or:
      render(f->children[0], out, p);
      out += " || ";
      render(f->children[1], out, p + 1);
      break;
    case LtlKind::Implies:
      render(f->children[0], out, p + 1);  // right associative
      out += " -> ";
      render(f->children[1], out, p);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::string out;
  render(f, out, 0);
  return out;
}

std::set<std::string> atomic_props(const FormulaPtr& f) {
  std::set<std::string> props;
  std::vector<const LtlFormula*> stack{f.get()};
  while (!stack.empty()) {
    const LtlFormula* n = stack.back();
    stack.pop_back();
    if (n->kind == LtlKind::Atom) props.insert(n->atom);
    for (const auto& c : n->children) stack.push_back(c.get());
  }
  return props;
}

FormulaPtr expand_sugar(const FormulaPtr& f) {
  std::vector<FormulaPtr> kids;
  kids.reserve(f->children.size());
  for (const auto& c : f->children) kids.push_back(expand_sugar(c));
  switch (f->kind) {
    case LtlKind::Eventually:
      return ltl::mk_until(ltl::tru(), kids[0]);
    case LtlKind::Globally:
      return ltl::mk_not(ltl::mk_until(ltl::tru(), ltl::mk_not(kids[0])));
    case LtlKind::Implies:
      return ltl::mk_or(ltl::mk_not(kids[0]), kids[1]);
    case LtlKind::Atom:
    case LtlKind::True:
    case LtlKind::False:
      return f;
    case LtlKind::Not:
      return ltl::mk_not(kids[0]);
    case LtlKind::Next:
      return ltl::mk_next(kids[0]);
    case LtlKind::And:
      return ltl::mk_and(kids[0], kids[1]);
    case LtlKind::Or:
      return ltl::mk_or(kids[0], kids[1]);
    case LtlKind::Until:
      return ltl::mk_until(kids[0], kids[1]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Iff, Next, Until,
                 Eventually, Globally, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg, int l, int c) const {
    throw ParseError(msg, l, c);
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }

  Token next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      advance(1);
    const int l = line, c = col;
    if (pos >= src.size()) return {Tok::End, "", l, c};
    const char ch = src[pos];
    if (ch == '(') { advance(1); return {Tok::LParen, "(", l, c}; }
    if (ch == ')') { advance(1); return {Tok::RParen, ")", l, c}; }
    if (ch == '!') { advance(1); return {Tok::Not, "!", l, c}; }
    if (src.compare(pos, 2, "&&") == 0) { advance(2); return {Tok::And, "&&", l, c}; }
    if (src.compare(pos, 2, "||") == 0) { advance(2); return {Tok::Or, "||", l, c}; }
    if (src.compare(pos, 3, "<->") == 0) { advance(3); return {Tok::Iff, "<->", l, c}; }
    if (src.compare(pos, 2, "->") == 0) { advance(2); return {Tok::Implies, "->", l, c}; }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        advance(1);
      std::string word = src.substr(start, pos - start);
      if (word == "true") return {Tok::True, word, l, c};
      if (word == "false") return {Tok::False, word, l, c};
      if (word == "X") return {Tok::Next, word, l, c};
      if (word == "U") return {Tok::Until, word, l, c};
      if (word == "F") return {Tok::Eventually, word, l, c};
      if (word == "G") return {Tok::Globally, word, l, c};
      return {Tok::Ident, word, l, c};
    }
    fail(std::string("unexpected character '") + ch + "'", l, c);
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;

  explicit Parser(const std::string& text) {
    Lexer lex(text);
    for (;;) {
      Token t = lex.next();
      toks.push_back(t);
      if (t.kind == Tok::End) break;
    }
  }

  const Token& peek() const { return toks[at]; }
  Token take() { return toks[at++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    if (t.kind == Tok::End) throw ParseError(msg + ", got end of input", t.line, t.col);
    throw ParseError(msg + ", got '" + t.text + "'", t.line, t.col);
  }

  FormulaPtr parse() {
    FormulaPtr f = implies_level();
    if (peek().kind != Tok::End) fail("expected end of formula");
    return f;
  }

  FormulaPtr implies_level() {
    FormulaPtr lhs = or_level();
    if (peek().kind == Tok::Implies) {
      take();
      return ltl::mk_implies(lhs, implies_level());
    }
    if (peek().kind == Tok::Iff) {
      take();
      FormulaPtr rhs = implies_level();
      // a <-> b  ==  (a && b) || (!a && !b)
      return ltl::mk_or(ltl::mk_and(lhs, rhs),
                        ltl::mk_and(ltl::mk_not(lhs), ltl::mk_not(rhs)));
    }
    return lhs;
  }

  FormulaPtr or_level() {
    FormulaPtr f = and_level();
    while (peek().kind == Tok::Or) {
      take();
      f = ltl::mk_or(f, and_level());
    }
    return f;
  }

  FormulaPtr and_level() {
    FormulaPtr f = until_level();
    while (peek().kind == Tok::And) {
      take();
      f = ltl::mk_and(f, until_level());
    }
    return f;
  }

  FormulaPtr until_level() {
    FormulaPtr lhs = unary_level();
    if (peek().kind == Tok::Until) {
      take();
      return ltl::mk_until(lhs, until_level());
    }
    return lhs;
  }

  FormulaPtr unary_level() {
    switch (peek().kind) {
      case Tok::Not:
        take();
        return ltl::mk_not(unary_level());
      case Tok::Next:
        take();
        return ltl::mk_next(unary_level());
      case Tok::Eventually:
        take();
        return ltl::mk_eventually(unary_level());
      case Tok::Globally:
        take();
        return ltl::mk_globally(unary_level());
      default:
        return primary();
    }
  }

  FormulaPtr primary() {
    switch (peek().kind) {
      case Tok::True:
        take();
        return ltl::tru();
      case Tok::False:
        take();
        return ltl::fls();
      case Tok::Ident:
        return ltl::atom(take().text);
      case Tok::LParen: {
        take();
        FormulaPtr f = implies_level();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        take();
        return f;
      }
      default:
        fail("expected a formula");
    }
  }
};

}  // namespace

FormulaPtr parse_ltl(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Conjunctive specifications
// ---------------------------------------------------------------------------

FormulaPtr ConjunctiveSpec::conjunction() const {
  if (conjuncts.empty()) return ltl::tru();
  FormulaPtr f = conjuncts[0];
  for (size_t i = 1; i < conjuncts.size(); ++i) f = ltl::mk_and(f, conjuncts[i]);
  return f;
}

std::vector<FormulaPtr> split_conjuncts(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  // Flatten the && spine left-to-right.
  std::vector<FormulaPtr> stack{f};
  while (!stack.empty()) {
    FormulaPtr top = stack.back();
    stack.pop_back();
    if (top->kind == LtlKind::And) {
      stack.push_back(top->children[1]);
      stack.push_back(top->children[0]);
    } else {
      out.push_back(top);
    }
  }
  return out;
}

ConjunctiveSpec parse_spec(const std::vector<std::string>& conjunct_texts) {
  ConjunctiveSpec spec;
  for (const auto& text : conjunct_texts) {
    for (auto& c : split_conjuncts(parse_ltl(text))) spec.conjuncts.push_back(std::move(c));
  }
  return spec;
}

Decomposition decompose(const ConjunctiveSpec& spec, const Architecture& arch) {
  const std::set<std::string> vars = arch.all_variables();
  const std::set<std::string> out = arch.outputs_union();

  Decomposition dec;
  dec.subspecs.resize(arch.processes.size());
  for (const auto& conj : spec.conjuncts) {
    const std::set<std::string> props = atomic_props(conj);
    for (const auto& p : props) {
      if (!vars.count(p))
        throw InvalidInput("specification mentions unknown atom '" + p + "' in " +
                           to_string(conj));
    }
    bool input_only = true;
    for (const auto& p : props)
      if (out.count(p)) input_only = false;
    for (size_t i = 0; i < arch.processes.size(); ++i) {
      bool mine = input_only;
      if (!mine) {
        for (const auto& o : arch.processes[i].outputs) {
          if (props.count(o)) {
            mine = true;
            break;
          }
        }
      }
      if (mine) dec.subspecs[i].conjuncts.push_back(conj);
    }
  }
  return dec;
}

std::vector<std::set<int>> relevant_processes(const Decomposition& dec,
                                              const Architecture& arch) {
  std::vector<std::set<int>> rel(arch.processes.size());
  for (size_t i = 0; i < arch.processes.size(); ++i) {
    std::set<std::string> props;
    for (const auto& c : dec.subspecs[i].conjuncts) {
      auto ps = atomic_props(c);
      props.insert(ps.begin(), ps.end());
    }
    for (size_t j = 0; j < arch.processes.size(); ++j) {
      if (j == i) continue;
      for (const auto& o : arch.processes[j].outputs) {
        if (props.count(o)) {
          rel[i].insert(static_cast<int>(j));
          break;
        }
      }
    }
  }
  return rel;
}

}  // namespace certsynt
