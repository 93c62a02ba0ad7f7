#include "chrgen/program.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace chrgen {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line(line),
      column(column) {}

Constraints Clause::body_user() const {
  Constraints out;
  for (const auto& c : body) {
    if (c.is_user()) out.push_back(c);
  }
  return out;
}

Constraints Clause::body_prim() const {
  Constraints out;
  for (const auto& c : body) {
    if (c.is_primitive()) out.push_back(c);
  }
  return out;
}

std::string signature(const std::string& name, std::size_t arity) {
  return name + "/" + std::to_string(arity);
}

std::string signature(const Constraint& atom) { return signature(atom.predicate(), atom.args().size()); }

std::vector<const Clause*> Program::clauses_for(const Constraint& atom) const {
  std::vector<const Clause*> out;
  for (const auto& c : clauses) {
    if (c.head.predicate() == atom.predicate() && c.head.args().size() == atom.args().size()) {
      out.push_back(&c);
    }
  }
  return out;
}

bool Program::defines(const std::string& sig) const {
  if (externals.count(sig)) return true;
  return std::any_of(clauses.begin(), clauses.end(),
                     [&](const Clause& c) { return signature(c.head) == sig; });
}

std::set<std::string> Program::predicates() const {
  std::set<std::string> out(externals.begin(), externals.end());
  for (const auto& c : clauses) out.insert(signature(c.head));
  return out;
}

std::set<std::string> Program::recursive_predicates() const {
  std::map<std::string, std::set<std::string>> calls;
  for (const auto& c : clauses) {
    auto& callees = calls[signature(c.head)];
    for (const auto& b : c.body) {
      if (b.is_user()) callees.insert(signature(b));
    }
  }
  std::set<std::string> out;
  for (const auto& [p, direct] : calls) {
    std::set<std::string> seen;
    std::vector<std::string> work(direct.begin(), direct.end());
    while (!work.empty()) {
      std::string q = work.back();
      work.pop_back();
      if (!seen.insert(q).second) continue;
      if (auto it = calls.find(q); it != calls.end()) {
        work.insert(work.end(), it->second.begin(), it->second.end());
      }
    }
    if (seen.count(p)) out.insert(p);
  }
  return out;
}

namespace syntax {

namespace {

constexpr std::string_view kPuncts[] = {"<=>", "==>", "#=<", "#>=", ":-", "\\=", "=<", ">=",
                                        "#<",  "#>",  "=",   "<",   ">",  "(",  ")",  "[",
                                        "]",   "|",   ",",   ".",   ";",  "/",  ":"};

std::optional<Relation> relation_of(std::string_view op) {
  if (op == "=") return Relation::Eq;
  if (op == "\\=") return Relation::Neq;
  if (op == "#=<" || op == "=<") return Relation::Le;
  if (op == "#<" || op == "<") return Relation::Lt;
  if (op == "#>=" || op == ">=") return Relation::Ge;
  if (op == "#>" || op == ">") return Relation::Gt;
  return std::nullopt;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok{Token::Kind::Punct, "", line, col};
    auto ident = [&](std::size_t start) {
      std::size_t j = start;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      return j;
    };
    if (std::isupper(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = ident(i);
      tok.kind = Token::Kind::Var;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::islower(static_cast<unsigned char>(ch))) {
      std::size_t j = ident(i);
      tok.kind = Token::Kind::Atom;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch)) ||
               (ch == '-' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Token::Kind::Number;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (ch == '\'') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '\'' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '\'') throw ParseError("unterminated quoted atom", line, col);
      tok.kind = Token::Kind::Atom;
      tok.text = std::string(text.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
    } else {
      bool matched = false;
      for (auto p : kPuncts) {
        if (text.substr(i, p.size()) == p) {
          tok.text = std::string(p);
          advance(p.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
    }
    out.push_back(std::move(tok));
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

const Token& Parser::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

Token Parser::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool Parser::accept(std::string_view punct) {
  if (peek().kind == Token::Kind::Punct && peek().text == punct) {
    next();
    return true;
  }
  return false;
}

void Parser::expect(std::string_view punct) {
  if (!accept(punct)) {
    fail("expected '" + std::string(punct) + "'" +
         (at_end() ? std::string(" before end of input") : ", found '" + peek().text + "'"));
  }
}

void Parser::fail(const std::string& message) const { fail_at(peek(), message); }

void Parser::fail_at(const Token& at, const std::string& message) const {
  throw ParseError(message, at.line, at.column);
}

Term Parser::term() {
  Token t = next();
  switch (t.kind) {
    case Token::Kind::Var: {
      if (t.text == "_") return Term::fresh("_");
      auto it = scope.find(t.text);
      if (it == scope.end()) it = scope.emplace(t.text, Term::fresh(t.text)).first;
      return it->second;
    }
    case Token::Kind::Number:
      return Term::constant(t.text);
    case Token::Kind::Atom: {
      if (!accept("(")) return Term::constant(t.text);
      std::vector<Term> args;
      do {
        args.push_back(term());
      } while (accept(","));
      expect(")");
      return Term::compound(t.text, std::move(args));
    }
    case Token::Kind::Punct:
      if (t.text == "[") {
        if (accept("]")) return Term::nil();
        std::vector<Term> items;
        do {
          items.push_back(term());
        } while (accept(","));
        std::optional<Term> tail;
        if (accept("|")) tail = term();
        expect("]");
        return Term::list(items, tail);
      }
      break;
    case Token::Kind::End:
      break;
  }
  fail_at(t, t.kind == Token::Kind::End ? "unexpected end of input"
                                         : "expected a term, found '" + t.text + "'");
}

std::optional<Constraint> Parser::constraint() {
  Token start = peek();
  if (start.kind == Token::Kind::Atom && start.text == "true" &&
      !(peek(1).kind == Token::Kind::Punct && peek(1).text == "(")) {
    next();
    return std::nullopt;
  }
  Term left = term();
  if (peek().kind == Token::Kind::Punct) {
    if (auto rel = relation_of(peek().text)) {
      next();
      Term right = term();
      return Constraint::primitive(*rel, std::move(left), std::move(right));
    }
  }
  if (left.is_var() || left.is_number() || left.is_cons() || left.is_nil()) {
    fail_at(start, "expected a constraint, found term " + to_string(left));
  }
  return Constraint::user(left.name(), std::vector<Term>(left.args().begin(), left.args().end()));
}

Constraints Parser::conjunction() {
  Constraints out;
  do {
    if (auto c = constraint()) out.push_back(std::move(*c));
  } while (accept(","));
  return out;
}

void check_sorts(std::span<const Constraint> cs, const Token& at) {
  std::set<VarId> ordered;
  for (const auto& c : cs) {
    if (!c.is_primitive() || !is_order(c.relation())) continue;
    for (const auto& a : c.args()) {
      if (a.is_compound()) {
        throw ParseError("order constraint over a non-ordered term: " + to_string(c), at.line,
                         at.column);
      }
      if (a.is_var()) ordered.insert(a.var_id());
    }
  }
  for (const auto& c : cs) {
    if (!c.is_primitive() || is_order(c.relation())) continue;
    for (int side = 0; side < 2; ++side) {
      const Term& v = c.args()[side];
      const Term& other = c.args()[1 - side];
      if (v.is_var() && ordered.count(v.var_id()) && other.is_compound()) {
        throw ParseError("ordered variable " + v.name() + " equated with a compound term in " +
                             to_string(c),
                         at.line, at.column);
      }
    }
  }
}

}  // namespace syntax

using syntax::Parser;
using syntax::Token;

namespace {

void check_defined(const Program& program, std::span<const Constraint> cs, const Token& at) {
  for (const auto& c : cs) {
    if (c.is_user() && !program.defines(signature(c))) {
      throw ParseError("undefined predicate " + signature(c), at.line, at.column);
    }
  }
}

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(syntax::tokenize(text));
  Program program;
  std::vector<Token> starts;
  while (!p.at_end()) {
    p.scope.clear();
    Token start = p.peek();
    if (p.accept(":-")) {
      Token name = p.next();
      if (name.kind != Token::Kind::Atom || name.text != "external") {
        p.fail_at(name, "unknown directive '" + name.text + "'");
      }
      p.expect("(");
      do {
        Token pred = p.next();
        if (pred.kind != Token::Kind::Atom) p.fail_at(pred, "expected predicate name");
        p.expect("/");
        Token arity = p.next();
        if (arity.kind != Token::Kind::Number) p.fail_at(arity, "expected arity");
        program.externals.insert(pred.text + "/" + arity.text);
      } while (p.accept(","));
      p.expect(")");
      p.expect(".");
      continue;
    }
    auto head = p.constraint();
    if (!head || head->is_primitive()) {
      p.fail_at(start, "clause head must be a user-defined atom");
    }
    Clause clause{*head, {}, start.line};
    if (p.accept(":-")) clause.body = p.conjunction();
    p.expect(".");
    Constraints all{clause.head};
    all.insert(all.end(), clause.body.begin(), clause.body.end());
    syntax::check_sorts(all, start);
    program.clauses.push_back(std::move(clause));
    starts.push_back(start);
  }
  for (std::size_t i = 0; i < program.clauses.size(); ++i) {
    check_defined(program, program.clauses[i].body, starts[i]);
  }
  return program;
}

CandidateSpec parse_spec(std::string_view text, const Program* program) {
  Parser p(syntax::tokenize(text));
  CandidateSpec spec;
  std::set<std::string> seen;
  Token first = p.peek();
  while (!p.at_end()) {
    Token label = p.next();
    if (label.kind != Token::Kind::Atom ||
        (label.text != "base" && label.text != "cand_lhs" && label.text != "cand_rhs")) {
      p.fail_at(label, "expected a section label base:, cand_lhs: or cand_rhs:");
    }
    if (!seen.insert(label.text).second) p.fail_at(label, "duplicate section " + label.text);
    p.expect(":");
    Constraints items;
    if (!p.accept(".")) {
      items = p.conjunction();
      p.expect(".");
    }
    Constraints& target = label.text == "base"       ? spec.base
                          : label.text == "cand_lhs" ? spec.cand_lhs
                                                     : spec.cand_rhs;
    for (auto& c : items) {
      if (c.is_user() && c.args().empty() && c.predicate() == "cand_lhs") {
        if (!seen.count("cand_lhs")) p.fail_at(label, "cand_lhs referenced before its section");
        for (const auto& x : spec.cand_lhs) {
          if (!contains(target, x)) target.push_back(x);
        }
        continue;
      }
      if (program && c.is_user() && !program->defines(signature(c))) {
        p.fail_at(label, "undefined predicate " + signature(c));
      }
      if (label.text == "base" || !contains(target, c)) target.push_back(std::move(c));
    }
  }
  if (spec.base.empty()) throw ParseError("specification has no base: section", first.line, first.column);
  Constraints all = spec.base;
  all.insert(all.end(), spec.cand_lhs.begin(), spec.cand_lhs.end());
  all.insert(all.end(), spec.cand_rhs.begin(), spec.cand_rhs.end());
  syntax::check_sorts(all, first);
  return spec;
}

void require_primitive_rhs(const CandidateSpec& spec) {
  for (const auto& c : spec.cand_rhs) {
    if (c.is_user()) {
      throw ParseError("cand_rhs contains user-defined constraint " + to_string(c) +
                           "; primitive mining needs primitive right hand sides",
                       0, 0);
    }
  }
}

std::vector<Goal> parse_goals(std::string_view text, const Program* program) {
  Parser p(syntax::tokenize(text));
  std::vector<Goal> goals;
  while (!p.at_end()) {
    p.scope.clear();
    Token start = p.peek();
    Goal g = p.conjunction();
    p.expect(".");
    syntax::check_sorts(g, start);
    if (program) check_defined(*program, g, start);
    goals.push_back(std::move(g));
  }
  return goals;
}

std::string to_string(const Clause& clause) {
  std::string out = to_string(clause.head);
  if (!clause.body.empty()) out += " :- " + to_string(clause.body);
  return out + ".";
}

std::string to_string(const Program& program) {
  std::string out;
  for (const auto& e : program.externals) out += ":- external(" + e + ").\n";
  for (const auto& c : program.clauses) out += to_string(c) + "\n";
  return out;
}

std::string to_string(const CandidateSpec& spec) {
  return "base: " + to_string(spec.base) + ".\ncand_lhs: " + to_string(spec.cand_lhs) +
         ".\ncand_rhs: " + to_string(spec.cand_rhs) + ".\n";
}

Constraints propose_candidates(const Program& program, const Constraint& base) {
  const std::size_t n = base.args().size();
  std::vector<bool> ordered(n, false);
  std::vector<Term> constants;  // shared by all arguments: append's [] matters for Y as well
  auto add_constant = [&](std::size_t, const Term& c) {
    if (std::find(constants.begin(), constants.end(), c) == constants.end()) constants.push_back(c);
  };
  for (const Clause* clause : program.clauses_for(base)) {
    for (std::size_t i = 0; i < n; ++i) {
      const Term& arg = clause->head.args()[i];
      if (arg.is_const()) {
        add_constant(i, arg);
        if (arg.is_number()) ordered[i] = true;
        continue;
      }
      if (!arg.is_var()) continue;
      for (const auto& b : clause->body) {
        if (!b.is_primitive()) continue;
        for (int side = 0; side < 2; ++side) {
          if (!(b.args()[side] == arg)) continue;
          if (is_order(b.relation())) ordered[i] = true;
          const Term& other = b.args()[1 - side];
          if (b.relation() == Relation::Eq && other.is_const()) add_constant(i, other);
        }
      }
    }
  }
  Constraints out;
  auto add = [&](Constraint c) {
    if (!contains(out, c)) out.push_back(std::move(c));
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Term& x = base.args()[i];
    if (!x.is_var()) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Term& y = base.args()[j];
      if (!y.is_var() || x == y) continue;
      add(Constraint::primitive(Relation::Eq, x, y));
      add(Constraint::primitive(Relation::Neq, x, y));
      if (ordered[i] && ordered[j]) {
        add(Constraint::primitive(Relation::Le, x, y));
        add(Constraint::primitive(Relation::Le, y, x));
        add(Constraint::primitive(Relation::Lt, x, y));
        add(Constraint::primitive(Relation::Lt, y, x));
      }
    }
    for (const auto& c : constants) {
      add(Constraint::primitive(Relation::Eq, x, c));
      add(Constraint::primitive(Relation::Neq, x, c));
    }
  }
  return out;
}

}  // namespace chrgen
