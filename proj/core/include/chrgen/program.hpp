#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chrgen/constraint.hpp"

namespace chrgen {

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, int line, int column);
  int line;
  int column;
};

/// `head :- body.`; a fact has an empty body.
struct Clause {
  Constraint head;
  Constraints body;  // source order, user atoms and primitives mixed
  int line = 0;

  Constraints body_user() const;
  Constraints body_prim() const;
};

using Goal = Constraints;

/// "name/arity"
std::string signature(const std::string& name, std::size_t arity);
std::string signature(const Constraint& atom);

struct Program {
  std::vector<Clause> clauses;
  std::set<std::string> externals;  // declared with `:- external(p/N).`

  std::vector<const Clause*> clauses_for(const Constraint& atom) const;
  bool defines(const std::string& sig) const;
  std::set<std::string> predicates() const;
  /// Predicates that can reach themselves through clause bodies.
  std::set<std::string> recursive_predicates() const;
};

struct CandidateSpec {
  Goal base;
  Constraints cand_lhs;
  Constraints cand_rhs;
};

/// Parses a program. Throws ParseError on syntax errors, ill-sorted order
/// constraints, and calls to predicates that are neither defined nor external.
Program parse_program(std::string_view text);

/// Parses a candidate specification. Variables with the same name denote the
/// same variable across sections. With a program, atoms are checked against
/// its predicates.
CandidateSpec parse_spec(std::string_view text, const Program* program = nullptr);

/// Throws ParseError unless every cand_rhs constraint is primitive.
void require_primitive_rhs(const CandidateSpec& spec);

/// Goals file: one `.`-terminated conjunction per goal.
std::vector<Goal> parse_goals(std::string_view text, const Program* program = nullptr);

std::string to_string(const Clause& clause);
std::string to_string(const Program& program);
std::string to_string(const CandidateSpec& spec);

/// Candidate constraints suggested by the shape of the program: (dis)equalities
/// and order constraints between pairs of head arguments of `base`, and
/// (dis)equalities between a head argument and a constant used by the program.
Constraints propose_candidates(const Program& program, const Constraint& base);

/// Low-level entry points shared with the rule file reader.
namespace syntax {

struct Token {
  enum class Kind { Var, Atom, Number, Punct, End } kind;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view text);

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool accept(std::string_view punct);
  void expect(std::string_view punct);
  bool at_end() const { return peek().kind == Token::Kind::End; }
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& at, const std::string& message) const;

  Term term();
  /// A primitive `t1 op t2`, a user atom, or `true` (returned as nullopt).
  std::optional<Constraint> constraint();
  /// Comma-separated constraints up to (not including) one of `stops`.
  Constraints conjunction();

  /// Variables by name; cleared between clauses by the caller.
  std::map<std::string, Term> scope;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Order constraints need constants or variables; a variable used in an
/// order constraint may not be equated with a compound term.
void check_sorts(std::span<const Constraint> cs, const Token& at);

}  // namespace syntax

}  // namespace chrgen
