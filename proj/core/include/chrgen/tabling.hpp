#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chrgen/program.hpp"
#include "chrgen/store.hpp"

namespace chrgen {

enum class EvalMode { Exists, AllAnswers };

struct EvalOptions {
  int depth = 200;  // clause-resolution steps per derivation path
  EvalMode mode = EvalMode::Exists;
  bool tabling = true;
  std::size_t max_answers = 0;  // per table entry, 0 = unlimited
  std::size_t node_budget = 200000;
  /// Exists mode without tabling: when false only the verdict is computed
  /// and the reported answer is empty.
  bool witness = true;
  std::vector<std::string>* trace = nullptr;
};

struct Outcome {
  enum class Kind { Fails, Answers, DepthExceeded };
  Kind kind = Kind::Fails;
  /// Answers projected onto the goal variables; locals are fresh variables.
  std::vector<Answer> answers;
  /// Why evaluation was cut short: "depth", "answer cap" or "node budget".
  std::string reason;
  std::size_t resolutions = 0;

  bool fails() const { return kind == Kind::Fails; }
  bool exceeded() const { return kind == Kind::DepthExceeded; }
};

std::string_view to_string(Outcome::Kind kind);

/// Tabled evaluation of `goal` against `program`.
///
/// With tabling, a goal whose user atoms and store are covered by an earlier
/// goal of the forest is not unfolded: it consumes the answers of that goal
/// instead. Without tabling, the goal is run as plain depth-first CLP
/// resolution over the literal sequence, left to right.
Outcome evaluate(const Program& program, const Goal& goal, const EvalOptions& options = {});

/// Witness that the tabled goal is at least as general as the current one: a
/// matching of the tabled atoms onto the current atoms (after applying each
/// store) under which the current store entails the tabled store's
/// constraints on the atom variables.
std::optional<Bindings> call_subsumes(std::span<const Constraint> tabled_atoms,
                                      const Store& tabled_store,
                                      std::span<const Constraint> current_atoms,
                                      const Store& current_store);

}  // namespace chrgen
