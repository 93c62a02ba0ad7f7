#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chrgen/chr.hpp"
#include "chrgen/miner.hpp"
#include "chrgen/oracle.hpp"
#include "chrgen/transform.hpp"

namespace chrgen::cli {

namespace {

constexpr std::string_view kGenerator = "chrgen 0.1.0";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses `text` with `parse`, prefixing diagnostics with the file name.
template <typename F>
auto parse_file(const std::string& path, F parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + std::to_string(e.line) + ":" + std::to_string(e.column) +
                     ": " + e.what());
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << v;
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

struct MinerFlags {
  int depth = 200;
  bool no_tabling = false;
  bool opt1 = true, opt2 = true, opt3 = true;
  std::size_t dnf_cap = kDefaultDnfCap;
  std::size_t answers_cap = 64;
  unsigned jobs = 1;
  long long seed = 0;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--depth", depth, "Clause-resolution steps per derivation path")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_flag("--no-tabling", no_tabling, "Plain depth-first resolution");
    cmd.add_option("--opt1", opt1, "Skip trivially redundant failure goals")->capture_default_str();
    cmd.add_option("--opt2", opt2, "Skip lhs supersets of implied candidates")
        ->capture_default_str();
    cmd.add_option("--opt3", opt3, "Reuse verdicts of goals evaluated before")
        ->capture_default_str();
    cmd.add_option("--dnf-cap", dnf_cap, "Largest DNF expansion in the general test")
        ->capture_default_str();
    cmd.add_option("--answers-cap", answers_cap, "Answers collected per goal")
        ->capture_default_str();
    cmd.add_option("--jobs", jobs, "Parallel goal evaluations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--seed", seed, "Accepted and ignored: the pipeline is deterministic");
  }

  MinerOptions options() const {
    MinerOptions o;
    o.depth = depth;
    o.tabling = !no_tabling;
    o.opt1 = opt1;
    o.opt2 = opt2;
    o.opt3 = opt3;
    o.dnf_cap = dnf_cap;
    o.answers_cap = answers_cap;
    o.jobs = jobs;
    return o;
  }
};

void report_stats(const MinerStats& s, std::ostream& err) {
  for (const auto& g : s.depth_exceeded_goals) err << "depth_exceeded: " << g << "\n";
  err << "evaluations: " << s.evaluations << ", depth_exceeded: " << s.depth_exceeded
      << ", cache_hits: " << s.cache_hits << ", skipped_opt1: " << s.skipped_opt1
      << ", skipped_opt2: " << s.skipped_opt2 << ", skipped_redundant: " << s.skipped_redundant
      << ", unsat_goals: " << s.unsat_goals << ", blowups: " << s.blowups << "\n";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::set<Relation> parse_builtins(const std::string& s) {
  std::set<Relation> out;
  for (const auto& name : split_list(s)) {
    auto r = relation_from_name(name);
    if (!r) throw InputError("unknown builtin relation '" + name + "' (eq, neq, le, lt, ge, gt)");
    out.insert(*r);
  }
  return out;
}

void collect_constants(const Term& t, std::set<Term>& consts, bool& lists) {
  if (t.is_var()) return;
  if (t.is_nil() || t.is_cons()) lists = true;
  if (t.is_const()) {
    if (!t.is_nil()) consts.insert(t);
    return;
  }
  for (const auto& a : t.args()) collect_constants(a, consts, lists);
}

struct UniverseFlags {
  std::string constants;
  int list_depth = -2;  // -2: decide from the program

  void add_to(CLI::App& cmd) {
    cmd.add_option("--constants", constants,
                   "Comma-separated constants of the test alphabet (default: those of the program)");
    cmd.add_option("--list-depth", list_depth,
                   "Longest list in the test alphabet, -1 for none (default: 3 for list programs)");
  }

  std::vector<Term> universe(const Program& program, std::span<const Goal> goals = {}) const {
    std::set<Term> consts;
    bool lists = false;
    auto scan = [&](const Constraint& c) {
      for (const auto& a : c.args()) collect_constants(a, consts, lists);
    };
    for (const auto& cl : program.clauses) {
      scan(cl.head);
      for (const auto& c : cl.body) scan(c);
    }
    for (const auto& g : goals) {
      for (const auto& c : g) scan(c);
    }
    std::vector<Term> alphabet;
    if (!constants.empty()) {
      for (const auto& name : split_list(constants)) {
        try {
          alphabet.push_back(Term::number(std::stoll(name)));
        } catch (const std::exception&) {
          alphabet.push_back(Term::constant(name));
        }
      }
    } else {
      alphabet.assign(consts.begin(), consts.end());
      if (alphabet.empty() && lists) alphabet = {Term::constant("a"), Term::constant("b")};
      if (alphabet.empty()) alphabet = {Term::number(0), Term::number(1)};
    }
    int depth = list_depth != -2 ? list_depth : (lists ? 3 : -1);
    return GroundModel::make_universe(alphabet, depth);
  }
};

Mode parse_mode(const std::string& s) {
  if (s == "primitive") return Mode::Primitive;
  if (s == "splitting") return Mode::Splitting;
  if (s == "general") return Mode::General;
  return Mode::All;
}

std::string format(const RuleSet& rules, const std::string& fmt) {
  return fmt == "machine" ? format_rules_json(rules, kGenerator) : format_rules(rules);
}

std::string to_fact(const std::string& sig, const std::vector<Term>& tuple) {
  std::string name = sig.substr(0, sig.rfind('/'));
  std::string out = name;
  if (!tuple.empty()) {
    out += "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) out += ",";
      out += to_string(tuple[i]);
    }
    out += ")";
  }
  return out + ".";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generates CHR constraint solvers from constraint logic programs", "chrgen"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kGenerator));

  std::string program_path, spec_path, rules_path, goals_path, out_path;
  std::string format_name = "text", mode_name = "all", builtins = "eq,neq,le,lt,ge,gt";
  std::string log_path;
  std::size_t step_limit = 10000;
  MinerFlags miner;
  UniverseFlags universe;

  auto* generate = app.add_subcommand("generate", "Mine rules from a program and a candidate spec");
  generate->add_option("program", program_path, "Constraint logic program")->required();
  generate->add_option("spec", spec_path, "Candidate specification")->required();
  generate->add_option("--mode", mode_name, "Rule kinds to mine")
      ->check(CLI::IsMember({"primitive", "splitting", "general", "all"}))
      ->capture_default_str();
  generate->add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();
  generate->add_option("--out", out_path, "Output file (default: standard output)");
  miner.add_to(*generate);

  auto* transform = app.add_subcommand("transform", "Turn propagation rules into simplification rules");
  transform->add_option("program", program_path, "Constraint logic program")->required();
  transform->add_option("spec", spec_path, "Candidate specification (for its base)")->required();
  transform->add_option("rules", rules_path, "Rule file")->required();
  transform->add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();
  transform->add_option("--out", out_path, "Output file (default: standard output)");
  transform->add_option("--log", log_path, "Attempt log file (default: standard error)");
  miner.add_to(*transform);

  auto* emit_cmd = app.add_subcommand("emit", "Encode rules as CHR source");
  emit_cmd->add_option("rules", rules_path, "Rule file")->required();
  emit_cmd->add_option("--builtins", builtins, "Relations allowed in guards")->capture_default_str();
  emit_cmd->add_option("--out", out_path, "Output file (default: standard output)");

  auto* validate = app.add_subcommand("validate", "Check rules and CHR runs against the ground oracle");
  validate->add_option("rules", rules_path, "Rule or CHR file")->required();
  validate->add_option("goals", goals_path, "Goals file")->required();
  validate->add_option("--program", program_path, "Program defining the user constraints")->required();
  validate->add_option("--step-limit", step_limit, "Rule applications per goal")->capture_default_str();
  universe.add_to(*validate);

  auto* oracle = app.add_subcommand("oracle", "Print the ground success set of a program");
  oracle->add_option("program", program_path, "Constraint logic program")->required();
  universe.add_to(*oracle);

  std::vector<std::string> argv_store{"chrgen"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (generate->parsed()) {
      Program program = parse_file(program_path, [](const std::string& t) { return parse_program(t); });
      CandidateSpec spec =
          parse_file(spec_path, [&](const std::string& t) { return parse_spec(t, &program); });
      Mode mode = parse_mode(mode_name);
      if (mode == Mode::Primitive || mode == Mode::Splitting) require_primitive_rhs(spec);
      MineResult result = mine(program, spec, mode, miner.options());
      write_output(out_path, format(result.rules, format_name), out);
      report_stats(result.stats, err);
      return kOk;
    }
    if (transform->parsed()) {
      Program program = parse_file(program_path, [](const std::string& t) { return parse_program(t); });
      CandidateSpec spec =
          parse_file(spec_path, [&](const std::string& t) { return parse_spec(t, &program); });
      RuleSet rules = parse_file(rules_path, [](const std::string& t) { return parse_rules(t); });
      TransformResult result = to_simplification(rules, spec.base, program, miner.options());
      std::string log;
      for (const auto& a : result.log) log += to_string(a, rules) + "\n";
      if (log_path.empty()) {
        err << log;
      } else {
        write_output(log_path, log, out);
      }
      write_output(out_path, format(result.rules, format_name), out);
      report_stats(result.stats, err);
      return kOk;
    }
    if (emit_cmd->parsed()) {
      std::string text = read_file(rules_path);
      RuleSet rules = parse_file(rules_path, [](const std::string& t) { return parse_rules(t); });
      EmitResult result = emit(rules, parse_builtins(builtins),
                               {"generated by " + std::string(kGenerator),
                                "source hash " + hex(fnv1a(text))});
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      write_output(out_path, result.text, out);
      return kOk;
    }
    if (validate->parsed()) {
      Program program = parse_file(program_path, [](const std::string& t) { return parse_program(t); });
      RuleSet rules = parse_file(rules_path, [](const std::string& t) { return parse_rules(t); });
      std::vector<Goal> goals =
          parse_file(goals_path, [&](const std::string& t) { return parse_goals(t, &program); });
      GroundModel model(program, universe.universe(program, goals));
      std::size_t violations = 0;
      for (const auto& rule : rules) {
        if (auto cex = find_counterexample(model, rule)) {
          ++violations;
          out << "invalid rule: " << to_string(rule) << "\n";
        }
      }
      for (const auto& goal : goals) {
        ChrRun result = run(rules, goal, step_limit);
        // every ground solution of the goal must survive in some final state
        std::size_t lost = 0;
        std::vector<VarId> goal_vars = vars_of(goal);
        model.solve(goal, {}, [&](const Bindings& b) {
          Bindings restricted;
          for (VarId v : goal_vars) restricted.emplace(v, b.at(v));
          bool kept = std::any_of(result.leaves.begin(), result.leaves.end(), [&](const ChrLeaf& l) {
            return model.satisfiable(l.constraints(), restricted);
          });
          if (!kept) ++lost;
          return true;
        }, goal_vars);
        violations += lost;
        out << "goal " << to_string(goal) << ": " << result.leaves.size() << " final state(s), "
            << result.steps << " step(s)";
        if (lost) out << ", " << lost << " lost ground solution(s)";
        out << "\n";
        for (const auto& l : result.leaves) out << "  " << to_string(l.constraints()) << "\n";
      }
      out << "violations: " << violations << "\n";
      return violations == 0 ? kOk : kInputError;
    }
    if (oracle->parsed()) {
      Program program = parse_file(program_path, [](const std::string& t) { return parse_program(t); });
      GroundModel model(program, universe.universe(program));
      for (const auto& sig : program.predicates()) {
        for (const auto& tuple : model.relation(sig)) out << to_fact(sig, tuple) << "\n";
      }
      return kOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.line << ":" << e.column << ": " << e.what() << "\n";
    return kInputError;
  } catch (const EncodingError& e) {
    err << "error: " << e.what() << " in " << to_string(e.rule) << "\n";
    return kInputError;
  } catch (const StepLimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kLimitBreach;
  } catch (const BlowupExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kLimitBreach;
  }
  return kInputError;
}

}  // namespace chrgen::cli
