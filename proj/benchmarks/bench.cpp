#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "chrgen/chr.hpp"
#include "chrgen/miner.hpp"
#include "chrgen/transform.hpp"

namespace {

using namespace chrgen;

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CHRGEN_SAMPLES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Sample {
  Program program;
  CandidateSpec spec;
};

Sample load(const char* program, const char* spec) {
  Sample s{parse_program(slurp(program)), {}};
  s.spec = parse_spec(slurp(spec), &s.program);
  return s;
}

void BM_EvaluateAppendTabled(benchmark::State& state) {
  Program p = parse_program(slurp("append.clp"));
  Goal g = parse_goals("append(X,Y,Z), Y = [], X \\= Z.", &p)[0];
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(p, g));
}
BENCHMARK(BM_EvaluateAppendTabled);

void BM_EvaluateAppendPlainDepth(benchmark::State& state) {
  Program p = parse_program(slurp("append.clp"));
  Goal g = parse_goals("append(X,Y,Z), Y = [], X \\= Z.", &p)[0];
  EvalOptions o;
  o.tabling = false;
  o.depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(p, g, o));
}
BENCHMARK(BM_EvaluateAppendPlainDepth)->Arg(25)->Arg(50)->Arg(100)->Arg(200);

void BM_MinePrimitive(benchmark::State& state, const char* program, const char* spec, bool opts) {
  Sample s = load(program, spec);
  MinerOptions o;
  o.opt1 = o.opt2 = o.opt3 = opts;
  for (auto _ : state) {
    MineResult r = mine(s.program, s.spec, Mode::Primitive, o);
    state.counters["evaluations"] = static_cast<double>(r.stats.evaluations);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK_CAPTURE(BM_MinePrimitive, min_opts, "min.clp", "min.spec", true);
BENCHMARK_CAPTURE(BM_MinePrimitive, min_no_opts, "min.clp", "min.spec", false);
BENCHMARK_CAPTURE(BM_MinePrimitive, append_opts, "append.clp", "append.spec", true)->Unit(benchmark::kMillisecond);

void BM_MineAll(benchmark::State& state, const char* program, const char* spec) {
  Sample s = load(program, spec);
  for (auto _ : state) benchmark::DoNotOptimize(mine(s.program, s.spec, Mode::All));
}
BENCHMARK_CAPTURE(BM_MineAll, min, "min.clp", "min.spec")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MineAll, and, "and.clp", "and.spec")->Unit(benchmark::kMillisecond);

void BM_MineGeneral(benchmark::State& state) {
  Sample s = load("boolean.clp", "xor_neg.spec");
  for (auto _ : state) benchmark::DoNotOptimize(mine(s.program, s.spec, Mode::General));
}
BENCHMARK(BM_MineGeneral);

void BM_DnfSatisfiable(benchmark::State& state) {
  // (x1 ∨ … ∨ xn) ∧ ¬(y1 ∨ … ∨ yn) over boolean assignments of three variables
  Program p = parse_program(slurp("xor.clp"));
  EvalOptions o;
  o.mode = EvalMode::AllAnswers;
  auto pos = evaluate(p, parse_goals("xor(X,Y,Z).", &p)[0], o).answers;
  auto neg = pos;
  neg.pop_back();
  for (auto _ : state) benchmark::DoNotOptimize(dnf_satisfiable(pos, neg));
}
BENCHMARK(BM_DnfSatisfiable);

void BM_Transform(benchmark::State& state) {
  Sample s = load("min.clp", "min.spec");
  RuleSet rules = mine(s.program, s.spec, Mode::Primitive).rules;
  for (auto _ : state) benchmark::DoNotOptimize(to_simplification(rules, s.spec.base, s.program));
}
BENCHMARK(BM_Transform)->Unit(benchmark::kMillisecond);

void BM_ChrRun(benchmark::State& state) {
  Sample s = load("and.clp", "and.spec");
  RuleSet rules = mine(s.program, s.spec, Mode::All).rules;
  Goal g = parse_goals("and(X,Y,Z), and(Y,Z,W), and(Z,W,0).", &s.program)[0];
  for (auto _ : state) benchmark::DoNotOptimize(run(rules, g));
}
BENCHMARK(BM_ChrRun);

}  // namespace
BENCHMARK_MAIN();
