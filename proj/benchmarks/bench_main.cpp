#include <benchmark/benchmark.h>

#include "qdeform/exprparse.hpp"
#include "qdeform/l2q.hpp"
#include "qdeform/qcalculus.hpp"
#include "qdeform/qfunctions.hpp"
#include "qdeform/qschrodinger.hpp"

using namespace qdeform;

static void BM_QExp(benchmark::State& state) {
  const QParam q(0.9);
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(q_exp(Complex(x, 0.5), q));
}
BENCHMARK(BM_QExp)->Arg(1)->Arg(10)->Arg(50);

static void BM_JacksonDerivative(benchmark::State& state) {
  const QParam q(0.9);
  const Evaluable f = to_evaluable(parse("x^3 * Eq(x) - sin(x)"), q);
  for (auto _ : state) benchmark::DoNotOptimize(jackson_derivative(f, 1.3, q));
}
BENCHMARK(BM_JacksonDerivative);

static void BM_ParseEvaluate(benchmark::State& state) {
  const QParam q(0.9);
  for (auto _ : state) {
    const Expression e = parse("exp(-x^2/2) * (1 + 3*x - x^3) / (2 + cos(x))");
    benchmark::DoNotOptimize(evaluate(e, Complex(0.7, 0.0), q));
  }
}
BENCHMARK(BM_ParseEvaluate);

static void BM_StationaryStates(benchmark::State& state) {
  const LatticePtr l = default_lattice();
  const Hamiltonian h = build_hamiltonian({[](double x) { return Complex(0.5 * x * x, 0.0); }}, 1.0, 1.0, l);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stationary_states(h, k));
}
BENCHMARK(BM_StationaryStates)->Arg(1)->Arg(10)->Arg(38)->Unit(benchmark::kMicrosecond);

static void BM_HermiticityResidual(benchmark::State& state) {
  const OperatorMatrix p = momentum_operator(default_lattice());
  for (auto _ : state) benchmark::DoNotOptimize(hermiticity_residual(p, 20));
}
BENCHMARK(BM_HermiticityResidual)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
