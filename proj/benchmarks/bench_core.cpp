#include <benchmark/benchmark.h>

#include "hpo/certify.hpp"
#include "hpo/instances.hpp"
#include "hpo/solver.hpp"

namespace {

void BM_OracleEval(benchmark::State& state) {
  auto problem = hpo::make_quadratic_instance(8, 5, 3, 0.5);
  hpo::Vec x = hpo::Vec::Constant(8, 0.3);
  std::uint64_t t = 0;
  for (auto _ : state) {
    hpo::rng::StreamKey key{1, hpo::oracle_ids::constraint_base, t++, 0};
    benchmark::DoNotOptimize(
        hpo::eval(problem.constraints[0], x, static_cast<int>(state.range(0)), key));
  }
}
BENCHMARK(BM_OracleEval)->Arg(1)->Arg(16)->Arg(256);

void BM_MsvrUpdate(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  hpo::Vec u0 = hpo::Vec::Zero(m);
  hpo::Vec x0 = hpo::Vec::Zero(4);
  auto st = hpo::msvr_init(u0, x0, 0.5, hpo::msvr_gamma_prime(m, m / 2, 0.5), m / 2);
  hpo::BatchValues bv;
  for (int k = 0; k < m / 2; ++k) {
    bv.indices.push_back(k);
    bv.at_current.push_back(0.1 * k);
    bv.at_prev.push_back(0.05 * k);
    bv.keys_current.push_back(k);
    bv.keys_prev.push_back(k);
  }
  for (auto _ : state) {
    hpo::msvr_update(st, bv, x0);
    benchmark::DoNotOptimize(st.u);
  }
}
BENCHMARK(BM_MsvrUpdate)->Arg(8)->Arg(64);

void BM_ProxSolve(benchmark::State& state) {
  auto problem = hpo::make_exemplar_1d(0.0);
  hpo::PenaltyObjective obj{&problem, 4.0, hpo::PenaltyKind::hinge};
  hpo::Vec x = hpo::Vec::Constant(1, 2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        hpo::prox_solve(obj, x, 1.0 / 16.0, static_cast<int>(state.range(0)), 1e-8));
}
BENCHMARK(BM_ProxSolve)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
