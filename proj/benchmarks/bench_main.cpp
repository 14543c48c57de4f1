#include <benchmark/benchmark.h>

#include <vector>

#include "hesslab/hermlin.hpp"
#include "hesslab/newton.hpp"
#include "hesslab/random.hpp"
#include "hesslab/solver.hpp"
#include "hesslab/stencil_operator.hpp"
#include "hesslab/symmfunc.hpp"

using namespace hesslab;

namespace {

void BM_ElemSym(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Rng rng(1);
  std::vector<double> lam(n);
  for (auto& v : lam) v = rng.normal();
  for (auto _ : st) {
    for (int k = 0; k <= n; ++k) benchmark::DoNotOptimize(symm::elem_sym(lam, k));
  }
}
BENCHMARK(BM_ElemSym)->DenseRange(2, 6);

HermitianMatrix random_hermitian(Rng& rng, int n) {
  HermitianMatrix a(n);
  for (int i = 0; i < n; ++i) {
    a.set(i, i, rng.normal());
    for (int j = i + 1; j < n; ++j) a.set(i, j, {rng.normal(), rng.normal()});
  }
  return a;
}

void BM_Eigvals(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Rng rng(2);
  const HermitianMatrix a = random_hermitian(rng, n);
  std::vector<double> out(n);
  for (auto _ : st) {
    eigvals_into(a, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Eigvals)->DenseRange(2, 6);

void BM_MixedSigma(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Rng rng(3);
  std::vector<HermitianMatrix> args;
  for (int i = 0; i < n; ++i) args.push_back(random_hermitian(rng, n));
  for (auto _ : st) benchmark::DoNotOptimize(mixed_sigma(args));
}
BENCHMARK(BM_MixedSigma)->DenseRange(2, 4);

struct Problem {
  NewtonProblem p;
  std::vector<double> u;
};

Problem quadratic_problem(int n, int m, int points) {
  DomainPtr d = share(GridDomain::ball(n, points, 1.0));
  Problem pr{{d, m, std::vector<double>(d->size(), 0.0), std::vector<double>(d->size(), 0.0)},
             std::vector<double>(d->size(), 0.0)};
  for (std::size_t i = 0; i < d->size(); ++i) {
    if (!d->is_inside(i)) continue;
    double t = 0.0;
    for (double x : d->position(i)) t += x * x;
    pr.u[i] = t + 0.1 * d->position(i)[0] * d->position(i)[0];
    pr.p.psi[i] = pr.u[i];
    pr.p.f_root[i] = 1.0;
  }
  return pr;
}

void BM_ResidualEvaluation(benchmark::State& st) {
  const Problem pr = quadratic_problem(2, 2, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(newton_evaluate(pr.p, pr.u, nullptr).residual);
  st.SetItemsProcessed(st.iterations() * static_cast<long>(pr.p.domain->interior().size()));
}
BENCHMARK(BM_ResidualEvaluation)->Arg(13)->Arg(17);

void BM_Matvec(benchmark::State& st) {
  const Problem pr = quadratic_problem(2, 2, static_cast<int>(st.range(0)));
  StencilOperator op(pr.p.domain);
  newton_evaluate(pr.p, pr.u, &op);
  std::vector<double> y(pr.u.size());
  for (auto _ : st) {
    op.apply(pr.u, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(pr.p.domain->interior().size()));
}
BENCHMARK(BM_Matvec)->Arg(17)->Arg(25);

}  // namespace

BENCHMARK_MAIN();
