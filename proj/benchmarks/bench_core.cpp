#include <benchmark/benchmark.h>

#include "pplab/calculus.hpp"
#include "pplab/envelope.hpp"
#include "pplab/gallery.hpp"
#include "pplab/lebesgue.hpp"

using namespace pplab;

static void BM_EnvelopeSweepK1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GridDomain g = make_ball_grid(1, n);
  Mask E = ball_mask(g, 0.3);
  for (auto _ : state) {
    EnvelopeOptions eo;
    eo.tol = 1e-6;
    eo.method = EnvelopeMethod::sor;
    auto r = relative_extremal(E, g, eo);
    benchmark::DoNotOptimize(r.residual);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_EnvelopeSweepK1)->Arg(65)->Arg(129)->Arg(257)->Complexity();

static void BM_ComplexHessian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GridDomain g = make_ball_grid(1, n);
  auto inst = gallery_instantiate("sqnorm", g);
  for (auto _ : state) {
    auto h = complex_hessian(inst.pair.phi);
    benchmark::DoNotOptimize(h.defined(0));
  }
}
BENCHMARK(BM_ComplexHessian)->Arg(129)->Arg(257)->Arg(513);

static void BM_Integrate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GridDomain g = make_ball_grid(1, n);
  ScalarField f(g, 1.0);
  Mask ball = full_ball(g);
  for (auto _ : state) {
    auto r = integrate(f, ball);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_Integrate)->Arg(257)->Arg(513)->Arg(1025);

static void BM_Mollify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GridDomain g = make_ball_grid(1, n);
  auto inst = gallery_instantiate("loglog", g, {{"delta", 0.1}});
  UnityKernel kern = UnityKernel::make(g, KernelKind::smooth_radial, 4 * g.h());
  for (auto _ : state) {
    auto r = mollify(inst.pair.phi, kern);
    benchmark::DoNotOptimize(r.evaluated);
  }
}
BENCHMARK(BM_Mollify)->Arg(257)->Arg(513);

BENCHMARK_MAIN();
