#include <benchmark/benchmark.h>

#include "rampart/autodiff.hpp"
#include "rampart/kernels.hpp"
#include "rampart/nn.hpp"
#include "rampart/rng.hpp"

using namespace rampart;

static Tensor random_tensor(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = rng.normal();
  return t;
}

static void BM_Conv2dForward(benchmark::State& state) {
  Rng rng(1);
  Tensor x = random_tensor({32, 8, 10, 11}, rng);
  Tensor w = random_tensor({16, 8, 3, 3}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kern::conv2d(x, w, 1, 1));
  }
}
BENCHMARK(BM_Conv2dForward);

static void BM_ConvCriticStepBackward(benchmark::State& state) {
  // Forward + backward of a small conv stack, the inner loop of training.
  Rng rng(2);
  Tensor x = random_tensor({32, 1, 10, 11}, rng);
  Tensor w1 = random_tensor({8, 1, 3, 3}, rng);
  Tensor w2 = random_tensor({16, 8, 3, 3}, rng);
  Tensor wd = random_tensor({16 * 10 * 11, 1}, rng);
  for (auto _ : state) {
    ad::Var xv = ad::constant(x);
    ad::Var w1v = ad::leaf(w1, true);
    ad::Var w2v = ad::leaf(w2, true);
    ad::Var wdv = ad::leaf(wd, true);
    ad::Var h = ad::leaky_relu(ad::conv2d(xv, w1v, 1, 1), 0.2);
    h = ad::leaky_relu(ad::conv2d(h, w2v, 1, 1), 0.2);
    ad::Var out = ad::matmul(ad::reshape(h, {32, 16 * 10 * 11}), wdv);
    ad::Var loss = ad::mean_all(out);
    auto grads = ad::gradients(loss, std::vector<ad::Var>{w1v, w2v, wdv});
    benchmark::DoNotOptimize(grads[0].value().data());
  }
}
BENCHMARK(BM_ConvCriticStepBackward);

static void BM_Matmul(benchmark::State& state) {
  Rng rng(3);
  Tensor a = random_tensor({64, 1760}, rng);
  Tensor b = random_tensor({1760, 32}, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kern::matmul(a, b, false, false));
  }
}
BENCHMARK(BM_Matmul);
