#pragma once

// Finite-difference gradient oracle. Independent of the reverse pass it
// checks: derivatives are estimated by central differences of the *forward*
// evaluation only.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rampart/autodiff.hpp"
#include "rampart/rng.hpp"
#include "rampart/tensor.hpp"

namespace gradcheck {

// Builds a scalar from freshly-created leaves each call, so the function can
// be re-evaluated at perturbed inputs.
using ScalarFn = std::function<rampart::ad::Var(const std::vector<rampart::ad::Var>&)>;

struct Result {
  double max_rel_err = 0.0;
  std::string where;
};

// rel = |analytic - numeric| / max(|analytic|, |numeric|, 1)
inline double rel_err(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1.0});
}

inline Result check(const ScalarFn& fn, const std::vector<rampart::Tensor>& inputs,
                    double h = 1e-4) {
  using namespace rampart;
  std::vector<ad::Var> leaves;
  leaves.reserve(inputs.size());
  for (const auto& t : inputs) leaves.push_back(ad::leaf(t, true));
  ad::Var out = fn(leaves);
  std::vector<ad::Var> grads = ad::gradients(out, leaves);

  auto eval_at = [&](size_t which, int64_t idx, double delta) {
    std::vector<ad::Var> ls;
    ls.reserve(inputs.size());
    for (size_t i = 0; i < inputs.size(); ++i) {
      Tensor t = inputs[i];
      if (i == which) t[idx] += delta;
      ls.push_back(ad::leaf(std::move(t), false));
    }
    return fn(ls).value().item();
  };

  Result r;
  for (size_t i = 0; i < inputs.size(); ++i) {
    for (int64_t j = 0; j < inputs[i].numel(); ++j) {
      const double numeric = (eval_at(i, j, h) - eval_at(i, j, -h)) / (2.0 * h);
      const double analytic = grads[i].value()[j];
      const double e = rel_err(analytic, numeric);
      if (e > r.max_rel_err) {
        r.max_rel_err = e;
        r.where = "input " + std::to_string(i) + " elem " + std::to_string(j) +
                  " analytic=" + std::to_string(analytic) +
                  " numeric=" + std::to_string(numeric);
      }
    }
  }
  return r;
}

// Random tensor with entries kept away from the kinks of piecewise ops.
inline rampart::Tensor random_tensor(rampart::Shape shape, rampart::Rng& rng,
                                     double margin = 0.0) {
  rampart::Tensor t(std::move(shape));
  for (int64_t i = 0; i < t.numel(); ++i) {
    double v = rng.uniform(-1.5, 1.5);
    if (margin > 0.0) {
      while (std::abs(v) < margin) v = rng.uniform(-1.5, 1.5);
    }
    t[i] = v;
  }
  return t;
}

struct OpCase {
  std::string name;
  // Input shapes and a margin keeping random draws away from non-smooth points.
  std::vector<rampart::Shape> shapes;
  double margin = 0.0;
  bool positive = false;  // draw from (0.1, 1.6) instead (log/sqrt)
  // Spread values over a shuffled grid so per-map maxima are well separated
  // (keeps central differences away from argmax flips).
  bool spaced = false;
  ScalarFn fn;
};

// One case per differentiable op. The scalarizing mean at the end makes every
// op checkable through a single seed.
inline std::vector<OpCase> op_cases() {
  using namespace rampart;
  using namespace rampart::ad;
  auto m = [](const Var& v) { return mean_all(v); };
  std::vector<OpCase> cases;
  auto addc = [&](std::string name, std::vector<Shape> shapes, ScalarFn fn,
                  double margin = 0.0, bool positive = false, bool spaced = false) {
    cases.push_back(
        {std::move(name), std::move(shapes), margin, positive, spaced, std::move(fn)});
  };

  addc("add", {{3, 4}, {3, 4}}, [m](const auto& v) { return m(add(v[0], v[1])); });
  addc("sub", {{3, 4}, {3, 4}}, [m](const auto& v) { return m(sub(v[0], v[1])); });
  addc("mul", {{3, 4}, {3, 4}}, [m](const auto& v) { return m(mul(v[0], v[1])); });
  addc("div", {{3, 4}, {3, 4}}, [m](const auto& v) { return m(div(v[0], v[1])); }, 0.35);
  addc("neg", {{3, 4}}, [m](const auto& v) { return m(neg(v[0])); });
  addc("scalar_mul", {{3, 4}}, [m](const auto& v) { return m(scalar_mul(v[0], -2.5)); });
  addc("scalar_add", {{3, 4}}, [m](const auto& v) { return m(scalar_add(v[0], 0.7)); });
  addc("matmul", {{3, 4}, {4, 2}},
       [m](const auto& v) { return m(matmul(v[0], v[1])); });
  addc("matmul_ta", {{4, 3}, {4, 2}},
       [m](const auto& v) { return m(matmul(v[0], v[1], true, false)); });
  addc("matmul_tb", {{3, 4}, {2, 4}},
       [m](const auto& v) { return m(matmul(v[0], v[1], false, true)); });
  addc("matmul_tatb", {{4, 3}, {2, 4}},
       [m](const auto& v) { return m(matmul(v[0], v[1], true, true)); });
  addc("conv2d_valid", {{2, 2, 5, 6}, {3, 2, 3, 3}},
       [m](const auto& v) { return m(conv2d(v[0], v[1], 0, 0)); });
  addc("conv2d_same", {{2, 2, 5, 6}, {3, 2, 3, 3}},
       [m](const auto& v) { return m(conv2d(v[0], v[1], 1, 1)); });
  addc("conv2d_input_grad", {{2, 3, 5, 6}, {3, 2, 3, 3}},
       [m](const auto& v) {
         return m(conv2d_input_grad(v[0], v[1], 1, 1, {2, 2, 5, 6}));
       });
  addc("conv2d_weight_grad", {{2, 2, 5, 6}, {2, 3, 5, 6}},
       [m](const auto& v) {
         return m(conv2d_weight_grad(v[0], v[1], 1, 1, {3, 2, 3, 3}));
       });
  addc("dense", {{4, 5}, {5, 3}, {3}},
       [m](const auto& v) { return m(bias_add_cols(matmul(v[0], v[1]), v[2])); });
  addc("col_sum", {{4, 5}}, [m](const auto& v) { return m(col_sum(v[0])); });
  addc("broadcast_rows", {{5}},
       [m](const auto& v) { return m(broadcast_rows(v[0], {4, 5})); });
  addc("bias_add_chan", {{2, 3, 4, 5}, {3}},
       [m](const auto& v) { return m(bias_add_chan(v[0], v[1])); });
  addc("chan_sum", {{2, 3, 4, 5}}, [m](const auto& v) { return m(chan_sum(v[0])); });
  addc("broadcast_chan", {{3}},
       [m](const auto& v) { return m(broadcast_chan(v[0], {2, 3, 4, 5})); });
  addc("relu", {{3, 7}}, [m](const auto& v) { return m(relu(v[0])); }, 1e-2);
  addc("leaky_relu", {{3, 7}},
       [m](const auto& v) { return m(leaky_relu(v[0], 0.2)); }, 1e-2);
  addc("tanh", {{3, 7}}, [m](const auto& v) { return m(tanh_(v[0])); });
  addc("sigmoid", {{3, 7}}, [m](const auto& v) { return m(sigmoid(v[0])); });
  addc("softplus", {{3, 7}}, [m](const auto& v) { return m(softplus(v[0])); });
  addc("log", {{3, 7}}, [m](const auto& v) { return m(log_(v[0])); }, 0.0, true);
  addc("sqrt", {{3, 7}}, [m](const auto& v) { return m(sqrt_(v[0])); }, 0.0, true);
  addc("mean_all", {{3, 7}}, [](const auto& v) { return mean_all(v[0]); });
  addc("sum_all", {{3, 7}}, [](const auto& v) { return sum_all(v[0]); });
  addc("expand_scalar", {{1}},
       [m](const auto& v) { return m(mul(expand_scalar(v[0], {3, 4}), expand_scalar(v[0], {3, 4}))); });
  addc("sum_per_sample", {{4, 2, 3}},
       [m](const auto& v) { return m(mul(sum_per_sample(v[0]), sum_per_sample(v[0]))); });
  addc("expand_per_sample", {{4}},
       [m](const auto& v) { return m(expand_per_sample(v[0], {4, 2, 3})); });
  addc("reshape", {{3, 4}},
       [m](const auto& v) { return m(mul(reshape(v[0], {2, 6}), reshape(v[0], {2, 6}))); });
  addc("crop2d", {{2, 2, 4, 5}},
       [m](const auto& v) { return m(crop2d(v[0], 3, 4)); });
  addc("pad_bottom_right", {{2, 2, 3, 4}},
       [m](const auto& v) { return m(mul(pad_bottom_right(v[0], 4, 5), pad_bottom_right(v[0], 4, 5))); });
  addc("upsample2x", {{2, 2, 3, 4}},
       [m](const auto& v) { return m(mul(upsample2x(v[0]), upsample2x(v[0]))); });
  addc("sum_pool2x", {{2, 2, 4, 6}},
       [m](const auto& v) { return m(sum_pool2x(v[0])); });
  addc("global_max_pool", {{2, 3, 4, 5}},
       [m](const auto& v) { return m(global_max_pool(v[0])); }, 0.0, false, true);
  addc("sum_hw", {{2, 3, 4, 5}}, [m](const auto& v) { return m(sum_hw(v[0])); });
  addc("broadcast_hw", {{2, 3}},
       [m](const auto& v) { return m(broadcast_hw(v[0], {2, 3, 4, 5})); });
  return cases;
}

// Runs `trials` random-draw gradient checks for one op case; returns the
// worst relative error observed.
inline double run_case(const OpCase& c, int trials, uint64_t seed) {
  using namespace rampart;
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<Tensor> inputs;
    for (const auto& s : c.shapes) {
      Tensor in = random_tensor(s, rng, c.margin);
      if (c.positive) {
        for (int64_t i = 0; i < in.numel(); ++i) in[i] = 0.1 + std::abs(in[i]);
      }
      if (c.spaced) {
        std::vector<double> grid(static_cast<size_t>(in.numel()));
        for (size_t i = 0; i < grid.size(); ++i)
          grid[i] = -1.5 + 3.0 * static_cast<double>(i) / static_cast<double>(grid.size());
        rng.shuffle(grid);
        for (int64_t i = 0; i < in.numel(); ++i)
          in[i] = grid[static_cast<size_t>(i)] + rng.uniform(-1e-3, 1e-3);
      }
      inputs.push_back(std::move(in));
    }
    Result r = check(c.fn, inputs);
    worst = std::max(worst, r.max_rel_err);
  }
  return worst;
}

}  // namespace gradcheck
