#pragma once

#include <cstdint>
#include <vector>

#include "rampart/tensor.hpp"

namespace rampart {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Standard Adam with bias correction. Moment tensors mirror the parameter
// shapes; the step count is strictly increasing.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  // Applies one update in place. `params` and `grads` must stay aligned (same
  // count, same shapes) across calls.
  void step(std::vector<Tensor*> params, const std::vector<Tensor>& grads);

  int64_t step_count() const { return step_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  int64_t step_ = 0;
  std::vector<Tensor> m_, v_;
};

}  // namespace rampart
