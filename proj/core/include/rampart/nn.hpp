#pragma once

#include <string>
#include <vector>

#include "rampart/autodiff.hpp"
#include "rampart/rng.hpp"
#include "rampart/tensor.hpp"

namespace rampart {

// A named, ordered set of trainable tensors. Parameters live inside autodiff
// leaf nodes: the optimizer mutates the leaf values in place and every
// training step builds fresh op nodes on top of the same leaves.
class ParamSet {
 public:
  ad::Var add(const std::string& name, Tensor init);

  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<ad::Var>& vars() const { return vars_; }
  std::vector<Tensor*> tensors();

  Tensor& value(const std::string& name);
  const Tensor& value(const std::string& name) const;
  bool all_finite() const;

 private:
  std::vector<std::string> names_;
  std::vector<ad::Var> vars_;
};

// Initializers.
Tensor init_normal(Shape shape, double stddev, Rng& rng);
Tensor init_he(Shape shape, int64_t fan_in, Rng& rng);

// Binary cross-entropy from logits: mean(softplus(l) - y * l). Numerically
// stable for both classes; `labels` must match the logits shape.
ad::Var bce_with_logits(const ad::Var& logits, const Tensor& labels);

}  // namespace rampart
