#include "rampart/nn.hpp"

#include <cmath>

#include "rampart/error.hpp"

namespace rampart {

ad::Var ParamSet::add(const std::string& name, Tensor init) {
  for (const auto& n : names_) {
    if (n == name) throw ConfigError("param set: duplicate name '" + name + "'");
  }
  names_.push_back(name);
  vars_.push_back(ad::leaf(std::move(init), true));
  return vars_.back();
}

std::vector<Tensor*> ParamSet::tensors() {
  std::vector<Tensor*> out;
  out.reserve(vars_.size());
  for (auto& v : vars_) out.push_back(&v.mutable_value());
  return out;
}

Tensor& ParamSet::value(const std::string& name) {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return vars_[i].mutable_value();
  }
  throw ConfigError("param set: unknown name '" + name + "'");
}

const Tensor& ParamSet::value(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return vars_[i].value();
  }
  throw ConfigError("param set: unknown name '" + name + "'");
}

bool ParamSet::all_finite() const {
  for (const auto& v : vars_) {
    if (!v.value().all_finite()) return false;
  }
  return true;
}

Tensor init_normal(Shape shape, double stddev, Rng& rng) {
  Tensor t(std::move(shape));
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = rng.normal(0.0, stddev);
  return t;
}

Tensor init_he(Shape shape, int64_t fan_in, Rng& rng) {
  return init_normal(std::move(shape), std::sqrt(2.0 / static_cast<double>(fan_in)), rng);
}

ad::Var bce_with_logits(const ad::Var& logits, const Tensor& labels) {
  if (labels.shape() != logits.shape()) {
    throw ShapeError("bce_with_logits: labels " + shape_str(labels.shape()) +
                     " vs logits " + shape_str(logits.shape()));
  }
  ad::Var y = ad::constant(labels);
  return ad::mean_all(ad::sub(ad::softplus(logits), ad::mul(y, logits)));
}

}  // namespace rampart
