#include "rampart/adam.hpp"

#include <cmath>

#include "rampart/error.hpp"

namespace rampart {

void Adam::step(std::vector<Tensor*> params, const std::vector<Tensor>& grads) {
  if (params.size() != grads.size()) {
    throw ShapeError("adam: " + std::to_string(params.size()) + " params vs " +
                     std::to_string(grads.size()) + " grads");
  }
  if (m_.empty()) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Tensor* p : params) {
      m_.push_back(Tensor::zeros(p->shape()));
      v_.push_back(Tensor::zeros(p->shape()));
    }
  }
  if (m_.size() != params.size()) {
    throw ShapeError("adam: parameter count changed between steps");
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
  for (size_t k = 0; k < params.size(); ++k) {
    Tensor& p = *params[k];
    const Tensor& g = grads[k];
    if (!p.same_shape(g)) {
      throw ShapeError("adam: param " + shape_str(p.shape()) + " vs grad " +
                       shape_str(g.shape()));
    }
    Tensor& m = m_[k];
    Tensor& v = v_[k];
    for (int64_t i = 0; i < p.numel(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      p[i] -= cfg_.lr * mh / (std::sqrt(vh) + cfg_.epsilon);
    }
  }
}

}  // namespace rampart
