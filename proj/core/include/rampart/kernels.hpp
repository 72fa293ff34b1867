#pragma once

#include "rampart/tensor.hpp"

// Numeric kernels shared by the autodiff ops. All convolutions are stride-1
// zero-padded cross-correlations over NCHW tensors with OIHW weights.
namespace rampart::kern {

Tensor matmul(const Tensor& a, const Tensor& b, bool ta, bool tb);

Tensor conv2d(const Tensor& x, const Tensor& w, int ph, int pw);
// Gradient w.r.t. the conv input: g has the conv output shape, result has
// spatial size (H, W).
Tensor conv2d_input_grad(const Tensor& g, const Tensor& w, int ph, int pw,
                         int64_t H, int64_t W);
// Gradient w.r.t. the conv weights, kernel size (kh, kw).
Tensor conv2d_weight_grad(const Tensor& x, const Tensor& g, int ph, int pw,
                          int64_t kh, int64_t kw);

}  // namespace rampart::kern
