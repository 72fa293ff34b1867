#include "rampart/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "rampart/error.hpp"
#include "rampart/kernels.hpp"

namespace rampart::ad {

namespace {

NodePtr make_node(Op op, std::vector<NodePtr> inputs, Tensor value) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->inputs = std::move(inputs);
  n->value = std::move(value);
  for (const auto& in : n->inputs) {
    if (in->requires_grad) {
      n->requires_grad = true;
      break;
    }
  }
  return n;
}

void check_same_shape(const char* op, const Var& a, const Var& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  }
}

void check_rank4(const char* op, const Var& x) {
  if (x.shape().size() != 4) {
    throw ShapeError(std::string(op) + ": expects NCHW input, got " + shape_str(x.shape()));
  }
}

Tensor map_unary(const Tensor& x, double (*f)(double)) {
  Tensor y(x.shape());
  const double* px = x.data();
  double* py = y.data();
  for (int64_t i = 0; i < x.numel(); ++i) py[i] = f(px[i]);
  return y;
}

double sigmoid_scalar(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

double softplus_scalar(double v) {
  if (v > 30.0) return v;
  return std::log1p(std::exp(v));
}

}  // namespace

Var constant(Tensor v) { return Var(make_node(Op::kLeaf, {}, std::move(v))); }

Var leaf(Tensor v, bool requires_grad) {
  auto n = make_node(Op::kLeaf, {}, std::move(v));
  n->requires_grad = requires_grad;
  return Var(n);
}

Var detach(const Var& v) { return constant(v.value()); }

Var add(const Var& a, const Var& b) {
  check_same_shape("add", a, b);
  Tensor y(a.shape());
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = a.value()[i] + b.value()[i];
  return Var(make_node(Op::kAdd, {a.node(), b.node()}, std::move(y)));
}

Var sub(const Var& a, const Var& b) {
  check_same_shape("sub", a, b);
  Tensor y(a.shape());
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = a.value()[i] - b.value()[i];
  return Var(make_node(Op::kSub, {a.node(), b.node()}, std::move(y)));
}

Var mul(const Var& a, const Var& b) {
  check_same_shape("mul", a, b);
  Tensor y(a.shape());
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = a.value()[i] * b.value()[i];
  return Var(make_node(Op::kMul, {a.node(), b.node()}, std::move(y)));
}

Var div(const Var& a, const Var& b) {
  check_same_shape("div", a, b);
  Tensor y(a.shape());
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = a.value()[i] / b.value()[i];
  return Var(make_node(Op::kDiv, {a.node(), b.node()}, std::move(y)));
}

Var neg(const Var& a) {
  Tensor y(a.shape());
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = -a.value()[i];
  return Var(make_node(Op::kNeg, {a.node()}, std::move(y)));
}

Var scalar_mul(const Var& a, double c) {
  Tensor y(a.shape());
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = a.value()[i] * c;
  auto n = make_node(Op::kScalarMul, {a.node()}, std::move(y));
  n->f0 = c;
  return Var(n);
}

Var scalar_add(const Var& a, double c) {
  Tensor y(a.shape());
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = a.value()[i] + c;
  auto n = make_node(Op::kScalarAdd, {a.node()}, std::move(y));
  n->f0 = c;
  return Var(n);
}

Var matmul(const Var& a, const Var& b, bool ta, bool tb) {
  auto n = make_node(Op::kMatMul, {a.node(), b.node()},
                     kern::matmul(a.value(), b.value(), ta, tb));
  n->i0 = ta ? 1 : 0;
  n->i1 = tb ? 1 : 0;
  return Var(n);
}

Var conv2d(const Var& x, const Var& w, int ph, int pw) {
  auto n = make_node(Op::kConv2d, {x.node(), w.node()},
                     kern::conv2d(x.value(), w.value(), ph, pw));
  n->i0 = ph;
  n->i1 = pw;
  return Var(n);
}

Var conv2d_input_grad(const Var& g, const Var& w, int ph, int pw, Shape x_shape) {
  auto n = make_node(Op::kConvInGrad, {g.node(), w.node()},
                     kern::conv2d_input_grad(g.value(), w.value(), ph, pw,
                                             x_shape[2], x_shape[3]));
  n->i0 = ph;
  n->i1 = pw;
  return Var(n);
}

Var conv2d_weight_grad(const Var& x, const Var& g, int ph, int pw, Shape w_shape) {
  auto n = make_node(Op::kConvWGrad, {x.node(), g.node()},
                     kern::conv2d_weight_grad(x.value(), g.value(), ph, pw,
                                              w_shape[2], w_shape[3]));
  n->i0 = ph;
  n->i1 = pw;
  return Var(n);
}

Var bias_add_cols(const Var& x, const Var& b) {
  if (x.shape().size() != 2 || b.shape().size() != 1 || x.shape()[1] != b.shape()[0]) {
    throw ShapeError("bias_add_cols: " + shape_str(x.shape()) + " + " + shape_str(b.shape()));
  }
  const int64_t N = x.shape()[0], F = x.shape()[1];
  Tensor y(x.shape());
  for (int64_t i = 0; i < N; ++i)
    for (int64_t j = 0; j < F; ++j) y[i * F + j] = x.value()[i * F + j] + b.value()[j];
  return Var(make_node(Op::kBiasAddCols, {x.node(), b.node()}, std::move(y)));
}

Var col_sum(const Var& x) {
  if (x.shape().size() != 2) {
    throw ShapeError("col_sum: expects rank-2 input, got " + shape_str(x.shape()));
  }
  const int64_t N = x.shape()[0], F = x.shape()[1];
  Tensor y({F});
  for (int64_t i = 0; i < N; ++i)
    for (int64_t j = 0; j < F; ++j) y[j] += x.value()[i * F + j];
  return Var(make_node(Op::kColSum, {x.node()}, std::move(y)));
}

Var broadcast_rows(const Var& b, Shape target) {
  if (b.shape().size() != 1 || target.size() != 2 || target[1] != b.shape()[0]) {
    throw ShapeError("broadcast_rows: " + shape_str(b.shape()) + " -> " + shape_str(target));
  }
  const int64_t N = target[0], F = target[1];
  Tensor y(target);
  for (int64_t i = 0; i < N; ++i)
    for (int64_t j = 0; j < F; ++j) y[i * F + j] = b.value()[j];
  return Var(make_node(Op::kBroadcastRows, {b.node()}, std::move(y)));
}

Var bias_add_chan(const Var& x, const Var& b) {
  check_rank4("bias_add_chan", x);
  if (b.shape().size() != 1 || b.shape()[0] != x.shape()[1]) {
    throw ShapeError("bias_add_chan: " + shape_str(x.shape()) + " + " + shape_str(b.shape()));
  }
  const int64_t N = x.shape()[0], C = x.shape()[1], HW = x.shape()[2] * x.shape()[3];
  Tensor y(x.shape());
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c) {
      const double bv = b.value()[c];
      const int64_t base = (n * C + c) * HW;
      for (int64_t i = 0; i < HW; ++i) y[base + i] = x.value()[base + i] + bv;
    }
  return Var(make_node(Op::kBiasAddChan, {x.node(), b.node()}, std::move(y)));
}

Var chan_sum(const Var& x) {
  check_rank4("chan_sum", x);
  const int64_t N = x.shape()[0], C = x.shape()[1], HW = x.shape()[2] * x.shape()[3];
  Tensor y({C});
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c) {
      const int64_t base = (n * C + c) * HW;
      double acc = 0.0;
      for (int64_t i = 0; i < HW; ++i) acc += x.value()[base + i];
      y[c] += acc;
    }
  return Var(make_node(Op::kChanSum, {x.node()}, std::move(y)));
}

Var broadcast_chan(const Var& b, Shape target) {
  if (b.shape().size() != 1 || target.size() != 4 || target[1] != b.shape()[0]) {
    throw ShapeError("broadcast_chan: " + shape_str(b.shape()) + " -> " + shape_str(target));
  }
  const int64_t N = target[0], C = target[1], HW = target[2] * target[3];
  Tensor y(target);
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c) {
      const int64_t base = (n * C + c) * HW;
      for (int64_t i = 0; i < HW; ++i) y[base + i] = b.value()[c];
    }
  return Var(make_node(Op::kBroadcastChan, {b.node()}, std::move(y)));
}

Var relu(const Var& x) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < y.numel(); ++i) y[i] = x.value()[i] > 0.0 ? x.value()[i] : 0.0;
  return Var(make_node(Op::kRelu, {x.node()}, std::move(y)));
}

Var leaky_relu(const Var& x, double alpha) {
  Tensor y(x.shape());
  for (int64_t i = 0; i < y.numel(); ++i) {
    const double v = x.value()[i];
    y[i] = v > 0.0 ? v : alpha * v;
  }
  auto n = make_node(Op::kLeakyRelu, {x.node()}, std::move(y));
  n->f0 = alpha;
  return Var(n);
}

Var tanh_(const Var& x) {
  return Var(make_node(Op::kTanh, {x.node()}, map_unary(x.value(), [](double v) {
    return std::tanh(v);
  })));
}

Var sigmoid(const Var& x) {
  return Var(make_node(Op::kSigmoid, {x.node()}, map_unary(x.value(), &sigmoid_scalar)));
}

Var softplus(const Var& x) {
  return Var(make_node(Op::kSoftplus, {x.node()}, map_unary(x.value(), &softplus_scalar)));
}

Var log_(const Var& x) {
  return Var(make_node(Op::kLog, {x.node()}, map_unary(x.value(), [](double v) {
    return std::log(v);
  })));
}

Var sqrt_(const Var& x) {
  return Var(make_node(Op::kSqrt, {x.node()}, map_unary(x.value(), [](double v) {
    return std::sqrt(v);
  })));
}

Var mean_all(const Var& x) {
  double acc = 0.0;
  for (int64_t i = 0; i < x.value().numel(); ++i) acc += x.value()[i];
  return Var(make_node(Op::kMeanAll, {x.node()},
                       Tensor::scalar(acc / static_cast<double>(x.value().numel()))));
}

Var sum_all(const Var& x) {
  double acc = 0.0;
  for (int64_t i = 0; i < x.value().numel(); ++i) acc += x.value()[i];
  return Var(make_node(Op::kSumAll, {x.node()}, Tensor::scalar(acc)));
}

Var expand_scalar(const Var& s, Shape target) {
  if (s.value().numel() != 1) {
    throw ShapeError("expand_scalar: expects scalar, got " + shape_str(s.shape()));
  }
  return Var(make_node(Op::kExpandScalar, {s.node()},
                       Tensor::full(std::move(target), s.value()[0])));
}

Var sum_per_sample(const Var& x) {
  if (x.shape().empty()) throw ShapeError("sum_per_sample: scalar input");
  const int64_t N = x.shape()[0];
  const int64_t D = x.value().numel() / N;
  Tensor y({N});
  for (int64_t n = 0; n < N; ++n) {
    double acc = 0.0;
    for (int64_t i = 0; i < D; ++i) acc += x.value()[n * D + i];
    y[n] = acc;
  }
  return Var(make_node(Op::kSumPerSample, {x.node()}, std::move(y)));
}

Var expand_per_sample(const Var& s, Shape target) {
  if (s.shape().size() != 1 || target.empty() || target[0] != s.shape()[0]) {
    throw ShapeError("expand_per_sample: " + shape_str(s.shape()) + " -> " + shape_str(target));
  }
  const int64_t N = target[0];
  const int64_t D = shape_numel(target) / N;
  Tensor y(target);
  for (int64_t n = 0; n < N; ++n)
    for (int64_t i = 0; i < D; ++i) y[n * D + i] = s.value()[n];
  return Var(make_node(Op::kExpandPerSample, {s.node()}, std::move(y)));
}

Var reshape(const Var& x, Shape target) {
  if (shape_numel(target) != x.value().numel()) {
    throw ShapeError("reshape: " + shape_str(x.shape()) + " -> " + shape_str(target));
  }
  Tensor y(std::move(target), {x.value().values().begin(), x.value().values().end()});
  return Var(make_node(Op::kReshape, {x.node()}, std::move(y)));
}

Var crop2d(const Var& x, int64_t h, int64_t w) {
  check_rank4("crop2d", x);
  const int64_t N = x.shape()[0], C = x.shape()[1], H = x.shape()[2], W = x.shape()[3];
  if (h > H || w > W) {
    throw ShapeError("crop2d: target " + std::to_string(h) + "x" + std::to_string(w) +
                     " exceeds input " + shape_str(x.shape()));
  }
  Tensor y({N, C, h, w});
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c)
      for (int64_t i = 0; i < h; ++i)
        for (int64_t j = 0; j < w; ++j)
          y[((n * C + c) * h + i) * w + j] = x.value()[((n * C + c) * H + i) * W + j];
  return Var(make_node(Op::kCrop2d, {x.node()}, std::move(y)));
}

Var pad_bottom_right(const Var& x, int64_t h, int64_t w) {
  check_rank4("pad_bottom_right", x);
  const int64_t N = x.shape()[0], C = x.shape()[1], H = x.shape()[2], W = x.shape()[3];
  if (h < H || w < W) {
    throw ShapeError("pad_bottom_right: target smaller than input " + shape_str(x.shape()));
  }
  Tensor y({N, C, h, w});
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c)
      for (int64_t i = 0; i < H; ++i)
        for (int64_t j = 0; j < W; ++j)
          y[((n * C + c) * h + i) * w + j] = x.value()[((n * C + c) * H + i) * W + j];
  return Var(make_node(Op::kPadBottomRight, {x.node()}, std::move(y)));
}

Var upsample2x(const Var& x) {
  check_rank4("upsample2x", x);
  const int64_t N = x.shape()[0], C = x.shape()[1], H = x.shape()[2], W = x.shape()[3];
  Tensor y({N, C, 2 * H, 2 * W});
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c)
      for (int64_t i = 0; i < 2 * H; ++i)
        for (int64_t j = 0; j < 2 * W; ++j)
          y[((n * C + c) * 2 * H + i) * 2 * W + j] =
              x.value()[((n * C + c) * H + i / 2) * W + j / 2];
  return Var(make_node(Op::kUpsample2x, {x.node()}, std::move(y)));
}

Var sum_pool2x(const Var& x) {
  check_rank4("sum_pool2x", x);
  const int64_t N = x.shape()[0], C = x.shape()[1], H = x.shape()[2], W = x.shape()[3];
  if (H % 2 != 0 || W % 2 != 0) {
    throw ShapeError("sum_pool2x: spatial dims must be even, got " + shape_str(x.shape()));
  }
  Tensor y({N, C, H / 2, W / 2});
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c)
      for (int64_t i = 0; i < H; ++i)
        for (int64_t j = 0; j < W; ++j)
          y[((n * C + c) * (H / 2) + i / 2) * (W / 2) + j / 2] +=
              x.value()[((n * C + c) * H + i) * W + j];
  return Var(make_node(Op::kSumPool2x, {x.node()}, std::move(y)));
}

Var global_max_pool(const Var& x) {
  check_rank4("global_max_pool", x);
  const int64_t N = x.shape()[0], C = x.shape()[1], HW = x.shape()[2] * x.shape()[3];
  Tensor y({N, C});
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c) {
      const int64_t base = (n * C + c) * HW;
      double best = x.value()[base];
      for (int64_t i = 1; i < HW; ++i) best = std::max(best, x.value()[base + i]);
      y[n * C + c] = best;
    }
  return Var(make_node(Op::kGlobalMaxPool, {x.node()}, std::move(y)));
}

Var sum_hw(const Var& x) {
  check_rank4("sum_hw", x);
  const int64_t N = x.shape()[0], C = x.shape()[1], HW = x.shape()[2] * x.shape()[3];
  Tensor y({N, C});
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c) {
      const int64_t base = (n * C + c) * HW;
      double acc = 0.0;
      for (int64_t i = 0; i < HW; ++i) acc += x.value()[base + i];
      y[n * C + c] = acc;
    }
  return Var(make_node(Op::kSumHW, {x.node()}, std::move(y)));
}

Var broadcast_hw(const Var& x, Shape target) {
  if (x.shape().size() != 2 || target.size() != 4 || target[0] != x.shape()[0] ||
      target[1] != x.shape()[1]) {
    throw ShapeError("broadcast_hw: " + shape_str(x.shape()) + " -> " + shape_str(target));
  }
  const int64_t N = target[0], C = target[1], HW = target[2] * target[3];
  Tensor y(target);
  for (int64_t n = 0; n < N; ++n)
    for (int64_t c = 0; c < C; ++c) {
      const double v = x.value()[n * C + c];
      const int64_t base = (n * C + c) * HW;
      for (int64_t i = 0; i < HW; ++i) y[base + i] = v;
    }
  return Var(make_node(Op::kBroadcastHW, {x.node()}, std::move(y)));
}

namespace {

// Per-op vector-Jacobian products, each built from the op set above so that
// the resulting gradient nodes remain differentiable.
std::vector<Var> vjp(const NodePtr& n, const Var& g) {
  const Var in0 = n->inputs.empty() ? Var() : Var(n->inputs[0]);
  const Var in1 = n->inputs.size() > 1 ? Var(n->inputs[1]) : Var();
  const Var self(n);
  switch (n->op) {
    case Op::kLeaf:
      return {};
    case Op::kAdd:
      return {g, g};
    case Op::kSub:
      return {g, neg(g)};
    case Op::kMul:
      return {mul(g, in1), mul(g, in0)};
    case Op::kDiv:
      return {div(g, in1), neg(mul(g, div(in0, mul(in1, in1))))};
    case Op::kNeg:
      return {neg(g)};
    case Op::kScalarMul:
      return {scalar_mul(g, n->f0)};
    case Op::kScalarAdd:
      return {g};
    case Op::kMatMul: {
      const bool ta = n->i0 != 0, tb = n->i1 != 0;
      if (!ta && !tb) return {matmul(g, in1, false, true), matmul(in0, g, true, false)};
      if (!ta && tb) return {matmul(g, in1, false, false), matmul(g, in0, true, false)};
      if (ta && !tb) return {matmul(in1, g, false, true), matmul(in0, g, false, false)};
      return {matmul(in1, g, true, true), matmul(g, in0, true, true)};
    }
    case Op::kConv2d:
      return {conv2d_input_grad(g, in1, n->i0, n->i1, in0.shape()),
              conv2d_weight_grad(in0, g, n->i0, n->i1, in1.shape())};
    case Op::kConvInGrad:
      // value = input_grad(g0, w); d/dg0 = conv2d(g, w), d/dw = weight_grad(g, g0)
      return {conv2d(g, in1, n->i0, n->i1),
              conv2d_weight_grad(g, in0, n->i0, n->i1, in1.shape())};
    case Op::kConvWGrad:
      // value = weight_grad(x, g0); d/dx = input_grad(g0, g), d/dg0 = conv2d(x, g)
      return {conv2d_input_grad(in1, g, n->i0, n->i1, in0.shape()),
              conv2d(in0, g, n->i0, n->i1)};
    case Op::kBiasAddCols:
      return {g, col_sum(g)};
    case Op::kColSum:
      return {broadcast_rows(g, in0.shape())};
    case Op::kBroadcastRows:
      return {col_sum(g)};
    case Op::kBiasAddChan:
      return {g, chan_sum(g)};
    case Op::kChanSum:
      return {broadcast_chan(g, in0.shape())};
    case Op::kBroadcastChan:
      return {chan_sum(g)};
    case Op::kRelu: {
      Tensor m(in0.shape());
      for (int64_t i = 0; i < m.numel(); ++i) m[i] = in0.value()[i] > 0.0 ? 1.0 : 0.0;
      return {mul(g, constant(std::move(m)))};
    }
    case Op::kLeakyRelu: {
      Tensor m(in0.shape());
      for (int64_t i = 0; i < m.numel(); ++i) m[i] = in0.value()[i] > 0.0 ? 1.0 : n->f0;
      return {mul(g, constant(std::move(m)))};
    }
    case Op::kTanh:
      return {mul(g, scalar_add(neg(mul(self, self)), 1.0))};
    case Op::kSigmoid:
      return {mul(g, sub(self, mul(self, self)))};
    case Op::kSoftplus:
      return {mul(g, sigmoid(in0))};
    case Op::kLog:
      return {div(g, in0)};
    case Op::kSqrt:
      return {div(scalar_mul(g, 0.5), self)};
    case Op::kMeanAll:
      return {scalar_mul(expand_scalar(g, in0.shape()),
                         1.0 / static_cast<double>(in0.value().numel()))};
    case Op::kSumAll:
      return {expand_scalar(g, in0.shape())};
    case Op::kExpandScalar:
      return {sum_all(g)};
    case Op::kSumPerSample:
      return {expand_per_sample(g, in0.shape())};
    case Op::kExpandPerSample:
      return {sum_per_sample(g)};
    case Op::kReshape:
      return {reshape(g, in0.shape())};
    case Op::kCrop2d:
      return {pad_bottom_right(g, in0.shape()[2], in0.shape()[3])};
    case Op::kPadBottomRight:
      return {crop2d(g, in0.shape()[2], in0.shape()[3])};
    case Op::kUpsample2x:
      return {sum_pool2x(g)};
    case Op::kSumPool2x:
      return {upsample2x(g)};
    case Op::kGlobalMaxPool: {
      // Route the gradient to the first argmax of each (n, c) map.
      const int64_t N = in0.shape()[0], C = in0.shape()[1];
      const int64_t HW = in0.shape()[2] * in0.shape()[3];
      Tensor m(in0.shape());
      for (int64_t n2 = 0; n2 < N; ++n2)
        for (int64_t c = 0; c < C; ++c) {
          const int64_t base = (n2 * C + c) * HW;
          int64_t best = 0;
          for (int64_t i = 1; i < HW; ++i)
            if (in0.value()[base + i] > in0.value()[base + best]) best = i;
          m[base + best] = 1.0;
        }
      return {mul(broadcast_hw(g, in0.shape()), constant(std::move(m)))};
    }
    case Op::kSumHW:
      return {broadcast_hw(g, in0.shape())};
    case Op::kBroadcastHW:
      return {sum_hw(g)};
  }
  throw Error("vjp: unhandled op");
}

}  // namespace

std::vector<Var> gradients(const Var& output, std::span<const Var> wrt) {
  if (output.value().numel() != 1) {
    throw ShapeError("gradients: output must be scalar without an explicit seed, got " +
                     shape_str(output.shape()));
  }
  return gradients(output, Tensor::full(output.shape(), 1.0), wrt);
}

std::vector<Var> gradients(const Var& output, const Tensor& seed,
                           std::span<const Var> wrt) {
  if (seed.shape() != output.shape()) {
    throw ShapeError("gradients: seed shape " + shape_str(seed.shape()) +
                     " does not match output " + shape_str(output.shape()));
  }

  auto zero_grads = [&] {
    std::vector<Var> out;
    out.reserve(wrt.size());
    for (const auto& v : wrt) out.push_back(constant(Tensor::zeros(v.shape())));
    return out;
  };
  if (!output.requires_grad()) return zero_grads();

  // Reverse topological order over the gradient-relevant subgraph; each node
  // is visited exactly once.
  std::vector<NodePtr> order;
  std::unordered_map<Node*, int> state;  // 0 new, 1 open, 2 done
  std::vector<NodePtr> stack{output.node()};
  while (!stack.empty()) {
    NodePtr cur = stack.back();  // copy: pushes below may reallocate the stack
    int st = state[cur.get()];
    if (st == 0) {
      state[cur.get()] = 1;
      for (const auto& in : cur->inputs) {
        if (in->requires_grad && state[in.get()] == 0) stack.push_back(in);
      }
    } else {
      if (st == 1) {
        state[cur.get()] = 2;
        order.push_back(cur);
      }
      stack.pop_back();
    }
  }

  std::unordered_map<Node*, Var> grads;
  grads.emplace(output.node().get(), constant(seed));

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodePtr& cur = *it;
    auto git = grads.find(cur.get());
    if (git == grads.end()) continue;
    if (cur->op == Op::kLeaf) continue;
    std::vector<Var> input_grads = vjp(cur, git->second);
    for (size_t i = 0; i < cur->inputs.size(); ++i) {
      const NodePtr& in = cur->inputs[i];
      if (!in->requires_grad) continue;
      auto pre = grads.find(in.get());
      if (pre == grads.end()) {
        grads.emplace(in.get(), input_grads[i]);
      } else {
        pre->second = add(pre->second, input_grads[i]);
      }
    }
  }

  std::vector<Var> out;
  out.reserve(wrt.size());
  for (const auto& v : wrt) {
    auto it2 = grads.find(v.node().get());
    if (it2 == grads.end()) {
      out.push_back(constant(Tensor::zeros(v.shape())));
    } else {
      out.push_back(it2->second);
    }
  }
  return out;
}

}  // namespace rampart::ad
