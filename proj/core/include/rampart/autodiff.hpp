#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rampart/tensor.hpp"

// Reverse-mode automatic differentiation.
//
// The engine is define-by-run: every factory below creates a graph node and
// evaluates it immediately, so "forward" is graph construction. gradients()
// walks the recorded graph once in reverse topological order and *builds the
// gradients as graph nodes*. Because every op's vector-Jacobian product is
// expressed with the same op set, a scalar derived from those gradient nodes
// can be differentiated again — exactly the second-order path a critic
// gradient penalty needs. Activation masks (ReLU family, max-pool argmax) are
// captured as constants, the usual almost-everywhere convention.
//
// Graphs are single-threaded. Distinct graphs share no mutable state and may
// live on different threads.
namespace rampart::ad {

enum class Op {
  kLeaf,
  kAdd, kSub, kMul, kDiv, kNeg,
  kScalarMul, kScalarAdd,
  kMatMul,
  kConv2d, kConvInGrad, kConvWGrad,
  kBiasAddCols, kColSum, kBroadcastRows,
  kBiasAddChan, kChanSum, kBroadcastChan,
  kRelu, kLeakyRelu, kTanh, kSigmoid, kSoftplus, kLog, kSqrt,
  kMeanAll, kSumAll, kExpandScalar,
  kSumPerSample, kExpandPerSample,
  kReshape, kCrop2d, kPadBottomRight,
  kUpsample2x, kSumPool2x,
  kGlobalMaxPool, kSumHW, kBroadcastHW,
};

struct Node;
using NodePtr = std::shared_ptr<Node>;

struct Node {
  Op op = Op::kLeaf;
  std::vector<NodePtr> inputs;
  Tensor value;
  bool requires_grad = false;
  // Op attributes: pads or transpose flags, and the LeakyReLU slope.
  int i0 = 0, i1 = 0;
  double f0 = 0.0;
};

class Var {
 public:
  Var() = default;
  explicit Var(NodePtr n) : node_(std::move(n)) {}

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& mutable_value() { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  const NodePtr& node() const { return node_; }

 private:
  NodePtr node_;
};

// Leaves.
Var constant(Tensor v);
Var leaf(Tensor v, bool requires_grad = true);
// Copies a var's value into a fresh constant, cutting the graph.
Var detach(const Var& v);

// Elementwise (operands must have identical shapes).
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var div(const Var& a, const Var& b);
Var neg(const Var& a);
Var scalar_mul(const Var& a, double c);
Var scalar_add(const Var& a, double c);

Var matmul(const Var& a, const Var& b, bool ta = false, bool tb = false);

// Stride-1 zero-padded convolution, NCHW x OIHW.
Var conv2d(const Var& x, const Var& w, int ph, int pw);
Var conv2d_input_grad(const Var& g, const Var& w, int ph, int pw, Shape x_shape);
Var conv2d_weight_grad(const Var& x, const Var& g, int ph, int pw, Shape w_shape);

Var bias_add_cols(const Var& x, const Var& b);   // [N,F] + [F]
Var col_sum(const Var& x);                       // [N,F] -> [F]
Var broadcast_rows(const Var& b, Shape target);  // [F] -> [N,F]
Var bias_add_chan(const Var& x, const Var& b);   // [N,C,H,W] + [C]
Var chan_sum(const Var& x);                      // [N,C,H,W] -> [C]
Var broadcast_chan(const Var& b, Shape target);  // [C] -> [N,C,H,W]

Var relu(const Var& x);
Var leaky_relu(const Var& x, double alpha = 0.2);
Var tanh_(const Var& x);
Var sigmoid(const Var& x);
Var softplus(const Var& x);
Var log_(const Var& x);
Var sqrt_(const Var& x);

Var mean_all(const Var& x);                    // -> [1]
Var sum_all(const Var& x);                     // -> [1]
Var expand_scalar(const Var& s, Shape target);
Var sum_per_sample(const Var& x);                    // [N,...] -> [N]
Var expand_per_sample(const Var& s, Shape target);   // [N] -> [N,...]

Var reshape(const Var& x, Shape target);
Var crop2d(const Var& x, int64_t h, int64_t w);            // keeps top-left h x w
Var pad_bottom_right(const Var& x, int64_t h, int64_t w);  // zero-pads to h x w
Var upsample2x(const Var& x);    // nearest neighbour
Var sum_pool2x(const Var& x);    // 2x2 block sums
Var global_max_pool(const Var& x);  // [N,C,H,W] -> [N,C]
Var sum_hw(const Var& x);           // [N,C,H,W] -> [N,C]
Var broadcast_hw(const Var& x, Shape target);

// Reverse pass. `output` is differentiated once with `seed` (defaults to 1 for
// a scalar output) and the gradient for each entry of `wrt` is returned in
// order; vars with no path to the output get a zero gradient. The returned
// vars are ordinary graph nodes, so any scalar built from them supports a
// further gradients() call.
std::vector<Var> gradients(const Var& output, std::span<const Var> wrt);
std::vector<Var> gradients(const Var& output, const Tensor& seed,
                           std::span<const Var> wrt);

}  // namespace rampart::ad
