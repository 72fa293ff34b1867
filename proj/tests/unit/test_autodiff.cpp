#include <doctest.h>

#include <cmath>

#include "rampart/autodiff.hpp"
#include "rampart/error.hpp"
#include "rampart/nn.hpp"
#include "rampart/rng.hpp"
#include "support/gradcheck.hpp"

using namespace rampart;
using namespace rampart::ad;

TEST_CASE("elementwise add") {
  Var a = constant(Tensor({2}, {1.0, 2.0}));
  Var b = constant(Tensor({2}, {3.0, 4.0}));
  Var c = add(a, b);
  CHECK(c.value()[0] == 4.0);
  CHECK(c.value()[1] == 6.0);
}

TEST_CASE("matmul identity") {
  Tensor eye({3, 3});
  for (int i = 0; i < 3; ++i) eye[i * 3 + i] = 1.0;
  Rng rng(3);
  Tensor a = gradcheck::random_tensor({3, 3}, rng);
  Var y = matmul(constant(eye), constant(a));
  CHECK(y.value() == a);
}

TEST_CASE("sigmoid at zero") {
  Var y = sigmoid(constant(Tensor::scalar(0.0)));
  CHECK(y.value().item() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("d/dx x^2 at x=3") {
  Var x = leaf(Tensor::scalar(3.0));
  Var y = mul(x, x);
  auto g = gradients(y, std::vector<Var>{x});
  CHECK(g[0].value().item() == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("d/dx sigmoid at 0 is 0.25") {
  Var x = leaf(Tensor::scalar(0.0));
  auto g = gradients(sigmoid(x), std::vector<Var>{x});
  CHECK(g[0].value().item() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("shape mismatch names the op and shapes") {
  Var a = constant(Tensor({2, 3}));
  Var b = constant(Tensor({3, 2}));
  try {
    add(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    std::string msg = e.what();
    CHECK(msg.find("add") != std::string::npos);
    CHECK(msg.find("[2,3]") != std::string::npos);
    CHECK(msg.find("[3,2]") != std::string::npos);
  }
}

TEST_CASE("gradients of non-scalar output requires a seed") {
  Var x = leaf(Tensor({2}, {1.0, 2.0}));
  Var y = mul(x, x);
  CHECK_THROWS_AS(gradients(y, std::vector<Var>{x}), ShapeError);
  auto g = gradients(y, Tensor({2}, {1.0, 1.0}), std::vector<Var>{x});
  CHECK(g[0].value()[0] == doctest::Approx(2.0));
  CHECK(g[0].value()[1] == doctest::Approx(4.0));
}

TEST_CASE("no path yields zero gradient") {
  Var x = leaf(Tensor::scalar(1.0));
  Var z = leaf(Tensor::scalar(2.0));
  auto g = gradients(mul(x, x), std::vector<Var>{z});
  CHECK(g[0].value().item() == 0.0);
}

TEST_CASE("two-layer net matches finite differences over 100 draws") {
  Rng rng(17);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Tensor x = gradcheck::random_tensor({4, 6}, rng);
    Tensor w1 = gradcheck::random_tensor({6, 5}, rng);
    Tensor b1 = gradcheck::random_tensor({5}, rng);
    Tensor w2 = gradcheck::random_tensor({5, 1}, rng);
    Tensor b2 = gradcheck::random_tensor({1}, rng);
    auto fn = [](const std::vector<Var>& v) {
      Var h = tanh_(bias_add_cols(matmul(v[0], v[1]), v[2]));
      Var o = sigmoid(bias_add_cols(matmul(h, v[3]), v[4]));
      return mean_all(o);
    };
    auto r = gradcheck::check(fn, {x, w1, b1, w2, b2});
    worst = std::max(worst, r.max_rel_err);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("per-op gradient checks (quick pass)") {
  for (const auto& c : gradcheck::op_cases()) {
    CAPTURE(c.name);
    double worst = gradcheck::run_case(c, 10, 1234);
    CHECK_MESSAGE(worst < 1e-4, c.name, " worst rel err ", worst);
  }
}

TEST_CASE("double backward matches finite differences of a gradient-norm penalty") {
  // penalty(w) = mean((|d sum(critic(x)) / dx|_2 - 1)^2) over a tiny conv+dense
  // critic; checked against central differences w.r.t. the weights.
  Rng rng(23);
  Tensor x = gradcheck::random_tensor({3, 1, 4, 5}, rng);
  Tensor w = gradcheck::random_tensor({2, 1, 3, 3}, rng);
  Tensor d = gradcheck::random_tensor({2 * 4 * 5, 1}, rng);
  auto penalty = [&x](const std::vector<Var>& v) {
    Var xv = leaf(x, true);
    Var h = leaky_relu(conv2d(xv, v[0], 1, 1), 0.2);
    Var out = matmul(reshape(h, {3, 2 * 4 * 5}), v[1]);
    Var s = sum_all(out);
    std::vector<Var> wrt{xv};
    Var gx = gradients(s, wrt)[0];
    Var norms = sqrt_(scalar_add(sum_per_sample(mul(gx, gx)), 1e-12));
    Var pen = mean_all(mul(scalar_add(norms, -1.0), scalar_add(norms, -1.0)));
    return pen;
  };
  auto r = gradcheck::check(penalty, {w, d});
  CHECK_MESSAGE(r.max_rel_err < 1e-4, r.where);
}

TEST_CASE("forward and backward are bit-deterministic") {
  auto run = [] {
    Rng rng(99);
    Tensor x = gradcheck::random_tensor({4, 1, 6, 6}, rng);
    Tensor w = gradcheck::random_tensor({3, 1, 3, 3}, rng);
    Var xv = constant(x);
    Var wv = leaf(w, true);
    Var y = mean_all(relu(conv2d(xv, wv, 1, 1)));
    auto g = gradients(y, std::vector<Var>{wv});
    return std::make_pair(y.value(), g[0].value());
  };
  auto [y1, g1] = run();
  auto [y2, g2] = run();
  CHECK(y1 == y2);
  CHECK(g1 == g2);
}

TEST_CASE("detach cuts the graph") {
  Var x = leaf(Tensor::scalar(2.0));
  Var y = detach(mul(x, x));
  CHECK_FALSE(y.requires_grad());
  auto g = gradients(mul(y, y), std::vector<Var>{x});
  CHECK(g[0].value().item() == 0.0);
}

TEST_CASE("bce_with_logits matches the naive formula and is finite at extremes") {
  Tensor logits({3, 1}, {35.0, -35.0, 0.5});
  Tensor labels({3, 1}, {1.0, 0.0, 1.0});
  Var l = constant(logits);
  Var loss = bce_with_logits(l, labels);
  double expect = 0.0;
  for (int i = 0; i < 3; ++i) {
    double p = 1.0 / (1.0 + std::exp(-logits[i]));
    p = std::min(std::max(p, 1e-300), 1.0 - 1e-16);
    expect += -(labels[i] * std::log(p) + (1 - labels[i]) * std::log(1 - p));
  }
  expect /= 3.0;
  CHECK(std::isfinite(loss.value().item()));
  CHECK(loss.value().item() == doctest::Approx(expect).epsilon(1e-9));
}
