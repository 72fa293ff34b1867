#include <doctest.h>

#include "rampart/adam.hpp"
#include "rampart/error.hpp"

using namespace rampart;

TEST_CASE("zero gradient from fresh state leaves params unchanged") {
  Adam opt({.lr = 0.1});
  Tensor p({3}, {1.0, -2.0, 0.5});
  Tensor before = p;
  opt.step({&p}, {Tensor::zeros({3})});
  CHECK(p == before);
}

TEST_CASE("single scalar step is lr-sized after bias correction") {
  // m-hat = v-hat = 1 at step one, so the update is lr / (1 + eps).
  Adam opt({.lr = 0.1});
  Tensor p({1}, {0.7});
  opt.step({&p}, {Tensor({1}, {1.0})});
  CHECK(p[0] == doctest::Approx(0.7 - 0.1).epsilon(1e-6));
  CHECK(p[0] > 0.7 - 0.1);  // epsilon shrinks the step slightly
}

TEST_CASE("two identical calls advance the step count and moments") {
  Adam opt({.lr = 0.01});
  Tensor p({2}, {0.0, 0.0});
  Tensor g({2}, {1.0, -1.0});
  opt.step({&p}, {g});
  CHECK(opt.step_count() == 1);
  double after_one = p[0];
  opt.step({&p}, {g});
  CHECK(opt.step_count() == 2);
  CHECK(p[0] < after_one);  // still descending
}

TEST_CASE("param/grad shape mismatch throws") {
  Adam opt;
  Tensor p({2});
  CHECK_THROWS_AS(opt.step({&p}, {Tensor({3})}), ShapeError);
}

TEST_CASE("param/grad count mismatch throws") {
  Adam opt;
  Tensor p({2});
  CHECK_THROWS_AS(opt.step({&p}, {}), ShapeError);
}
