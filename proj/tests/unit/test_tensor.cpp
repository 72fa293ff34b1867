#include <doctest.h>

#include <cmath>
#include <limits>

#include "rampart/error.hpp"
#include "rampart/tensor.hpp"

using namespace rampart;

TEST_CASE("shape bookkeeping") {
  Tensor t({2, 3});
  CHECK(t.numel() == 6);
  CHECK(t.rank() == 2);
  CHECK(t.dim(1) == 3);
  for (int64_t i = 0; i < 6; ++i) CHECK(t[i] == 0.0);
}

TEST_CASE("shape/data mismatch throws") {
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0, 3.0}), ShapeError);
  CHECK_THROWS_AS(Tensor({0, 2}), ShapeError);
}

TEST_CASE("finiteness scan") {
  Tensor t({3}, {1.0, 2.0, 3.0});
  CHECK(t.all_finite());
  t[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(t.all_finite());
  t[1] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(t.all_finite());
}

TEST_CASE("item requires scalar") {
  CHECK(Tensor::scalar(4.5).item() == 4.5);
  CHECK_THROWS_AS(Tensor({2}).item(), ShapeError);
}

TEST_CASE("equality is exact") {
  Tensor a({2}, {0.1, 0.2});
  Tensor b({2}, {0.1, 0.2});
  CHECK(a == b);
  b[0] = std::nextafter(b[0], 1.0);
  CHECK_FALSE(a == b);
}
