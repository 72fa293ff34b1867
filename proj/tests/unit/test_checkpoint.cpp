#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rampart/checkpoint.hpp"
#include "rampart/error.hpp"

using namespace rampart;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("round-trip is lossless, including awkward doubles") {
  Checkpoint ckpt;
  ckpt.metadata["seed"] = "7";
  ckpt.metadata["tool_version"] = "0.1.0";
  ckpt.tensors.emplace_back("w", Tensor({2, 2}, {1.0 / 3.0, -0.0, 1e-300, 6.02214076e23}));
  ckpt.tensors.emplace_back("b", Tensor({3}, {0.1, 0.2, 0.3}));

  auto path = temp_file("rampart_ckpt_roundtrip.bin");
  save_checkpoint(path, ckpt);
  Checkpoint back = load_checkpoint(path);

  CHECK(back.version == 1);
  CHECK(back.metadata.at("seed") == "7");
  REQUIRE(back.tensors.size() == 2);
  CHECK(back.tensors[0].first == "w");
  CHECK(back.tensor("w") == ckpt.tensor("w"));
  CHECK(back.tensor("b") == ckpt.tensor("b"));
  CHECK(std::signbit(back.tensor("w")[1]));
  fs::remove(path);
}

TEST_CASE("missing tensor name throws") {
  Checkpoint ckpt;
  ckpt.tensors.emplace_back("a", Tensor({1}, {1.0}));
  CHECK_THROWS_AS(ckpt.tensor("nope"), ConfigError);
}

TEST_CASE("bad magic rejected") {
  auto path = temp_file("rampart_ckpt_badmagic.bin");
  std::ofstream f(path, std::ios::binary);
  f << "NOPEnope";
  f.close();
  CHECK_THROWS_AS(load_checkpoint(path), ParseError);
  fs::remove(path);
}

TEST_CASE("truncated file reports an offset") {
  Checkpoint ckpt;
  ckpt.tensors.emplace_back("w", Tensor({4}, {1, 2, 3, 4}));
  auto path = temp_file("rampart_ckpt_trunc.bin");
  save_checkpoint(path, ckpt);
  auto size = fs::file_size(path);
  fs::resize_file(path, size - 9);
  try {
    load_checkpoint(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
  fs::remove(path);
}

TEST_CASE("params round-trip through a checkpoint") {
  ParamSet a;
  Rng rng(5);
  a.add("w1", init_normal({3, 2}, 0.5, rng));
  a.add("b1", init_normal({2}, 0.5, rng));

  auto path = temp_file("rampart_ckpt_params.bin");
  save_checkpoint(path, checkpoint_from_params(a));

  ParamSet b;
  b.add("w1", Tensor({3, 2}));
  b.add("b1", Tensor({2}));
  params_from_checkpoint(load_checkpoint(path), b);
  CHECK(b.value("w1") == a.value("w1"));
  CHECK(b.value("b1") == a.value("b1"));

  ParamSet wrong;
  wrong.add("w1", Tensor({2, 2}));
  CHECK_THROWS_AS(params_from_checkpoint(load_checkpoint(path), wrong), ShapeError);
  fs::remove(path);
}
