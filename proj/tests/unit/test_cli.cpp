// Exercises the installed command-line surface through a shell: exit codes,
// artifact round-trips, determinism of synth output. The binary path arrives
// via RAMPART_CLI_PATH (set by CMake).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace std;
namespace fs = std::filesystem;

namespace {

const char* cli_path() {
  const char* p = std::getenv("RAMPART_CLI_PATH");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / "rampart_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE("unknown subcommand and missing input exit with usage code 2") {
  CHECK(run("frobnicate") == 2);
  CHECK(run("extract --in /does/not/exist.pcap") == 2);
  CHECK(run("train --data /does/not/exist.json") == 2);
}

TEST_CASE("no subcommand prints usage with nonzero exit") {
  CHECK(run("") == 2);
}

TEST_CASE("synth then extract round-trips; synth is deterministic") {
  TempDir t;
  const auto p1 = t.dir / "a.pcap";
  const auto p2 = t.dir / "b.pcap";
  const std::string flags =
      " --attack-kind syn_flood --attack-rate 20 --duration 3 --seed 5";
  CHECK(run("synth --out " + p1.string() + flags) == 0);
  CHECK(run("synth --out " + p2.string() + flags) == 0);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(fs::exists(t.dir / "a.pcap.meta.json"));

  const auto ds = t.dir / "ds.json";
  CHECK(run("extract --in " + p1.string() + " --out " + ds.string() +
            " --window 10 --max-packets 10 --attackers 198.51.100.0/24 "
            "--victims 203.0.113.80") == 0);
  CHECK(fs::exists(ds));

  // spec'd example: samples carry at most 10 rows
  std::string body = slurp(ds);
  CHECK(body.find("\"flow_length\":11") == std::string::npos);
  CHECK(body.find("rampart-dataset") != std::string::npos);
}

TEST_CASE("train on a single-class dataset is a usage error") {
  TempDir t;
  const auto p1 = t.dir / "benign.pcap";
  CHECK(run("synth --mode benign --duration 3 --seed 6 --out " + p1.string()) == 0);
  const auto ds = t.dir / "ds.json";
  CHECK(run("extract --in " + p1.string() + " --out " + ds.string() +
            " --attackers 198.51.100.0/24 --victims 203.0.113.80") == 0);
  CHECK(run("train --data " + ds.string() + " --out " + (t.dir / "d.ckpt").string()) ==
        2);
}
