#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "ordembed/cli.hpp"
#include "ordembed/io.hpp"
#include "ordembed/parallel.hpp"

namespace fs = std::filesystem;
using ordembed::io::Json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ordembed");
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = ordembed::cli::dispatch(args);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  ordembed::set_thread_count(1);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("ordembed_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

Json load(const std::string& path) { return ordembed::io::read_json_file(path); }

const char* kSubcommands[] = {"gen-graph", "metric-from-graph", "check-metric", "constraints", "verify",
                              "relaxation", "embed-terminal",    "ensemble",     "bounds",      "relaxation-floor",
                              "fit",       "bourgain",          "count-orderings"};

}  // namespace

TEST_CASE("terminal pipeline verifies with zero violations") {
  TempDir dir;
  REQUIRE(run({"gen-graph", "--n", "30", "--girth", "5", "--seed", "3", "--out", dir / "g.json"}).code == 0);
  REQUIRE(run({"metric-from-graph", "--graph", dir / "g.json", "--out", dir / "m.json"}).code == 0);
  CHECK(run({"check-metric", "--metric", dir / "m.json"}).code == 0);
  REQUIRE(run({"embed-terminal", "--metric", dir / "m.json", "--terminals", "0,4,9", "--tie-break", "lexicographic",
               "--out", dir / "e.json", "--report", dir / "dom.json"})
              .code == 0);
  CHECK(load(dir / "dom.json")["ok"] == true);
  const auto v = run({"verify", "--metric", dir / "m.json", "--embedding", dir / "e.json", "--family", "triplet",
                      "--terminals", "0,4,9", "--out", dir / "v.json"});
  CHECK(v.code == 0);
  const Json report = load(dir / "v.json");
  CHECK(report["violation_count"] == 0);
  CHECK(report["total"].get<std::size_t>() > 0);

  const Json manifest = load(dir / "v.json.manifest.json");
  CHECK(manifest["tool"] == "ordembed");
  CHECK(manifest["version"] == ordembed::cli::kToolVersion);
  CHECK(manifest["output"]["sha256"] == ordembed::cli::sha256_hex(ordembed::io::read_text_file(dir / "v.json")));
  REQUIRE(manifest["inputs"].size() == 2);
  for (const auto& input : manifest["inputs"]) {
    const std::string path = input["path"].get<std::string>();
    CHECK(input["sha256"].get<std::string>() == ordembed::cli::sha256_hex(ordembed::io::read_text_file(path)));
  }
  CHECK(load(dir / "g.json.manifest.json")["seeds"]["seed"] == 3);
}

TEST_CASE("count-orderings reports formula and projection count") {
  const auto r = run({"count-orderings", "--n", "4", "--oracle"});
  CHECK(r.code == 0);
  CHECK(r.out.find("360") != std::string::npos);
  CHECK(r.out.find("426") != std::string::npos);
  CHECK(r.out.find("MISMATCH") != std::string::npos);
  CHECK(run({"count-orderings", "--n", "3", "--oracle"}).out.find("MISMATCH") == std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir;
  ordembed::io::write_text_file(dir / "bad.json", R"({"n": 3, "dist": [1, "two", 3]})");
  const auto bad = run({"check-metric", "--metric", dir / "bad.json"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("$.dist[1]") != std::string::npos);
  CHECK(run({"check-metric", "--metric", dir / "missing.json"}).code == 2);
  const auto unknown = run({"bounds", "--mode", "triplet", "--n", "10", "--bogus"});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"gen-graph", "--n", "10", "--girth", "4", "--out", dir / "g.json"}).code == 1);
  CHECK(run({"gen-graph", "--n", "10", "--girth", "4", "--seed", "1", "--out", dir / "no/such/dir/g.json"}).code == 2);

  ordembed::io::write_text_file(dir / "tri.json", R"({"n": 3, "dist": [1, 5, 1]})");
  CHECK(run({"check-metric", "--metric", dir / "tri.json"}).code == 1);
  CHECK(run({"constraints", "--metric", dir / "tri.json", "--family", "triplet", "--jitter", "0.01", "--out",
             dir / "c.json"})
            .code == 1);
  CHECK(run({"fit", "--metric", dir / "tri.json", "--dim", "1", "--out", dir / "f.json"}).code == 1);
  CHECK(run({"bourgain", "--metric", dir / "tri.json", "--out", dir / "b.json"}).code == 1);
  CHECK(run({"ensemble", "--graph", dir / "g.json", "--out", dir / "r.json"}).code == 1);
}

TEST_CASE("help documents every subcommand") {
  for (const char* sub : kSubcommands) {
    const auto r = run({sub, "--help"});
    CHECK_MESSAGE(r.code == 0, sub);
    CHECK_MESSAGE(r.out.find("--threads") != std::string::npos, sub);
    CHECK_MESSAGE(r.out.find("ORDEMBED_THREADS") != std::string::npos, sub);
  }
  const auto top = run({"--help"});
  CHECK(top.code == 0);
  for (const char* sub : kSubcommands) CHECK(top.out.find(sub) != std::string::npos);
}

TEST_CASE("ORDEMBED_THREADS sets the default thread count") {
  TempDir dir;
  ::setenv("ORDEMBED_THREADS", "3", 1);
  REQUIRE(run({"relaxation-floor", "--n", "1000", "--d", "4", "--out", dir / "f.json"}).code == 0);
  ::unsetenv("ORDEMBED_THREADS");
  CHECK(load(dir / "f.json.manifest.json")["threads"] == 3);
  REQUIRE(run({"relaxation-floor", "--n", "1000", "--d", "4", "--threads", "2", "--out", dir / "f.json"}).code == 0);
  CHECK(load(dir / "f.json.manifest.json")["threads"] == 2);
}

TEST_CASE("repeated runs are byte-identical") {
  TempDir dir;
  for (const char* name : {"a", "b"}) {
    const std::string p = name;
    REQUIRE(run({"gen-graph", "--n", "14", "--girth", "6", "--seed", "9", "--out", dir / (p + "g.json")}).code == 0);
    REQUIRE(run({"ensemble", "--graph", dir / (p + "g.json"), "--N", "20", "--seed", "4", "--out",
                 dir / (p + "e.json"), "--csv", dir / (p + "e.csv")})
                .code == 0);
  }
  using ordembed::io::read_text_file;
  CHECK(read_text_file(dir / "ag.json") == read_text_file(dir / "bg.json"));
  CHECK(read_text_file(dir / "ae.json") == read_text_file(dir / "be.json"));
  CHECK(read_text_file(dir / "ae.csv") == read_text_file(dir / "be.csv"));
}
