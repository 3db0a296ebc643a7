#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ssc/automata.hpp"
#include "ssc/cli.hpp"
#include "support.hpp"

using namespace ssc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ssc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  const auto r = run(args);
  REQUIRE(r.code == kExitOk);
  return json::parse(r.out);
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string data(const std::string& name) { return test::data_file(name).string(); }

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ssc-cli-" + name + "-" + std::to_string(test::seed()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json without_timing(json j) {
  j.erase("elapsed_seconds");
  return j;
}

}  // namespace

TEST_CASE("bound") {
  CHECK(first_line(run({"bound", "2", "3"}).out) == "f(2,3) = 44");
  CHECK(first_line(run({"bound", "1", "1"}).out) == "f(1,1) = 1");
  const auto big = run({"bound", "6", "6"});
  CHECK(big.out == "f(6,6) = 66605547520\n");
  const auto j = run_json({"bound", "3", "4"});
  CHECK(j["command"] == "bound");
  CHECK(j["bound"] == 3392);
  CHECK(j["valid_subsets"] == 3392);
  CHECK(run({"bound", "3", "4"}).out.find("3392") != std::string::npos);
  CHECK(run_json({"bound", "6", "6"})["bound"] == 66605547520ULL);
}

TEST_CASE("complexity") {
  const auto two_by_two = run({"complexity", data("witness_2x2_left.json"), data("witness_2x2_right.json")});
  CHECK(two_by_two.code == kExitOk);
  CHECK(two_by_two.out == "κ(K) = 2\nκ(L) = 2\nκ(K ⧢ L) = 10\nf(2,2) = 10\nbound met\n");
  const auto ex = run_json({"complexity", data("witness_2x3_left.json"), data("witness_2x3_right.json")});
  CHECK(ex["kappa_left"] == 2);
  CHECK(ex["kappa_right"] == 3);
  CHECK(ex["kappa_shuffle"] == 44);
  CHECK(ex["bound"] == 44);
  CHECK(ex["met"] == true);
  const auto random = run({"complexity", data("random_left.json"), data("random_right.json")});
  CHECK(random.code == kExitOk);
  CHECK(random.out.find("bound not met") != std::string::npos);
}

TEST_CASE("input errors exit with 1 and name the file") {
  const auto missing = run({"complexity", "no-such.json", data("witness_2x2_right.json")});
  CHECK(missing.code == kExitInputError);
  CHECK(missing.err.find("no-such.json") != std::string::npos);
  const auto dir = scratch("bad");
  const auto bad = dir / "bad.json";
  std::ofstream(bad) << R"({"states": 2, "alphabet": ["a"], "initial": 1, "finals": [2], "transitions": {"a": [3, 1]}})";
  const auto r = run({"complexity", bad.string(), bad.string()});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("bad.json") != std::string::npos);
  CHECK(r.err.find("transitions") != std::string::npos);
  const auto mismatch = run({"complexity", data("witness_2x2_left.json"), data("witness_2x3_right.json")});
  CHECK(mismatch.code == kExitInputError);
  CHECK(mismatch.err.find("alphabet") != std::string::npos);
  CHECK(run({"bound", "x", "2"}).code == kExitInputError);
  CHECK(run({"frobnicate"}).code == kExitInputError);
  CHECK(run({}).code == kExitInputError);
  CHECK(run({"reach", "2", "2", "--resume"}).code == kExitInputError);
  CHECK(run({"reach", "5", "5"}).code == kExitInputError);
  CHECK(run({"certify", "3", "3", "--base", "3by3"}).code == kExitInputError);
  CHECK(run({"--help"}).code == kExitOk);
  fs::remove_all(dir);
}

TEST_CASE("thread count from the environment") {
  ::setenv("SSC_THREADS", "zero", 1);
  CHECK(run({"reach", "2", "2"}).code == kExitInputError);
  ::setenv("SSC_THREADS", "3", 1);
  CHECK(run_json({"reach", "3", "3"})["reached"] == 400);
  ::unsetenv("SSC_THREADS");
}

TEST_CASE("reach") {
  const auto text = run({"reach", "3", "3", "--alphabet", "full"});
  CHECK(text.out.find("reached 400 of 400, complete") != std::string::npos);
  const auto j = run_json({"reach", "3", "3", "--alphabet", "full"});
  CHECK(j["command"] == "reach");
  CHECK(j["reached"] == 400);
  CHECK(j["complete"] == true);
  const auto fixture = run_json({"reach", "3", "3", "--alphabet", data("alphabet_3x3_12.json")});
  CHECK(fixture["complete"] == true);
  CHECK(fixture["letter_count"] == 12);
}

TEST_CASE("interrupted reach resumes to the same report") {
  const auto dir = scratch("resume");
  const auto straight = run_json({"reach", "3", "3"});
  const auto part = run_json({"reach", "3", "3", "--checkpoint-dir", dir.string(), "--stop-after", "3"});
  CHECK(part["complete"] == false);
  const auto resumed = run_json({"--threads", "2", "reach", "3", "3", "--checkpoint-dir", dir.string(), "--resume"});
  CHECK(without_timing(resumed) == without_timing(straight));
  fs::remove_all(dir);
}

TEST_CASE("certify, verify and a damaged certificate") {
  const auto dir = scratch("cert");
  const auto file = (dir / "cert.json").string();
  const auto j = run_json({"certify", "3", "4", "--base", "3x3", "--output", file});
  CHECK(j["ok"] == true);
  CHECK(j["verified"] == true);
  CHECK(run({"verify", file}).code == kExitOk);
  auto cert = json::parse(std::ifstream(file));
  auto& entries = cert["instances"].back()["entries"];
  entries.erase(entries.end() - 1);
  std::ofstream(dir / "damaged.json") << cert.dump();
  const auto bad = run({"verify", (dir / "damaged.json").string()});
  CHECK(bad.code == kExitInputError);
  CHECK(bad.out.find("REJECTED") != std::string::npos);
  const auto gaps = run_json({"certify", "3", "4", "--base", "3x3", "--no-reductions", "--no-search"});
  CHECK(gaps["ok"] == false);
  CHECK_FALSE(gaps["gaps"].empty());
  fs::remove_all(dir);
}

TEST_CASE("distinguish") {
  const auto text = run({"distinguish", "4", "5", "--edges"});
  CHECK(first_line(text.out) == "all 20 states uniquely distinguishable; subgraph edges: 35");
  CHECK(text.out.find("a: (2,4) -> (3,4)") != std::string::npos);
  const auto j = run_json({"distinguish", "3", "3"});
  CHECK(j["all_distinguishable"] == true);
  CHECK(j["oracle_classes"] == 512);
  CHECK(run({"distinguish", "3", "3"}).out.find("512 classes") != std::string::npos);
}

TEST_CASE("okhotin") {
  CHECK(run({"okhotin", "5"}).out == "κ(Σ* ⧢ L) = 9 = 2^{5−2}+1\n");
  const auto j = run_json({"okhotin", "6"});
  CHECK(j["kappa_shuffle"] == 17);
  CHECK(j["matches"] == true);
  CHECK(run({"okhotin", "2"}).code == kExitInputError);
}

TEST_CASE("search output re-parses") {
  const auto dir = scratch("search");
  const auto file = (dir / "w.json").string();
  const auto text = run({"search", "2", "2", "4", "--output", file});
  const auto summary = json::parse(first_line(text.out));
  CHECK(summary["max"] == 10);
  CHECK(summary["met"] == true);
  const auto j = run_json({"search", "2", "2", "4"});
  CHECK(j["summary"] == summary);
  const auto pairs = json::parse(std::ifstream(file));
  REQUIRE(pairs.size() == 1);
  for (const auto& p : pairs) {
    for (const char* side : {"left", "right"}) {
      const auto d = dfa_from_json(p[side]);
      CHECK(dfa_to_json(d) == p[side]);
      CHECK(dfa_from_json(dfa_to_json(d)) == d);
    }
  }
  CHECK(run_json({"search", "2", "2", "1", "--min-alphabet", "5"})["min_alphabet"] == 4);
  CHECK(run_json({"search", "2", "2", "4", "--count-right", "--ignore-finals"})["right_dfas"] == 1);
  CHECK(run({"search", "3", "3", "8"}).code == kExitInputError);
  fs::remove_all(dir);
}

TEST_CASE("direct and alphabet") {
  CHECK(run_json({"direct", "3", "3"})["exceptions"].empty());
  CHECK(run_json({"alphabet", "3", "3", "--check", data("alphabet_3x3_12.json")})["sufficient"] == true);
  CHECK(run_json({"alphabet", "2", "2"})["letters"] >= 3);
}
