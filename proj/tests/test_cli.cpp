#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hardyp/cli.hpp"
#include "hardyp/config.hpp"

using namespace hardyp;
using namespace hardyp::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<Json> lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(Json::parse(line));
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> argv_of(const Json& header) {
  return header["command"]["argv"].get<std::vector<std::string>>();
}

}  // namespace

TEST_CASE("parse") {
  const auto c = parse({"pseudomoment", "--N", "1000", "--k", "2", "--method", "exact"});
  CHECK(c.subcommand == "pseudomoment");
  CHECK(c.values.at("N") == "1000");
  CHECK(c.values.at("alpha") == "1");
  CHECK(c.format == OutputFormat::Jsonl);
  const auto h = parse({"hl-check", "--p", "1", "--corpus", "500", "--seed", "42"});
  CHECK(h.seed == 42);
  CHECK(h.values.at("corpus") == "500");
  CHECK_THROWS_AS(parse({"norm", "--p", "0"}), UsageError);
  CHECK_THROWS_AS(parse({"norm", "--p", "1", "--gen", "zeta:N=3", "--bogus", "1"}), UsageError);
  CHECK_THROWS_AS(parse({"frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse({}), UsageError);
  try {
    parse({"pseudomoment", "--k", "2"});
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("--N") != std::string::npos);
  }
  // Without --seed the seed is drawn and echoed.
  const auto r = parse({"pseudomoment", "--N", "10", "--k", "1"});
  const auto argv = r.resolved_argv();
  CHECK(std::find(argv.begin(), argv.end(), std::to_string(r.seed)) != argv.end());
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"norm", "--p", "0"}).code == kUsage);
  CHECK(run_cli({"norm", "--p", "0"}).err.find("--p") != std::string::npos);
  CHECK(run_cli({"scan", "--k", "1", "--grid", "100,1000", "--seed", "1"}).code == kUsage);
  CHECK(run_cli({"norm", "--p", "3", "--method", "exact", "--gen", "zeta:N=5", "--seed", "1"}).code == kUsage);
  CHECK(run_cli({"partial-sum", "--p", "0.5", "--k", "2", "--seed", "1"}).code == kOk);
  CHECK(run_cli({"--help"}).code == kOk);
  CHECK(run_cli({"norm", "--help"}).out.find("--gen") != std::string::npos);
  CHECK(run_cli({"fuzz", "--corpus", "3", "--samples", "500", "--inverted", "--seed", "2"}).code == kViolation);
  CHECK(run_cli({"fuzz", "--corpus", "5", "--samples", "2000", "--seed", "2"}).code == kOk);

  const auto saved = memory_cap();
  set_memory_cap(1 << 16);
  const auto res = run_cli({"pseudomoment", "--N", "100000", "--k", "3", "--seed", "1"});
  set_memory_cap(saved);
  CHECK(res.code == kResource);
  CHECK(res.err.find(kMemoryCapEnv) != std::string::npos);
}

TEST_CASE("pseudomoment record") {
  const auto o = run_cli({"pseudomoment", "--N", "10", "--k", "1", "--method", "exact", "--seed", "3"});
  REQUIRE(o.code == kOk);
  const auto ls = lines(o.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[1]["record"]["value"].get<double>() == doctest::Approx(2.928968).epsilon(1e-6));
}

TEST_CASE("golden jsonl documents") {
  const std::filesystem::path dir = HARDYP_GOLDEN_DIR;
  for (const char* name : {"pseudomoment_n10_k1.jsonl", "norm_zeta50_p1.jsonl"}) {
    const std::string golden = slurp(dir / name);
    REQUIRE(!golden.empty());
    const auto header = lines(golden).front();
    const auto o = run_cli(argv_of(header));
    CHECK(o.code == kOk);
    CHECK(o.out == golden);
  }
}

TEST_CASE("document schema") {
  const auto o = run_cli({"scan", "--k", "1", "--grid", "10,20,40,80", "--seed", "9"});
  const auto ls = lines(o.out);
  REQUIRE(ls.size() == 6);
  CHECK(ls.front()["type"] == "header");
  CHECK(ls.front()["version"] == std::string(kVersion));
  CHECK(ls.front()["command"]["seed"] == 9);
  for (std::size_t i = 1; i <= 4; ++i) {
    const auto& r = ls[i]["record"];
    CHECK(ls[i]["type"] == "record");
    for (const char* key : {"experiment", "params", "value", "normalizer", "ratio", "std_error", "extra"}) {
      CHECK(r.contains(key));
    }
  }
  CHECK(ls.back()["type"] == "summary");
  CHECK(ls.back()["summary"].contains("slope"));

  const auto t = run_cli({"scan", "--k", "1", "--grid", "10,20,40,80", "--seed", "9", "--timing"});
  CHECK(lines(t.out).back()["type"] == "footer");

  const auto j = run_cli({"pseudomoment", "--N", "10", "--k", "1", "--seed", "9", "--format", "json"});
  const auto doc = Json::parse(j.out);
  CHECK(doc["records"].size() == 1);
  CHECK(doc["wall_time"].is_null());

  const auto c = run_cli({"pseudomoment", "--N", "10", "--k", "1", "--seed", "9", "--format", "csv"});
  CHECK(c.out.rfind(csv_header() + "\n", 0) == 0);
  CHECK(c.out.find("2.9289682539682538") != std::string::npos);
}

TEST_CASE("replay reproduces records") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"norm", "--gen", "extremal:p=0.5,k=2,N=30", "--p", "0.5", "--samples", "5000"},
        std::vector<std::string>{"hl-check", "--p", "1", "--corpus", "5", "--samples", "2000"},
        std::vector<std::string>{"pseudomoment", "--N", "50", "--k", "1.5", "--method", "mc", "--samples", "3000"}}) {
    const auto first = run_cli(args);
    REQUIRE(first.code == kOk);
    const auto header = lines(first.out).front();
    const auto again = run_cli(argv_of(header));
    CHECK(again.out == first.out);
    // Same records with more workers.
    auto threaded = argv_of(header);
    threaded.insert(threaded.end(), {"--threads", "8"});
    const auto t8 = lines(run_cli(threaded).out);
    const auto t1 = lines(first.out);
    REQUIRE(t8.size() == t1.size());
    for (std::size_t i = 1; i < t1.size(); ++i) CHECK(t8[i] == t1[i]);
  }
}

TEST_CASE("atomic output and saved polynomials") {
  const auto dir = std::filesystem::temp_directory_path() / "hardyp_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "out.jsonl";
  const auto poly = dir / "poly.json";
  const auto o = run_cli({"norm", "--gen", "zeta:N=20", "--p", "4", "--seed", "1", "--output", out.string(), "--save",
                          poly.string()});
  CHECK(o.code == kOk);
  CHECK(o.out.empty());
  const std::string written = slurp(out);
  CHECK(lines(written).size() == 2);
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  }
  const auto reload = run_cli({"norm", "--input", poly.string(), "--p", "4", "--seed", "1"});
  CHECK(lines(reload.out)[1]["record"]["value"] == lines(written)[1]["record"]["value"]);
  std::ofstream(dir / "bad.json") << "{\"coeffs\": [[0, 1, 0]]}";
  CHECK(run_cli({"norm", "--input", (dir / "bad.json").string(), "--p", "2", "--seed", "1"}).code == kUsage);
  std::filesystem::remove_all(dir);
}
