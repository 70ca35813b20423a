#include "common.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using dunkl::cli::dispatch;

namespace {
struct Run {
  int code;
  std::string out, err;
};
Run run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int c = dispatch(args, o, e);
  return {c, o.str(), e.str()};
}
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dunkl_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("peakset JSON") {
    const Run r = run({"peakset", "--system", "a:4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 24);
    for (double n : j["squared_norms"]) CHECK(n == doctest::Approx(6.0).epsilon(1e-12));
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(run({"simulate", "--system", "b1", "--beta", "1", "--t", "1", "--x0", "2"}).code == 2);
    const Run r = run({"peakset", "--system", "b1", "--no-such-flag"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"peakset", "--help"}).code == 0);
  }

  TEST_CASE("validation errors exit 1") {
    const fs::path d = scratch("bad");
    std::ofstream(d / "bad.json") << R"({"ambient_dim": 2, "roots": [[1,0],[-1,0],[1,1],[-1,-1]], "kappa": [1,1,1,1]})";
    const Run r = run({"rootsys", "validate", (d / "bad.json").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("not closed") != std::string::npos);
    CHECK(run({"peakset", "--system", "a:0"}).code == 1);
  }

  TEST_CASE("config files fill unset flags and round-trip") {
    const fs::path d = scratch("config");
    const Run p = run({"simulate", "--system", "a:3", "--beta", "4", "--t", "1", "--x0", "2,0,-2", "--seed", "5",
                       "--paths", "50", "--out", d.string(), "--print-config"});
    REQUIRE(p.code == 0);
    std::ofstream(d / "cfg.json") << p.out;
    const Run q = run({"simulate", "--config", (d / "cfg.json").string(), "--print-config"});
    CHECK(nlohmann::json::parse(p.out) == nlohmann::json::parse(q.out));
    const Run over = run({"simulate", "--config", (d / "cfg.json").string(), "--paths", "70", "--print-config"});
    CHECK(nlohmann::json::parse(over.out)["paths"] == 70);
    CHECK(run({"simulate", "--config", (d / "cfg.json").string()}).code == 0);
    CHECK(fs::exists(d / "moments.json"));
    CHECK(fs::exists(d / "histogram_t1.csv"));
  }

  TEST_CASE("deterministic simulate output") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    for (const fs::path& d : {a, b})
      REQUIRE(run({"simulate", "--system", "b1", "--beta", "2", "--t", "1", "--x0", "1", "--seed", "9", "--paths", "200",
                   "--out", d.string()})
                  .code == 0);
    std::ifstream fa(a / "moments.json"), fb(b / "moments.json");
    const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(sa == sb);
  }

  TEST_CASE("figures, kernel and verification commands") {
    const fs::path d = scratch("figs");
    CHECK(run({"reproduce-figures", "--fig", "1", "--out", d.string(), "--grid", "201"}).code == 0);
    for (const char* f : {"fig1_t2.csv", "fig1_t20.csv", "fig1_t200.csv", "fig1_t2000.csv"}) CHECK(fs::exists(d / f));
    std::ifstream csv(d / "fig1_t2.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "y[scaled],f[density],steady[density]");
    CHECK(run({"kernel", "--beta", "20", "--out", d.string()}).code == 0);
    CHECK(run({"verify-steady", "--out", d.string()}).code == 0);
    CHECK(run({"verify-steady", "--expected-slope", "-1", "--out", d.string()}).code == 1);
    CHECK(run({"verify-steady", "--source", "simulate", "--out", d.string()}).code == 2);
  }
}
