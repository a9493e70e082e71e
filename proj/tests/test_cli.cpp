#include "k3pic/indexcheck.hpp"
#include "k3pic/pipeline.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace k3pic;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("k3pic_test_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(K3PIC_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

Json comparable(const RunResult& r) {
  Json j = strip_volatile(r.report);
  j["config"].erase("cache_dir");
  return j;
}

struct IndexRuns {
  RunResult cold1, cold2, warm;
  std::size_t cache_files = 0;
};

const IndexRuns& index_runs() {
  static const IndexRuns runs = [] {
    IndexRuns r;
    const fs::path d1 = scratch("cache1"), d2 = scratch("cache2");
    RunConfig c;
    c.stages = {"index"};
    c.cache_dir = d1;
    r.cold1 = run(c);
    for ([[maybe_unused]] const auto& e : fs::recursive_directory_iterator(d1)) ++r.cache_files;
    r.warm = run(c);
    c.cache_dir = d2;
    r.cold2 = run(c);
    return r;
  }();
  return runs;
}

}  // namespace

TEST_CASE("stages are closed under prerequisites") {
  RunConfig c;
  c.stages = {"cohomology"};
  CHECK(c.resolved_stages() ==
        std::vector<Stage>{Stage::Catalog, Stage::Orbit, Stage::Gram, Stage::Lattice, Stage::Cohomology});
  c.stages = {"fibers", "nikulin"};
  CHECK(c.resolved_stages() ==
        std::vector<Stage>{Stage::Catalog, Stage::Orbit, Stage::Gram, Stage::Lattice, Stage::Nikulin, Stage::Fibers});
  c.stages.clear();
  CHECK(c.resolved_stages().size() == stage_names().size());
  for (const auto& n : stage_names()) CHECK(stage_name(parse_stage(n)) == n);
  CHECK_THROWS_AS(parse_stage("picard"), UsageError);
}

TEST_CASE("configuration errors") {
  RunConfig c;
  c.t0 = "1/0";
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.p = 15;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.subgroup_mode = "abelian";
  CHECK_THROWS_AS(c.validate(), UsageError);
  c = RunConfig{};
  c.stages = {"orbit", "nope"};
  const RunResult r = run(c);
  CHECK(r.exit_code == 2);
  CHECK(r.report.contains("error"));
}

TEST_CASE("fibers at t0 = -3 report twelve nodes") {
  RunConfig c;
  c.t0 = "-3";
  c.stages = {"fibers"};
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  const Json& f = r.report["stages"]["fibers"];
  CHECK(f["smooth"] == false);
  CHECK(f["nodes"] == 12);
  CHECK(f["points"].size() == 12);
  // nodes at (1, zeta6^j, zeta6^k) with j + k = 0 mod 3
  for (const auto& p : f["points"]) {
    REQUIRE(p.contains("zeta6_exponents"));
    CHECK((p["zeta6_exponents"][0].get<int>() + p["zeta6_exponents"][1].get<int>()) % 3 == 0);
  }
  c.t0 = "7";
  CHECK(run(c).report["stages"]["fibers"]["smooth"] == true);
}

TEST_CASE("cohomology stage with the normal sweep") {
  RunConfig c;
  c.stages = {"cohomology"};
  c.subgroup_mode = "normal";
  const RunResult r = run(c);
  REQUIRE(r.exit_code == 0);
  const Json& s = r.report["summary"];
  CHECK(s["sweep_trivial_h1"] == 49);
  CHECK(s["sweep_nontrivial_h1"] == 47);
  CHECK(s["h1"] == Json({2, 2, 2}));
  CHECK(s["h2"].size() == 10);
  CHECK(r.report["stages"]["cohomology"]["h0"]["is_hyperplane_class"] == true);
}

TEST_CASE("determinism and cache transparency") {
  const IndexRuns& r = index_runs();
  REQUIRE(r.cold1.exit_code == 0);
  CHECK(r.cache_files > 0);
  CHECK(comparable(r.cold1).dump() == comparable(r.cold2).dump());
  CHECK(comparable(r.cold1).dump() == comparable(r.warm).dump());
  CHECK(r.cold1.certificate == r.cold2.certificate);
  CHECK(r.cold1.report["summary"]["index_verdict"] == "Lambda = Pic");
  CHECK(r.cold1.report["version"] == kVersion);
  CHECK(r.cold1.report["config"]["stages"].size() == 5);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  const fs::path out = dir / "out.json";
  CHECK(cli("inose", out) == 0);
  CHECK(read_json(out)["stages"]["inose"]["ok"] == true);
  CHECK(cli("fibers --t0 -3", out) == 0);
  CHECK(read_json(out)["stages"]["fibers"]["nodes"] == 12);
  CHECK(cli("catalog --t0 abc", out) == 2);
  CHECK(cli("cohomology --subgroup-mode some", out) == 2);
  CHECK(cli("fibers -p 15", out) == 2);
  CHECK(cli("frobnicate", out) == 2);
  CHECK(cli("tritangent --t0=-5 --json-out " + (dir / "t.json").string(), out) == 0);
  CHECK(read_json(dir / "t.json")["stages"]["tritangent"]["count"].get<int>() > 0);

  // flat key = value configuration
  {
    std::ofstream cfg(dir / "k3pic.conf");
    cfg << "t0 = -3\n";
  }
  CHECK(cli("--config " + (dir / "k3pic.conf").string() + " fibers", out) == 0);
  CHECK(read_json(out)["config"]["t0"] == "-3");
  CHECK(read_json(out)["stages"]["fibers"]["nodes"] == 12);
}

TEST_CASE("verify-cert accepts fresh and rejects tampered certificates") {
  const IndexRuns& r = index_runs();
  REQUIRE(!r.cold1.certificate.empty());
  const fs::path dir = scratch("cert");
  const fs::path out = dir / "out.json";
  const auto write = [&](const std::string& name, const Json& j) {
    std::ofstream(dir / name) << j.dump();
    return (dir / name).string();
  };
  const Json cert = Json::parse(r.cold1.certificate);
  CHECK(cli("verify-cert " + write("fresh.json", cert), out) == 0);
  CHECK(read_json(out)["accepted"] == true);

  Json flipped = cert;
  flipped["gram"][0][1] = flipped["gram"][0][1].get<int>() + 1;
  flipped["gram"][1][0] = flipped["gram"][1][0].get<int>() + 1;
  CHECK(cli("verify-cert " + write("flipped.json", flipped), out) == 1);
  CHECK(read_json(out)["accepted"] == false);

  Json missing = cert;
  missing["witnesses"].erase(missing["witnesses"].size() - 1);
  CHECK(cli("verify-cert " + write("missing.json", missing), out) == 1);
  bool named = false;
  const Json rejected = read_json(out);
  for (const auto& f : rejected["failures"]) named = named || f.get<std::string>().find("uncovered") != std::string::npos;
  CHECK(named);

  CHECK(cli("verify-cert " + (dir / "absent.json").string(), out) == 2);
}
