#include "k3pic/indexcheck.hpp"
#include "k3pic/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace k3pic;

namespace {

struct Options {
  RunConfig cfg;
  std::string json_out;
  std::string cert_out;
  std::string stages;
  std::string cert_path;
  std::string cache_dir;
};

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

int emit(const Json& j, const Options& o) {
  const std::string text = j.dump(2) + "\n";
  if (o.json_out.empty()) {
    std::cout << text;
  } else if (!write_file(o.json_out, text)) {
    std::cerr << "k3pic: cannot write " << o.json_out << "\n";
    return 2;
  }
  return 0;
}

std::vector<std::string> split_stages(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item == "index-check" ? "index" : item);
  return out;
}

int run_pipeline(Options& o, std::vector<std::string> stages) {
  o.cfg.stages = std::move(stages);
  if (!o.cache_dir.empty()) o.cfg.cache_dir = o.cache_dir;
  RunResult r = run(o.cfg);
  if (!o.cert_out.empty()) {
    if (r.certificate.empty()) {
      std::cerr << "k3pic: no certificate was produced\n";
      if (r.exit_code == 0) r.exit_code = 1;
    } else if (!write_file(o.cert_out, r.certificate)) {
      std::cerr << "k3pic: cannot write " << o.cert_out << "\n";
      return 2;
    }
  }
  const Json stages_out = r.report.value("stages", Json::object());
  for (const auto& [name, st] : stages_out.items())
    if (!st.value("ok", true)) std::cerr << "k3pic: stage " << name << " failed: " << st.value("error", "") << "\n";
  if (r.report.contains("error")) std::cerr << "k3pic: " << r.report["error"].get<std::string>() << "\n";
  const int io = emit(r.report, o);
  return io ? io : r.exit_code;
}

int verify_cert(const Options& o) {
  std::ifstream in(o.cert_path, std::ios::binary);
  if (!in) {
    std::cerr << "k3pic: cannot read " << o.cert_path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  CertificateCheck chk;
  try {
    chk = verify_certificate(buf.str());
  } catch (const std::exception& e) {
    chk.ok = false;
    chk.failures.push_back(e.what());
  }
  const Json j{{"tool", "k3pic"}, {"version", kVersion}, {"certificate", o.cert_path}, {"accepted", chk.ok},
               {"failures", chk.failures}};
  for (const auto& f : chk.failures) std::cerr << "k3pic: " << f << "\n";
  const int io = emit(j, o);
  return io ? io : (chk.ok ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Picard lattice of w^2 = x^6 + y^6 + z^6 + t x^2 y^2 z^2", "k3pic"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "flat key = value file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--t0", o.cfg.t0, "rational parameter, e.g. 7 or -3/2")->capture_default_str();
  app.add_option("-p", o.cfg.p, "prime of the reduction (default 79)")->check(CLI::PositiveNumber);
  app.add_option("-m", o.cfg.m, "extension degree over F_p (default 2)")->check(CLI::Range(1, 2));
  app.add_option("--cache-dir", o.cache_dir, "intersection cache (else K3PIC_CACHE_DIR)");
  app.add_flag("--second-prime", o.cfg.second_prime, "recheck 10 intersection numbers at a second prime");
  app.add_option("--subgroup-mode", o.cfg.subgroup_mode, "normal or all")
      ->check(CLI::IsMember({"normal", "all"}))
      ->capture_default_str();
  app.add_option("--json-out", o.json_out, "write the JSON report here instead of stdout");

  const std::vector<std::pair<std::string, std::string>> verbs{
      {"catalog", "seed divisors B1..B5 and their bitangency"},
      {"orbit", "orbit of the seeds under H"},
      {"gram", "intersection matrix of the orbit"},
      {"lattice", "lattice invariants and discriminant group"},
      {"nikulin", "comparison with U+E8(-1)+A5(-1)+A2(-1)+A2(-4)"},
      {"index-check", "[Pic : Lambda] = 1 with a certificate"},
      {"galois", "Galois and H images and their structure"},
      {"cohomology", "H^0, H^1, H^2 and the subgroup sweep"},
      {"fibers", "singular locus of the fiber at t0"},
      {"tritangent", "tri-tangent lines of the branch sextic at t0"},
      {"inose", "Inose pencil identities"}};
  std::vector<std::pair<CLI::App*, std::string>> stage_cmds;
  for (const auto& [verb, help] : verbs) {
    CLI::App* sub = app.add_subcommand(verb, help);
    if (verb == "index-check") sub->add_option("--cert-out", o.cert_out, "write the certificate JSON here");
    stage_cmds.emplace_back(sub, verb == "index-check" ? "index" : verb);
  }
  CLI::App* run_cmd = app.add_subcommand("run", "run the pipeline (all stages by default)");
  run_cmd->add_option("--stages", o.stages, "comma-separated stage list; prerequisites are added");
  run_cmd->add_option("--cert-out", o.cert_out, "write the index certificate here");
  CLI::App* verify_cmd = app.add_subcommand("verify-cert", "re-check a certificate with integer arithmetic");
  verify_cmd->add_option("path", o.cert_path, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify_cmd) return verify_cert(o);
    if (*run_cmd) return run_pipeline(o, split_stages(o.stages));
    for (const auto& [sub, stage] : stage_cmds)
      if (*sub) return run_pipeline(o, {stage});
  } catch (const UsageError& e) {
    std::cerr << "k3pic: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << "k3pic: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
