#pragma once

#include "k3pic/jsonio.hpp"
#include "k3pic/integer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace k3pic {

inline constexpr const char* kVersion = "1.0.0";

enum class Stage { Catalog, Orbit, Gram, Lattice, Nikulin, Index, Galois, Cohomology, Fibers, Tritangent, Inose };
const std::vector<std::string>& stage_names();
Stage parse_stage(const std::string& name);  // throws UsageError
std::string stage_name(Stage s);

struct RunConfig {
  std::string t0 = "7";
  std::optional<std::uint64_t> p;
  std::optional<int> m;
  std::vector<std::string> stages;  // empty: all
  std::optional<std::filesystem::path> cache_dir;
  bool second_prime = false;
  std::string subgroup_mode = "normal";

  Rational t0_value() const;  // throws UsageError
  /// Requested stages plus their prerequisites, in dependency order.
  std::vector<Stage> resolved_stages() const;
  void validate() const;  // throws UsageError
  Json to_json() const;
};

/// Exit codes: 0 all checks pass, 1 a mathematical verification failed,
/// 2 configuration or resource error.
struct RunResult {
  Json report;
  int exit_code = 0;
  std::string certificate;  // filled by the index stage
};
RunResult run(const RunConfig& config);

/// Removes the fields that legitimately differ between runs.
Json strip_volatile(Json report);

}  // namespace k3pic
