#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "klab/polynomials.hpp"

namespace klab::cli {

/// Resolved run parameters. Unset optionals are filled from `l` and `a` by resolve().
struct RunConfig {
  int l = 2;
  double a = 0.5;
  std::optional<int> m;
  std::optional<double> M;
  std::optional<Box2> M_box;
  double M_margin = kDefaultMMargin;
  std::vector<double> y_grid{0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0};
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 20240601;
  std::string output_dir = "koopman_lab_out";

  int degree() const { return *m; }
  double taming_constant() const { return *M; }
  const Box2& box() const { return *M_box; }
  double tolerance(const std::string& suite) const { return tolerances.at(suite); }
};

std::map<std::string, double> default_tolerances();

Box2 default_box(int l, double a);

/// Overlays the flat keys of a JSON config file onto `cfg`. Unknown keys throw.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

/// Checks invariants and fills m, M, M_box and missing tolerances.
void resolve(RunConfig& cfg);

/// Canonical JSON of a resolved config; output_dir is left out.
nlohmann::ordered_json canonical_json(const RunConfig& cfg);

/// 16 hex digits of FNV-1a over the canonical JSON.
std::string config_hash(const RunConfig& cfg);

/// "1,2,3" or "[1,2,3]".
std::vector<double> parse_number_list(const std::string& text);

}  // namespace klab::cli
