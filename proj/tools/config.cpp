#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "klab/verify.hpp"

namespace klab::cli {

std::map<std::string, double> default_tolerances() {
  return {
      {"taming", kDefaultTamingMargin},
      {"transversality", 1e-6},
      {"graphlike", 1e-6},
      {"koopman", 1e-9},
      {"subspace", 1e-8},
      {"equivariance", 1e-8},
      {"invariance", 1e-6},
  };
}

Box2 default_box(int l, double a) { return {-a - 0.05, a + 0.05, 0.25, l - 1.25}; }

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "l") {
      cfg.l = value.get<int>();
    } else if (key == "a") {
      cfg.a = value.get<double>();
    } else if (key == "m") {
      cfg.m = value.get<int>();
    } else if (key == "M") {
      cfg.M = value.get<double>();
    } else if (key == "M_box") {
      const auto v = value.get<std::vector<double>>();
      if (v.size() != 4) throw std::invalid_argument("config: M_box needs [x_lo, x_hi, z_lo, z_hi]");
      cfg.M_box = Box2{v[0], v[1], v[2], v[3]};
    } else if (key == "M_margin") {
      cfg.M_margin = value.get<double>();
    } else if (key == "y_grid") {
      cfg.y_grid = value.get<std::vector<double>>();
    } else if (key == "tolerances") {
      for (const auto& [suite, tol] : value.items()) cfg.tolerances[suite] = tol.get<double>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "output_dir") {
      cfg.output_dir = value.get<std::string>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
}

void resolve(RunConfig& cfg) {
  if (cfg.l < 2) throw std::invalid_argument(fmt::format("l must be at least 2 (got {})", cfg.l));
  if (cfg.l > 12) throw std::invalid_argument(fmt::format("l must be at most 12 (got {})", cfg.l));
  if (!(cfg.a > 0.0 && cfg.a < 1.0)) throw std::invalid_argument(fmt::format("a must lie in (0, 1) (got {})", cfg.a));
  if (!cfg.m) cfg.m = 2 * cfg.l - 1;
  if (*cfg.m < 1) throw std::invalid_argument("m must be positive");
  if (!cfg.M_box) cfg.M_box = default_box(cfg.l, cfg.a);
  cfg.M_box->validate();
  if (!(cfg.M_margin >= 0.0)) throw std::invalid_argument("M_margin must be non-negative");
  if (!cfg.M) cfg.M = compute_M(cfg.l, *cfg.M_box, cfg.M_margin);
  if (!std::isfinite(*cfg.M)) throw std::invalid_argument("M must be finite");
  for (double y : cfg.y_grid) {
    if (!std::isfinite(y)) throw std::invalid_argument("y_grid values must be finite");
  }
  const auto defaults = default_tolerances();
  for (const auto& [suite, tol] : cfg.tolerances) {
    if (!defaults.contains(suite)) throw std::invalid_argument("unknown tolerance key '" + suite + "'");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance for " + suite + " must be positive");
  }
  for (const auto& [suite, tol] : defaults) cfg.tolerances.try_emplace(suite, tol);
}

nlohmann::ordered_json canonical_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["l"] = cfg.l;
  j["a"] = cfg.a;
  j["m"] = cfg.degree();
  j["M"] = cfg.taming_constant();
  j["M_box"] = {cfg.box().x_lo, cfg.box().x_hi, cfg.box().z_lo, cfg.box().z_hi};
  j["M_margin"] = cfg.M_margin;
  j["y_grid"] = cfg.y_grid;
  j["tolerances"] = cfg.tolerances;
  j["seed"] = cfg.seed;
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::vector<double> parse_number_list(const std::string& text) {
  std::string body = text;
  if (!body.empty() && body.front() == '[') body.erase(0, 1);
  if (!body.empty() && body.back() == ']') body.pop_back();
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number list: '" + text + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument("not a number list: '" + text + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

}  // namespace klab::cli
