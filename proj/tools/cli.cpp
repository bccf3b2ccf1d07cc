#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "klab/errors.hpp"
#include "klab/figures.hpp"
#include "klab/linflow.hpp"
#include "klab/serialize.hpp"
#include "klab/surface.hpp"
#include "klab/symspace.hpp"
#include "klab/verify.hpp"

namespace klab::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

inline constexpr std::size_t kLiftCap = 10000;
const std::vector<std::string> kAllSuites{"taming",       "transversality", "graphlike",  "koopman",
                                          "subspace",     "equivariance",   "invariance", "obstruction"};

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  int l = 0;
  double a = 0.0;
  int m = 0;
  double M = 0.0;
  std::string M_box;
  double y = 0.0;
  std::string y_grid;
  std::string suites = "all";
  std::string kind = "cross_section";
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
  std::string turns;
  int degree = 0;
  int n = 0;
  std::string A;
};

struct Options {
  CLI::Option* l = nullptr;
  CLI::Option* a = nullptr;
  CLI::Option* m = nullptr;
  CLI::Option* M = nullptr;
  CLI::Option* M_box = nullptr;
  CLI::Option* y_grid = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* config = nullptr;
  CLI::Option* out = nullptr;
};

void add_common(CLI::App* cmd, Flags& f, Options& o) {
  o.l = cmd->add_option("--l", f.l, "number of equilibria (planes)");
  o.a = cmd->add_option("--a", f.a, "snake amplitude, 0 < a < 1");
  o.m = cmd->add_option("--m", f.m, "polynomial degree of the lift");
  o.M = cmd->add_option("--M", f.M, "taming constant");
  o.M_box = cmd->add_option("--M-box", f.M_box, "x_lo,x_hi,z_lo,z_hi box certifying M");
  o.y_grid = cmd->add_option("--y-grid", f.y_grid, "comma-separated section heights y");
  o.seed = cmd->add_option("--seed", f.seed, "random seed");
  o.config = cmd->add_option("--config", f.config, "JSON config file");
  o.out = cmd->add_option("--out", f.out, "output directory");
}

RunConfig load_config(const Flags& f, const Options& o) {
  RunConfig cfg;
  if (o.config->count() > 0) {
    std::ifstream in(f.config);
    if (!in) throw std::invalid_argument("cannot read config file " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config file is not valid JSON: " + std::string(e.what()));
    }
    apply_json(cfg, j);
  }
  if (o.l->count() > 0) cfg.l = f.l;
  if (o.a->count() > 0) cfg.a = f.a;
  if (o.m->count() > 0) cfg.m = f.m;
  if (o.M->count() > 0) cfg.M = f.M;
  if (o.M_box->count() > 0) {
    const auto v = parse_number_list(f.M_box);
    if (v.size() != 4) throw std::invalid_argument("--M-box needs x_lo,x_hi,z_lo,z_hi");
    cfg.M_box = Box2{v[0], v[1], v[2], v[3]};
  }
  if (o.y_grid->count() > 0) cfg.y_grid = parse_number_list(f.y_grid);
  if (o.seed->count() > 0) cfg.seed = f.seed;
  if (const char* env = std::getenv("KOOPMAN_LAB_OUT"); env != nullptr && *env != '\0') cfg.output_dir = env;
  if (o.out->count() > 0) cfg.output_dir = f.out;
  resolve(cfg);
  return cfg;
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory " + cfg.output_dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << content;
  file.close();
  if (!file) throw OutputError("cannot write " + path.string());
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

TamingPair config_pair(const RunConfig& cfg) {
  return make_taming_pair(taming_q(), taming_p(cfg.l, cfg.taming_constant()), cfg.degree());
}

ordered_json box_json(const Box2& b) { return {b.x_lo, b.x_hi, b.z_lo, b.z_hi}; }

int cmd_build(const RunConfig& cfg, std::ostream& out) {
  const SurfaceSpec spec = build_surface(cfg.l, cfg.a);
  const TamingPair tp = config_pair(cfg);
  const std::string hash = config_hash(cfg);

  std::ostringstream obj, snake, points, section;
  const SurfaceMesh mesh = sample_surface(spec, 8.0);
  obj << "# koopman-lab surface l=" << cfg.l << " config " << hash << "\n";
  write_obj(obj, mesh);
  write_snake_csv(snake, spec, 201);
  write_point_cloud_csv(points, mesh);
  write_cross_section_csv(section, cross_section(spec, 0.0), 201);

  ordered_json taming;
  taming["config_hash"] = hash;
  taming["l"] = cfg.l;
  taming["m"] = cfg.degree();
  taming["q"] = to_json(tp.q);
  taming["p"] = to_json(tp.p);
  taming["M"] = cfg.taming_constant();
  taming["M_box"] = box_json(cfg.box());
  taming["M_margin"] = cfg.M_margin;
  taming["M_bound"] = compute_M(cfg.l, cfg.box(), 0.0);
  taming["equilibria"] = equilibria(spec);

  const fs::path dir = prepare_output(cfg);
  write_file(dir / "surface.obj", obj.str());
  write_file(dir / "surface_points.csv", points.str());
  write_file(dir / "snake.csv", snake.str());
  write_file(dir / "section_y0.csv", section.str());
  write_file(dir / "taming.json", dump(taming));
  fmt::print(out, "built l={} a={} m={} M={} ({} vertices, {} faces, {} equilibria) -> {}\n", cfg.l, cfg.a,
             cfg.degree(), cfg.taming_constant(), mesh.vertices.size(), mesh.faces.size(),
             mesh.equilibrium_vertices.size(), dir.string());
  return kPass;
}

std::vector<std::string> parse_suites(const std::string& text) {
  if (text == "all") return kAllSuites;
  std::vector<std::string> suites;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (std::find(kAllSuites.begin(), kAllSuites.end(), item) == kAllSuites.end()) {
      throw std::invalid_argument("unknown suite '" + item + "'");
    }
    suites.push_back(item);
  }
  if (suites.empty()) throw std::invalid_argument("no suites selected");
  return suites;
}

TurnCount parse_turns(const std::string& text) {
  if (text == "inf" || text == "infinite" || text == "infinity") return TurnCount::infinite();
  std::size_t used = 0;
  int turns = 0;
  try {
    turns = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("--turns must be a positive integer or 'inf'");
  return TurnCount::finite(turns);
}

std::vector<double> time_grid(double lo, double hi, int count) {
  std::vector<double> t;
  for (int k = 0; k < count; ++k) t.push_back(lo + (hi - lo) * k / (count - 1));
  return t;
}

std::vector<VerificationReport> run_suite(const std::string& suite, const RunConfig& cfg, const SurfaceSpec& spec,
                                          const TamingPair& tp, TurnCount turns, int degree, Rng& rng) {
  const double tol = suite == "obstruction" ? 0.0 : cfg.tolerance(suite);
  if (suite == "taming") {
    return {verify_taming(spec, tp, cfg.y_grid, tol), verify_m_bound(cfg.l, cfg.taming_constant(), cfg.box())};
  }
  if (suite == "transversality") {
    const auto fibers = random_fibers(spec, tp, 200, rng);
    return {verify_transversality(spec, tp, fibers, tol)};
  }
  if (suite == "graphlike") return {graphlike_check(spec, tp, 2000, 1e-2, tol)};
  if (suite == "koopman") {
    const auto t = time_grid(-2.0, 2.0, 41);
    const MultiPoly x = MultiPoly::variable(3, coord::x);
    const MultiPoly y = MultiPoly::variable(3, coord::y);
    const MultiPoly z = MultiPoly::variable(3, coord::z);
    std::vector<VerificationReport> reports{koopman_eigencheck(spec, x + y, 1.0, 100, t, tol, rng),
                                            koopman_eigencheck(spec, x - y, -1.0, 100, t, tol, rng),
                                            koopman_eigencheck(spec, z, 0.0, 100, t, tol, rng)};
    const char* names[] = {"koopman[x+y]", "koopman[x-y]", "koopman[z]"};
    for (std::size_t i = 0; i < reports.size(); ++i) reports[i].suite = names[i];
    return reports;
  }
  if (suite == "subspace") {
    const MultiPoly x = MultiPoly::variable(3, coord::x);
    const MultiPoly y = MultiPoly::variable(3, coord::y);
    const std::vector<MultiPoly> fns{x + y, x - y, MultiPoly::variable(3, coord::z)};
    const std::vector<double> t{-1.0, 0.3, 1.0};
    return {invariant_subspace_check(spec, fns, t, tol, rng)};
  }
  if (suite == "equivariance") return {verify_equivariance(hyperbolic_generator(0), cfg.degree(), 200, rng, tol)};
  if (suite == "invariance") return {verify_invariance(spec, 500, rng, tol)};
  return {obstruction_report(turns, degree)};
}

int cmd_verify(const RunConfig& cfg, const Flags& f, const CLI::App& cmd, std::ostream& out) {
  const auto suites = parse_suites(f.suites);
  const TurnCount turns =
      cmd.get_option("--turns")->count() > 0 ? parse_turns(f.turns) : TurnCount::finite(cfg.l - 1);
  const int degree = cmd.get_option("--degree")->count() > 0 ? f.degree : cfg.degree();
  if (degree < 1) throw std::invalid_argument("--degree must be positive");

  const SurfaceSpec spec = build_surface(cfg.l, cfg.a);
  const TamingPair tp = config_pair(cfg);
  const fs::path dir = prepare_output(cfg);

  std::vector<VerificationReport> reports;
  for (const auto& suite : suites) {
    Rng rng(cfg.seed);
    for (auto& r : run_suite(suite, cfg, spec, tp, turns, degree, rng)) reports.push_back(std::move(r));
  }

  bool all_pass = true;
  ordered_json report;
  report["tool"] = "koopman-lab";
  report["command"] = "verify";
  report["config_hash"] = config_hash(cfg);
  report["seed"] = cfg.seed;
  report["config"] = canonical_json(cfg);
  report["conventions"] = standard_conventions();
  report["suites"] = ordered_json::array();
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    report["suites"].push_back(r.to_json());
    fmt::print(out, "{:<16} {}  samples={} worst_residual={:.3e} tolerance={:.3e}\n", r.suite,
               r.pass ? "PASS" : "FAIL", r.samples, r.worst_residual, r.tolerance);
    if (r.suite == "obstruction") fmt::print(out, "  {}\n", r.details.front()["explanation"].get<std::string>());
  }
  report["pass"] = all_pass;
  write_file(dir / "report.json", dump(report));
  fmt::print(out, "{} -> {}\n", all_pass ? "all suites passed" : "verification failed", (dir / "report.json").string());
  return all_pass ? kPass : kVerificationFailed;
}

int cmd_plot(const RunConfig& cfg, const Flags& f, std::ostream& out) {
  if (f.kind != "cross_section" && f.kind != "surface_obj" && f.kind != "contour_csv") {
    throw std::invalid_argument("unknown plot kind '" + f.kind + "' (cross_section, surface_obj, contour_csv)");
  }
  if (!std::isfinite(f.y)) throw std::invalid_argument("--y must be finite");
  const SurfaceSpec spec = build_surface(cfg.l, cfg.a);
  const std::string provenance = fmt::format("{} y={:.6f}", config_hash(cfg), f.y);
  std::string content;
  std::string name;
  if (f.kind == "surface_obj") {
    std::ostringstream obj;
    obj << "# koopman-lab surface l=" << cfg.l << " config " << provenance << "\n";
    write_obj(obj, sample_surface(spec, 8.0));
    content = obj.str();
    name = "surface.obj";
  } else {
    const SectionFigure fig = section_figure(spec, taming_p(cfg.l, cfg.taming_constant()), f.y);
    if (f.kind == "cross_section") {
      content = cross_section_svg(fig, fmt::format("Sigma^{} section y = {}", cfg.l, f.y), provenance);
      name = fmt::format("cross_section_l{}_y{}.svg", cfg.l, f.y);
    } else {
      content = "# config " + provenance + "\n" + contour_csv(fig);
      name = fmt::format("contours_l{}_y{}.csv", cfg.l, f.y);
    }
  }
  const fs::path dir = prepare_output(cfg);
  write_file(dir / name, content);
  fmt::print(out, "wrote {}\n", (dir / name).string());
  return kPass;
}

int cmd_lift(const RunConfig& cfg, const Flags& f, const CLI::App& cmd, std::ostream& out) {
  const bool has_n = cmd.get_option("--n")->count() > 0;
  const bool has_A = cmd.get_option("--A")->count() > 0;
  std::optional<SquareMatrix> a;
  if (has_A) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f.A);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("--A is not valid JSON: " + std::string(e.what()));
    }
    a = matrix_from_json(j);
  }
  const std::size_t n = has_n ? static_cast<std::size_t>(f.n) : (a ? a->dim() : 3);
  if (has_n && f.n < 1) throw std::invalid_argument("--n must be positive");
  if (a && a->dim() != n) throw std::invalid_argument(fmt::format("--A is {0}x{0} but --n is {1}", a->dim(), n));
  if (!a) {
    if (n < 3) throw std::invalid_argument("--A is required when n < 3");
    a = hyperbolic_generator(n - 3);
  }
  std::size_t dim = 0;
  try {
    dim = basis_dim(n, cfg.degree());
  } catch (const std::overflow_error&) {
    dim = kLiftCap + 1;
  }
  if (dim > kLiftCap) {
    throw std::invalid_argument(fmt::format("lifted dimension exceeds the cap of {} (n={}, m={})", kLiftCap, n,
                                            cfg.degree()));
  }
  const auto basis = make_basis(n, cfg.degree());
  ordered_json result;
  result["n"] = n;
  result["m"] = cfg.degree();
  result["dim"] = basis->dim();
  result["A"] = to_json(*a);
  result["basis"] = to_json(*basis);
  result["generator"] = to_json(lift_generator(*a, cfg.degree()));
  const std::string text = dump(result);
  const fs::path dir = prepare_output(cfg);
  write_file(dir / "lift.json", text);
  out << text;
  return kPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"koopman-lab: Koopman linearization surfaces, taming checks and figures", "koopman-lab"};
  app.require_subcommand(1);
  Flags f;

  Options build_opts, verify_opts, plot_opts, lift_opts;
  CLI::App* build = app.add_subcommand("build", "build Sigma^l: mesh, snake curve, taming polynomials and M");
  add_common(build, f, build_opts);
  CLI::App* verify = app.add_subcommand("verify", "run verification suites and write report.json");
  add_common(verify, f, verify_opts);
  verify->add_option("--suites", f.suites, "comma-separated suites or 'all'");
  verify->add_option("--turns", f.turns, "turn count for the obstruction suite (integer or 'inf')");
  verify->add_option("--degree", f.degree, "polynomial degree for the obstruction suite");
  CLI::App* plot = app.add_subcommand("plot", "emit a figure");
  add_common(plot, f, plot_opts);
  plot->add_option("--kind", f.kind, "cross_section, surface_obj or contour_csv");
  plot->add_option("--y", f.y, "section height y");
  CLI::App* lift = app.add_subcommand("lift", "print the lifted generator A^(m) with its basis");
  add_common(lift, f, lift_opts);
  lift->add_option("--n", f.n, "state dimension");
  lift->add_option("--A", f.A, "generator as a JSON array of rows");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (build->parsed()) return cmd_build(load_config(f, build_opts), out);
    if (verify->parsed()) return cmd_verify(load_config(f, verify_opts), f, *verify, out);
    if (plot->parsed()) return cmd_plot(load_config(f, plot_opts), f, out);
    return cmd_lift(load_config(f, lift_opts), f, *lift, out);
  } catch (const OutputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsageError;
  } catch (const NumericalFailure& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return kNumericalFailure;
  } catch (const std::range_error& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kUsageError;
  }
}

}  // namespace klab::cli
