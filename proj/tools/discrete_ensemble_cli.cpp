// discrete-ensemble: CLI front end. Computes density/kernel/correlator tables,
// limit-shape and scaling comparisons, MCMC histograms, and runs the full
// validation suite. Emits plot-ready CSV or JSON; every file output gets a
// .meta.json sidecar with the fully resolved configuration.
//
// Exit codes: 0 success, 1 failed validation or numeric error, 2 config error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dens/asympt.hpp"
#include "dens/common.hpp"
#include "dens/ell.hpp"
#include "dens/exact_kernel.hpp"
#include "dens/mcmc.hpp"
#include "dens/validate.hpp"

using nlohmann::json;

namespace {

struct RunConfig {
  std::string subcommand;
  // alpha source (exactly one)
  double alpha = -1.0;
  std::string alphas_csv;
  std::string alpha_file;
  int n = 0;
  // ranges
  int pmax = -1;
  std::string window;      // "p0:p1,q0:q1"
  std::string sigma_grid;  // "lo:hi:steps"
  // knobs
  long long steps = 1'000'000;
  unsigned long long seed = 1;
  double tolerance = 1e-12;
  int threads = 0;
  std::string format = "csv";
  std::string out;
  // per-subcommand extras
  double rho = 0.5;
  int center = -1;
  std::string separations = "1,2,3,4,5";
  std::string n_list = "64,128";
  std::string level = "full";
  int criterion = 0;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_value(row[i]);
    os << "\n";
  }
}

void write_json_rows(std::ostream& os, const Table& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
    arr.push_back(obj);
  }
  os << arr.dump(2) << "\n";
}

json resolved_config(const RunConfig& cfg, const dens::AlphaSpec* alphas) {
  json j;
  j["command"] = cfg.subcommand;
  if (alphas) {
    j["alphas"] = alphas->values();
    j["n"] = alphas->n();
  }
  j["pmax"] = cfg.pmax;
  if (!cfg.window.empty()) j["window"] = cfg.window;
  if (!cfg.sigma_grid.empty()) j["sigma_grid"] = cfg.sigma_grid;
  j["steps"] = cfg.steps;
  j["seed"] = cfg.seed;
  j["tolerance"] = cfg.tolerance;
  j["threads"] = dens::resolve_threads(cfg.threads);
  j["format"] = cfg.format;
  j["tool_version"] = "0.1.0";
  return j;
}

void emit_table(const RunConfig& cfg, const Table& t, const json& config) {
  if (cfg.out.empty()) {
    if (cfg.format == "json")
      write_json_rows(std::cout, t);
    else
      write_csv(std::cout, t);
    return;
  }
  std::ofstream os(cfg.out);
  if (!os) throw std::runtime_error("cannot open output file: " + cfg.out);
  if (cfg.format == "json")
    write_json_rows(os, t);
  else
    write_csv(os, t);
  std::ofstream meta(cfg.out + ".meta.json");
  meta << config.dump(2) << "\n";
}

dens::AlphaSpec resolve_alphas(const RunConfig& cfg) {
  int sources = 0;
  if (cfg.alpha >= 0.0) ++sources;
  if (!cfg.alphas_csv.empty()) ++sources;
  if (!cfg.alpha_file.empty()) ++sources;
  if (sources != 1)
    throw CLI::ValidationError(
        "exactly one of --alpha, --alphas, --alpha-file is required");

  if (cfg.alpha >= 0.0) {
    const int n = cfg.n > 0 ? cfg.n : 1;
    return dens::AlphaSpec::equal(cfg.alpha, n);
  }
  if (!cfg.alphas_csv.empty()) {
    std::vector<double> vals;
    std::stringstream ss(cfg.alphas_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    return dens::AlphaSpec::from_values(vals);
  }
  std::ifstream is(cfg.alpha_file);
  if (!is) throw CLI::ValidationError("cannot read --alpha-file " + cfg.alpha_file);
  json j;
  is >> j;
  const bool has_list = j.contains("alphas");
  const bool has_equal = j.contains("alpha");
  if (has_list == has_equal)
    throw CLI::ValidationError(
        "--alpha-file must contain exactly one of {\"alphas\": [...]} or "
        "{\"alpha\": x, \"n\": N}");
  if (has_list) return dens::AlphaSpec::from_values(j["alphas"].get<std::vector<double>>());
  return dens::AlphaSpec::equal(j["alpha"].get<double>(), j["n"].get<int>());
}

dens::KernelWindow parse_window(const std::string& s) {
  dens::KernelWindow w;
  if (std::sscanf(s.c_str(), "%d:%d,%d:%d", &w.p_lo, &w.p_hi, &w.q_lo, &w.q_hi) != 4)
    throw CLI::ValidationError("--window expects p0:p1,q0:q1");
  return w;
}

std::vector<double> parse_sigma_grid(const std::string& s) {
  double lo, hi;
  int steps;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3 || steps < 1)
    throw CLI::ValidationError("--sigma-grid expects lo:hi:steps");
  std::vector<double> grid;
  for (int i = 0; i <= steps; ++i) grid.push_back(lo + (hi - lo) * i / steps);
  return grid;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

void add_common_options(CLI::App* sub, RunConfig& cfg, bool wants_alpha = true) {
  if (wants_alpha) {
    sub->add_option("--alpha", cfg.alpha, "equal-alpha shorthand (pairs with --n)");
    sub->add_option("--alphas", cfg.alphas_csv, "comma-separated alpha list");
    sub->add_option("--alpha-file", cfg.alpha_file, "JSON file with the alpha source");
    sub->add_option("--n", cfg.n, "ensemble size for --alpha");
  }
  sub->add_option("--pmax", cfg.pmax, "largest level index tabulated");
  sub->add_option("--window", cfg.window, "kernel window p0:p1,q0:q1");
  sub->add_option("--sigma-grid", cfg.sigma_grid, "sigma grid lo:hi:steps");
  sub->add_option("--steps", cfg.steps, "MCMC steps");
  sub->add_option("--seed", cfg.seed, "RNG seed");
  sub->add_option("--tolerance", cfg.tolerance, "tail/truncation tolerance");
  sub->add_option("--threads", cfg.threads,
                  "worker threads (default: DISCRETE_ENSEMBLE_THREADS or 1)");
  sub->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out, "output path (stdout when omitted)");
}

int run_density(const RunConfig& cfg) {
  const auto alphas = resolve_alphas(cfg);
  const auto prof = dens::density_profile(alphas, cfg.pmax, cfg.tolerance);
  Table t;
  t.columns = {"p", "rho", "n_rho"};
  for (int p = 0; p <= prof.p_max(); ++p) {
    const double rho = prof.rho[static_cast<std::size_t>(p)];
    t.rows.push_back({static_cast<double>(p), rho, alphas.n() * rho});
  }
  json meta = resolved_config(cfg, &alphas);
  meta["tail_mass"] = prof.tail_mass;
  emit_table(cfg, t, meta);
  return 0;
}

int run_kernel(const RunConfig& cfg) {
  const auto alphas = resolve_alphas(cfg);
  const auto w = cfg.window.empty() ? dens::KernelWindow{0, 16, 0, 16}
                                    : parse_window(cfg.window);
  const auto table = dens::kernel_table(alphas, w, dens::resolve_threads(cfg.threads));
  Table t;
  t.columns = {"p", "q", "r"};
  for (int p = w.p_lo; p <= w.p_hi; ++p)
    for (int q = w.q_lo; q <= w.q_hi; ++q)
      t.rows.push_back({static_cast<double>(p), static_cast<double>(q), table.at(p, q)});
  emit_table(cfg, t, resolved_config(cfg, &alphas));
  return 0;
}

int run_pair(const RunConfig& cfg) {
  const auto alphas = resolve_alphas(cfg);
  const auto w = cfg.window.empty() ? dens::KernelWindow{0, 16, 0, 16}
                                    : parse_window(cfg.window);
  Table t;
  t.columns = {"p", "q", "connected"};
  for (int p = w.p_lo; p <= w.p_hi; ++p)
    for (int q = w.q_lo; q <= w.q_hi; ++q)
      t.rows.push_back({static_cast<double>(p), static_cast<double>(q),
                        dens::pair_correlator(p, q, alphas)});
  emit_table(cfg, t, resolved_config(cfg, &alphas));
  return 0;
}

int run_limit_shape(const RunConfig& cfg) {
  const auto alphas = resolve_alphas(cfg);
  const int n = alphas.n();
  Table t;
  json meta = resolved_config(cfg, &alphas);

  if (alphas.equal_flag()) {
    const dens::LimitShape shape(alphas.equal_value());
    const int p_hi = cfg.pmax > 0
                         ? cfg.pmax
                         : static_cast<int>(std::ceil(shape.a() * n)) + 4;
    const auto prof = dens::density_profile(alphas, p_hi);
    t.columns = {"sigma", "n_rho_finite", "rho_limit"};
    for (int p = 0; p <= prof.p_max(); ++p) {
      const double sigma = static_cast<double>(p) / n;
      t.rows.push_back({sigma, n * prof.rho[static_cast<std::size_t>(p)],
                        shape.density(sigma)});
    }
    const auto cmp = dens::finite_n_vs_limit(alphas.equal_value(), n);
    meta["bulk_sup_norm"] = cmp.sup_norm;
    meta["a"] = shape.a();
    meta["b"] = shape.b();
    std::cerr << "bulk sup-norm |N rho - rho_limit| = " << cmp.sup_norm << "\n";
  } else {
    // General alphas: asymptotic curve from the resolvent continuation.
    const dens::ResolventSolver solver(alphas);
    const auto grid = cfg.sigma_grid.empty()
                          ? parse_sigma_grid("0.02:" +
                                             std::to_string(solver.edges().upper + 0.5) +
                                             ":400")
                          : parse_sigma_grid(cfg.sigma_grid);
    const auto sols = solver.solve_grid(grid);
    t.columns = {"sigma", "rho_limit", "residual"};
    for (const auto& s : sols) t.rows.push_back({s.sigma, s.rho, s.residual});
    meta["edge_lower"] = solver.edges().lower;
    meta["edge_upper"] = solver.edges().upper;
  }
  emit_table(cfg, t, meta);
  return 0;
}

int run_edge(const RunConfig& cfg) {
  const double alpha = cfg.alpha >= 0.0 ? cfg.alpha : 0.25;
  const auto sizes = parse_int_list(cfg.n_list);
  const auto rep = dens::edge_scaling_check(alpha, sizes);
  Table t;
  t.columns = {"n_small", "n_large", "collapse_distance", "scale_f", "scale_x"};
  for (const auto& c : rep.collapses)
    t.rows.push_back({static_cast<double>(c.n_small), static_cast<double>(c.n_large),
                      c.distance, c.scale_f, c.scale_x});
  const dens::AlphaSpec meta_alphas = dens::AlphaSpec::equal(alpha, sizes.front());
  json meta = resolved_config(cfg, &meta_alphas);
  meta["exponent"] = rep.exponent;
  meta["n_list"] = sizes;
  std::cerr << "edge exponent fit = " << rep.exponent << " (expected 0.5)\n";
  emit_table(cfg, t, meta);
  return 0;
}

int run_sine(const RunConfig& cfg) {
  const auto alphas = resolve_alphas(cfg);
  if (!alphas.equal_flag())
    throw CLI::ValidationError("sine expects the equal-alpha ensemble");
  const auto rep = dens::sine_kernel_check(alphas.equal_value(), alphas.n(),
                                           cfg.center, parse_int_list(cfg.separations));
  Table t;
  t.columns = {"separation", "measured", "predicted", "deviation", "relative"};
  for (const auto& row : rep.rows)
    t.rows.push_back({static_cast<double>(row.separation), row.measured, row.predicted,
                      row.deviation, row.relative ? 1.0 : 0.0});
  json meta = resolved_config(cfg, &alphas);
  meta["center_p"] = rep.center_p;
  meta["rho_bar"] = rep.rho_bar;
  meta["saturated_max_abs"] = rep.saturated_max_abs;
  std::cerr << "center p=" << rep.center_p << " rho_bar=" << rep.rho_bar
            << " saturated max |corr|=" << rep.saturated_max_abs << "\n";
  emit_table(cfg, t, meta);
  return 0;
}

int run_small_weights(const RunConfig& cfg) {
  const int p_hi = cfg.pmax > 0 ? cfg.pmax : 20;
  Table t;
  t.columns = {"p", "p_inf", "m_p", "r_inf_next"};
  for (int p = 0; p <= p_hi; ++p)
    t.rows.push_back({static_cast<double>(p), dens::small_weight_density(p, cfg.rho),
                      dens::laguerre_m(p, cfg.rho),
                      dens::small_weight_correlator(p, p + 1, cfg.rho)});
  json meta = resolved_config(cfg, nullptr);
  meta["rho"] = cfg.rho;
  emit_table(cfg, t, meta);
  return 0;
}

int run_sample(const RunConfig& cfg) {
  const auto alphas = resolve_alphas(cfg);
  dens::McmcOptions opts;
  opts.steps = cfg.steps;
  opts.seed = cfg.seed;
  dens::McmcChain chain(alphas, opts);
  chain.run();
  const auto est = dens::estimate_density(chain);
  Table t;
  t.columns = {"p", "rho", "sigma"};
  const int p_hi = cfg.pmax > 0 ? std::min(cfg.pmax, est.profile.p_max())
                                : est.profile.p_max();
  for (int p = 0; p <= p_hi; ++p)
    t.rows.push_back({static_cast<double>(p), est.profile.rho[static_cast<std::size_t>(p)],
                      est.sigma[static_cast<std::size_t>(p)]});
  json meta = resolved_config(cfg, &alphas);
  meta["acceptance_rate"] = chain.acceptance_rate();
  meta["samples"] = chain.samples();
  meta["error_bars_usable"] = est.usable;
  emit_table(cfg, t, meta);
  return 0;
}

int run_validate(const RunConfig& cfg) {
  const auto level = cfg.level == "quick" ? dens::ValidationLevel::quick
                                          : dens::ValidationLevel::full;
  const auto report = dens::run_acceptance(level, dens::resolve_threads(cfg.threads),
                                           cfg.criterion);
  json j = json::array();
  for (const auto& c : report.criteria) {
    json e;
    e["id"] = c.id;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["seconds"] = c.seconds;
    e["detail"] = c.detail;
    if (!c.note.empty()) e["note"] = c.note;
    j.push_back(e);
    if (cfg.format != "json")
      std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name
                << "  [" << c.detail << "]"
                << (c.note.empty() ? "" : "  note: " + c.note) << "\n";
  }
  if (cfg.format == "json") std::cout << j.dump(2) << "\n";
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out);
    os << j.dump(2) << "\n";
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete-ensemble: exact and asymptotic statistics of the "
               "integer-level ensemble P ~ Delta(h) chi_h({alpha})"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* density = app.add_subcommand("density", "exact level density table");
  add_common_options(density, cfg);
  auto* kernel = app.add_subcommand("kernel", "kernel R(p,q) window");
  add_common_options(kernel, cfg);
  auto* pair = app.add_subcommand("pair", "connected pair correlator window");
  add_common_options(pair, cfg);
  auto* limit = app.add_subcommand("limit-shape", "finite-N vs asymptotic density");
  add_common_options(limit, cfg);
  auto* edge = app.add_subcommand("edge", "N^{2/3} edge-scaling collapse report");
  add_common_options(edge, cfg);
  edge->add_option("--n-list", cfg.n_list, "comma-separated sizes (default 64,128)");
  auto* sine = app.add_subcommand("sine", "sine-kernel universality table");
  add_common_options(sine, cfg);
  sine->add_option("--center", cfg.center, "bulk center p0 (default: auto)");
  sine->add_option("--separations", cfg.separations, "comma-separated |p-q| values");
  auto* small = app.add_subcommand("small-weights", "Laguerre small-weight tables");
  add_common_options(small, cfg, /*wants_alpha=*/false);
  small->add_option("--rho", cfg.rho, "scaling parameter rho = N(1-alpha)");
  auto* sample = app.add_subcommand("sample", "MCMC histogram with error bars");
  add_common_options(sample, cfg);
  auto* validate = app.add_subcommand("validate", "run the validation suite");
  add_common_options(validate, cfg, /*wants_alpha=*/false);
  validate->add_option("--level", cfg.level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));
  validate->add_option("--criterion", cfg.criterion, "run a single criterion id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (density->parsed()) return run_density(cfg);
    if (kernel->parsed()) return run_kernel(cfg);
    if (pair->parsed()) return run_pair(cfg);
    if (limit->parsed()) return run_limit_shape(cfg);
    if (edge->parsed()) return run_edge(cfg);
    if (sine->parsed()) return run_sine(cfg);
    if (small->parsed()) return run_small_weights(cfg);
    if (sample->parsed()) return run_sample(cfg);
    if (validate->parsed()) return run_validate(cfg);
    return 2;
  } catch (const CLI::ValidationError& e) {
    json diag{{"error", {{"type", "config"}, {"message", e.what()}}}};
    std::cerr << diag.dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    json diag{{"error", {{"type", "config"}, {"message", e.what()}}}};
    std::cerr << diag.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json diag{{"error", {{"type", "numeric"}, {"message", e.what()}}}};
    std::cerr << diag.dump() << "\n";
    return 1;
  }
}
