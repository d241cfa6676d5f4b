// hopflab: experiment runner for Dirichlet problems whose potential may blow
// up at the boundary. Subcommands cover the forward ladder solve, the Hopf
// threshold scan, exceptional-set classification, measure boundary data, and
// FD-versus-ODE-oracle comparisons. Every output file echoes the config and
// the version string; data rows are emitted in a canonical sorted order so
// reruns (at any --threads) are byte-identical below the metadata block.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hopf/boundary.hpp"
#include "hopf/config.hpp"
#include "hopf/csv.hpp"
#include "hopf/dirichlet.hpp"
#include "hopf/geometry.hpp"
#include "hopf/oracle.hpp"
#include "hopf/potential.hpp"
#include "hopf/singular.hpp"
#include "hopf/source.hpp"

namespace {

using nlohmann::json;
using namespace hopf;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  long long seed = -1;
};

ExperimentConfig load_with_overrides(const CommonArgs& args) {
  ExperimentConfig cfg = load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (args.seed >= 0) cfg.seed = static_cast<unsigned long>(args.seed);
  if (args.threads < 1) throw ConfigError("--threads must be >= 1");
  return cfg;
}

std::filesystem::path prepare_out_dir(const ExperimentConfig& cfg) {
  std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory \"" + cfg.output_dir +
                      "\": " + ec.message());
  return dir;
}

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[40];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return stamp;
}

json json_header(const ExperimentConfig& cfg) {
  json j;
  j["version"] = kVersionString;
  j["generated"] = timestamp_utc();
  j["config"] = cfg.raw;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path.string() + "\"");
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("short write to \"" + path.string() + "\"");
}

// Runs body(0..count-1) on up to `threads` workers. Worker exceptions are
// collected and the first one rethrown after the join, so a failing cell
// aborts the command instead of dying on a detached thread.
void parallel_for(int threads, std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

CsvFile solution_table(const Grid& g, const std::vector<double>& u) {
  CsvFile t;
  if (g.domain == Domain::interval) {
    t.columns = {"x", "u"};
    for (std::size_t i = 0; i < u.size(); ++i)
      t.add_row({format_cell(g.x[i]), format_cell(u[i])});
  } else {
    t.columns = {"r", "phi", "u"};
    for (std::size_t i = 0; i < u.size(); ++i)
      t.add_row({format_cell(g.node_r(i)), format_cell(g.node_phi(i)),
                 format_cell(u[i])});
  }
  return t;
}

// Smallest energy gain over seeded zero-trace perturbations of the final
// field. The solver minimizes the discrete functional, so the gain stays
// nonnegative up to the linear-solve residual; the margin lands in the
// diagnostics as a cheap wrongness alarm.
double energy_margin(const Grid& g, const PotentialSpec& V, double cutoff,
                     const std::vector<double>& u, const SourceField& f,
                     unsigned long seed) {
  const double base = energy(g, V, cutoff, u, f);
  double scale = 0.0;
  for (double v : u) scale = std::max(scale, std::fabs(v));
  scale = 0.01 * (scale + 1e-30);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double margin = std::numeric_limits<double>::infinity();
  std::vector<double> z(u.size());
  for (int trial = 0; trial < 8; ++trial) {
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = u[i] + scale * unit(rng);
    margin = std::min(margin, energy(g, V, cutoff, z, f) - base);
  }
  return margin;
}

int run_solve(const ExperimentConfig& cfg, const CommonArgs& args) {
  const auto dir = prepare_out_dir(cfg);
  const std::size_t runs = cfg.resolutions.size();
  std::vector<json> diag(runs);
  std::vector<CsvFile> tables(runs);

  parallel_for(args.threads, runs, [&](std::size_t i) {
    const Grid g = build_grid(cfg.domain, cfg.resolutions[i], cfg.grading);
    const SourceField f = sample_source(g, cfg.source);
    const LimitSolution lim =
        solve_limit(g, cfg.potential, cfg.ladder, f, cfg.tolerances.linear);

    tables[i] = solution_table(g, lim.u);

    json levels = json::array();
    for (const SolveResult& lv : lim.levels)
      levels.push_back({{"cutoff", lv.cutoff},
                        {"residual", lv.residual},
                        {"iterations", lv.iterations},
                        {"absorption", lv.absorption}});
    const SolveResult& last = lim.levels.back();
    json run;
    run["resolution"] = cfg.resolutions[i];
    run["nodes"] = g.num_nodes();
    run["levels"] = levels;
    run["increments"] = lim.increments;
    run["converged"] = lim.converged;
    run["absorption"] = last.absorption;
    run["source_l1"] = f.norm_l1;
    run["energy"] = energy(g, cfg.potential, last.cutoff, lim.u, f);
    run["energy_margin"] =
        energy_margin(g, cfg.potential, last.cutoff, lim.u, f,
                      cfg.seed + 0x51edULL * i);
    diag[i] = std::move(run);
  });

  for (std::size_t i = 0; i < runs; ++i) {
    const auto path =
        dir / ("solution_res" + std::to_string(cfg.resolutions[i]) + ".csv");
    write_csv(path.string(), tables[i], standard_meta(cfg.raw));
    std::cout << "wrote " << path.string() << "\n";
  }
  json out = json_header(cfg);
  out["runs"] = diag;
  write_json(dir / "diagnostics.json", out);
  std::cout << "wrote " << (dir / "diagnostics.json").string() << "\n";
  return 0;
}

int run_hopf_scan(const ExperimentConfig& cfg, const CommonArgs& args) {
  if (cfg.alphas.empty())
    throw ConfigError("config key \"alphas\" is missing or empty");
  for (double a : cfg.alphas)
    if (!(a > 0.0))
      throw ConfigError("config key \"alphas\" entries must be positive");

  const auto dir = prepare_out_dir(cfg);
  std::vector<double> alphas = cfg.alphas;
  std::vector<double> strengths = cfg.strengths;
  std::sort(alphas.begin(), alphas.end());
  std::sort(strengths.begin(), strengths.end());
  std::vector<BoundaryPoint> points = cfg.boundary_points();
  std::sort(points.begin(), points.end(),
            [](const BoundaryPoint& l, const BoundaryPoint& r) {
              return l.where < r.where;
            });

  const Grid g = build_grid(cfg.domain, cfg.resolutions.back(), cfg.grading);
  const SourceField f = sample_source(g, cfg.source);

  const std::size_t cells = alphas.size() * strengths.size();
  std::vector<std::vector<std::vector<std::string>>> cell_rows(cells);

  parallel_for(args.threads, cells, [&](std::size_t cell) {
    const double alpha = alphas[cell / strengths.size()];
    const double C = strengths[cell % strengths.size()];
    const PotentialSpec V = PotentialSpec::power_law(C, alpha);
    const LimitSolution lim =
        solve_limit(g, V, cfg.ladder, f, cfg.tolerances.linear);
    for (const BoundaryPoint& a : points) {
      NormalDerivativeReport rep =
          boundary_report(lim, V, f, a, cfg.tolerances.linear);
      if (!cfg.epsilons.empty())
        rep.quotient = classical_quotient(lim, a, cfg.epsilons);
      cell_rows[cell].push_back(
          {format_cell(alpha), format_cell(C), format_cell(a.where),
           format_cell(rep.g), format_cell(rep.quotient.limit.value),
           rep.kernel.divergent ? "inf" : format_cell(rep.kernel.value),
           rep.classical_exists ? "true" : "false",
           rep.representation_holds ? "true" : "false",
           rep.hopf_positive ? "true" : "false"});
    }
  });

  CsvFile t;
  t.columns = {"alpha",      "C",         "a",
               "g",          "quotient",  "poisson",
               "classical",  "represented", "hopf_positive"};
  for (auto& rows : cell_rows)
    for (auto& row : rows) t.add_row(std::move(row));
  const auto path = dir / "hopf_scan.csv";
  write_csv(path.string(), t, standard_meta(cfg.raw));
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

const char* verdict_name(SigmaVerdict v) {
  switch (v) {
    case SigmaVerdict::in_sigma: return "in_Sigma";
    case SigmaVerdict::not_in_sigma: return "not_in_Sigma";
    case SigmaVerdict::uncertain: return "uncertain";
  }
  return "uncertain";
}

int run_sigma(const ExperimentConfig& cfg, const CommonArgs& args) {
  const auto dir = prepare_out_dir(cfg);
  std::vector<BoundaryPoint> points = cfg.boundary_points();
  std::sort(points.begin(), points.end(),
            [](const BoundaryPoint& l, const BoundaryPoint& r) {
              return l.where < r.where;
            });
  const Grid g = build_grid(cfg.domain, cfg.resolutions.back(), cfg.grading);

  std::vector<std::vector<std::string>> rows(points.size());
  parallel_for(args.threads, points.size(), [&](std::size_t i) {
    const SigmaReport rep = classify_sigma(g, cfg.potential, cfg.ladder,
                                           points[i], cfg.tolerances.linear);
    rows[i] = {format_cell(points[i].where),
               rep.ancona.divergent ? "inf" : format_cell(rep.ancona.value),
               format_cell(rep.dual.mass.back()),
               format_cell(rep.dual.defect.alpha_hat), verdict_name(rep.verdict),
               rep.consistent ? "true" : "false"};
  });

  CsvFile t;
  t.columns = {"a",       "ancona_value_or_inf", "pa_mass_final",
               "alpha_hat", "verdict",           "consistent"};
  for (auto& row : rows) t.add_row(std::move(row));
  const auto path = dir / "sigma.csv";
  write_csv(path.string(), t, standard_meta(cfg.raw));
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int run_measure_bvp(const ExperimentConfig& cfg, const CommonArgs&) {
  if (!cfg.has_measure)
    throw ConfigError("config key \"measure\" is missing");
  const auto dir = prepare_out_dir(cfg);
  const Grid g = build_grid(cfg.domain, cfg.resolutions.back(), cfg.grading);
  const BoundaryMeasure nu = config_measure(cfg, g);

  const MeasureSolveReport rep =
      measure_bvp(g, cfg.potential, cfg.ladder, nu, cfg.tolerances.classify);

  const auto sol_path = dir / "measure_solution.csv";
  write_csv(sol_path.string(), solution_table(g, rep.u),
            standard_meta(cfg.raw));
  std::cout << "wrote " << sol_path.string() << "\n";

  json out = json_header(cfg);
  out["datum_total"] = nu.total(g);
  out["mass"] = rep.mass;
  json atoms = json::array();
  for (const BoundaryAtom& atom : rep.defect.atoms)
    atoms.push_back({{"point", atom.point.where}, {"mass", atom.mass}});
  out["defect_atoms"] = atoms;
  out["defect_total"] = rep.defect_total;
  out["representable"] = rep.representable;
  write_json(dir / "defect.json", out);
  std::cout << "wrote " << (dir / "defect.json").string() << "\n";
  return 0;
}

int run_oracle_compare(const ExperimentConfig& cfg, const CommonArgs&) {
  if (cfg.domain == Domain::disk) {
    if (cfg.potential.kind == PotentialKind::power_law &&
        cfg.potential.anchor != PowerAnchor::boundary)
      throw ConfigError(
          "oracle-compare needs a radial configuration; an endpoint-anchored "
          "potential on the disk is not radial");
    if (cfg.has_measure && !cfg.atoms.empty())
      throw ConfigError(
          "oracle-compare needs a radial configuration; boundary atoms on "
          "the disk are not radial");
  }

  const auto dir = prepare_out_dir(cfg);
  const Grid g = build_grid(cfg.domain, cfg.resolutions.back(), cfg.grading);
  const SourceField f = sample_source(g, cfg.source);
  const LimitSolution lim =
      solve_limit(g, cfg.potential, cfg.ladder, f, cfg.tolerances.linear);

  // The oracle walks exactly the cutoffs the grid solve walked, so the two
  // sides differ by discretization only.
  TruncationLadder walked;
  walked.tau_stop = cfg.ladder.tau_stop;
  for (const SolveResult& lv : lim.levels) walked.cutoffs.push_back(lv.cutoff);

  oracle::Problem prob{cfg.domain, cfg.potential, cfg.source,
                       walked.cutoffs.back()};
  const std::vector<double> probes =
      cfg.domain == Domain::interval
          ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9}
          : std::vector<double>{0.0, 0.25, 0.5, 0.75, 0.9};
  const oracle::Reference ref = oracle::solve(prob, probes);

  CsvFile t;
  t.columns = {"quantity", "where", "fd", "oracle", "abs_error", "rel_error"};
  auto add = [&](const char* what, double where, double fd, double exact) {
    const double abs_err = std::fabs(fd - exact);
    const double rel_err = abs_err / std::max(std::fabs(exact), 1e-30);
    t.add_row({what, format_cell(where), format_cell(fd), format_cell(exact),
               format_cell(abs_err), format_cell(rel_err)});
  };

  std::vector<BoundaryPoint> points = cfg.boundary_points();
  std::sort(points.begin(), points.end(),
            [](const BoundaryPoint& l, const BoundaryPoint& r) {
              return l.where < r.where;
            });
  for (const BoundaryPoint& a : points) {
    const FluxLadder flux = pointwise_normal_derivative(lim, a);
    const int end = cfg.domain == Domain::interval && a.where == 1.0 ? 1 : 0;
    const oracle::LadderReference lref =
        oracle::truncation_limit(prob, walked, end);
    add("g", a.where, flux.limit.value, lref.limit.value);
  }
  for (std::size_t i = 0; i < probes.size(); ++i) {
    // x on the interval; on the disk (r, phi=0) maps to the same (x, y).
    const Point p{probes[i], 0.0};
    add("u", probes[i], field_at(g, lim.u, p), ref.values[i]);
  }

  const auto path = dir / "oracle_compare.csv";
  write_csv(path.string(), t, standard_meta(cfg.raw));
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet laboratory for boundary-singular potentials"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "experiment config (JSON)")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory override");
    sub->add_option("--threads", args.threads,
                    "workers for independent cells (default 1)");
    sub->add_option("--seed", args.seed, "seed override");
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "truncation-ladder solve with diagnostics");
  CLI::App* scan = app.add_subcommand(
      "hopf-scan", "normal-derivative scan over a power-law grid");
  CLI::App* sigma = app.add_subcommand(
      "sigma", "exceptional-set classification at boundary points");
  CLI::App* measure = app.add_subcommand(
      "measure-bvp", "ladder solve with measure boundary data");
  CLI::App* compare = app.add_subcommand(
      "oracle-compare", "grid solve versus the ODE reference");
  for (CLI::App* sub : {solve, scan, sigma, measure, compare}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig cfg = load_with_overrides(args);
    if (solve->parsed()) return run_solve(cfg, args);
    if (scan->parsed()) return run_hopf_scan(cfg, args);
    if (sigma->parsed()) return run_sigma(cfg, args);
    if (measure->parsed()) return run_measure_bvp(cfg, args);
    if (compare->parsed()) return run_oracle_compare(cfg, args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
