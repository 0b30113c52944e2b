#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "CLI11.hpp"
#include "hillspec/errors.hpp"
#include "hillspec/oracle.hpp"
#include "hillspec/parallel.hpp"
#include "hillspec/potential_io.hpp"
#include "hillspec/spectral.hpp"
#include "hillspec/variational.hpp"

namespace hillspec::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFdStep = 1e-4;

PeriodicPotential load_potential(const RunConfig& c) {
  if (c.potential.empty()) throw std::invalid_argument("--potential is required");
  PeriodicPotential p = resolve_potential(c.potential);
  return c.periods > 1 ? repeat_period(p, c.periods) : p;
}

LadderOptions ladder_options(const RunConfig& c) {
  LadderOptions o;
  if (c.simple_shooting) o.mode = ShootingMode::simple;
  return o;
}

std::vector<double> requested_lambdas(const RunConfig& c) {
  if (!c.lambdas_file.empty()) return read_lambdas(c.lambdas_file);
  if (!c.range) throw std::invalid_argument("give --range lo:hi or --lambdas FILE");
  return lambda_grid(*c.range, c.grid);
}

void describe(Table& t, const char* command, const RunConfig& c, const PeriodicPotential& p) {
  t.meta["command"] = command;
  t.meta["potential"] = p.name();
  t.meta["period"] = p.period();
  t.meta["tol"] = c.tol;
}

Cell optional(double v) { return std::isfinite(v) ? Cell{v} : Cell{}; }

double relative_gap(double fd, double analytic) {
  return std::fabs(fd - analytic) / std::max(1.0, std::fabs(analytic));
}

}  // namespace

CommandResult cmd_bands(const RunConfig& c) {
  validate(c);
  if (!c.range) throw std::invalid_argument("bands needs --range lo:hi");
  const PeriodicPotential p = load_potential(c);
  const MeshHierarchy meshes(p, ladder_options(c));

  BandSearchOptions opt;
  opt.scan_points = c.scan_points;
  opt.edge_tol = c.edge_tol;
  opt.threads = c.threads;
  opt.ladder = ladder_options(c);
  const BandChart chart = find_bands(meshes, *c.range, opt);

  CommandResult r;
  Table& t = r.table;
  describe(t, "bands", c, p);
  t.meta["range_lo"] = c.range->first;
  t.meta["range_hi"] = c.range->second;
  t.meta["scan_points"] = c.scan_points;
  t.meta["edge_tol"] = c.edge_tol;
  t.columns = {"band", "left", "right", "left_tag", "right_tag", "converged"};

  // Each located edge is re-checked with the adaptive ladder at the
  // requested tolerance.
  const auto edge_converged = [&](const BandEdge& e) {
    if (e.tag == EdgeTag::range_limit) return true;
    try {
      monodromy_at(meshes, e.lambda, c.tol);
      return true;
    } catch (const ConvergenceError&) {
      return false;
    }
  };
  std::int64_t index = 0;
  for (const auto& band : chart.intervals) {
    const bool ok = edge_converged(band.left) && edge_converged(band.right);
    if (!ok) {
      r.exit_code = kExitNumerical;
      r.warnings.push_back("ladder did not converge at an edge of band " +
                           std::to_string(index));
    }
    t.rows.push_back({++index, band.left.lambda, band.right.lambda,
                      std::string(to_string(band.left.tag)),
                      std::string(to_string(band.right.tag)), ok});
  }
  return r;
}

CommandResult cmd_density(const RunConfig& c) {
  validate(c);
  const PeriodicPotential p = load_potential(c);
  const MeshHierarchy meshes(p, ladder_options(c));
  const BoundaryCondition bc(c.alpha);
  const std::vector<double> lambdas = requested_lambdas(c);

  std::vector<DensityPoint> points(lambdas.size());
  std::vector<std::string> failures(lambdas.size());
  const auto evaluate_all = [&] {
    parallel_for(lambdas.size(), c.threads, [&](std::size_t i) {
      try {
        points[i] = density_best_effort(meshes, bc, lambdas[i], c.tol);
      } catch (const Error& e) {
        points[i] = DensityPoint{lambdas[i], kNaN, false, 0, false, false};
        failures[i] = e.what();
      }
    });
  };

  CommandResult r;
  Table& t = r.table;
  describe(t, "density", c, p);
  t.meta["alpha"] = c.alpha;
  t.meta["shooting"] = c.simple_shooting ? "simple" : "double";

  if (c.bench > 0) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    for (int rep = 0; rep < c.bench; ++rep) evaluate_all();
    const double seconds = std::chrono::duration<double>(clock::now() - start).count();
    t.meta["bench_repetitions"] = c.bench;
    t.meta["bench_mean_seconds_per_grid"] = seconds / c.bench;
    t.meta["bench_mean_seconds_per_evaluation"] =
        seconds / (static_cast<double>(c.bench) * static_cast<double>(lambdas.size()));
  } else {
    evaluate_all();
  }

  t.columns = {"lambda", "f", "in_gap", "mesh_N", "converged", "indeterminate"};
  if (c.rho) t.columns.push_back("rho_trapezoid_cumulative");
  double rho = 0.0;
  std::int64_t failed = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const DensityPoint& d = points[i];
    if (!d.converged) ++failed;
    if (!failures[i].empty()) r.warnings.push_back(failures[i]);
    std::vector<Cell> row{d.lambda, optional(d.f), d.in_gap,
                          static_cast<std::int64_t>(d.mesh_N), d.converged, d.indeterminate};
    if (c.rho) {
      if (i > 0) rho += 0.5 * (points[i - 1].f + d.f) * (d.lambda - points[i - 1].lambda);
      row.push_back(optional(rho));
    }
    t.rows.push_back(std::move(row));
  }
  t.meta["failures"] = failed;
  if (failed > 0) {
    r.exit_code = kExitNumerical;
    r.warnings.push_back(std::to_string(failed) + " point(s) did not converge");
  }
  return r;
}

CommandResult cmd_edge(const RunConfig& c) {
  validate(c);
  if (!c.bracket) throw std::invalid_argument("edge needs --bracket lo:hi");
  const PeriodicPotential p = load_potential(c);
  const MeshHierarchy meshes(p, ladder_options(c));
  const BoundaryCondition bc(c.alpha);
  if (!bc.is_dirichlet() && !bc.is_neumann()) {
    throw UnsupportedBoundaryError("edge formulas exist only for alpha = 0 and alpha = pi/2");
  }

  const double star = locate_edge(meshes, *c.bracket, std::min(c.edge_tol, c.tol / 10));
  const EdgeTag tag = classify_edge(monodromy_at(meshes, star, c.tol).coefficients);

  // The band lies on the side where g is positive.
  const int top = meshes.levels() - 1;
  const double probe = 1e-6 * std::max(1.0, std::fabs(star));
  const bool below = monodromy_at_level(meshes, star - probe, top).discriminant_defect() > 0.0;
  const bool above = monodromy_at_level(meshes, star + probe, top).discriminant_defect() > 0.0;
  if (!below && !above) throw BracketError("no stability interval next to the located edge");
  const double side = below ? -1.0 : 1.0;

  std::vector<double> lambdas;
  if (!c.lambdas_file.empty() || c.range) {
    lambdas = requested_lambdas(c);
  } else {
    for (int k = 6; k >= 1; --k) lambdas.push_back(star + side * 4e-4 * k);
  }

  CommandResult r;
  Table& t = r.table;
  describe(t, "edge", c, p);
  t.meta["alpha"] = c.alpha;
  t.meta["lambda_star"] = star;
  t.meta["tag"] = std::string(to_string(tag));
  t.meta["band_side"] = below ? "below" : "above";
  t.columns = {"lambda", "f_clamped", "f_edge", "f_edge_fixed_factor", "rate_clamped",
               "rate_edge"};

  double prev_l = kNaN, prev_clamped = kNaN, prev_edge = kNaN;
  for (double l : lambdas) {
    double clamped = kNaN, edge = kNaN, fixed = kNaN;
    try {
      const DensityPoint d = density_best_effort(meshes, bc, l, c.tol);
      clamped = d.f;
      if (!d.converged) r.exit_code = kExitNumerical;
      if (l != star) {
        edge = density_near_edge(meshes, bc, l, star, c.tol);
        fixed = density_near_edge(meshes, bc, l, star, c.tol, EdgeFactor::at_edge);
      }
    } catch (const Error& e) {
      r.exit_code = kExitNumerical;
      r.warnings.push_back(e.what());
    }
    const auto rate = [&](double f_prev, double f) {
      if (!(f_prev > 0.0) || !(f > 0.0) || !std::isfinite(prev_l) || prev_l == l) return kNaN;
      if (l == star || prev_l == star) return kNaN;
      return growth_rate({prev_l, f_prev}, {l, f}, star);
    };
    t.rows.push_back({l, optional(clamped), optional(edge), optional(fixed),
                      optional(rate(prev_clamped, clamped)), optional(rate(prev_edge, edge))});
    prev_l = l;
    prev_clamped = clamped;
    prev_edge = edge;
  }
  return r;
}

CommandResult cmd_vcheck(const RunConfig& c) {
  validate(c);
  const PeriodicPotential p = load_potential(c);
  const MeshHierarchy meshes(p, ladder_options(c));
  const std::vector<double> lambdas = requested_lambdas(c);

  CommandResult r;
  Table& t = r.table;
  describe(t, "vcheck", c, p);
  t.meta["fd_step"] = kFdStep;
  t.columns = {"lambda", "fd_u_xl", "u_xl", "fd_v_l", "v_l", "rel_diff"};
  for (double l : lambdas) {
    try {
      const VariationalResult v = variational_monodromy(meshes, l, c.tol);
      // Differences at the ladder level the analytic values converged on.
      const auto at = [&](double x) { return monodromy_at_level(meshes, x, v.level); };
      const double fd_uxl = finite_difference_lambda([&](double x) { return at(x).c12; }, l, kFdStep);
      const double fd_vl = finite_difference_lambda([&](double x) { return at(x).c21; }, l, kFdStep);
      const double worst = std::max(relative_gap(fd_uxl, v.derivatives.u_xl),
                                    relative_gap(fd_vl, v.derivatives.v_l));
      t.rows.push_back({l, fd_uxl, v.derivatives.u_xl, fd_vl, v.derivatives.v_l, worst});
    } catch (const Error& e) {
      r.exit_code = kExitNumerical;
      r.warnings.push_back(e.what());
      t.rows.push_back({l, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});
    }
  }
  return r;
}

CommandResult cmd_oracle(const RunConfig& c) {
  validate(c);
  const PeriodicPotential p = load_potential(c);
  const MeshHierarchy meshes(p, ladder_options(c));
  const std::vector<double> lambdas = requested_lambdas(c);

  CommandResult r;
  Table& t = r.table;
  describe(t, "oracle", c, p);
  t.columns = {"lambda", "u", "u_x", "v", "v_x", "wronskian_defect", "oracle_trace",
               "production_trace", "difference"};
  for (double l : lambdas) {
    try {
      const OracleSolution o = integrate_reference(p, l, 1e-13);
      double production = kNaN;
      try {
        production = monodromy_at(meshes, l, c.tol).coefficients.trace();
      } catch (const ConvergenceError& e) {
        r.exit_code = kExitNumerical;
        r.warnings.push_back(e.what());
        production = e.best().coefficients.trace();
      }
      t.rows.push_back({l, o.u, o.u_x, o.v, o.v_x, std::fabs(o.wronskian() - 1.0), o.trace(), production,
                        production - o.trace()});
    } catch (const Error& e) {
      r.exit_code = kExitNumerical;
      r.warnings.push_back(e.what());
    }
  }
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral density of Hill's equation by double shooting", "hillspec"};
  app.require_subcommand(1);

  RunConfig config;
  std::string alpha = "0";
  std::string range, bracket, format = "csv";

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--potential,-p", config.potential,
                    "builtin name (mathieu, ex2, ex3, ex4, ex5) or step-potential JSON file")
        ->required();
    sub->add_option("--periods", config.periods, "treat k periods as one (k >= 1)");
    sub->add_option("--tol", config.tol, "ladder tolerance in [1e-12, 1e-2]");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", config.output, "write here instead of stdout");
    sub->add_option("--threads", config.threads, "worker threads");
    sub->add_flag("--simple-shooting", config.simple_shooting,
                  "diagnostic: unscaled forward-only shooting");
  };
  const auto lambdas = [&](CLI::App* sub) {
    sub->add_option("--range", range, "lambda range lo:hi");
    sub->add_option("--grid", config.grid, "grid points over the range");
    sub->add_option("--lambdas", config.lambdas_file, "file of lambda values");
  };

  CLI::App* bands = app.add_subcommand("bands", "stability intervals with edge tags");
  common(bands);
  bands->add_option("--range", range, "lambda range lo:hi")->required();
  bands->add_option("--scan-points", config.scan_points, "grid size of the sign scan");
  bands->add_option("--edge-tol", config.edge_tol, "bisection width");

  CLI::App* density = app.add_subcommand("density", "density f(lambda) on a grid");
  common(density);
  lambdas(density);
  density->add_option("--alpha", alpha, "boundary angle, e.g. 0, pi/6, pi/2");
  density->add_flag("--rho", config.rho, "add the cumulative trapezoid integral of f");
  density->add_option("--bench", config.bench, "time this many repetitions of the grid")
      ->expected(0, 1)
      ->default_str("100");

  CLI::App* edge = app.add_subcommand("edge", "band edge and densities approaching it");
  common(edge);
  lambdas(edge);
  edge->add_option("--bracket", bracket, "lo:hi around one edge")->required();
  edge->add_option("--alpha", alpha, "0 (Dirichlet) or pi/2 (Neumann)");
  edge->add_option("--edge-tol", config.edge_tol, "bisection width");

  CLI::App* vcheck = app.add_subcommand("vcheck", "lambda-derivatives against differences");
  common(vcheck);
  lambdas(vcheck);

  CLI::App* oracle = app.add_subcommand("oracle", "");
  oracle->group("");  // hidden
  common(oracle);
  lambdas(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  if (density->count("--bench") > 0 && config.bench == 0) config.bench = 100;

  CommandResult result;
  try {
    config.alpha = parse_alpha(alpha);
    config.format = format == "json" ? Format::json : Format::csv;
    if (!range.empty()) config.range = parse_range(range);
    if (!bracket.empty()) config.bracket = parse_range(bracket);

    if (bands->parsed()) result = cmd_bands(config);
    if (density->parsed()) result = cmd_density(config);
    if (edge->parsed()) result = cmd_edge(config);
    if (vcheck->parsed()) result = cmd_vcheck(config);
    if (oracle->parsed()) result = cmd_oracle(config);
  } catch (const std::invalid_argument& e) {
    err << "hillspec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotFoundError& e) {
    err << "hillspec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedBoundaryError& e) {
    err << "hillspec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "hillspec: " << e.what() << '\n';
    return kExitNumerical;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!config.output.empty()) {
    file.open(config.output);
    if (!file) {
      err << "hillspec: cannot write " << config.output << '\n';
      return kExitUsage;
    }
    sink = &file;
  }
  if (config.format == Format::json) {
    write_json(*sink, result.table);
  } else {
    write_csv(*sink, result.table);
  }
  for (const auto& w : result.warnings) err << "hillspec: " << w << '\n';
  if (result.table.meta.contains("bench_mean_seconds_per_evaluation")) {
    err << "hillspec: bench " << result.table.meta["bench_repetitions"].dump()
        << " repetitions, mean "
        << format_number(result.table.meta["bench_mean_seconds_per_evaluation"].get<double>())
        << " s per evaluation\n";
  }
  return result.exit_code;
}

}  // namespace hillspec::cli
