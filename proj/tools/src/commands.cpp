#include "commands.hpp"

#include <bosepath/bm.hpp>
#include <bosepath/errors.hpp>
#include <bosepath/gp.hpp>
#include <bosepath/hartree.hpp>
#include <bosepath/potentials.hpp>
#include <bosepath/ratefn.hpp>
#include <bosepath/scattering.hpp>
#include <bosepath/version.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "output.hpp"

namespace bosepath::cli {

namespace {

using nlohmann::json;

TrapPotential make_trap(const Config& c) {
  const std::string kind = c.text("trap", "kind", "none");
  if (kind == "none") return TrapPotential::none();
  if (kind == "harmonic") return TrapPotential::harmonic(c.number("trap", "stiffness", 1.0));
  if (kind == "hard_wall") return TrapPotential::hard_wall(c.number("trap", "radius"));
  if (kind == "csv") return TrapPotential::from_csv(c.text("trap", "path"));
  throw c.error("trap", "kind", "unknown trap kind '" + kind + "'");
}

RadialPairPotential make_pair(const Config& c) {
  const std::string kind = c.text("pair", "kind", "zero");
  RadialPairPotential v = RadialPairPotential::zero();
  if (kind == "zero") {
    v = RadialPairPotential::zero();
  } else if (kind == "constant") {
    v = RadialPairPotential::constant(c.number("pair", "strength"));
  } else if (kind == "hard_core") {
    v = RadialPairPotential::hard_core(c.number("pair", "radius"));
  } else if (kind == "square_well") {
    v = RadialPairPotential::square_well(c.number("pair", "strength"), c.number("pair", "radius", 1.0));
  } else if (kind == "gaussian") {
    v = RadialPairPotential::gaussian(c.number("pair", "strength"), c.number("pair", "width", 1.0));
  } else if (kind == "power_law") {
    v = RadialPairPotential::power_law(c.number("pair", "strength"), c.number("pair", "exponent"),
                                       c.number("pair", "cutoff", 1.0));
  } else if (kind == "csv") {
    v = RadialPairPotential::from_csv(c.text("pair", "path"));
  } else {
    throw c.error("pair", "kind", "unknown pair potential kind '" + kind + "'");
  }
  if (c.has("pair", "core")) v = RadialPairPotential::with_hard_core(c.number("pair", "core"), v);
  return v;
}

int positive_int(const Config& c, const std::string& s, const std::string& k, long fallback) {
  const long value = c.integer(s, k, fallback);
  if (value < 1) throw c.error(s, k, "must be a positive integer");
  return static_cast<int>(value);
}

double positive(const Config& c, const std::string& s, const std::string& k, double fallback) {
  const double value = c.number(s, k, fallback);
  if (!(value > 0.0)) throw c.error(s, k, "must be positive");
  return value;
}

/// A scalar or a comma-separated sweep list.
std::vector<double> values_of(const Config& c, const std::string& s, const std::string& k,
                              double fallback, bool& swept) {
  if (!c.has(s, k)) return {fallback};
  if (c.is_list(s, k)) {
    swept = true;
    return c.numbers(s, k);
  }
  return {c.number(s, k)};
}

GridPtr make_grid(const Config& c, const std::string& s, int dim, double default_extent,
                  int default_nodes, const std::string& prefix = "") {
  const std::string fallback_kind = dim == 1 ? "cartesian" : "radial";
  const std::string kind = c.text(s, prefix + "grid", fallback_kind);
  const double extent = positive(c, s, prefix + "extent", default_extent);
  int nodes = positive_int(c, s, prefix + "nodes", default_nodes);
  if (kind == "cartesian") {
    if (nodes % 2 == 0) ++nodes;
    return Grid::cartesian(dim, nodes, extent);
  }
  if (kind == "radial") {
    if (dim == 1) throw c.error(s, prefix + "grid", "radial grids need dimension 2 or 3");
    return Grid::radial(dim, nodes, extent);
  }
  throw c.error(s, prefix + "grid", "expected 'cartesian' or 'radial'");
}

int dimension(const Config& c, const std::string& s, int fallback) {
  const long d = c.integer(s, "dimension", fallback);
  if (d < 1 || d > 3) throw c.error(s, "dimension", "must be 1, 2 or 3");
  return static_cast<int>(d);
}

void add_deltas(CsvTable& table, std::size_t column) {
  table.header.push_back("delta");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (i == 0) {
      table.rows[i].push_back("");
      continue;
    }
    const double a = std::stod(table.rows[i - 1][column]);
    const double b = std::stod(table.rows[i][column]);
    table.rows[i].push_back(num(b - a));
  }
}

std::string dump_function(const GridPtr& grid, const std::vector<double>& values, const std::string& name) {
  CsvTable t;
  if (grid->kind() == GridKind::radial) {
    t.header = {"r", name};
  } else {
    const char* axes[] = {"x", "y", "z"};
    for (int a = 0; a < grid->dim(); ++a) t.header.emplace_back(axes[a]);
    t.header.push_back(name);
  }
  for (std::size_t k = 0; k < grid->size(); ++k) {
    std::vector<std::string> row;
    if (grid->kind() == GridKind::radial) {
      row.push_back(num(grid->radius(k)));
    } else {
      const Point p = grid->position(k);
      for (int a = 0; a < grid->dim(); ++a) row.push_back(num(p[a]));
    }
    row.push_back(num(values[k]));
    t.rows.push_back(std::move(row));
  }
  return t.render();
}

json table_json(const CsvTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::object();
    for (std::size_t i = 0; i < t.header.size() && i < r.size(); ++i) row[t.header[i]] = r[i];
    rows.push_back(row);
  }
  return rows;
}

template <typename Fn>
auto run_points(std::size_t count, int threads, Fn&& fn) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<Result> results(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::size_t next = 0;
  while (next < count) {
    std::vector<std::future<Result>> batch;
    for (int t = 0; t < threads && next < count; ++t, ++next) {
      batch.push_back(std::async(std::launch::async, fn, next));
    }
    const std::size_t first = next - batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i) results[first + i] = batch[i].get();
  }
  return results;
}

struct Context {
  const Config& config;
  OutputDirectory& out;
  std::uint64_t seed;
  int threads;
  json summary;
};

void cmd_scatter(Context& ctx) {
  const Config& c = ctx.config;
  const auto v = make_pair(c);
  const int d = dimension(c, "scatter", 3);
  ScatteringOptions options;
  options.r_max = c.number("scatter", "r_max", 0.0);
  options.steps = positive_int(c, "scatter", "steps", 20000);
  const auto report = scatter(v, d, options);
  CsvTable t{{"potential", "dimension", "scattering_length", "born_length", "tail_estimate", "degenerate"}, {}};
  t.rows.push_back({v.name(), std::to_string(d), num(report.length),
                    num(report.born_length.to_double()), num(report.tail_estimate),
                    report.degenerate ? "1" : "0"});
  ctx.out.write("scatter.csv", t.render());
  ctx.summary["results"] = table_json(t);
  ctx.summary["headline"] = {{"scattering_length", report.length},
                             {"born_length", report.born_length.to_double()}};
  ctx.summary["flags"] = {{"degenerate", report.degenerate}};
}

void cmd_gp(Context& ctx) {
  const Config& c = ctx.config;
  const auto trap = make_trap(c);
  const int d = dimension(c, "gp", 3);
  bool swept = false;
  const auto alphas = values_of(c, "gp", "alpha", 0.0, swept);
  const auto grid = make_grid(c, "gp", d, suggested_extent(trap), d == 1 ? 321 : 256);
  const double tol = positive(c, "gp", "tolerance", 1e-8);
  const bool dump = c.flag("gp", "dump", false);
  GpOptions options;
  options.max_iterations = c.integer("gp", "max_iterations", options.max_iterations);
  if (options.max_iterations < 1) throw c.error("gp", "max_iterations", "must be positive");
  const auto results = run_points(alphas.size(), ctx.threads, [&](std::size_t i) {
    return gp_minimize(trap, alphas[i], grid, tol, options);
  });
  CsvTable t{{"alpha", "grid", "energy", "multiplier", "residual", "iterations"}, {}};
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto& r = results[i];
    t.rows.push_back({num(alphas[i]), grid->describe(), num(r.energy), num(r.multiplier),
                      num(r.residual), std::to_string(r.iterations)});
    if (dump) ctx.out.write("gp_minimizer_" + std::to_string(i) + ".csv",
                            dump_function(grid, r.minimizer.values, "phi"));
  }
  if (swept) add_deltas(t, 2);
  ctx.out.write("gp.csv", t.render());
  ctx.summary["results"] = table_json(t);
  ctx.summary["headline"] = {{"energy", results.back().energy}, {"alpha", alphas.back()}};
}

void cmd_hartree(Context& ctx) {
  const Config& c = ctx.config;
  const auto trap = make_trap(c);
  const auto v = make_pair(c);
  const int d = dimension(c, "hartree", 1);
  bool swept = false;
  const auto ns = values_of(c, "hartree", "N", 2.0, swept);
  for (double n : ns) {
    if (n < 1 || n != std::floor(n) || n > 64) throw c.error("hartree", "N", "N must be an integer in [1, 64]");
  }
  const std::string scaling = c.text("hartree", "scaling", "none");
  if (scaling != "none" && scaling != "hartree") {
    throw c.error("hartree", "scaling", "expected 'none' or 'hartree'");
  }
  const bool symmetric = c.flag("hartree", "symmetric", true);
  const auto grid = make_grid(c, "hartree", d, suggested_extent(trap), d == 1 ? 161 : 160);
  const double tol = positive(c, "hartree", "tolerance", 1e-8);
  const bool dump = c.flag("hartree", "dump", false);
  const bool reference = c.flag("hartree", "reference", false);
  const auto results = run_points(ns.size(), ctx.threads, [&](std::size_t i) {
    const int n = static_cast<int>(ns[i]);
    const auto vn = scaling == "hartree" ? rescale_hartree(v, n, d, d == 1) : v;
    return hartree_minimize(n, trap, vn, grid, tol, symmetric);
  });
  CsvTable t{{"N", "scaling", "energy", "residual", "symmetric", "multipliers"}, {}};
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto& r = results[i];
    std::string lambdas;
    for (std::size_t j = 0; j < r.state.multipliers.size(); ++j) {
      lambdas += (j ? ";" : "") + num(r.state.multipliers[j]);
    }
    t.rows.push_back({std::to_string(static_cast<int>(ns[i])), scaling, num(r.energy_per_particle),
                      num(r.residual), r.symmetric ? "1" : "0", lambdas});
    if (dump) {
      for (std::size_t j = 0; j < r.state.factors.size(); ++j) {
        ctx.out.write("hartree_" + std::to_string(i) + "_factor_" + std::to_string(j) + ".csv",
                      dump_function(grid, r.state.factors[j].values, "h"));
      }
    }
  }
  if (swept) add_deltas(t, 2);
  ctx.out.write("hartree.csv", t.render());
  ctx.summary["results"] = table_json(t);
  ctx.summary["headline"] = {{"energy_per_particle", results.back().energy_per_particle}};
  if (reference) {
    if (d == 1) throw c.error("hartree", "reference", "the Gross-Pitaevskii limit needs d = 2 or 3");
    const double alpha = born_length(v, d);
    const auto gp = gp_minimize(trap, alpha, grid, tol);
    ctx.summary["headline"]["gp_reference"] = gp.energy;
    ctx.summary["headline"]["born_length"] = alpha;
  }
}

void cmd_simulate(Context& ctx) {
  const Config& c = ctx.config;
  const auto trap = make_trap(c);
  const auto v = make_pair(c);
  const std::string model = c.text("simulate", "model", "canonical");
  if (model != "canonical" && model != "hartree") {
    throw c.error("simulate", "model", "expected 'canonical' or 'hartree'");
  }
  bool beta_swept = false;
  bool n_swept = false;
  const auto betas = values_of(c, "simulate", "beta", 1.0, beta_swept);
  const auto ns = values_of(c, "simulate", "N", 1.0, n_swept);
  if (beta_swept && n_swept) throw c.error("simulate", "N", "only one of beta and N may be a list");
  for (double b : betas) {
    if (!(b > 0.0)) throw c.error("simulate", "beta", "beta must be positive");
  }
  for (double n : ns) {
    if (n < 1 || n != std::floor(n)) throw c.error("simulate", "N", "N must be a positive integer");
  }
  const int steps = positive_int(c, "simulate", "steps", 1024);
  const long replicas = c.integer("simulate", "replicas", 10000);
  if (replicas < 100) throw c.error("simulate", "replicas", "at least 100 replicas are required");
  const int stride = positive_int(c, "simulate", "stride", 1);
  if (steps % stride != 0) throw c.error("simulate", "stride", "stride must divide steps");
  MonteCarloOptions options;
  options.dim = dimension(c, "simulate", 1);
  options.threads = ctx.threads;
  const bool histogram = c.flag("simulate", "histogram", false);
  GridPtr grid;
  if (histogram) {
    grid = make_grid(c, "simulate", options.dim, 8.0, options.dim == 1 ? 161 : 80, "histogram_");
  }
  const PathModel path_model = model == "canonical" ? PathModel::canonical : PathModel::hartree;

  CsvTable t{{"N", "beta", "estimate", "std_error", "effective_samples", "accepted"}, {}};
  const std::size_t points = std::max(betas.size(), ns.size());
  double last = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double beta = betas[betas.size() == 1 ? 0 : i];
    const int n = static_cast<int>(ns[ns.size() == 1 ? 0 : i]);
    const auto est = path_model == PathModel::canonical
                         ? free_energy_canonical(n, beta, steps, replicas, trap, v, ctx.seed, options)
                         : free_energy_hartree(n, beta, steps, replicas, trap, v, stride, ctx.seed, options);
    last = est.value;
    t.rows.push_back({std::to_string(n), num(beta), num(est.value), num(est.std_error),
                      num(est.effective_samples), std::to_string(est.accepted)});
    if (histogram) {
      const auto occ = sample_weighted_occupation(n, beta, steps, replicas, trap, v, path_model, stride,
                                                  grid, ctx.seed, options);
      ctx.out.write("histogram_" + std::to_string(i) + ".csv",
                    dump_function(grid, occ.histogram.weights, "weight"));
      ctx.summary["flags"]["low_ess_warning_" + std::to_string(i)] = occ.low_ess_warning;
    }
  }
  if (beta_swept || n_swept) add_deltas(t, 2);
  ctx.out.write("simulate.csv", t.render());
  ctx.summary["results"] = table_json(t);
  ctx.summary["headline"] = {{"free_energy", last}, {"model", model}};
}

std::vector<std::vector<double>> read_columns(const Config& c, const std::string& path,
                                              std::size_t coords, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw c.error("ldp", "density", "cannot open '" + path + "'");
  std::vector<std::vector<double>> columns;
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows == 0 && columns.empty()) continue;  // header
      throw c.error("ldp", "density", "non-numeric row in '" + path + "'");
    }
    if (cells.size() <= coords) throw c.error("ldp", "density", "too few columns in '" + path + "'");
    if (columns.empty()) columns.resize(cells.size());
    if (cells.size() != columns.size()) throw c.error("ldp", "density", "ragged rows in '" + path + "'");
    for (std::size_t i = 0; i < cells.size(); ++i) columns[i].push_back(cells[i]);
    ++rows;
  }
  if (rows != expected) {
    throw c.error("ldp", "density", "expected " + std::to_string(expected) + " rows, found " +
                                        std::to_string(rows));
  }
  return columns;
}

void cmd_ldp(Context& ctx) {
  const Config& c = ctx.config;
  const auto trap = make_trap(c);
  const int d = dimension(c, "ldp", 1);
  const auto grid = make_grid(c, "ldp", d, 8.0, 161);
  const std::string rate = c.text("ldp", "rate");
  const std::size_t coords = grid->kind() == GridKind::radial ? 1 : static_cast<std::size_t>(d);
  const auto columns = read_columns(c, c.text("ldp", "density"), coords, grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const Point p = grid->position(k);
    for (std::size_t a = 0; a < coords; ++a) {
      const double expected = grid->kind() == GridKind::radial ? grid->radius(k) : p[a];
      if (std::abs(columns[a][k] - expected) > 1e-6 * grid->spacing()) {
        throw c.error("ldp", "density", "row " + std::to_string(k + 1) + " does not match the grid");
      }
    }
  }
  std::vector<DensityOnGrid> densities;
  for (std::size_t col = coords; col < columns.size(); ++col) {
    densities.push_back(DensityOnGrid::normalized(grid, columns[col]));
  }
  CsvTable t{{"rate", "value", "converged", "clamped", "iterations"}, {}};
  json headline;
  auto record = [&](const ExtReal& value, bool converged, bool clamped, int iterations) {
    t.rows.push_back({rate, num(value.to_double()), converged ? "1" : "0", clamped ? "1" : "0",
                      std::to_string(iterations)});
    headline["value"] = value.is_finite() ? json(value.value()) : json("inf");
    headline["converged"] = converged;
  };
  JBetaOptions jopt;
  jopt.iterations = positive_int(c, "ldp", "iterations", 400);
  jopt.bound = positive(c, "ldp", "bound", 50.0);
  if (rate == "dv") {
    record(donsker_varadhan(densities.front()), true, false, 0);
  } else if (rate == "canonical") {
    const int n = positive_int(c, "ldp", "N", 1);
    const auto v = make_pair(c);
    record(canonical_rate(densities.front(), trap, v, n, c.number("ldp", "chi")), true, false, 0);
  } else if (rate == "hartree") {
    const auto v = make_pair(c);
    record(hartree_rate(densities, trap, v, c.number("ldp", "chi")), true, false, 0);
  } else if (rate == "j_beta") {
    const double beta = positive(c, "ldp", "beta", 1.0);
    const auto r = j_beta(densities.front(), beta, jopt);
    record(r.value, r.converged, r.clamped, r.iterations);
    ctx.out.write("ldp_maximizer.csv", dump_function(grid, r.maximizer.values, "f"));
  } else if (rate == "meanfield") {
    const double beta = positive(c, "ldp", "beta", 1.0);
    const double g = c.number("ldp", "coupling", 0.0);
    if (g < 0.0) throw c.error("ldp", "coupling", "coupling must be nonnegative");
    double chi = 0.0;
    if (c.has("ldp", "chi")) {
      chi = c.number("ldp", "chi");
    } else {
      chi = chi_otimes_beta(g, trap, beta, grid).value;
      headline["chi_otimes_beta"] = chi;
    }
    const auto jb = j_beta(densities.front(), beta, jopt);
    record(meanfield_rate(densities.front(), trap, g, beta, chi, jopt), jb.converged, jb.clamped,
           jb.iterations);
    ctx.out.write("ldp_maximizer.csv", dump_function(grid, jb.maximizer.values, "f"));
  } else {
    throw c.error("ldp", "rate", "expected dv, canonical, hartree, j_beta or meanfield");
  }
  ctx.out.write("ldp.csv", t.render());
  ctx.summary["results"] = table_json(t);
  ctx.summary["headline"] = headline;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"run", {"seed", "threads", "output"}},
      {"trap", {"kind", "stiffness", "radius", "path"}},
      {"pair", {"kind", "strength", "radius", "width", "exponent", "cutoff", "path", "core"}},
      {"scatter", {"dimension", "r_max", "steps"}},
      {"gp", {"dimension", "alpha", "grid", "nodes", "extent", "tolerance", "max_iterations", "dump"}},
      {"hartree",
       {"N", "scaling", "symmetric", "dimension", "grid", "nodes", "extent", "tolerance", "reference", "dump"}},
      {"simulate",
       {"model", "N", "beta", "steps", "replicas", "stride", "dimension", "histogram", "histogram_grid",
        "histogram_nodes", "histogram_extent"}},
      {"ldp",
       {"rate", "density", "dimension", "grid", "nodes", "extent", "N", "chi", "beta", "coupling", "iterations",
        "bound"}},
  };
  return keys;
}

json inputs_of(const Config& c) {
  json inputs = json::object();
  std::istringstream in(c.source());
  std::string line, section;
  while (std::getline(in, line)) {
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      return s.substr(a, s.find_last_not_of(" \t") - a + 1);
    };
    inputs[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return inputs;
}

}  // namespace

RunManifest run(const RunRequest& request) { return run(request, Config::load(request.config_path)); }

RunManifest run(const RunRequest& request, const Config& config) {
  const auto started = std::chrono::steady_clock::now();
  config.validate(schema());
  std::string out_dir = config.text("run", "output", "bosepath-out");
  if (const char* env = std::getenv("BOSEPATH_OUTPUT_DIR")) out_dir = env;
  if (request.out_dir) out_dir = *request.out_dir;
  const long seed_value = config.integer("run", "seed", 1);
  std::uint64_t seed = request.seed ? *request.seed : static_cast<std::uint64_t>(seed_value);
  const long threads_value = config.integer("run", "threads", 1);
  const int threads = request.threads ? *request.threads : static_cast<int>(threads_value);
  if (threads < 1) throw config.error("run", "threads", "must be at least 1");

  OutputDirectory out(out_dir);
  Context ctx{config, out, seed, threads, json::object()};
  ctx.summary["command"] = request.command;
  ctx.summary["config"] = config.name();
  ctx.summary["inputs"] = inputs_of(config);
  ctx.summary["flags"] = json::object();

  if (request.command == "scatter") {
    cmd_scatter(ctx);
  } else if (request.command == "gp") {
    cmd_gp(ctx);
  } else if (request.command == "hartree") {
    cmd_hartree(ctx);
  } else if (request.command == "simulate") {
    cmd_simulate(ctx);
  } else if (request.command == "ldp") {
    cmd_ldp(ctx);
  } else {
    throw ConfigError(config.name(), 0, "", "unknown command '" + request.command + "'");
  }
  ctx.summary["error"] = nullptr;
  out.write("summary.json", ctx.summary.dump(2) + "\n");

  RunManifest manifest;
  manifest.command = request.command;
  manifest.config_hash = hex(fnv1a(config.source()));
  manifest.version = BOSEPATH_VERSION;
  manifest.seed = seed;
  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  manifest.checksums = out.checksums();
  json m = {{"command", manifest.command},
            {"config_hash", manifest.config_hash},
            {"version", manifest.version},
            {"seed", manifest.seed},
            {"threads", threads},
            {"wall_clock_seconds", manifest.wall_clock_seconds},
            {"checksums", manifest.checksums}};
  std::ofstream(out.root() / "manifest.json") << m.dump(2) << "\n";
  return manifest;
}

int run_and_report(const RunRequest& request) {
  try {
    const auto manifest = run(request);
    std::cout << request.command << ": wrote " << manifest.checksums.size() << " files, config "
              << manifest.config_hash << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << request.command << ": " << e.what() << "\n";
    return 3;
  } catch (const IndeterminateError& e) {
    std::cerr << "error: " << request.command << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << request.command << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bosepath::cli
