#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "levygrad/bismut.hpp"
#include "levygrad/coefficients.hpp"
#include "levygrad/report.hpp"
#include "levygrad/subordinator.hpp"
#include "levygrad/test_functions.hpp"
#include "levygrad/validate.hpp"

namespace levygrad::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kCommonKeys{"scenario", "n_paths", "seed", "workers", "output", "timestamp"};

std::set<std::string> keys(std::initializer_list<const char*> extra) {
  std::set<std::string> out = kCommonKeys;
  for (const char* k : extra) out.insert(k);
  return out;
}

struct Setup {
  std::shared_ptr<const CoefficientField> field;
  int dimension = 1;
};

Setup field_setup(const Config& c) {
  Setup s;
  s.dimension = static_cast<int>(c.count("dimension", 1));
  try {
    s.field = catalog(c.string("field", "additive_identity"), s.dimension);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field: ") + e.what());
  }
  return s;
}

BernsteinSpec spec_of(const Config& c) {
  try {
    return BernsteinSpec::alpha_stable(c.number("alpha", 1.5));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("alpha: ") + e.what());
  }
}

TestFunction function_of(const Config& c, int dimension) {
  const json& f = c.at("f");
  try {
    if (f.is_string()) return test_function(f.get<std::string>());
    if (f.is_object()) {
      for (auto it = f.begin(); it != f.end(); ++it) {
        if (it.key() != "name" && it.key() != "a") throw ConfigError("unknown key 'f." + it.key() + "'");
      }
      if (!f.contains("name") || !f["name"].is_string()) throw ConfigError("config key 'f.name' must be a string");
      std::vector<double> a;
      if (f.contains("a")) {
        if (!f["a"].is_array()) throw ConfigError("config key 'f.a' must be an array of numbers");
        for (const json& v : f["a"]) {
          if (!v.is_number()) throw ConfigError("config key 'f.a' must be an array of numbers");
          a.push_back(v.get<double>());
        }
        if (static_cast<int>(a.size()) != dimension) {
          throw ConfigError("config key 'f.a' must have length " + std::to_string(dimension));
        }
      }
      return test_function(f["name"].get<std::string>(), a);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("f: ") + e.what());
  }
  throw ConfigError("config key 'f' must be a name or {\"name\": ..., \"a\": [...]}");
}

MonteCarloOptions options_of(const Config& c) {
  MonteCarloOptions o;
  o.n_paths = c.count("n_paths", 10000);
  if (o.n_paths < 2) throw ConfigError("config key 'n_paths' must be at least 2");
  o.seed = c.seed();
  o.workers = static_cast<unsigned>(c.count("workers", 1));
  o.substeps_per_unit = static_cast<int>(c.count("substeps_per_unit", kDefaultSubstepsPerUnit));
  if (o.substeps_per_unit < 1) throw ConfigError("config key 'substeps_per_unit' must be positive");
  o.antithetic = c.flag("antithetic", false);
  return o;
}

double positive(const Config& c, const std::string& key, double fallback) {
  const double x = c.number(key, fallback);
  if (!(x > 0.0)) throw ConfigError("config key '" + key + "' must be positive");
  return x;
}

// Explicit eps_cut, or the default policy at horizon t.
double eps_of(const Config& c, const BernsteinSpec& spec, double t, json& diagnostics) {
  if (!c.is_auto("eps_cut")) return positive(c, "eps_cut", 0.0);
  const EpsCutChoice choice = default_eps_cut(spec, t);
  diagnostics["eps_cut_auto"] = {{"eps_cut", choice.eps_cut},
                                 {"expected_jumps", choice.expected_jumps},
                                 {"relative_dropped", choice.relative_dropped},
                                 {"mass_rule_met", choice.mass_rule_met}};
  return choice.eps_cut;
}

JumpPath path_of(const Config& c) {
  const json& list = c.at("jumps");
  if (!list.is_array()) throw ConfigError("config key 'jumps' must be an array of [time, size] pairs");
  std::vector<Jump> jumps;
  double last = 0.0;
  for (const json& item : list) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw ConfigError("config key 'jumps' must be an array of [time, size] pairs");
    }
    jumps.push_back({item[0].get<double>(), item[1].get<double>()});
    last = std::max(last, jumps.back().time);
  }
  const double horizon = c.number("horizon", last > 0.0 ? last : 1.0);
  try {
    return JumpPath(horizon, std::move(jumps));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("jumps: ") + e.what());
  }
}

ClockSpec clock_of(const json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    throw ConfigError("config key 'clock' must be an object with a 'kind'");
  }
  const std::string kind = spec["kind"].get<std::string>();
  try {
    if (kind == "cap_at_first_passage") {
      for (auto it = spec.begin(); it != spec.end(); ++it) {
        if (it.key() != "kind" && it.key() != "R") throw ConfigError("unknown key 'clock." + it.key() + "'");
      }
      if (!spec.contains("R") || !spec["R"].is_number()) throw ConfigError("config key 'clock.R' must be a number");
      return ClockSpec::cap_at_first_passage(spec["R"].get<double>());
    }
    if (kind == "piecewise_linear") {
      for (auto it = spec.begin(); it != spec.end(); ++it) {
        if (it.key() != "kind" && it.key() != "knots") throw ConfigError("unknown key 'clock." + it.key() + "'");
      }
      std::vector<std::pair<double, double>> knots;
      if (!spec.contains("knots") || !spec["knots"].is_array()) {
        throw ConfigError("config key 'clock.knots' must be an array of [u, beta] pairs");
      }
      for (const json& k : spec["knots"]) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw ConfigError("config key 'clock.knots' must be an array of [u, beta] pairs");
        }
        knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
      return ClockSpec::piecewise_linear(std::move(knots));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("clock: ") + e.what());
  }
  throw ConfigError("unknown clock kind '" + kind + "'");
}

EstimatorResult exact_value(double value) {
  EstimatorResult r;
  r.mean = value;
  r.n_samples = 1;
  return r;
}

bool all_pass(const std::vector<ComparisonReport>& comparisons) {
  for (const ComparisonReport& c : comparisons) {
    if (!c.pass) return false;
  }
  return true;
}

CommandOutcome finish(const std::string& name, const Config& c, const json& results,
                      const std::vector<ComparisonReport>& comparisons, const json& diagnostics, bool pass) {
  const std::string stamp = c.flag("timestamp", true) ? utc_timestamp() : std::string();
  CommandOutcome out;
  out.pass = pass;
  out.report = make_report(name, c.raw(), results, comparisons, diagnostics, pass, stamp);
  return out;
}

void maybe_write_samples(const Config& c, const std::vector<SampleRow>& rows, json& diagnostics) {
  if (!c.flag("emit_samples", false)) return;
  const std::string path = c.string("samples_output", "samples.csv");
  diagnostics["samples_written"] = write_samples_csv(path, rows);
  diagnostics["samples_output"] = path;
}

CommandOutcome sample_subordinator(const Config& c) {
  c.restrict_keys(keys({"alpha", "t", "eps_cut", "u", "gamma", "compensate"}));
  const BernsteinSpec spec = spec_of(c);
  const double t = positive(c, "t", 1.0);
  const MonteCarloOptions o = options_of(c);
  json diagnostics = json::object();
  const double eps = eps_of(c, spec, t, diagnostics);
  const bool compensate = c.flag("compensate", true);
  const std::vector<double> us = c.has("u") ? c.numbers("u") : std::vector<double>{0.5, 1.0, 2.0};
  const std::vector<double> gammas = c.has("gamma") ? c.numbers("gamma") : std::vector<double>{};
  for (double u : us) {
    if (!(u > 0.0)) throw ConfigError("config key 'u' must hold positive numbers");
  }
  for (double g : gammas) {
    if (!(g > 0.0)) throw ConfigError("config key 'gamma' must hold positive numbers");
  }

  const std::size_t channels = 2 + us.size() + gammas.size();
  const DynamicStats stats = run_paths_dynamic(o.n_paths, o.workers, channels,
                                               [&](std::size_t i, std::vector<double>& values) {
    RngStream rng(o.seed, i, StreamPurpose::kClock);
    JumpPath path = sample_jump_path(spec, t, eps, rng);
    values[0] = static_cast<double>(path.size());
    if (compensate) path = compensate_small_jumps(path, spec, eps);
    const double s = path.value(t);
    values[1] = s;
    for (std::size_t k = 0; k < us.size(); ++k) values[2 + k] = std::exp(-us[k] * s);
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      if (!(s > 0.0)) return false;
      values[2 + us.size() + k] = std::pow(s, -gammas[k]);
    }
    return true;
  });

  json results = json::object();
  results["jump_count"] = to_json(to_result(stats.channels[0], stats.rejected));
  results["clock_value"] = to_json(to_result(stats.channels[1], stats.rejected));
  std::vector<ComparisonReport> comparisons;
  const double a = spec.stable_index();
  for (std::size_t k = 0; k < us.size(); ++k) {
    const double target = std::exp(-t * std::pow(us[k], a));
    comparisons.push_back(compare_to_value("laplace u=" + json(us[k]).dump(),
                                           to_result(stats.channels[2 + k], stats.rejected), target));
  }
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const double target = inverse_moment(spec, t, gammas[k]);
    comparisons.push_back(compare_to_value("inverse_moment gamma=" + json(gammas[k]).dump(),
                                           to_result(stats.channels[2 + us.size() + k], stats.rejected), target));
  }
  diagnostics["eps_cut"] = eps;
  diagnostics["expected_jump_count"] = t * levy_tail_mass(spec.alpha(), eps);
  diagnostics["dropped_clock_mass_mean"] = dropped_mass_mean(spec.alpha(), eps, t);
  diagnostics["dropped_clock_mass_variance"] = dropped_mass_variance(spec.alpha(), eps, t);
  diagnostics["compensated"] = compensate;
  return finish("sample-subordinator", c, results, comparisons, diagnostics, all_pass(comparisons));
}

CommandOutcome simulate(const Config& c) {
  c.restrict_keys(keys({"field", "dimension", "alpha", "eps_cut", "x", "f", "t", "p", "substeps_per_unit",
                        "expected"}));
  const Setup s = field_setup(c);
  const BernsteinSpec spec = spec_of(c);
  const double t = positive(c, "t", 1.0);
  const Vec x = c.has("x") ? c.vector("x", s.dimension) : Vec(Vec::Zero(s.dimension));
  const TestFunction f = function_of(c, s.dimension);
  const MonteCarloOptions o = options_of(c);
  json diagnostics = json::object();
  const double eps = eps_of(c, spec, t, diagnostics);
  json results = json::object();
  EstimatorResult r;
  if (c.has("p")) {
    r = estimate_power_mean(x, f, *s.field, spec, t, c.number("p"), eps, o);
    results["power_mean"] = to_json(r);
  } else {
    r = estimate_pt(x, f, *s.field, spec, t, eps, o);
    results["pt"] = to_json(r);
  }
  std::vector<ComparisonReport> comparisons;
  if (c.has("expected")) comparisons.push_back(compare_to_value("expected", r, c.number("expected")));
  diagnostics["eps_cut"] = eps;
  diagnostics["dropped_clock_mass_mean"] = dropped_mass_mean(spec.alpha(), eps, t);
  diagnostics["n_rejected"] = r.n_rejected;
  return finish("simulate", c, results, comparisons, diagnostics, all_pass(comparisons));
}

CommandOutcome gradient(const Config& c) {
  c.restrict_keys(keys({"field", "dimension", "alpha", "eps_cut", "x", "v", "f", "t", "R", "substeps_per_unit",
                        "antithetic", "expected", "oracle", "h", "emit_samples", "samples_output"}));
  const Setup s = field_setup(c);
  const BernsteinSpec spec = spec_of(c);
  const double t = positive(c, "t", 1.0);
  GradientProblem problem{c.has("x") ? c.vector("x", s.dimension) : Vec(Vec::Zero(s.dimension)),
                          c.has("v") ? c.vector("v", s.dimension) : unit_vector(s.dimension, 0),
                          function_of(c, s.dimension), s.field, t};
  MonteCarloOptions o = options_of(c);
  json diagnostics = json::object();
  const double eps = eps_of(c, spec, t, diagnostics);
  const double level = c.is_auto("R") ? 0.0 : positive(c, "R", 0.0);
  std::vector<SampleRow> rows;
  if (c.flag("emit_samples", false)) o.capture_samples = std::min(o.n_paths, kMaxCsvRows);
  const EstimatorResult g = estimate_gradient(problem, spec, level, eps, o, &rows);

  const std::string oracle = c.string("oracle", c.has("expected") ? "exact" : "none");
  json results = json::object();
  results["gradient"] = to_json(g);
  std::vector<ComparisonReport> comparisons;
  if (oracle == "exact") {
    comparisons.push_back(compare_to_value("exact", g, c.number("expected")));
  } else if (oracle == "fd") {
    MonteCarloOptions fd_options = o;
    fd_options.seed = mix_seed(o.seed, 0, StreamPurpose::kInternal);
    const EstimatorResult fd = fd_gradient(problem, spec, c.number("h", 0.0), eps, fd_options);
    results["fd_gradient"] = to_json(fd);
    comparisons.push_back(compare_estimates("fd", g, fd));
  } else if (oracle != "none") {
    throw ConfigError("config key 'oracle' must be one of none, exact, fd");
  }
  maybe_write_samples(c, rows, diagnostics);
  diagnostics["n_rejected"] = g.n_rejected;
  const bool pass = g.valid && all_pass(comparisons);
  return finish("gradient", c, results, comparisons, diagnostics, pass);
}

CommandOutcome gradient_fixed_clock(const Config& c) {
  c.restrict_keys(keys({"field", "dimension", "x", "v", "f", "t", "jumps", "horizon", "clock",
                        "substeps_per_unit", "antithetic", "expected", "emit_samples", "samples_output"}));
  const Setup s = field_setup(c);
  const JumpPath path = path_of(c);
  const double t = positive(c, "t", path.horizon());
  const ClockSpec clock = clock_of(c.at("clock"));
  GradientProblem problem{c.has("x") ? c.vector("x", s.dimension) : Vec(Vec::Zero(s.dimension)),
                          c.has("v") ? c.vector("v", s.dimension) : unit_vector(s.dimension, 0),
                          function_of(c, s.dimension), s.field, t};
  MonteCarloOptions o = options_of(c);
  std::vector<SampleRow> rows;
  if (c.flag("emit_samples", false)) o.capture_samples = std::min(o.n_paths, kMaxCsvRows);
  EstimatorResult g;
  try {
    g = estimate_gradient_fixed_clock(problem, path, clock, o, &rows);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  json results = json::object();
  results["gradient"] = to_json(g);
  std::vector<ComparisonReport> comparisons;
  if (c.has("expected")) comparisons.push_back(compare_to_value("exact", g, c.number("expected")));
  json diagnostics = json::object();
  maybe_write_samples(c, rows, diagnostics);
  diagnostics["n_rejected"] = g.n_rejected;
  return finish("gradient-fixed-clock", c, results, comparisons, diagnostics, g.valid && all_pass(comparisons));
}

CommandOutcome validate_bound(const Config& c) {
  c.restrict_keys(keys({"field", "dimension", "alpha", "x", "v", "f", "t_grid", "p", "eps_unit", "R",
                        "substeps_per_unit", "antithetic", "slope_tolerance"}));
  const Setup s = field_setup(c);
  const BernsteinSpec spec = spec_of(c);
  BoundOptions bound;
  bound.p = c.number("p", 2.0);
  bound.eps_unit = positive(c, "eps_unit", bound.eps_unit);
  bound.level = c.is_auto("R") ? 0.0 : positive(c, "R", 0.0);
  bound.slope_tolerance = positive(c, "slope_tolerance", bound.slope_tolerance);
  const Vec x = c.has("x") ? c.vector("x", s.dimension) : Vec(Vec::Zero(s.dimension));
  const Vec v = c.has("v") ? c.vector("v", s.dimension) : unit_vector(s.dimension, 0);
  const std::vector<double> grid =
      c.has("t_grid") ? c.numbers("t_grid") : std::vector<double>{0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
  BoundReport report;
  try {
    report = check_gradient_bound(s.field, spec, function_of(c, s.dimension), x, v, grid, bound, options_of(c));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  json results = json::object();
  results["bound"] = to_json(report);
  json diagnostics = json::object();
  diagnostics["complete"] = report.complete;
  return finish("validate-bound", c, results, {}, diagnostics, report.complete && report.pass);
}

CommandOutcome counterexample(const Config& c) {
  c.restrict_keys(keys({"eps_mollify", "grid_step", "substeps_per_unit", "grid_tolerance", "separation_z"}));
  const double eps = c.number("eps_mollify", 0.1);
  const double step = c.number("grid_step", 1e-3);
  const double grid_tol = c.number("grid_tolerance", 1e-2);
  const double separation = c.number("separation_z", 5.0);
  CounterexampleResult r;
  try {
    r = counterexample_moments(eps, options_of(c), step);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<ComparisonReport> comparisons{
      compare_to_value("jump_moment", r.jump_moment, r.jump_target),
      compare_to_value("mollified_moment", r.mollified_moment, r.mollified_target, 3.0, grid_tol),
      compare_greater("mollified_exceeds_jump", r.mollified_moment, r.jump_moment, separation)};
  ComparisonReport lower = compare_to_value("mollified_above_e_minus_1", r.mollified_moment, r.lower_bound);
  lower.kind = ComparisonReport::Kind::kGreater;
  lower.threshold = 0.0;
  lower.pass = r.mollified_moment.mean >= r.lower_bound;
  comparisons.push_back(lower);
  json results = json::object();
  results["counterexample"] = to_json(r);
  json diagnostics = json::object();
  diagnostics["e_minus_1"] = r.lower_bound;
  return finish("counterexample", c, results, comparisons, diagnostics, all_pass(comparisons));
}

CommandOutcome moments(const Config& c) {
  c.restrict_keys(keys({"alpha", "t", "gamma", "eps_cut"}));
  const BernsteinSpec spec = spec_of(c);
  const double t = positive(c, "t", 1.0);
  const double gamma = positive(c, "gamma", 0.5);
  const MonteCarloOptions o = options_of(c);
  json diagnostics = json::object();
  const double eps = eps_of(c, spec, t, diagnostics);
  const double quadrature = inverse_moment(spec, t, gamma);
  const double a = spec.stable_index();
  const double closed = std::tgamma(gamma / a) / (a * std::tgamma(gamma)) * std::pow(t, -gamma / a);

  auto stats = run_paths<1>(o.n_paths, o.workers, [&](std::size_t i) -> std::optional<std::array<double, 1>> {
    RngStream rng(o.seed, i, StreamPurpose::kClock);
    const double s = compensate_small_jumps(sample_jump_path(spec, t, eps, rng), spec, eps).value(t);
    if (!(s > 0.0)) return std::nullopt;
    return std::array<double, 1>{std::pow(s, -gamma)};
  });
  const EstimatorResult mc = to_result(stats.channels[0], stats.rejected);
  ComparisonReport exact = compare_to_value("quadrature_vs_closed_form", exact_value(quadrature), closed, 0.0,
                                            1e-6 * std::abs(closed));
  std::vector<ComparisonReport> comparisons{exact, compare_to_value("monte_carlo", mc, quadrature)};
  json results = json::object();
  results["quadrature"] = quadrature;
  results["closed_form"] = closed;
  results["monte_carlo"] = to_json(mc);
  diagnostics["eps_cut"] = eps;
  diagnostics["relative_error"] = std::abs(quadrature - closed) / closed;
  return finish("moments", c, results, comparisons, diagnostics, all_pass(comparisons));
}

CommandOutcome lemma_tests(const Config& c) {
  c.restrict_keys(keys({"xi", "dimension", "jumps", "horizon", "alpha", "t", "eps_cut", "clock", "eps_list"}));
  const int d = static_cast<int>(c.count("dimension", 1));
  if (d < 1 || d > kMaxDim) throw ConfigError("config key 'dimension' must lie in [1, 8]");
  const Vec xi = c.has("xi") ? c.vector("xi", d) : unit_vector(d, 0);
  const MonteCarloOptions o = options_of(c);
  JumpPath path;
  if (c.has("jumps")) {
    path = path_of(c);
  } else {
    const BernsteinSpec spec = spec_of(c);
    const double t = positive(c, "t", 1.0);
    RngStream rng(o.seed, 0, StreamPurpose::kInternal);
    path = sample_jump_path(spec, t, positive(c, "eps_cut", 1e-2), rng);
  }
  const ClockSpec clock = c.has("clock") ? clock_of(c.at("clock"))
                                         : ClockSpec::piecewise_linear({{0.0, 0.0}, {1.0, 1.0}});
  std::vector<double> eps_list;
  if (c.has("eps_list")) {
    eps_list = c.numbers("eps_list");
  } else {
    // Thresholds at the jump sizes themselves, then one below the smallest.
    std::vector<double> sizes;
    for (const Jump& j : path.jumps()) sizes.push_back(j.size);
    if (sizes.empty()) throw ConfigError("lemma-tests needs a path with at least one jump");
    std::sort(sizes.rbegin(), sizes.rend());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    const std::size_t stride = std::max<std::size_t>(1, sizes.size() / 6);
    for (std::size_t k = 0; k < sizes.size(); k += stride) eps_list.push_back(sizes[k]);
    eps_list.push_back(0.5 * sizes.back());
  }
  ComparisonReport isometry;
  TruncationReport truncation;
  try {
    isometry = burkholder_isometry_check(xi, path, clock, o);
    MonteCarloOptions second = o;
    second.seed = mix_seed(o.seed, 1, StreamPurpose::kInternal);
    truncation = truncation_convergence_check(path, clock, xi, eps_list, second);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<ComparisonReport> comparisons{isometry};
  for (const TruncationStep& step : truncation.steps) comparisons.push_back(step.comparison);
  json results = json::object();
  results["truncation"] = to_json(truncation);
  results["path"] = {{"horizon", path.horizon()}, {"jumps", path.size()}, {"value", path.value(path.horizon())}};
  json diagnostics = json::object();
  diagnostics["nonincreasing"] = truncation.nonincreasing;
  return finish("lemma-tests", c, results, comparisons, diagnostics, isometry.pass && truncation.pass);
}

using Handler = std::function<CommandOutcome(const Config&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"sample-subordinator", sample_subordinator}, {"simulate", simulate},
      {"gradient", gradient},                       {"gradient-fixed-clock", gradient_fixed_clock},
      {"validate-bound", validate_bound},           {"counterexample", counterexample},
      {"moments", moments},                         {"lemma-tests", lemma_tests}};
  return table;
}

}  // namespace

const std::vector<CommandInfo>& commands() {
  static const std::vector<CommandInfo> list{
      {"sample-subordinator", "sample clock paths; check Laplace transforms and inverse moments"},
      {"simulate", "estimate P_t f(x) or (P_t|f|^p)^{1/p}(x)"},
      {"gradient", "Bismut-type gradient estimate, optionally against an exact value or FD"},
      {"gradient-fixed-clock", "gradient estimate conditioned on a given jump path"},
      {"validate-bound", "short-time scaling of the gradient bound"},
      {"counterexample", "second moments under the jump clock and its mollification"},
      {"moments", "inverse moment by quadrature, closed form and Monte Carlo"},
      {"lemma-tests", "isometry and truncation checks on a jump path"}};
  return list;
}

CommandOutcome run_command(const std::string& name, const Config& config) {
  auto it = handlers().find(name);
  if (it == handlers().end()) throw ConfigError("unknown subcommand '" + name + "'");
  return it->second(config);
}

void write_report(const CommandOutcome& out, const Config& config) {
  const std::string text = out.report.dump(2) + "\n";
  const std::string output = config.string("output", "");
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + output + " for writing");
    file << text;
  }
}

}  // namespace levygrad::cli
