#pragma once

// Monte Carlo driver: sample lifts of a base graph across degrees n, record
// spectral, tangle and expansion statistics, and fit the decay of
// Prob[NonAlon > 0] against n on a log-log scale.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lifts/graph.hpp"
#include "lifts/graph_io.hpp"
#include "lifts/lift.hpp"
#include "lifts/magnification.hpp"
#include "lifts/spectral.hpp"
#include "lifts/tangles.hpp"

namespace lifts {

inline constexpr const char* kLibraryVersion = "0.1.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A checked invariant failed (a bug, not bad input).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TangleSettings {
  TangleQuery query;
  ScanCaps caps;
};

struct MagnifierSettings {
  std::size_t r = 1;
  double gamma = 0.1;
  CheckMode mode = CheckMode::sampled;
  std::size_t trials = 100;
};

struct ExperimentConfig {
  std::shared_ptr<const Graph> base;
  std::string base_source;  // path or "inline"
  ModelSpec model;
  std::vector<std::size_t> degrees;
  std::size_t trials = 1;
  double epsilon = 0.1;
  std::optional<TangleSettings> tangle;
  std::optional<MagnifierSettings> magnifier;
  std::uint64_t seed = 0;
  std::string output;  // prefix for <output>.json / <output>.csv; may be empty
};

/// Throws ConfigError on any inconsistency.
inline void validate_config(const ExperimentConfig& cfg) {
  if (!cfg.base || cfg.base->empty()) throw ConfigError("base graph missing or empty");
  if (cfg.degrees.empty()) throw ConfigError("degree list is empty");
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (!(cfg.epsilon > 0)) throw ConfigError("epsilon must be positive");
  for (auto n : cfg.degrees) {
    if (auto why = model_violation(*cfg.base, cfg.model, n)) {
      throw ConfigError("degree " + std::to_string(n) + ": " + *why);
    }
  }
  if (cfg.tangle) {
    if (cfg.tangle->caps.max_vertices == 0 || cfg.tangle->caps.max_subgraphs == 0) {
      throw ConfigError("tangle caps must be positive");
    }
  }
  if (cfg.magnifier) {
    if (!(cfg.magnifier->gamma > 0)) throw ConfigError("magnifier gamma must be positive");
    if (cfg.magnifier->r < 1) throw ConfigError("magnifier R must be at least 1");
    if (cfg.magnifier->mode == CheckMode::sampled && cfg.magnifier->trials < 1) {
      throw ConfigError("magnifier trials must be at least 1");
    }
  }
}

/// Reads a config object.  "base" is either a graph object or a path,
/// resolved against `config_dir` when relative.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                                    const std::filesystem::path& config_dir = {}) {
  try {
    ExperimentConfig cfg;
    const auto& base = j.at("base");
    if (base.is_string()) {
      std::filesystem::path p = base.get<std::string>();
      if (p.is_relative() && !config_dir.empty()) p = config_dir / p;
      cfg.base = std::make_shared<const Graph>(load_graph(p.string()));
      cfg.base_source = base.get<std::string>();
    } else {
      cfg.base = std::make_shared<const Graph>(graph_from_json(base));
      cfg.base_source = "inline";
    }
    cfg.model = model_spec_from_json(j.value("model", nlohmann::json::object()));
    cfg.degrees = j.at("degrees").get<std::vector<std::size_t>>();
    cfg.trials = j.value("trials", std::size_t{1});
    cfg.epsilon = j.value("epsilon", 0.1);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.output = j.value("output", std::string());
    if (j.contains("tangle") && !j["tangle"].is_null()) {
      const auto& t = j["tangle"];
      TangleSettings s;
      s.query.nu = t.at("nu").get<double>();
      s.query.r = t.at("r").get<long long>();
      s.query.strict = t.value("strict", false);
      s.caps.max_vertices = t.value("max_vertices", s.caps.max_vertices);
      s.caps.max_subgraphs = t.value("max_subgraphs", s.caps.max_subgraphs);
      cfg.tangle = s;
    }
    if (j.contains("magnifier") && !j["magnifier"].is_null()) {
      const auto& m = j["magnifier"];
      MagnifierSettings s;
      s.r = m.value("R", s.r);
      s.gamma = m.at("gamma").get<double>();
      s.mode = check_mode_from_string(m.value("mode", std::string("sampled")));
      s.trials = m.value("trials", s.trials);
      cfg.magnifier = s;
    }
    validate_config(cfg);
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return experiment_config_from_json(j, std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Statistics

struct Interval {
  double lo = 0;
  double hi = 0;
  double center = 0;
};

/// Wilson score interval for k successes in n trials (z = 1.96 for 95%).
inline Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054) {
  if (n == 0) return {0, 1, 0.5};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  const double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = k == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi, center};
}

struct ScalingFit {
  bool determinate = false;
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  std::size_t points = 0;
};

struct ScalingPoint {
  std::size_t n = 0;
  std::size_t positives = 0;
  std::size_t trials = 0;
};

/// Least squares of log p against log n, p the Wilson centre, over points
/// with positives > 0.  Indeterminate with fewer than three such points.
inline ScalingFit fit_scaling(const std::vector<ScalingPoint>& pts) {
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    if (p.positives == 0 || p.trials == 0) continue;
    xs.push_back(std::log(static_cast<double>(p.n)));
    ys.push_back(std::log(wilson_interval(p.positives, p.trials).center));
  }
  ScalingFit fit;
  fit.points = xs.size();
  if (xs.size() < 3) return fit;
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(rss / (m - 2) / sxx);
  fit.determinate = true;
  return fit;
}

// ---------------------------------------------------------------------------
// Running

struct TrialFailure {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::string what;
};

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::size_t completed = 0;
  std::size_t nonalon_positive = 0;
  Interval nonalon_interval;
  // Tangle columns are meaningful only when a tangle query was configured.
  std::size_t has_tangles = 0;
  std::size_t tangle_free = 0;
  std::size_t nonalon_and_tangle_free = 0;
  std::size_t tangle_caps_hit = 0;
  std::size_t disconnected = 0;
  std::size_t not_pseudo_magnifier = 0;
  double mean_lambda2 = 0;
  std::optional<double> mean_mu1_new;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t d = 0;  // base degree, 0 when the base is not regular
  std::vector<ExperimentRow> rows;
  std::vector<TrialFailure> failures;
  ScalingFit fit;
  bool trend_non_increasing = true;
  std::string summary;
};

/// Consecutive Wilson intervals overlap or move down.
inline bool wilson_trend_non_increasing(const std::vector<ExperimentRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].nonalon_interval.lo > rows[i - 1].nonalon_interval.hi) return false;
  }
  return true;
}

namespace detail {

struct TrialOutcome {
  bool nonalon_positive = false;
  bool has_tangles = false;
  bool tangle_caps_hit = false;
  bool disconnected = false;
  bool not_pseudo_magnifier = false;
  double lambda2 = 0;
  std::optional<double> mu1_new;
};

inline TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t d,
                              const SpectrumMultiset& base_adjacency, std::size_t n,
                              std::size_t trial) {
  TrialOutcome out;
  const auto a = sample_assignment(cfg.base, n, cfg.model, derive_seed(cfg.seed, {n, trial}));
  const auto lift = build_lift(a);
  const auto& g = *lift.cover;
  const auto spectrum = adjacency_spectrum(g);
  SpectrumMultiset fresh;
  try {
    fresh = multiset_difference(spectrum, base_adjacency, kDefaultMatchTolerance);
  } catch (const SpectralError& e) {
    throw InvariantViolation(std::string("base spectrum not contained in the lift: ") + e.what());
  }
  if (fresh.size() != (n - 1) * cfg.base->vertex_count()) {
    throw InvariantViolation("new spectrum has the wrong size");
  }
  if (g.vertex_count() >= 2) {
    out.lambda2 = spectrum.values[spectrum.size() - 2].real();
  }
  if (d > 0) {
    out.nonalon_positive = count_non_alon(fresh, d, cfg.epsilon) > 0;
    if (cfg.base->half_loop_count() == 0) out.mu1_new = new_hashimoto_radius(lift, fresh);
  }
  if (!is_connected(g)) {
    out.disconnected = true;
    // A disconnected cover of a connected base carries d as a new eigenvalue.
    if (d > 0 && is_connected(*cfg.base)) {
      bool found = false;
      for (const auto& z : fresh.values) {
        found = found || std::abs(z.real() - static_cast<double>(d)) <= 1e-6;
      }
      if (!found) throw InvariantViolation("disconnected lift without new eigenvalue d");
    }
  }
  if (cfg.tangle) {
    const auto rep = scan_tangles(g, cfg.tangle->query, cfg.tangle->caps);
    out.has_tangles = rep.has_tangles();
    out.tangle_caps_hit = rep.caps_hit;
  }
  if (cfg.magnifier) {
    MagnifyOptions opt;
    opt.mode = cfg.magnifier->mode;
    opt.trials = cfg.magnifier->trials;
    opt.seed = derive_seed(cfg.seed, {n, trial, 1});
    opt.fibre_of = lift.projection.vertex_map;
    out.not_pseudo_magnifier =
        !is_pseudo_magnifier(g, cfg.magnifier->r, cfg.magnifier->gamma, opt).holds;
  }
  return out;
}

}  // namespace detail

/// Runs every trial sequentially with seed derive_seed(seed, {n, trial}).
/// Trials that throw (other than InvariantViolation) are counted and listed
/// as failures and excluded from the statistics.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ExperimentReport rep;
  rep.config = cfg;
  std::size_t d = 0;
  if (!is_regular(*cfg.base, &d)) d = 0;
  rep.d = d;
  const auto base_adjacency = adjacency_spectrum(*cfg.base);

  std::vector<ScalingPoint> points;
  for (auto n : cfg.degrees) {
    ExperimentRow row;
    row.n = n;
    row.trials = cfg.trials;
    double sum_l2 = 0, sum_mu = 0;
    std::size_t mu_count = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      detail::TrialOutcome o;
      try {
        o = detail::run_trial(cfg, d, base_adjacency, n, t);
      } catch (const InvariantViolation&) {
        throw;
      } catch (const std::exception& e) {
        ++row.failures;
        rep.failures.push_back({n, t, e.what()});
        continue;
      }
      ++row.completed;
      row.nonalon_positive += o.nonalon_positive;
      row.has_tangles += o.has_tangles;
      row.tangle_free += !o.has_tangles;
      row.nonalon_and_tangle_free += o.nonalon_positive && !o.has_tangles;
      row.tangle_caps_hit += o.tangle_caps_hit;
      row.disconnected += o.disconnected;
      row.not_pseudo_magnifier += o.not_pseudo_magnifier;
      sum_l2 += o.lambda2;
      if (o.mu1_new) {
        sum_mu += *o.mu1_new;
        ++mu_count;
      }
    }
    if (row.completed > 0) row.mean_lambda2 = sum_l2 / static_cast<double>(row.completed);
    if (mu_count > 0) row.mean_mu1_new = sum_mu / static_cast<double>(mu_count);
    row.nonalon_interval = wilson_interval(row.nonalon_positive, row.completed);
    if (row.nonalon_and_tangle_free >
        std::min(row.nonalon_positive, row.completed - row.has_tangles)) {
      throw InvariantViolation("conditioned count exceeds its marginals");
    }
    points.push_back({n, row.nonalon_positive, row.completed});
    rep.rows.push_back(row);
  }
  rep.fit = fit_scaling(points);
  rep.trend_non_increasing = wilson_trend_non_increasing(rep.rows);
  bool any_positive = false;
  for (const auto& r : rep.rows) any_positive = any_positive || r.nonalon_positive > 0;
  if (d == 0) {
    rep.summary = "base is not regular; NonAlon not defined";
  } else if (!any_positive) {
    rep.summary = "below detection at desk scale";
  } else if (!rep.fit.determinate) {
    rep.summary = "indeterminate: fewer than three degrees with positive counts";
  } else {
    std::ostringstream s;
    s << "slope " << rep.fit.slope << " +/- " << rep.fit.stderr_slope;
    rep.summary = s.str();
  }
  return rep;
}

/// Per-n frequency of NonAlon > 0 among tangle-free lifts.
struct ConditionedRow {
  std::size_t n = 0;
  std::size_t tangle_free = 0;
  std::size_t nonalon_and_tangle_free = 0;
  std::optional<double> frequency;  // empty when no tangle-free trial
  bool caveat_caps_hit = false;     // tangle-freeness not certified
};

inline std::vector<ConditionedRow> conditioned_nonalon(const ExperimentReport& rep) {
  if (!rep.config.tangle) throw ConfigError("conditioned NonAlon needs a tangle query");
  std::vector<ConditionedRow> out;
  for (const auto& r : rep.rows) {
    ConditionedRow c;
    c.n = r.n;
    c.tangle_free = r.tangle_free;
    c.nonalon_and_tangle_free = r.nonalon_and_tangle_free;
    if (r.tangle_free > 0) {
      c.frequency = static_cast<double>(r.nonalon_and_tangle_free) / static_cast<double>(r.tangle_free);
    }
    c.caveat_caps_hit = r.tangle_caps_hit > 0;
    out.push_back(c);
  }
  return out;
}

inline std::vector<ConditionedRow> conditioned_nonalon(const ExperimentConfig& cfg) {
  return conditioned_nonalon(run_experiment(cfg));
}

// ---------------------------------------------------------------------------
// Output

inline nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j{{"base_source", cfg.base_source},
                   {"base", graph_to_json(*cfg.base)},
                   {"model", model_spec_to_json(cfg.model)},
                   {"degrees", cfg.degrees},
                   {"trials", cfg.trials},
                   {"epsilon", cfg.epsilon},
                   {"seed", cfg.seed},
                   {"tangle", nullptr},
                   {"magnifier", nullptr}};
  if (cfg.tangle) {
    const auto& t = *cfg.tangle;
    j["tangle"] = {{"nu", t.query.nu},
                   {"r", t.query.r},
                   {"strict", t.query.strict},
                   {"max_vertices", t.caps.max_vertices},
                   {"max_subgraphs", t.caps.max_subgraphs}};
  }
  if (cfg.magnifier) {
    const auto& m = *cfg.magnifier;
    j["magnifier"] = {{"R", m.r}, {"gamma", m.gamma}, {"mode", to_string(m.mode)}, {"trials", m.trials}};
  }
  return j;
}

inline nlohmann::json experiment_report_to_json(const ExperimentReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  const bool tangles = rep.config.tangle.has_value();
  const auto conditioned = tangles ? conditioned_nonalon(rep) : std::vector<ConditionedRow>{};
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    nlohmann::json row{{"n", r.n},
                       {"trials", r.trials},
                       {"completed", r.completed},
                       {"failures", r.failures},
                       {"nonalon_positive", r.nonalon_positive},
                       {"nonalon_wilson95", {r.nonalon_interval.lo, r.nonalon_interval.hi}},
                       {"disconnected", r.disconnected},
                       {"mean_lambda2", r.mean_lambda2},
                       {"mean_mu1_new", r.mean_mu1_new ? nlohmann::json(*r.mean_mu1_new) : nlohmann::json()}};
    if (tangles) {
      const auto& c = conditioned[i];
      row["has_tangles"] = r.has_tangles;
      row["tangle_free"] = r.tangle_free;
      row["nonalon_and_tangle_free"] = r.nonalon_and_tangle_free;
      row["conditioned_nonalon"] = c.frequency ? nlohmann::json(*c.frequency) : nlohmann::json();
      row["tangle_caps_hit"] = r.tangle_caps_hit;
    }
    if (rep.config.magnifier) row["not_pseudo_magnifier"] = r.not_pseudo_magnifier;
    rows.push_back(row);
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : rep.failures) failures.push_back({{"n", f.n}, {"trial", f.trial}, {"what", f.what}});
  nlohmann::json fit{{"determinate", rep.fit.determinate}, {"points", rep.fit.points}};
  if (rep.fit.determinate) {
    fit["slope"] = rep.fit.slope;
    fit["intercept"] = rep.fit.intercept;
    fit["stderr"] = rep.fit.stderr_slope;
    fit["ci95"] = {rep.fit.slope - 1.96 * rep.fit.stderr_slope, rep.fit.slope + 1.96 * rep.fit.stderr_slope};
  }
  return {{"version", kLibraryVersion},
          {"config", experiment_config_to_json(rep.config)},
          {"base_degree", rep.d},
          {"rows", rows},
          {"failures", failures},
          {"fit", fit},
          {"trend_non_increasing", rep.trend_non_increasing},
          {"summary", rep.summary}};
}

inline std::string experiment_report_csv(const ExperimentReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "n,trials,completed,failures,nonalon_positive,wilson_lo,wilson_hi,has_tangles,tangle_free,"
         "nonalon_and_tangle_free,tangle_caps_hit,disconnected,not_pseudo_magnifier,mean_lambda2,"
         "mean_mu1_new\n";
  const bool tangles = rep.config.tangle.has_value();
  for (const auto& r : rep.rows) {
    out << r.n << ',' << r.trials << ',' << r.completed << ',' << r.failures << ','
        << r.nonalon_positive << ',' << r.nonalon_interval.lo << ',' << r.nonalon_interval.hi << ',';
    if (tangles) {
      out << r.has_tangles << ',' << r.tangle_free << ',' << r.nonalon_and_tangle_free << ','
          << r.tangle_caps_hit << ',';
    } else {
      out << ",,,,";
    }
    out << r.disconnected << ',';
    if (rep.config.magnifier) out << r.not_pseudo_magnifier;
    out << ',' << r.mean_lambda2 << ',';
    if (r.mean_mu1_new) out << *r.mean_mu1_new;
    out << '\n';
  }
  return out.str();
}

}  // namespace lifts
