// Command-line front end.  Exit codes: 0 success, 2 invariant violation,
// 3 bad input or configuration, 1 anything else.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lifts/lifts.hpp"

namespace {

using nlohmann::json;

constexpr int kExitInvariant = 2;
constexpr int kExitConfig = 3;

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

/// Writes to `path`, or to stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

/// Accepts a graph file, or a lift file whose "cover" is used.
lifts::Graph load_graph_or_cover(const std::string& path) {
  const auto text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  if (j.is_object() && j.contains("cover")) return lifts::graph_from_json(j["cover"]);
  return lifts::graph_from_json_text(text);
}

struct Options {
  // sample
  std::string base;
  std::size_t n = 2;
  std::string model = "permutation";
  std::string half_loop;
  std::string parity = "any";
  std::uint64_t seed = 0;
  // spectrum
  std::string input;
  double eps = 0.1;
  // tangle-scan
  double nu = 0;
  long long r = 1;
  bool strict = false;
  std::size_t max_vertices = 8;
  std::size_t max_subgraphs = 100000;
  // magnify-check
  std::size_t big_r = 1;
  double gamma = 0.1;
  std::string mode = "exhaustive";
  std::size_t trials = 1000;
  // verify-lemmas
  std::size_t max_n = 7;
  // experiment
  std::string config;
  // census
  std::size_t k = 4;
  // common
  std::string out;
};

int cmd_sample(const Options& o) {
  json spec{{"model", o.model}, {"parity", o.parity}};
  spec["half_loop"] = o.half_loop.empty() ? json() : json(o.half_loop);
  const auto model = lifts::model_spec_from_json(spec);
  auto base = std::make_shared<const lifts::Graph>(lifts::graph_from_json_text(read_file(o.base)));
  const auto lift = lifts::build_lift(lifts::sample_assignment(base, o.n, model, o.seed));
  if (!lifts::is_covering(lift.projection)) throw lifts::InvariantViolation("projection is not a covering map");
  auto j = lifts::lift_to_json(lift);
  j["model"] = lifts::model_spec_to_json(model);
  j["seed"] = o.seed;
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_spectrum(const Options& o) {
  const auto text = read_file(o.input);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(o.input + ": " + e.what());
  }
  json out;
  if (j.is_object() && j.contains("sigma")) {
    // The stored cover must be the one the assignment builds.
    auto assignment_only = j;
    assignment_only.erase("cover");
    const auto lift = lifts::lift_from_json(assignment_only);
    if (j.contains("cover") && lifts::graph_from_json(j["cover"]) != *lift.cover) {
      throw lifts::InvariantViolation("stored cover does not match the permutation assignment");
    }
    out = lifts::spectral_report_to_json(lifts::spectral_report(lift, o.eps));
  } else {
    const auto g = lifts::graph_from_json_text(text);
    out["adjacency"] = lifts::spectrum_to_json(lifts::adjacency_spectrum(g), true);
    out["mu1"] = g.empty() ? json() : json(lifts::mu1(g));
    if (g.directed_edge_count() > lifts::kDefaultDenseCap) {
      out["hashimoto"] = nullptr;
      out["ihara"] = "skipped";
      emit(o.out, out.dump(2) + "\n");
      return 0;
    }
    out["hashimoto"] = lifts::spectrum_to_json(lifts::hashimoto_spectrum(g), false);
    const auto ihara = lifts::ihara_check(g, 1e-6);
    out["ihara"] = ihara.status == lifts::IharaStatus::passed   ? "passed"
                   : ihara.status == lifts::IharaStatus::failed ? "failed"
                                                                : "skipped";
    if (ihara.status == lifts::IharaStatus::failed) {
      emit(o.out, out.dump(2) + "\n");
      throw lifts::InvariantViolation("Ihara relation violated");
    }
  }
  emit(o.out, out.dump(2) + "\n");
  return 0;
}

int cmd_tangle_scan(const Options& o) {
  const auto g = load_graph_or_cover(o.input);
  lifts::TangleQuery q{o.nu, o.r, o.strict};
  lifts::ScanCaps caps{o.max_vertices, o.max_subgraphs};
  const auto rep = lifts::scan_tangles(g, q, caps);
  emit(o.out, lifts::tangle_report_to_json(rep, q).dump(2) + "\n");
  return 0;
}

int cmd_magnify_check(const Options& o) {
  const auto g = load_graph_or_cover(o.input);
  lifts::MagnifyOptions opt;
  opt.mode = lifts::check_mode_from_string(o.mode);
  opt.trials = o.trials;
  opt.seed = o.seed;
  const auto res = lifts::is_pseudo_magnifier(g, o.big_r, o.gamma, opt);
  auto j = lifts::magnification_result_to_json(res);
  j["R"] = o.big_r;
  j["gamma"] = o.gamma;
  emit(o.out, j.dump(2) + "\n");
  return 0;
}

int cmd_verify_lemmas(const Options& o) {
  const auto rows = lifts::verify_lemmas(o.max_n);
  bool all = true;
  for (const auto& r : rows) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  [" << r.detail << "]\n";
    all = all && r.passed;
  }
  if (!o.out.empty()) write_file(o.out, lifts::check_rows_to_json(rows).dump(2) + "\n");
  return all ? 0 : kExitInvariant;
}

int cmd_experiment(const Options& o) {
  auto cfg = lifts::load_experiment_config(o.config);
  if (!o.out.empty()) cfg.output = o.out;
  const auto rep = lifts::run_experiment(cfg);
  const auto text = lifts::experiment_report_to_json(rep).dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    write_file(cfg.output + ".json", text);
    write_file(cfg.output + ".csv", lifts::experiment_report_csv(rep));
    std::cerr << rep.summary << "\n";
  }
  return 0;
}

int cmd_census(const Options& o) {
  const auto g = load_graph_or_cover(o.input);
  std::vector<lifts::WalkCensus> all;
  for (std::size_t k = 1; k <= o.k; ++k) all.push_back(lifts::snbc_by_type(g, k));
  if (o.out.empty()) {
    std::cout << lifts::census_csv(all);
  } else {
    write_file(o.out + ".csv", lifts::census_csv(all));
    write_file(o.out + ".types.json", lifts::census_type_catalog(all).dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random graph lifts: spectra, tangles, magnification, counting lemmas"};
  app.require_subcommand(1);
  Options o;

  auto* sample = app.add_subcommand("sample", "Sample a random lift of a base graph");
  sample->add_option("--base", o.base, "Base graph JSON")->required();
  sample->add_option("--n", o.n, "Lift degree")->required();
  sample->add_option("--model", o.model, "permutation | cyclic");
  sample->add_option("--half-loop", o.half_loop, "matching | near_matching");
  sample->add_option("--parity", o.parity, "any | even | odd");
  sample->add_option("--seed", o.seed, "Random seed");
  sample->add_option("--out", o.out, "Output file (default stdout)");

  auto* spectrum = app.add_subcommand("spectrum", "Spectra of a graph, or old/new spectra of a lift");
  spectrum->add_option("input", o.input, "Graph or lift JSON")->required();
  spectrum->add_option("--eps", o.eps, "NonAlon epsilon");
  spectrum->add_option("--out", o.out, "Output file (default stdout)");

  auto* tangle = app.add_subcommand("tangle-scan", "Search a graph for tangles");
  tangle->add_option("input", o.input, "Graph or lift JSON")->required();
  tangle->add_option("--nu", o.nu, "mu1 threshold")->required();
  tangle->add_option("--r", o.r, "Order bound (order < r)")->required();
  tangle->add_flag("--strict", o.strict, "Require mu1 > nu");
  tangle->add_option("--max-vertices", o.max_vertices, "Vertex cap per subgraph");
  tangle->add_option("--max-subgraphs", o.max_subgraphs, "Cap on subgraphs examined");
  tangle->add_option("--out", o.out, "Output file (default stdout)");

  auto* magnify = app.add_subcommand("magnify-check", "Check (R, gamma)-pseudo-magnification");
  magnify->add_option("input", o.input, "Graph or lift JSON")->required();
  magnify->add_option("--R", o.big_r, "Smallest subset size");
  magnify->add_option("--gamma", o.gamma, "Expansion ratio")->required();
  magnify->add_option("--mode", o.mode, "exhaustive | sampled");
  magnify->add_option("--trials", o.trials, "Subsets examined in sampled mode");
  magnify->add_option("--seed", o.seed, "Random seed for sampled mode");
  magnify->add_option("--out", o.out, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify-lemmas", "Numerical checks of the counting lemmas");
  verify->add_option("--max-n", o.max_n, "Largest n for exhaustive enumerations");
  verify->add_option("--out", o.out, "Also write the table as JSON");

  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  experiment->add_option("config", o.config, "Experiment config JSON")->required();
  experiment->add_option("--out", o.out, "Output prefix for .json and .csv");

  auto* census = app.add_subcommand("census", "SNBC walk counts by homotopy type");
  census->add_option("input", o.input, "Graph or lift JSON")->required();
  census->add_option("--k", o.k, "Longest walk length");
  census->add_option("--out", o.out, "Output prefix for .csv and .types.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sample->parsed()) return cmd_sample(o);
    if (spectrum->parsed()) return cmd_spectrum(o);
    if (tangle->parsed()) return cmd_tangle_scan(o);
    if (magnify->parsed()) return cmd_magnify_check(o);
    if (verify->parsed()) return cmd_verify_lemmas(o);
    if (experiment->parsed()) return cmd_experiment(o);
    if (census->parsed()) return cmd_census(o);
  } catch (const lifts::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const lifts::SpectralError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    // GraphError, ModelError, ConfigError, TangleError, ... and file problems.
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
