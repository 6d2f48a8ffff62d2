#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "otter/asymptotics.hpp"
#include "otter/counting.hpp"
#include "otter/degree.hpp"
#include "otter/enumerate.hpp"
#include "otter/sample.hpp"
#include "otter/stochastics.hpp"
#include "otter/tree.hpp"
#include "otter/verify.hpp"

namespace {

using nlohmann::json;
using namespace otter;

constexpr const char* kVersion = "1.0.0";

// Exit code 1: an identity or verification check failed.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string rational_text(const Rational& q) { return q.get_str(); }

json json_number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::optional<DegreeSet> degree_option(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return DegreeSet::parse(text);
}

struct Options {
  std::string kind = "free";
  std::size_t n_max = 20;
  std::size_t n = 10;
  std::string method;
  std::string degrees;
  bool dump_series = false;
  std::size_t order = 400;
  bool as_json = false;
  std::size_t count = 1;
  std::uint64_t seed = 1;
  bool exact = false;
  bool monte_carlo = false;
  std::size_t samples = 1000;
  double alpha = 0.75;
  std::string action;
  bool rooted_input = false;
  std::string level = "quick";
  std::string thresholds;
  int jobs = 0;
  std::string manifest;
};

int run_count(const Options& o) {
  const auto d = degree_option(o.degrees);
  ExactSeries series(0);
  if (d) {
    if (o.kind == "rooted") {
      series = restricted_rooted_series(*d, o.n_max);
    } else if (o.kind == "tilde") {
      series = tilde_series(*d, o.n_max);
    } else if (o.kind == "free") {
      restricted_free_counts(*d, o.n_max);
      series = restricted_free_series(*d, o.n_max);
    } else {
      throw std::invalid_argument("count: --degrees supports --kind rooted|tilde|free");
    }
  } else if (o.kind == "rooted") {
    if (o.method == "recurrence") {
      const auto t = rooted_counts_recurrence(o.n_max);
      for (std::size_t n = 1; n <= o.n_max; ++n) std::cout << n << '\t' << t[n] << '\n';
      return 0;
    }
    series = rooted_series(o.n_max);
  } else if (o.kind == "free") {
    series = o.method == "symmetry" ? add(free_counts_symmetry(o.n_max).u_of_s, free_counts_symmetry(o.n_max).sym0)
                                    : free_series_dissymmetry(o.n_max);
  } else if (o.kind == "labelled") {
    const auto t = labelled_counts(o.n_max);
    for (std::size_t n = 1; n <= o.n_max; ++n) std::cout << n << '\t' << t[n] << '\n';
    return 0;
  } else if (o.kind == "labelled-rooted") {
    const auto t = labelled_rooted_counts(o.n_max);
    for (std::size_t n = 1; n <= o.n_max; ++n) std::cout << n << '\t' << t[n] << '\n';
    return 0;
  } else {
    throw std::invalid_argument("count: unknown --kind " + o.kind);
  }
  if (o.dump_series) {
    write_series(std::cout, series);
    return 0;
  }
  for (std::size_t n = 1; n <= o.n_max; ++n) std::cout << n << '\t' << rational_text(series[n]) << '\n';
  return 0;
}

int run_constants(const Options& o) {
  const Constants c = constants(o.order);
  const RhoSolution r = solve_rho(o.order, 1e-12);
  if (o.as_json) {
    json j{{"rho", c.rho},
           {"mean_x", c.mean_x},
           {"c_a", c.c_a},
           {"c_f", c.c_f},
           {"truncation_order", c.truncation_order},
           {"residual", c.residual},
           {"truncated_a_at_rho", r.truncated_a}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout.precision(12);
    std::cout << "rho\t" << c.rho << "\nmean_x\t" << c.mean_x << "\nc_a\t" << c.c_a << "\nc_f\t" << c.c_f << '\n';
  }
  return 0;
}

int run_enumerate(const Options& o) {
  const auto d = degree_option(o.degrees);
  const DegreeSet* filter = d ? &*d : nullptr;
  if (o.kind == "rooted") {
    for (const auto& t : gen_rooted(o.n, filter)) std::cout << t.to_string() << '\n';
  } else if (o.kind == "free") {
    for (const auto& t : gen_free(o.n, filter)) std::cout << t.to_string() << '\n';
  } else {
    throw std::invalid_argument("enumerate: --kind must be rooted or free");
  }
  return 0;
}

int run_census(const Options& o) {
  const SymTable census = symmetry_census(o.n);
  const SymTable series = sym_table(o.n);
  if (census.entries != series.entries) throw VerificationFailure("census differs from the series route");
  for (std::size_t k = 0; k <= o.n; ++k) std::cout << k << '\t' << rational_text(census.entries[k]) << '\n';
  return 0;
}

int run_sample(const Options& o) {
  SamplerContext ctx(o.seed, o.n);
  std::size_t rounds = 0;
  for (std::size_t i = 0; i < o.count; ++i) {
    if (o.kind == "rooted") {
      std::cout << sample_rooted(ctx, o.n).to_string() << '\n';
      ++rounds;
    } else if (o.kind == "free-exact") {
      const FreeSample s = sample_free_exact(ctx, o.n);
      rounds += s.rounds;
      std::cout << s.tree.to_string() << '\n';
    } else if (o.kind == "free-approx") {
      std::cout << sample_free_approx(ctx, o.n).to_string() << '\n';
      ++rounds;
    } else {
      throw std::invalid_argument("sample: --kind must be rooted, free-exact or free-approx");
    }
  }
  std::cout << json{{"seed", o.seed}, {"rounds_total", rounds}, {"generator", SamplerContext::generator_name()}}.dump()
            << '\n';
  return 0;
}

int run_tv(const Options& o) {
  const auto d = degree_option(o.degrees);
  json j{{"n", o.n}};
  if (o.monte_carlo) {
    if (d) throw std::invalid_argument("tv: --mc is unrestricted only");
    const TvEstimate e = tv_monte_carlo(o.n, o.samples, o.seed);
    j["tv"] = e.tv;
    j["method"] = "monte-carlo";
    j["ci"] = {e.ci_low, e.ci_high};
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    j["rounds_total"] = e.rounds_total;
  } else {
    const Rational tv = d ? tv_exact_restricted(*d, o.n) : tv_exact(o.n);
    j["tv"] = tv.get_d();
    j["tv_exact"] = rational_text(tv);
    j["method"] = "exact";
    j["ci"] = nullptr;
    if (d) j["degrees"] = d->key();
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_fixedpoints(const Options& o) {
  const auto law = conditional_fixed_points(o.n);
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    std::cout << law.support[i] << '\t' << rational_text(law.probs[i]) << '\n';
  }
  return 0;
}

int run_concentration(const Options& o) {
  const ConcentrationReport r = concentration_check(o.n, o.alpha);
  json j{{"n", r.n},
         {"alpha", r.alpha},
         {"center", r.center},
         {"radius", r.radius},
         {"tail_mass", r.tail_mass},
         {"bound_exponent", json_number_or_null(r.bound_exponent)},
         {"appendix",
          {{"k", r.appendix.k},
           {"x", r.appendix.x},
           {"tail", r.appendix.tail},
           {"bound", r.appendix.bound},
           {"c", r.appendix.c},
           {"delta", r.appendix.delta},
           {"lambda", r.appendix.best_lambda},
           {"holds", r.appendix.holds}}}};
  std::cout << j.dump(2) << '\n';
  return r.appendix.holds ? 0 : 1;
}

void print_center(const AdjacencyList& adj) {
  const Center c = center(adj);
  if (c.is_edge()) {
    std::cout << "edge\t" << c.first << '\t' << c.second << '\n';
  } else {
    std::cout << "vertex\t" << c.first << '\n';
  }
}

int run_tree(const Options& o) {
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (o.rooted_input) {
      const RootedTree t = parse_rooted(line);
      if (o.action == "canon") {
        std::cout << t.canonical().to_string() << '\n';
      } else if (o.action == "center") {
        print_center(t.adjacency());
      } else if (o.action == "aut") {
        std::cout << aut_size(t) << '\n';
      } else if (o.action == "orbits") {
        std::cout << orbit_count(forget_root(t)) << '\n';
      } else if (o.action == "fixpoly") {
        const auto p = fix_polynomial(t);
        for (std::size_t k = 0; k <= p.degree(); ++k) std::cout << (k ? "\t" : "") << p[k];
        std::cout << '\n';
      }
      continue;
    }
    const FreeTree t = parse_free(line);
    if (o.action == "canon") {
      std::cout << t.to_string() << '\n';
    } else if (o.action == "center") {
      // Indices refer to the input sequence.
      std::string body = line;
      if (const auto colon = body.find(':'); colon != std::string::npos) body = body.substr(colon + 1);
      print_center(parse_rooted(body).adjacency());
    } else if (o.action == "aut") {
      std::cout << aut_size(t) << '\n';
    } else if (o.action == "orbits") {
      std::cout << orbit_count(t) << '\n';
    } else if (o.action == "fixpoly") {
      const auto p = fix_polynomial(t);
      for (std::size_t k = 0; k <= p.degree(); ++k) std::cout << (k ? "\t" : "") << p[k];
      std::cout << '\n';
    }
  }
  return 0;
}

int run_verify_command(const Options& o) {
  const Thresholds t = load_thresholds(o.thresholds.empty() ? default_thresholds_path() : o.thresholds);
  const VerifyLevel level = o.level == "full" ? VerifyLevel::full : VerifyLevel::quick;
  const VerifyReport report = run_verify(level, t, [](const CheckResult& r) {
    std::cout << (r.passed ? "PASS" : "FAIL") << '\t' << r.name << '\t';
    std::cout.precision(3);
    std::cout << std::fixed << r.seconds << "s" << std::defaultfloat;
    if (!r.passed) std::cout << '\t' << r.detail;
    std::cout << std::endl;
  });
  if (!report.ok()) {
    for (const auto& r : report.checks) {
      if (!r.passed) std::cerr << "violated: " << r.name << ": " << r.detail << '\n';
    }
    return 1;
  }
  return 0;
}

void write_manifest(const Options& o, int argc, char** argv, const std::string& command, double seconds, int code) {
  if (o.manifest.empty()) return;
  std::string line;
  for (int i = 0; i < argc; ++i) line += (i ? " " : "") + std::string(argv[i]);
  json j{{"command_line", line},
         {"subcommand", command},
         {"version", kVersion},
         {"seed", o.seed},
         {"generator", SamplerContext::generator_name()},
         {"truncation_order", o.order},
         {"jobs", o.jobs > 0 ? o.jobs : omp_get_max_threads()},
         {"wall_time_s", seconds},
         {"exit_code", code},
         {"thresholds_file", o.thresholds.empty() ? default_thresholds_path() : o.thresholds}};
  try {
    const Thresholds t = load_thresholds(o.thresholds.empty() ? default_thresholds_path() : o.thresholds);
    j["thresholds"] = {{"constant_tolerance", t.constant_tolerance},
                       {"rooted_ratio_400", t.rooted_ratio_400},
                       {"free_ratio_400", t.free_ratio_400},
                       {"second_order_bound", t.second_order_bound},
                       {"concentration_tail_200", t.concentration_tail_200},
                       {"chi_square_significance", t.chi_square_significance},
                       {"rejection_tolerance", t.rejection_tolerance}};
  } catch (const std::exception&) {
    j["thresholds"] = nullptr;
  }
  std::ofstream(o.manifest) << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Exact counting, sampling and symmetry statistics for unlabelled trees"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_option("--jobs", o.jobs, "Worker thread cap (default: all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--manifest", o.manifest, "Write a JSON run manifest to this file");
  app.add_option("--thresholds", o.thresholds, "Frozen thresholds JSON (default: fixtures/thresholds.json)");

  auto* count = app.add_subcommand("count", "Counting sequences as TSV (n<TAB>count)");
  count->add_option("--kind", o.kind, "rooted|free|labelled|labelled-rooted (with --degrees: rooted|tilde|free)")
      ->check(CLI::IsMember({"rooted", "free", "tilde", "labelled", "labelled-rooted"}));
  count->add_option("--n-max", o.n_max, "Largest n")->required()->check(CLI::PositiveNumber);
  count->add_option("--method", o.method, "rooted: series|recurrence; free: dissymmetry|symmetry")
      ->check(CLI::IsMember({"series", "recurrence", "dissymmetry", "symmetry"}));
  count->add_option("--degrees", o.degrees, "Allowed degrees, e.g. 1,3 or 1,2,4,...,except:7");
  count->add_flag("--dump-series", o.dump_series, "Print the exact series (n<TAB>num/den) instead");

  auto* cons = app.add_subcommand("constants", "rho, E[X], c_A, c_F");
  cons->add_option("--order", o.order, "Truncation order")->check(CLI::Range(50, 2000));
  cons->add_flag("--json", o.as_json, "JSON output");

  auto* en = app.add_subcommand("enumerate", "All trees of one size, one level sequence per line");
  en->add_option("--kind", o.kind, "rooted|free")->check(CLI::IsMember({"rooted", "free"}));
  en->add_option("-n", o.n, "Size")->required()->check(CLI::Range(1, 24));
  en->add_option("--degrees", o.degrees, "Degree filter");

  auto* census = app.add_subcommand("census", "Fixed-point census k<TAB>[z^n]Sym_k, checked against the series");
  census->add_option("-n", o.n, "Size")->required()->check(CLI::Range(1, 12));

  auto* sample = app.add_subcommand("sample", "Random trees, one per line, then a JSON footer");
  sample->add_option("--kind", o.kind, "rooted|free-exact|free-approx")
      ->required()
      ->check(CLI::IsMember({"rooted", "free-exact", "free-approx"}));
  sample->add_option("-n", o.n, "Size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--count", o.count, "Number of trees")->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.seed, "RNG seed");

  auto* tv = app.add_subcommand("tv", "Total variation between F(A_n) and the uniform free tree");
  tv->add_option("-n", o.n, "Size")->required()->check(CLI::PositiveNumber);
  auto* exact_flag = tv->add_flag("--exact", o.exact, "Exact rational value (default)");
  auto* mc_flag = tv->add_flag("--mc", o.monte_carlo, "Monte Carlo estimate with a 95% interval");
  exact_flag->excludes(mc_flag);
  tv->add_option("--samples", o.samples, "Monte Carlo sample size")->check(CLI::Range(2, 100000000));
  tv->add_option("--seed", o.seed, "RNG seed");
  tv->add_option("--degrees", o.degrees, "Degree-restricted variant (exact only)");

  auto* fp = app.add_subcommand("fixedpoints", "P(N = k | S_N = n) as k<TAB>prob");
  fp->add_option("-n", o.n, "Size")->required()->check(CLI::PositiveNumber);

  auto* conc = app.add_subcommand("concentration", "Tail mass of the fixed-point law and the appendix bound");
  conc->add_option("-n", o.n, "Size")->required()->check(CLI::PositiveNumber);
  conc->add_option("--alpha", o.alpha, "Exponent in (0.5, 1)")->check(CLI::Range(0.5, 1.0));

  auto* tree = app.add_subcommand("tree", "Per-line tree queries on level sequences from stdin");
  tree->add_option("action", o.action, "canon|center|aut|orbits|fixpoly")
      ->required()
      ->check(CLI::IsMember({"canon", "center", "aut", "orbits", "fixpoly"}));
  tree->add_flag("--rooted", o.rooted_input, "Treat input as rooted trees");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite; exit 1 on any failure");
  verify->add_option("--level", o.level, "quick|full")->check(CLI::IsMember({"quick", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (o.jobs > 0) omp_set_num_threads(o.jobs);

  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (command == "count") code = run_count(o);
    if (command == "constants") code = run_constants(o);
    if (command == "enumerate") code = run_enumerate(o);
    if (command == "census") code = run_census(o);
    if (command == "sample") code = run_sample(o);
    if (command == "tv") code = run_tv(o);
    if (command == "fixedpoints") code = run_fixedpoints(o);
    if (command == "concentration") code = run_concentration(o);
    if (command == "tree") code = run_tree(o);
    if (command == "verify") code = run_verify_command(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    code = 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    code = 2;
  } catch (const std::exception& e) {
    std::cerr << "identity failure: " << e.what() << '\n';
    code = 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(o, argc, argv, command, seconds, code);
  return code;
}
