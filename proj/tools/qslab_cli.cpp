// qslab: command-line front end for the instrumented sorters, the recurrence
// solver and the experiment harness.

#include <cmath>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qslab/analysis.hpp"
#include "qslab/format.hpp"
#include "qslab/harness.hpp"
#include "qslab/random.hpp"
#include "qslab/sortcore.hpp"

using namespace qslab;

namespace {

// Accepts plain integers, 2^k and 1eK.
Index parse_size(const std::string& text) {
  const auto bad = [&] { return std::invalid_argument("bad size '" + text + "'"); };
  std::size_t used = 0;
  try {
    if (const auto caret = text.find('^'); caret != std::string::npos) {
      const long long base = std::stoll(text.substr(0, caret));
      const long long exp = std::stoll(text.substr(caret + 1), &used);
      if (used != text.size() - caret - 1 || exp < 0 || exp > 40) throw bad();
      long long v = 1;
      for (long long i = 0; i < exp; ++i) v *= base;
      return v;
    }
    if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
      const long long mant = std::stoll(text.substr(0, e));
      const long long exp = std::stoll(text.substr(e + 1), &used);
      if (used != text.size() - e - 1 || exp < 0 || exp > 15) throw bad();
      long long v = mant;
      for (long long i = 0; i < exp; ++i) v *= 10;
      return v;
    }
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw bad();
    return v;
  } catch (const std::invalid_argument&) {
    throw bad();
  } catch (const std::out_of_range&) {
    throw bad();
  }
}

std::vector<Index> parse_sizes(const std::vector<std::string>& items) {
  std::vector<Index> sizes;
  for (const auto& s : items) sizes.push_back(parse_size(s));
  return sizes;
}

struct Common {
  std::string algo = "dual";
  std::string scheme;
  std::vector<std::string> costs{"cmps"};
  std::string n;
  std::vector<std::string> sizes;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  Index cutoff = 0;
  std::string out;
  std::string format = "csv";
  unsigned threads = 1;
  Index key_range = 0;
};

Algorithm algorithm_of(const Common& c) { return parse_algorithm(c.algo); }

SamplingScheme scheme_of(const Common& c) {
  if (!c.scheme.empty()) return parse_scheme(c.scheme);
  return algorithm_of(c) == Algorithm::classic ? SamplingScheme::median(0)
                                               : SamplingScheme::tertiles(0);
}

std::vector<CostKind> costs_of(const Common& c) {
  std::vector<CostKind> out;
  for (const auto& s : c.costs) out.push_back(parse_cost_kind(s));
  return out;
}

Index single_n(const Common& c) {
  if (c.n.empty()) throw std::invalid_argument("--n is required");
  return parse_size(c.n);
}

std::vector<Index> sizes_of(const Common& c) {
  if (!c.sizes.empty()) return parse_sizes(c.sizes);
  if (!c.n.empty()) return {parse_size(c.n)};
  throw std::invalid_argument("--sizes or --n is required");
}

ExperimentConfig experiment_of(const Common& c) {
  ExperimentConfig config;
  config.algorithm = algorithm_of(c);
  config.scheme = scheme_of(c);
  config.costs = costs_of(c);
  config.sizes = sizes_of(c);
  config.trials = c.trials;
  config.seed = c.seed;
  config.cutoff = c.cutoff;
  config.threads = c.threads;
  config.key_range = c.key_range;
  return config;
}

void add_algo(CLI::App* app, Common& c) {
  app->add_option("--algo", c.algo, "classic | dual")
      ->check(CLI::IsMember({"classic", "dual"}))
      ->capture_default_str();
  app->add_option("--scheme", c.scheme,
                  "median:T | tertiles:T | ninther (default median:0 / tertiles:0)");
}

void add_cost(CLI::App* app, Common& c, bool many) {
  auto* opt = app->add_option("--cost", c.costs, "cmps | scans | swaps")->capture_default_str();
  if (many) {
    opt->delimiter(',');
  } else {
    opt->expected(1);
  }
}

void add_run(CLI::App* app, Common& c) {
  app->add_option("--n", c.n, "input size (accepts 2^k and 1eK)");
  app->add_option("--sizes", c.sizes, "comma-separated sizes")->delimiter(',');
  app->add_option("--trials", c.trials, "trials per size")->capture_default_str();
  app->add_option("--seed", c.seed, "64-bit base seed")->capture_default_str();
  app->add_option("--cutoff", c.cutoff, "insertion-sort cutoff, 0 = off")->capture_default_str();
  app->add_option("--key-range", c.key_range, "draw keys from 1..R with repetition, 0 = permutation")
      ->capture_default_str();
}

void add_output(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "output path, - for stdout");
  app->add_option("--format", c.format, "csv | tsv")
      ->check(CLI::IsMember({"csv", "tsv"}))
      ->capture_default_str();
}

std::string rational_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

void print_counters(const CostCounters& c) {
  std::cout << "comparisons " << c.comparisons << "\nswaps " << c.swaps << "\nscanned_elements "
            << c.scanned_elements << "\npartition_calls " << c.partition_calls << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Instrumented classic and dual-pivot Quicksort: counts, recurrences, benchmarks"};
  app.require_subcommand(1);
  Common c;

  auto* sort = app.add_subcommand("sort", "sort one input and print its counters");
  add_algo(sort, c);
  add_run(sort, c);
  std::vector<Key> keys;
  bool print_keys = false;
  sort->add_option("--keys", keys, "explicit input keys instead of a random one")->delimiter(',');
  sort->add_flag("--print", print_keys, "also print the sorted keys");

  auto* counts = app.add_subcommand("counts", "run an experiment and write its CSV");
  add_algo(counts, c);
  add_cost(counts, c, true);
  add_run(counts, c);
  add_output(counts, c);
  counts->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();

  auto* recurrence = app.add_subcommand("recurrence", "solve the cost recurrence, CSV n,value");
  add_algo(recurrence, c);
  add_cost(recurrence, c, false);
  add_output(recurrence, c);
  recurrence->add_option("--n", c.n, "horizon N")->required();
  std::string toll_mode = "analytic";
  bool exact = false;
  recurrence->add_option("--toll", toll_mode, "analytic | exhaustive | montecarlo")
      ->check(CLI::IsMember({"analytic", "exhaustive", "montecarlo"}))
      ->capture_default_str();
  recurrence->add_flag("--exact", exact, "rational arithmetic");
  recurrence->add_option("--seed", c.seed, "seed for --toll montecarlo")->capture_default_str();
  recurrence->add_option("--trials", c.trials, "trials per Monte Carlo toll estimate");

  auto* asymptotic = app.add_subcommand("asymptotic", "print the n ln n leading constant");
  add_algo(asymptotic, c);
  add_cost(asymptotic, c, false);

  auto* oracle = app.add_subcommand("oracle", "exhaustive average over all n! permutations");
  add_algo(oracle, c);
  add_cost(oracle, c, false);
  oracle->add_option("--n", c.n, "size, at most 9")->required();

  auto* toll = app.add_subcommand("toll", "expected cost of the first partitioning step");
  add_algo(toll, c);
  add_cost(toll, c, false);
  add_run(toll, c);
  bool exhaustive = false;
  toll->add_flag("--exhaustive", exhaustive, "average over all permutations (n <= 9)");

  auto* bench = app.add_subcommand("bench", "wall-clock timing of the uninstrumented sorters");
  add_algo(bench, c);
  add_run(bench, c);
  add_output(bench, c);
  std::size_t warmup = 2;
  bench->add_option("--warmup", warmup, "untimed runs per size")->capture_default_str();

  auto* chart = app.add_subcommand("chart", "SVG of normalized cost against n");
  add_cost(chart, c, false);
  add_run(chart, c);
  chart->add_option("--out", c.out, "SVG path, - for stdout");
  std::vector<std::string> series_specs{"dual/tertiles:1", "classic/ninther"};
  chart->add_option("--series", series_specs, "ALGO/SCHEME entries")
      ->delimiter(',')
      ->capture_default_str();
  std::string title;
  chart->add_option("--title", title, "chart title");

  CLI11_PARSE(app, argc, argv);

  if (sort->parsed()) {
    if (keys.empty()) {
      keys = gen_keys(single_n(c), c.seed, c.key_range);
    }
    InstrumentedArray arr(keys);
    quicksort(arr, algorithm_of(c), scheme_of(c), {c.cutoff, false});
    print_counters(arr.snapshot());
    if (print_keys) {
      for (std::size_t i = 0; i < arr.keys().size(); ++i) {
        std::cout << (i ? "," : "") << arr.keys()[i];
      }
      std::cout << '\n';
    }
  } else if (counts->parsed()) {
    const auto summary = run_experiment(experiment_of(c));
    const auto format = parse_csv_format(c.format);
    write_output(c.out, [&](std::ostream& os) { emit_csv(counts_rows(summary), os, format); });
  } else if (recurrence->parsed()) {
    const Algorithm alg = algorithm_of(c);
    const SamplingScheme scheme = scheme_of(c);
    if (!compatible(alg, scheme) || scheme.kind() == SamplingScheme::Kind::ninther) {
      throw std::invalid_argument("recurrences need median:T (classic) or tertiles:T (dual)");
    }
    const CostKind cost = costs_of(c).front();
    const Index n = single_n(c);
    TollMode mode = AnalyticLeading{};
    if (toll_mode == "exhaustive") {
      mode = exhaustive_toll_table(alg, cost, scheme, n);
    } else if (toll_mode == "montecarlo") {
      MonteCarloTollPlan plan;
      plan.seed = c.seed;
      if (recurrence->count("--trials") > 0) plan.trials = c.trials;
      mode = montecarlo_toll_table(alg, cost, scheme, n, plan);
    }
    const auto table = exact_recurrence(alg, cost, scheme.t(), mode, n,
                                        exact ? Arithmetic::exact : Arithmetic::floating);
    const char sep = parse_csv_format(c.format) == CsvFormat::csv ? ',' : '\t';
    write_output(c.out, [&](std::ostream& os) {
      if (!exact) {
        write_csv(table, os, sep);
        return;
      }
      os << "n" << sep << "value\n";
      for (std::size_t i = 0; i < table.exact.size(); ++i) {
        os << i << sep << rational_string(table.exact[i]) << '\n';
      }
    });
  } else if (asymptotic->parsed()) {
    std::cout << format_number(asymptotic_constant(algorithm_of(c), costs_of(c).front(),
                                                   scheme_of(c)))
              << '\n';
  } else if (oracle->parsed()) {
    const Rational r =
        exhaustive_expectation(algorithm_of(c), costs_of(c).front(), scheme_of(c), single_n(c));
    std::cout << rational_string(r) << " = " << format_number(static_cast<double>(r)) << '\n';
  } else if (toll->parsed()) {
    const Index n = single_n(c);
    TollMeasurement how = MonteCarlo{c.trials, c.seed};
    if (exhaustive) how = Exhaustive{};
    const auto est = empirical_toll(algorithm_of(c), costs_of(c).front(), scheme_of(c), n, how);
    std::cout << "toll " << format_number(est.value);
    if (est.exact) std::cout << " (" << rational_string(*est.exact) << ")";
    if (n > 0) std::cout << "\nper_n " << format_number(est.value / static_cast<double>(n));
    std::cout << '\n';
  } else if (bench->parsed()) {
    ExperimentConfig config = experiment_of(c);
    config.wallclock = true;
    config.warmup = warmup;
    const auto summary = bench_wallclock(config);
    const auto format = parse_csv_format(c.format);
    write_output(c.out, [&](std::ostream& os) { emit_bench_csv(summary, os, format); });
  } else if (chart->parsed()) {
    const CostKind cost = costs_of(c).front();
    std::vector<Index> sizes;
    if (c.sizes.empty() && c.n.empty()) {
      for (int e = 10; e <= 20; e += 2) sizes.push_back(Index{1} << e);
    } else {
      sizes = sizes_of(c);
    }
    std::vector<ChartSeries> series;
    for (const auto& spec : series_specs) {
      const auto slash = spec.find('/');
      if (slash == std::string::npos) throw std::invalid_argument("bad series '" + spec + "'");
      ExperimentConfig config;
      config.algorithm = parse_algorithm(spec.substr(0, slash));
      config.scheme = parse_scheme(spec.substr(slash + 1));
      config.costs = {cost};
      config.sizes = sizes;
      config.trials = c.trials;
      config.seed = c.seed;
      config.cutoff = c.cutoff;
      ChartSeries s{spec + " " + to_string(cost), {}, std::nullopt};
      if (cost != CostKind::swaps) s.asymptote = asymptotic_constant(config.algorithm, cost, config.scheme);
      for (const auto& row : run_experiment(config).sizes) {
        if (auto y = row.normalized(cost)) s.points.emplace_back(static_cast<double>(row.n), *y);
      }
      series.push_back(std::move(s));
    }
    if (title.empty()) title = to_string(cost) + " / (n ln n)";
    write_output(c.out, [&](std::ostream& os) { emit_svg_chart(series, os, title); });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "qslab: " << e.what() << '\n';
    return 1;
  }
}
