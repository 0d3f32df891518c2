#include "qslab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qslab/format.hpp"
#include "qslab/random.hpp"

namespace qslab {

namespace {

// Runs fn(trial) for every trial, spread over `threads` workers. Results are
// written by index, so the caller's aggregation is independent of scheduling.
template <class Fn>
void for_each_trial(std::size_t trials, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials));
  if (threads <= 1) {
    for (std::size_t i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < trials; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (first_error) std::rethrow_exception(first_error);
}

CounterStats aggregate(const std::vector<CostCounters>& runs,
                       std::uint64_t CostCounters::*field) {
  CounterStats s;
  s.min = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t sum = 0;
  for (const auto& c : runs) {
    const std::uint64_t v = c.*field;
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = static_cast<double>(sum) / static_cast<double>(runs.size());
  return s;
}

WallStats aggregate_wall(const std::vector<double>& ns) {
  WallStats w;
  w.min_ns = *std::min_element(ns.begin(), ns.end());
  w.max_ns = *std::max_element(ns.begin(), ns.end());
  double sum = 0;
  for (const double v : ns) sum += v;
  w.mean_ns = sum / static_cast<double>(ns.size());
  return w;
}

std::string describe(const ExperimentConfig& config, Index n, std::size_t trial) {
  std::ostringstream os;
  os << to_string(config.algorithm) << " quicksort with " << to_string(config.scheme)
     << " at n=" << n << ", trial " << trial << ", seed " << config.seed;
  return os.str();
}

void check_sorted(std::span<const Key> got, const std::vector<Key>& expected,
                  const ExperimentConfig& config, Index n, std::size_t trial) {
  if (!std::equal(got.begin(), got.end(), expected.begin(), expected.end())) {
    throw std::runtime_error("unsorted or corrupted output from " +
                             describe(config, n, trial));
  }
}

SortOptions harness_options(const ExperimentConfig& config) {
  return {config.cutoff, true};
}

double time_plain_sort(std::vector<Key>& keys, const ExperimentConfig& config) {
  PlainArray plain(keys);
  const auto start = std::chrono::steady_clock::now();
  quicksort(plain, config.algorithm, config.scheme, harness_options(config));
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::nano>(stop - start).count();
}

char separator(CsvFormat format) { return format == CsvFormat::csv ? ',' : '\t'; }

std::string xml_escape(const std::string& text) {
  std::string out;
  for (const char ch : text) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!compatible(config.algorithm, config.scheme)) {
    throw std::invalid_argument("scheme " + to_string(config.scheme) + " cannot drive " +
                                to_string(config.algorithm) + " quicksort");
  }
  for (const Index n : config.sizes) {
    if (n < 0) throw std::invalid_argument("sizes must be >= 0");
  }
  if (config.cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
  if (config.key_range < 0) throw std::invalid_argument("key range must be >= 0");
}

const CounterStats& SizeSummary::of(CostKind cost) const {
  switch (cost) {
    case CostKind::comparisons: return comparisons;
    case CostKind::scanned_elements: return scanned_elements;
    case CostKind::swaps: return swaps;
  }
  return comparisons;
}

std::optional<double> SizeSummary::normalized(CostKind cost) const {
  if (n < 2) return std::nullopt;
  const auto nd = static_cast<double>(n);
  return of(cost).mean / (nd * std::log(nd));
}

std::vector<Key> gen_permutation(Index n, std::uint64_t seed) {
  Rng rng(seed);
  return random_permutation(static_cast<std::size_t>(n), rng);
}

std::vector<Key> gen_keys(Index n, std::uint64_t seed, Index key_range) {
  if (key_range == 0) return gen_permutation(n, seed);
  Rng rng(seed);
  std::vector<Key> keys(static_cast<std::size_t>(n));
  for (auto& k : keys) k = 1 + static_cast<Key>(uniform_below(rng, static_cast<std::uint64_t>(key_range)));
  return keys;
}

TrialSummary run_experiment(const ExperimentConfig& config) {
  validate(config);
  TrialSummary summary{config, {}};
  for (const Index n : config.sizes) {
    std::vector<CostCounters> counters(config.trials);
    std::vector<double> wall(config.wallclock ? config.trials : 0);
    for_each_trial(config.trials, config.threads, [&](std::size_t trial) {
      const std::vector<Key> input = gen_keys(n, trial_seed(config.seed, trial), config.key_range);
      std::vector<Key> expected = input;
      std::sort(expected.begin(), expected.end());

      InstrumentedArray arr(input);
      quicksort(arr, config.algorithm, config.scheme, harness_options(config));
      check_sorted(arr.keys(), expected, config, n, trial);
      counters[trial] = arr.snapshot();

      if (config.wallclock) {
        std::vector<Key> plain = input;
        wall[trial] = time_plain_sort(plain, config);
        check_sorted(plain, expected, config, n, trial);
      }
    });

    SizeSummary s;
    s.n = n;
    s.trials = config.trials;
    s.comparisons = aggregate(counters, &CostCounters::comparisons);
    s.swaps = aggregate(counters, &CostCounters::swaps);
    s.scanned_elements = aggregate(counters, &CostCounters::scanned_elements);
    s.partition_calls = aggregate(counters, &CostCounters::partition_calls);
    if (config.wallclock) s.wall = aggregate_wall(wall);
    summary.sizes.push_back(s);
  }
  return summary;
}

TrialSummary bench_wallclock(const ExperimentConfig& config) {
  validate(config);
  TrialSummary summary{config, {}};
  for (const Index n : config.sizes) {
    for (std::size_t w = 0; w < config.warmup; ++w) {
      std::vector<Key> keys =
          gen_keys(n, trial_seed(config.seed, config.trials + w), config.key_range);
      time_plain_sort(keys, config);
    }
    // Timed runs stay sequential so they do not compete for cores.
    std::vector<double> wall(config.trials);
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      std::vector<Key> keys = gen_keys(n, trial_seed(config.seed, trial), config.key_range);
      std::vector<Key> expected = keys;
      std::sort(expected.begin(), expected.end());
      wall[trial] = time_plain_sort(keys, config);
      check_sorted(keys, expected, config, n, trial);
    }
    SizeSummary s;
    s.n = n;
    s.trials = config.trials;
    s.wall = aggregate_wall(wall);
    summary.sizes.push_back(s);
  }
  return summary;
}

CsvFormat parse_csv_format(std::string_view text) {
  if (text == "csv") return CsvFormat::csv;
  if (text == "tsv") return CsvFormat::tsv;
  throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected csv|tsv)");
}

std::vector<CountsRow> counts_rows(const TrialSummary& summary) {
  std::vector<CountsRow> rows;
  const ExperimentConfig& c = summary.config;
  for (const SizeSummary& s : summary.sizes) {
    for (const CostKind cost : c.costs) {
      const CounterStats& stats = s.of(cost);
      rows.push_back({to_string(c.algorithm), to_string(c.scheme), to_string(cost), s.n, s.trials,
                      c.seed, stats.mean, stats.min, stats.max, s.normalized(cost)});
    }
  }
  return rows;
}

void emit_csv(const std::vector<CountsRow>& rows, std::ostream& out, CsvFormat format) {
  const char sep = separator(format);
  out << "algo" << sep << "scheme" << sep << "cost" << sep << "n" << sep << "trials" << sep
      << "seed" << sep << "mean" << sep << "min" << sep << "max" << sep << "normalized\n";
  for (const CountsRow& r : rows) {
    out << r.algo << sep << r.scheme << sep << r.cost << sep << r.n << sep << r.trials << sep
        << r.seed << sep << format_number(r.mean) << sep << r.min << sep << r.max << sep;
    if (r.normalized) out << format_number(*r.normalized);
    out << '\n';
  }
}

void emit_bench_csv(const TrialSummary& summary, std::ostream& out, CsvFormat format) {
  const char sep = separator(format);
  const ExperimentConfig& c = summary.config;
  out << "algo" << sep << "scheme" << sep << "n" << sep << "trials" << sep << "seed" << sep
      << "mean_ns" << sep << "min_ns" << sep << "max_ns\n";
  for (const SizeSummary& s : summary.sizes) {
    const WallStats w = s.wall.value_or(WallStats{});
    out << to_string(c.algorithm) << sep << to_string(c.scheme) << sep << s.n << sep << s.trials
        << sep << c.seed << sep << format_number(w.mean_ns) << sep << format_number(w.min_ns)
        << sep << format_number(w.max_ns) << '\n';
  }
}

bool PredictionReport::any_flagged() const {
  return std::any_of(rows.begin(), rows.end(), [](const PredictionRow& r) { return r.flagged; });
}

PredictionReport compare_to_prediction(const TrialSummary& summary, const RecurrenceTable& table,
                                       double relative_tolerance) {
  PredictionReport report{table.cost, relative_tolerance, {}};
  for (const SizeSummary& s : summary.sizes) {
    if (s.n > table.horizon()) {
      throw std::invalid_argument("size " + std::to_string(s.n) +
                                  " beyond recurrence horizon " + std::to_string(table.horizon()));
    }
    const double empirical = s.of(table.cost).mean;
    const double predicted = table.values[static_cast<std::size_t>(s.n)];
    const double abs_dev = std::abs(empirical - predicted);
    const double rel_dev = predicted != 0 ? abs_dev / std::abs(predicted) : (abs_dev == 0 ? 0 : INFINITY);
    report.rows.push_back({s.n, empirical, predicted, abs_dev, rel_dev, rel_dev > relative_tolerance});
  }
  return report;
}

void write_report(const PredictionReport& report, std::ostream& out) {
  out << "n,empirical,predicted,abs_dev,rel_dev,flagged\n";
  for (const PredictionRow& r : report.rows) {
    out << r.n << ',' << format_number(r.empirical) << ',' << format_number(r.predicted) << ','
        << format_number(r.absolute_deviation) << ',' << format_number(r.relative_deviation) << ','
        << (r.flagged ? "yes" : "no") << '\n';
  }
}

void emit_svg_chart(const std::vector<ChartSeries>& series, std::ostream& out,
                    const std::string& title) {
  constexpr double width = 800, height = 500;
  constexpr double left = 70, right = 200, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const ChartSeries& s : series) {
    for (const auto& [n, y] : s.points) {
      x_lo = std::min(x_lo, std::log2(n));
      x_hi = std::max(x_hi, std::log2(n));
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
    if (s.asymptote) {
      y_lo = std::min(y_lo, *s.asymptote);
      y_hi = std::max(y_hi, *s.asymptote);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1;
  if (!std::isfinite(y_lo)) y_lo = 0, y_hi = 1;
  if (x_hi - x_lo < 1e-9) x_lo -= 0.5, x_hi += 0.5;
  const double pad = std::max(0.05 * (y_hi - y_lo), 0.01);
  y_lo -= pad;
  y_hi += pad;

  const auto px = [&](double log2n) { return left + (log2n - x_lo) / (x_hi - x_lo) * plot_w; };
  const auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };
  static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                        "#8c564b"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
  out << "<g stroke=\"black\" fill=\"none\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\"/>\n</g>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int e = static_cast<int>(std::ceil(x_lo)); e <= static_cast<int>(std::floor(x_hi)); ++e) {
    out << "<text x=\"" << px(e) << "\" y=\"" << top + plot_h + 16
        << "\" text-anchor=\"middle\">2^" << e << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double y = y_lo + (y_hi - y_lo) * i / 5.0;
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << format_number(std::round(y * 1000) / 1000) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">n (log scale)</text>\n";
  out << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\" text-anchor=\"middle\">cost / (n ln n)</text>\n</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const ChartSeries& s = series[i];
    const char* color = palette[i % std::size(palette)];
    if (s.asymptote) {
      out << "<line x1=\"" << left << "\" y1=\"" << py(*s.asymptote) << "\" x2=\"" << left + plot_w
          << "\" y2=\"" << py(*s.asymptote) << "\" stroke=\"" << color
          << "\" stroke-dasharray=\"6 4\"/>\n";
      out << "<text x=\"" << left + plot_w + 4 << "\" y=\"" << py(*s.asymptote) + 4
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color << "\">"
          << format_number(*s.asymptote) << "</text>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [n, y] : s.points) out << px(std::log2(n)) << ',' << py(y) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << left + plot_w + 60 << "\" y=\"" << top + 16 + 18 * static_cast<double>(i)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">" << xml_escape(s.label)
        << "</text>\n";
  }
  out << "</svg>\n";
}

void write_output(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(file);
  file.flush();
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace qslab
