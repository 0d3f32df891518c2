#ifndef QSLAB_HARNESS_HPP
#define QSLAB_HARNESS_HPP

// Seeded experiments over the instrumented sorters, CSV/SVG emitters and
// the join between measured means and recurrence predictions.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qslab/analysis.hpp"
#include "qslab/costmodel.hpp"
#include "qslab/sortcore.hpp"

namespace qslab {

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::classic;
  SamplingScheme scheme = SamplingScheme::median(0);
  std::vector<CostKind> costs{CostKind::comparisons};
  std::vector<Index> sizes;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  Index cutoff = 0;         // insertion-sort threshold, 0 = off
  bool wallclock = false;   // also time an uninstrumented sort of each input
  Index key_range = 0;      // 0: permutation of 1..n; else keys drawn from 1..key_range
  unsigned threads = 1;     // worker threads for trials; 0 = hardware concurrency
  std::size_t warmup = 2;   // untimed runs before a wall-clock benchmark
};

// Throws std::invalid_argument on an unusable config.
void validate(const ExperimentConfig& config);

struct CounterStats {
  double mean = 0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
};

struct WallStats {
  double mean_ns = 0;
  double min_ns = 0;
  double max_ns = 0;
};

struct SizeSummary {
  Index n = 0;
  std::size_t trials = 0;
  CounterStats comparisons;
  CounterStats swaps;
  CounterStats scanned_elements;
  CounterStats partition_calls;
  std::optional<WallStats> wall;

  const CounterStats& of(CostKind cost) const;
  // mean / (n ln n); nullopt for n < 2.
  std::optional<double> normalized(CostKind cost) const;
};

struct TrialSummary {
  ExperimentConfig config;
  std::vector<SizeSummary> sizes;
};

// Fisher-Yates shuffle of 1..n under std::mt19937_64 seeded with `seed`.
std::vector<Key> gen_permutation(Index n, std::uint64_t seed);
// Keys for one trial: a permutation, or draws with repetition from
// 1..key_range when key_range > 0.
std::vector<Key> gen_keys(Index n, std::uint64_t seed, Index key_range);

// Every trial's output is checked for sortedness and multiset equality;
// a failure throws std::runtime_error naming the configuration and trial.
TrialSummary run_experiment(const ExperimentConfig& config);

// Wall-clock only, uninstrumented sorters, warmup runs excluded.
TrialSummary bench_wallclock(const ExperimentConfig& config);

enum class CsvFormat { csv, tsv };
CsvFormat parse_csv_format(std::string_view text);

struct CountsRow {
  std::string algo;
  std::string scheme;
  std::string cost;
  Index n;
  std::size_t trials;
  std::uint64_t seed;
  double mean;
  std::uint64_t min;
  std::uint64_t max;
  std::optional<double> normalized;
};

std::vector<CountsRow> counts_rows(const TrialSummary& summary);
// Header algo,scheme,cost,n,trials,seed,mean,min,max,normalized.
void emit_csv(const std::vector<CountsRow>& rows, std::ostream& out,
              CsvFormat format = CsvFormat::csv);
// Header algo,scheme,n,trials,seed,mean_ns,min_ns,max_ns.
void emit_bench_csv(const TrialSummary& summary, std::ostream& out,
                    CsvFormat format = CsvFormat::csv);

struct PredictionRow {
  Index n;
  double empirical;
  double predicted;
  double absolute_deviation;
  double relative_deviation;
  bool flagged;
};

struct PredictionReport {
  CostKind cost;
  double tolerance;
  std::vector<PredictionRow> rows;

  bool any_flagged() const;
};

// Joins the summary's means for the table's cost kind with the table's
// values. Throws std::invalid_argument if a size lies beyond the table.
PredictionReport compare_to_prediction(const TrialSummary& summary, const RecurrenceTable& table,
                                       double relative_tolerance);
void write_report(const PredictionReport& report, std::ostream& out);

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (n, normalized cost)
  std::optional<double> asymptote;
};

// Normalized cost against log2 n, one polyline per series and a dashed
// horizontal line per asymptote.
void emit_svg_chart(const std::vector<ChartSeries>& series, std::ostream& out,
                    const std::string& title);

// Opens `path` (or stdout for "" / "-") and hands the stream to `write`.
// I/O failures throw std::runtime_error carrying the path.
void write_output(const std::string& path, const std::function<void(std::ostream&)>& write);

}  // namespace qslab

#endif  // QSLAB_HARNESS_HPP
