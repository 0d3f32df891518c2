#ifndef QSLAB_ANALYSIS_HPP
#define QSLAB_ANALYSIS_HPP

// Average-case model: segment-size distributions under pivot sampling, the
// divide-and-conquer cost recurrences solved bottom-up, their leading
// n ln n constants, and an exhaustive oracle that averages the instrumented
// sorters over all permutations.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qslab/costmodel.hpp"
#include "qslab/sortcore.hpp"

namespace qslab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class CostKind { comparisons, scanned_elements, swaps };

std::string to_string(CostKind cost);
// Accepts "cmps", "scans" and "swaps".
CostKind parse_cost_kind(std::string_view text);
std::uint64_t counter_of(const CostCounters& counters, CostKind cost);

// Ninther leading constant for classic Quicksort (comparisons and scans
// share it, the tolls differ only by O(1)).
inline constexpr double kNintherConstant = 1.5697;

Rational harmonic_exact(unsigned n);
double harmonic(unsigned n);
BigInt binomial(std::int64_t n, std::int64_t k);
// log C(n, k) through lgamma.
double log_binomial(double n, double k);

// Coefficient of n ln n. Throws std::invalid_argument for swaps, for
// ninther on the dual-pivot algorithm and for incompatible pairs.
double asymptotic_constant(Algorithm algorithm, CostKind cost, const SamplingScheme& scheme);

enum class Arithmetic { exact, floating };

// Law of the size of one recursive segment after a sampled partition of n
// keys: classic C(j,t) C(n-1-j,t) / C(n,2t+1) on [0, n-1]; dual (one of the
// three exchangeable segments) C(j,t) C(n-1-j,2t+1) / C(n,3t+2) on [0, n-2].
struct SegmentSizeDistribution {
  Algorithm algorithm;
  Index n;
  unsigned t;
  std::vector<double> mass;
  std::vector<Rational> exact;  // empty in floating mode
};

// Throws std::invalid_argument when n is below the sample size.
SegmentSizeDistribution segment_distribution(Algorithm algorithm, Index n, unsigned t,
                                             Arithmetic arithmetic = Arithmetic::exact);

// Average of one counter of the full instrumented sort over all n!
// permutations of 1..n. n <= 9.
inline constexpr Index kExhaustiveLimit = 9;
Rational exhaustive_expectation(Algorithm algorithm, CostKind cost, const SamplingScheme& scheme,
                                Index n);

struct Exhaustive {};
struct MonteCarlo {
  std::size_t trials;
  std::uint64_t seed;
};
using TollMeasurement = std::variant<Exhaustive, MonteCarlo>;

struct TollEstimate {
  double value;
  std::optional<Rational> exact;  // set for exhaustive measurement
};

// Expected cost of the first partitioning step (sampling included) on a
// random permutation of n keys.
TollEstimate empirical_toll(Algorithm algorithm, CostKind cost, const SamplingScheme& scheme,
                            Index n, const TollMeasurement& measurement);

struct AnalyticLeading {};

// Expected toll per subarray size; index n, entries below 2 ignored.
struct EmpiricalToll {
  std::vector<Rational> by_size;
};

using TollMode = std::variant<AnalyticLeading, EmpiricalToll>;

// Leading-term toll: classic n-1 comparisons / n scans; dual
// (5/3 - 1/(9t+12)) n comparisons / 4n/3 scans.
Rational analytic_toll(Algorithm algorithm, CostKind cost, unsigned t, Index n);

EmpiricalToll exhaustive_toll_table(Algorithm algorithm, CostKind cost,
                                    const SamplingScheme& scheme, Index max_n);

struct MonteCarloTollPlan {
  Index exhaustive_upto = 8;    // exact tolls at and below
  Index per_size_upto = 64;        // one Monte Carlo estimate per size up to here
  std::size_t trials = 1000;       // trials per per-size estimate
  std::size_t grid_points = 8;     // geometric grid for the affine fit beyond
  std::size_t grid_trials = 2000;  // trials per grid estimate
  std::uint64_t seed = 1;
};

// Toll table up to max_n: exhaustive for small sizes, per-size Monte Carlo
// next, and an affine least-squares fit a*n + b of grid estimates beyond.
EmpiricalToll montecarlo_toll_table(Algorithm algorithm, CostKind cost,
                                    const SamplingScheme& scheme, Index max_n,
                                    const MonteCarloTollPlan& plan = {});

struct RecurrenceTable {
  Algorithm algorithm;
  CostKind cost;
  unsigned t;
  bool analytic_toll;
  Arithmetic arithmetic;
  std::vector<double> values;   // c_0..c_N
  std::vector<Rational> exact;  // c_0..c_N in exact mode, else empty

  Index horizon() const { return static_cast<Index>(values.size()) - 1; }
};

// Sizes at which the recurrence formula is replaced by the exhaustive
// oracle: 2 <= n < sample size + 2.
Index base_case_horizon(Algorithm algorithm, unsigned t);

// c_n = toll(n) + sum over segments of E[c_segment]. Throws
// std::invalid_argument if an empirical table does not reach N or for an
// unsupported cost/mode pair.
RecurrenceTable exact_recurrence(Algorithm algorithm, CostKind cost, unsigned t,
                                 const TollMode& toll, Index max_n,
                                 Arithmetic arithmetic = Arithmetic::floating);

// (c_2n - 2 c_n) / (2n ln 2): cancels the linear term of a n ln n + b n.
double leading_constant_estimate(const RecurrenceTable& table, Index n);

// Columns n,value.
void write_csv(const RecurrenceTable& table, std::ostream& out, char separator = ',');

}  // namespace qslab

#endif  // QSLAB_ANALYSIS_HPP
