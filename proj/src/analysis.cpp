#include "qslab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "qslab/format.hpp"
#include "qslab/random.hpp"

namespace qslab {

namespace {

SamplingScheme scheme_for(Algorithm algorithm, unsigned t) {
  return algorithm == Algorithm::classic ? SamplingScheme::median(t)
                                         : SamplingScheme::tertiles(t);
}

void require_compatible(Algorithm algorithm, const SamplingScheme& scheme) {
  if (!compatible(algorithm, scheme)) {
    throw std::invalid_argument("scheme " + to_string(scheme) + " cannot drive " +
                                to_string(algorithm) + " quicksort");
  }
}

void require_exhaustive_size(Index n) {
  if (n < 0 || n > kExhaustiveLimit) {
    throw std::invalid_argument("exhaustive enumeration needs 0 <= n <= " +
                                std::to_string(kExhaustiveLimit) + ", got " + std::to_string(n));
  }
}

BigInt factorial(Index n) {
  BigInt f = 1;
  for (Index i = 2; i <= n; ++i) f *= i;
  return f;
}

// Sum of `cost` over all permutations of 1..n of whatever `run` does.
template <class Run>
BigInt sum_over_permutations(Index n, CostKind cost, Run run) {
  std::vector<Key> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Key{1});
  BigInt total = 0;
  do {
    InstrumentedArray arr(perm);
    run(arr);
    total += counter_of(arr.snapshot(), cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// C(k, r) in double for k = 0..max_k, as a product of r ratios.
std::vector<double> binomial_column(Index max_k, Index r) {
  std::vector<double> col(static_cast<std::size_t>(max_k + 1), 0.0);
  for (Index k = r; k <= max_k; ++k) {
    double c = 1;
    for (Index i = 1; i <= r; ++i) c = c * static_cast<double>(k - r + i) / static_cast<double>(i);
    col[static_cast<std::size_t>(k)] = c;
  }
  return col;
}

Rational exact_segment_mass(Algorithm algorithm, Index n, unsigned t, Index j) {
  const auto tt = static_cast<std::int64_t>(t);
  if (algorithm == Algorithm::classic) {
    return Rational(binomial(j, tt) * binomial(n - 1 - j, tt), binomial(n, 2 * tt + 1));
  }
  return Rational(binomial(j, tt) * binomial(n - 1 - j, 2 * tt + 1), binomial(n, 3 * tt + 2));
}

void check_sample_fits(Algorithm algorithm, Index n, unsigned t) {
  const Index m = scheme_for(algorithm, t).sample_size();
  if (n < m || n < 1) {
    throw std::invalid_argument("segment distribution needs n >= sample size " +
                                std::to_string(m) + ", got " + std::to_string(n));
  }
}

}  // namespace

std::string to_string(CostKind cost) {
  switch (cost) {
    case CostKind::comparisons: return "cmps";
    case CostKind::scanned_elements: return "scans";
    case CostKind::swaps: return "swaps";
  }
  return {};
}

CostKind parse_cost_kind(std::string_view text) {
  if (text == "cmps") return CostKind::comparisons;
  if (text == "scans") return CostKind::scanned_elements;
  if (text == "swaps") return CostKind::swaps;
  throw std::invalid_argument("unknown cost '" + std::string(text) +
                              "' (expected cmps|scans|swaps)");
}

std::uint64_t counter_of(const CostCounters& counters, CostKind cost) {
  switch (cost) {
    case CostKind::comparisons: return counters.comparisons;
    case CostKind::scanned_elements: return counters.scanned_elements;
    case CostKind::swaps: return counters.swaps;
  }
  return 0;
}

Rational harmonic_exact(unsigned n) {
  Rational h = 0;
  for (unsigned i = 1; i <= n; ++i) h += Rational(1, i);
  return h;
}

double harmonic(unsigned n) {
  double h = 0;
  for (unsigned i = n; i >= 1; --i) h += 1.0 / i;
  return h;
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    c *= n - k + i;
    c /= i;
  }
  return c;
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double asymptotic_constant(Algorithm algorithm, CostKind cost, const SamplingScheme& scheme) {
  if (cost == CostKind::swaps) {
    throw std::invalid_argument("no asymptotic constant for swaps");
  }
  require_compatible(algorithm, scheme);
  if (scheme.kind() == SamplingScheme::Kind::ninther) return kNintherConstant;

  const unsigned t = scheme.t();
  if (algorithm == Algorithm::classic) {
    return 1.0 / (harmonic(2 * (t + 1)) - harmonic(t + 1));
  }
  const double toll = cost == CostKind::comparisons ? 5.0 / 3.0 - 1.0 / (9.0 * t + 12.0)
                                                    : 4.0 / 3.0;
  return toll / (harmonic(3 * (t + 1)) - harmonic(t + 1));
}

SegmentSizeDistribution segment_distribution(Algorithm algorithm, Index n, unsigned t,
                                             Arithmetic arithmetic) {
  check_sample_fits(algorithm, n, t);
  const Index support = algorithm == Algorithm::classic ? n : n - 1;
  SegmentSizeDistribution d{algorithm, n, t, std::vector<double>(static_cast<std::size_t>(support)), {}};
  if (arithmetic == Arithmetic::exact) {
    d.exact.resize(static_cast<std::size_t>(support));
    for (Index j = 0; j < support; ++j) {
      d.exact[static_cast<std::size_t>(j)] = exact_segment_mass(algorithm, n, t, j);
      d.mass[static_cast<std::size_t>(j)] =
          static_cast<double>(d.exact[static_cast<std::size_t>(j)]);
    }
    return d;
  }
  const auto td = static_cast<double>(t);
  const auto nd = static_cast<double>(n);
  const double log_total = algorithm == Algorithm::classic ? log_binomial(nd, 2 * td + 1)
                                                           : log_binomial(nd, 3 * td + 2);
  for (Index j = 0; j < support; ++j) {
    const auto jd = static_cast<double>(j);
    const double rest = algorithm == Algorithm::classic ? td : 2 * td + 1;
    if (jd < td || nd - 1 - jd < rest) continue;
    d.mass[static_cast<std::size_t>(j)] =
        std::exp(log_binomial(jd, td) + log_binomial(nd - 1 - jd, rest) - log_total);
  }
  return d;
}

Rational exhaustive_expectation(Algorithm algorithm, CostKind cost, const SamplingScheme& scheme,
                                Index n) {
  require_compatible(algorithm, scheme);
  require_exhaustive_size(n);
  if (n < 2) return 0;
  const BigInt total = sum_over_permutations(
      n, cost, [&](InstrumentedArray& arr) { quicksort(arr, algorithm, scheme); });
  return Rational(total, factorial(n));
}

TollEstimate empirical_toll(Algorithm algorithm, CostKind cost, const SamplingScheme& scheme,
                            Index n, const TollMeasurement& measurement) {
  require_compatible(algorithm, scheme);
  if (const auto* mc = std::get_if<MonteCarlo>(&measurement)) {
    if (mc->trials == 0) throw std::invalid_argument("Monte Carlo toll needs trials >= 1");
    if (n < 2) return {0.0, std::nullopt};
    BigInt total = 0;
    for (std::size_t trial = 0; trial < mc->trials; ++trial) {
      Rng rng(trial_seed(mc->seed, trial));
      InstrumentedArray arr(random_permutation(static_cast<std::size_t>(n), rng));
      partition_step(arr, algorithm, scheme, 0, n - 1);
      total += counter_of(arr.snapshot(), cost);
    }
    return {static_cast<double>(Rational(total, mc->trials)), std::nullopt};
  }

  require_exhaustive_size(n);
  if (n < 2) return {0.0, Rational(0)};
  const BigInt total = sum_over_permutations(n, cost, [&](InstrumentedArray& arr) {
    partition_step(arr, algorithm, scheme, 0, n - 1);
  });
  Rational exact(total, factorial(n));
  return {static_cast<double>(exact), exact};
}

Rational analytic_toll(Algorithm algorithm, CostKind cost, unsigned t, Index n) {
  const Rational size(static_cast<std::int64_t>(n));
  switch (cost) {
    case CostKind::comparisons:
      if (algorithm == Algorithm::classic) return size - 1;
      return (Rational(5, 3) - Rational(1, 9 * static_cast<std::int64_t>(t) + 12)) * size;
    case CostKind::scanned_elements:
      if (algorithm == Algorithm::classic) return size;
      return Rational(4, 3) * size;
    case CostKind::swaps:
      break;
  }
  throw std::invalid_argument("no analytic toll for " + to_string(cost));
}

EmpiricalToll exhaustive_toll_table(Algorithm algorithm, CostKind cost,
                                    const SamplingScheme& scheme, Index max_n) {
  require_exhaustive_size(max_n);
  EmpiricalToll table;
  table.by_size.assign(static_cast<std::size_t>(max_n + 1), Rational(0));
  for (Index n = 2; n <= max_n; ++n) {
    table.by_size[static_cast<std::size_t>(n)] =
        *empirical_toll(algorithm, cost, scheme, n, Exhaustive{}).exact;
  }
  return table;
}

EmpiricalToll montecarlo_toll_table(Algorithm algorithm, CostKind cost,
                                    const SamplingScheme& scheme, Index max_n,
                                    const MonteCarloTollPlan& plan) {
  if (plan.exhaustive_upto > kExhaustiveLimit || plan.trials == 0 || plan.grid_trials == 0 ||
      plan.grid_points < 2) {
    throw std::invalid_argument("invalid Monte Carlo toll plan");
  }
  EmpiricalToll table;
  table.by_size.assign(static_cast<std::size_t>(std::max<Index>(max_n, 1) + 1), Rational(0));

  const auto estimate = [&](Index n, std::size_t trials) {
    const MonteCarlo mc{trials, mix64(plan.seed + static_cast<std::uint64_t>(n))};
    return empirical_toll(algorithm, cost, scheme, n, mc).value;
  };

  for (Index n = 2; n <= max_n; ++n) {
    if (n > plan.per_size_upto) break;
    table.by_size[static_cast<std::size_t>(n)] =
        n <= plan.exhaustive_upto ? *empirical_toll(algorithm, cost, scheme, n, Exhaustive{}).exact
                                  : Rational(estimate(n, plan.trials));
  }
  if (max_n <= plan.per_size_upto) return table;

  // Affine least squares over a geometric grid.
  const double lo = static_cast<double>(std::max<Index>(plan.per_size_upto, 2));
  const double hi = static_cast<double>(max_n);
  std::vector<Index> grid;
  for (std::size_t i = 0; i < plan.grid_points; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(plan.grid_points - 1);
    const auto n = static_cast<Index>(std::llround(lo * std::pow(hi / lo, frac)));
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const Index n : grid) {
    const auto x = static_cast<double>(n);
    const double y = estimate(n, plan.grid_trials);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto count = static_cast<double>(grid.size());
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  for (Index n = plan.per_size_upto + 1; n <= max_n; ++n) {
    table.by_size[static_cast<std::size_t>(n)] = Rational(slope * static_cast<double>(n) + intercept);
  }
  return table;
}

Index base_case_horizon(Algorithm algorithm, unsigned t) {
  return scheme_for(algorithm, t).sample_size() + 2;
}

RecurrenceTable exact_recurrence(Algorithm algorithm, CostKind cost, unsigned t,
                                 const TollMode& toll, Index max_n, Arithmetic arithmetic) {
  if (max_n < 0) throw std::invalid_argument("recurrence horizon must be >= 0");
  const auto* empirical = std::get_if<EmpiricalToll>(&toll);
  if (empirical != nullptr && max_n >= 2 &&
      static_cast<Index>(empirical->by_size.size()) <= max_n) {
    throw std::invalid_argument("empirical toll table covers sizes up to " +
                                std::to_string(empirical->by_size.size() - 1) +
                                ", recurrence needs " + std::to_string(max_n));
  }
  if (empirical == nullptr && cost == CostKind::swaps) {
    throw std::invalid_argument("swaps need an empirical toll table");
  }

  const SamplingScheme scheme = scheme_for(algorithm, t);
  const Index horizon = base_case_horizon(algorithm, t);
  const int segments = algorithm == Algorithm::classic ? 2 : 3;

  RecurrenceTable table{algorithm, cost, t, empirical == nullptr, arithmetic, {}, {}};
  const auto size = static_cast<std::size_t>(max_n + 1);
  table.values.assign(size, 0.0);

  const auto toll_at = [&](Index n) {
    return empirical != nullptr ? empirical->by_size[static_cast<std::size_t>(n)]
                                : analytic_toll(algorithm, cost, t, n);
  };

  if (arithmetic == Arithmetic::exact) {
    table.exact.assign(size, Rational(0));
    for (Index n = 2; n <= max_n; ++n) {
      Rational c;
      if (n < horizon) {
        c = exhaustive_expectation(algorithm, cost, scheme, n);
      } else {
        Rational recursive = 0;
        for (Index j = 0; j < n; ++j) {
          recursive += exact_segment_mass(algorithm, n, t, j) * table.exact[static_cast<std::size_t>(j)];
        }
        c = toll_at(n) + segments * recursive;
      }
      table.exact[static_cast<std::size_t>(n)] = c;
      table.values[static_cast<std::size_t>(n)] = static_cast<double>(c);
    }
    return table;
  }

  std::vector<double> float_toll;
  if (empirical != nullptr) {
    float_toll.resize(size, 0.0);
    for (Index n = 2; n <= max_n; ++n) {
      float_toll[static_cast<std::size_t>(n)] = static_cast<double>(toll_at(n));
    }
  }
  // Analytic tolls are affine in n.
  const double toll_at_0 =
      empirical != nullptr ? 0.0 : static_cast<double>(analytic_toll(algorithm, cost, t, 0));
  const double toll_slope =
      empirical != nullptr ? 0.0
                           : static_cast<double>(analytic_toll(algorithm, cost, t, 1)) - toll_at_0;

  const auto tt = static_cast<Index>(t);
  const Index rest = algorithm == Algorithm::classic ? tt : 2 * tt + 1;
  const std::vector<double> low_col = binomial_column(max_n, tt);
  const std::vector<double> rest_col = binomial_column(max_n, rest);
  const std::vector<double> total_col = binomial_column(max_n, scheme.sample_size());
  if (!std::isfinite(total_col.back())) {
    throw std::invalid_argument("sample too large for floating-point recurrence at N=" +
                                std::to_string(max_n));
  }

  for (Index n = 2; n <= max_n; ++n) {
    double c;
    if (n < horizon) {
      c = static_cast<double>(exhaustive_expectation(algorithm, cost, scheme, n));
    } else {
      // p(j) = C(j,t) C(n-1-j,rest) / C(n,m)
      const double norm = 1.0 / total_col[static_cast<std::size_t>(n)];
      double recursive = 0;
      for (Index j = tt; j + rest <= n - 1; ++j) {
        recursive += low_col[static_cast<std::size_t>(j)] *
                     rest_col[static_cast<std::size_t>(n - 1 - j)] *
                     table.values[static_cast<std::size_t>(j)];
      }
      recursive *= norm;
      const double toll_n = empirical != nullptr
                                ? float_toll[static_cast<std::size_t>(n)]
                                : toll_at_0 + toll_slope * static_cast<double>(n);
      c = toll_n + segments * recursive;
    }
    table.values[static_cast<std::size_t>(n)] = c;
  }
  return table;
}

double leading_constant_estimate(const RecurrenceTable& table, Index n) {
  if (n < 2 || 2 * n > table.horizon()) {
    throw std::invalid_argument("leading constant at n=" + std::to_string(n) +
                                " needs the table to reach " + std::to_string(2 * n) +
                                ", horizon is " + std::to_string(table.horizon()));
  }
  const double c_n = table.values[static_cast<std::size_t>(n)];
  const double c_2n = table.values[static_cast<std::size_t>(2 * n)];
  return (c_2n - 2 * c_n) / (2 * static_cast<double>(n) * std::log(2.0));
}

void write_csv(const RecurrenceTable& table, std::ostream& out, char separator) {
  out << "n" << separator << "value\n";
  for (std::size_t n = 0; n < table.values.size(); ++n) {
    out << n << separator << format_number(table.values[n]) << '\n';
  }
}

}  // namespace qslab
