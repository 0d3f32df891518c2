#include "qslab/sortcore.hpp"

#include <charconv>

namespace qslab {

std::string to_string(Algorithm algorithm) {
  return algorithm == Algorithm::classic ? "classic" : "dual";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "classic") return Algorithm::classic;
  if (text == "dual") return Algorithm::dual_pivot;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) +
                              "' (expected classic|dual)");
}

Index SamplingScheme::sample_size() const {
  switch (kind_) {
    case Kind::classic_median: return 2 * static_cast<Index>(t_) + 1;
    case Kind::dual_tertiles: return 3 * static_cast<Index>(t_) + 2;
    case Kind::ninther: return 9;
  }
  return 0;
}

SamplingScheme SamplingScheme::effective_for(Index size) const {
  if (size >= sample_size()) return *this;
  return kind_ == Kind::dual_tertiles ? tertiles(0) : median(0);
}

std::string to_string(const SamplingScheme& scheme) {
  switch (scheme.kind()) {
    case SamplingScheme::Kind::classic_median: return "median:" + std::to_string(scheme.t());
    case SamplingScheme::Kind::dual_tertiles: return "tertiles:" + std::to_string(scheme.t());
    case SamplingScheme::Kind::ninther: return "ninther";
  }
  return {};
}

SamplingScheme parse_scheme(std::string_view text) {
  if (text == "ninther") return SamplingScheme::ninther();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view family = text.substr(0, colon);
    const std::string_view digits = text.substr(colon + 1);
    unsigned t = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t);
    if (ec == std::errc() && end == digits.data() + digits.size() && !digits.empty()) {
      if (family == "median") return SamplingScheme::median(t);
      if (family == "tertiles") return SamplingScheme::tertiles(t);
    }
  }
  throw std::invalid_argument("unknown scheme '" + std::string(text) +
                              "' (expected median:T|tertiles:T|ninther)");
}

bool compatible(Algorithm algorithm, const SamplingScheme& scheme) {
  const bool dual_scheme = scheme.kind() == SamplingScheme::Kind::dual_tertiles;
  return dual_scheme == (algorithm == Algorithm::dual_pivot);
}

std::vector<Index> sample_positions(Index left, Index size, Index sample_size) {
  std::vector<Index> out(static_cast<std::size_t>(sample_size));
  if (sample_size == 1) {
    out[0] = left;
    return out;
  }
  for (Index i = 0; i < sample_size; ++i) {
    out[static_cast<std::size_t>(i)] = left + i * (size - 1) / (sample_size - 1);
  }
  return out;
}

}  // namespace qslab
