#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tmd {

/// Tolerance on the normalization of distributions produced by the library.
inline constexpr double kNormalizationTol = 1e-12;

/// Tolerance accepted on externally supplied photon statistics; inputs within
/// this distance of unit norm are rescaled exactly, anything further is rejected.
inline constexpr double kInputNormalizationTol = 1e-9;

/// Probabilities below this after exponentiation are flushed to exact zero.
inline constexpr double kProbabilityFloor = 1e-300;

namespace detail {

inline void check_entries_nonnegative(const std::vector<double>& p, const char* what) {
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::domain_error(std::string(what) + ": entries must be finite and non-negative");
  }
}

} // namespace detail

/// Probability vector over photon number n = 0..n_max.
struct PhotonStatistics {
  std::vector<double> probabilities;

  explicit PhotonStatistics(std::vector<double> p) : probabilities(std::move(p)) {
    if (probabilities.empty())
      throw std::domain_error("PhotonStatistics: empty probability vector");
    detail::check_entries_nonnegative(probabilities, "PhotonStatistics");
    const double sum = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (std::abs(sum - 1.0) > kInputNormalizationTol)
      throw std::domain_error("PhotonStatistics: probabilities sum to " + std::to_string(sum) +
                              ", expected 1 within 1e-9");
    for (double& v : probabilities) v /= sum;
  }

  /// Point distribution at photon number n.
  static PhotonStatistics fock(int n) {
    if (n < 0) throw std::domain_error("PhotonStatistics::fock: n must be >= 0");
    std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
    p.back() = 1.0;
    return PhotonStatistics(std::move(p));
  }

  std::size_t n_max() const { return probabilities.size() - 1; }
};

/// Probability vector over click count k = 0..k_max for a detector with n_bins bins.
struct ClickDistribution {
  std::vector<double> probabilities;
  std::uint64_t n_bins = 0;

  ClickDistribution(std::vector<double> p, std::uint64_t bins)
      : probabilities(std::move(p)), n_bins(bins) {
    if (n_bins == 0) throw std::domain_error("ClickDistribution: n_bins must be >= 1");
    if (probabilities.empty())
      throw std::domain_error("ClickDistribution: empty probability vector");
    if (probabilities.size() > n_bins + 1)
      throw std::domain_error("ClickDistribution: k_max exceeds n_bins");
    detail::check_entries_nonnegative(probabilities, "ClickDistribution");
    const double sum = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (std::abs(sum - 1.0) > kNormalizationTol)
      throw std::domain_error("ClickDistribution: probabilities sum to " + std::to_string(sum) +
                              ", expected 1 within 1e-12");
  }

  std::size_t k_max() const { return probabilities.size() - 1; }

  double mean_clicks() const {
    double m = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k)
      m += static_cast<double>(k) * probabilities[k];
    return m;
  }
};

/// Total variation distance between two probability vectors (padded with zeros).
inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  const std::size_t m = std::max(p.size(), q.size());
  double d = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    d += std::abs(a - b);
  }
  return 0.5 * d;
}

} // namespace tmd
