#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <quadmath.h>

#include "tmd/distributions.hpp"

namespace tmd {

/// A non-negative weight carried in natural-log scale; -inf encodes exact zero.
struct LogWeight {
  double value = -std::numeric_limits<double>::infinity();

  static LogWeight zero() { return LogWeight{}; }
  static LogWeight one() { return LogWeight{0.0}; }

  static LogWeight from_log(double v) {
    if (std::isnan(v) || v > 709.0)  // exp must stay finite
      throw std::domain_error("LogWeight: log value out of range");
    return LogWeight{v};
  }

  LogWeight operator*(LogWeight other) const { return LogWeight{value + other.value}; }
  LogWeight& operator*=(LogWeight other) {
    value += other.value;
    return *this;
  }

  /// Back to linear scale, flushing subnormal-noise magnitudes to exact zero.
  double to_probability() const {
    const double p = std::exp(value);
    return p < kProbabilityFloor ? 0.0 : p;
  }
};

/// ln(n!); relative error <= 1e-12 up to n = 10^6.
inline double log_factorial(std::int64_t n) {
  if (n < 0) throw std::domain_error("log_factorial: n must be >= 0");
  // Cumulative table for the small arguments that dominate the hot paths,
  // lgamma beyond.
  static const std::vector<double> table = [] {
    std::vector<double> t(1025);
    t[0] = 0.0;
    for (std::size_t k = 1; k < t.size(); ++k)
      t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
  }();
  if (static_cast<std::size_t>(n) < table.size()) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// ln C(n,k); k > n is a contract violation, not a -inf weight.
inline double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0) throw std::domain_error("log_binomial: arguments must be >= 0");
  if (k > n) throw std::domain_error("log_binomial: k must not exceed n");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Probability of k occupied bins when n_photons land uniformly on n_bins bins,
/// for k = 0..min(n_photons, n_bins).
///
/// Uses the one-photon-at-a-time occupancy recurrence
///   P(n+1, k) = (k/N) P(n, k) + ((N-k+1)/N) P(n, k-1),
/// which only ever forms convex combinations and is stable for any size,
/// unlike the alternating-sum form (see occupancy_row_reference).
inline ClickDistribution occupancy_row(int n_photons, std::uint64_t n_bins) {
  if (n_photons < 0) throw std::domain_error("occupancy_row: n_photons must be >= 0");
  if (n_bins == 0) throw std::domain_error("occupancy_row: n_bins must be >= 1");

  const std::size_t k_max =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(n_photons), n_bins);
  std::vector<double> p(k_max + 1, 0.0);
  p[0] = 1.0;
  const double inv_n = 1.0 / static_cast<double>(n_bins);
  for (int m = 0; m < n_photons; ++m) {
    // After placing m photons at most min(m, k_max) bins are occupied; update
    // in place from high k to low so the k-1 term reads the previous row.
    const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(m) + 1, k_max);
    for (std::size_t k = top; k > 0; --k) {
      p[k] = p[k] * (static_cast<double>(k) * inv_n) +
             p[k - 1] * (static_cast<double>(n_bins - (k - 1)) * inv_n);
    }
    p[0] = 0.0;
  }
  return ClickDistribution(std::move(p), n_bins);
}

namespace detail {

inline __float128 log_binomial_q(int n, int k) {
  return lgammaq(static_cast<__float128>(n) + 1) - lgammaq(static_cast<__float128>(k) + 1) -
         lgammaq(static_cast<__float128>(n - k) + 1);
}

} // namespace detail

/// Literal evaluation of the alternating-sum occupancy formula
///   C_{n',k} = N^{-n'} C(N,k) sum_{j=0..k} (-1)^j C(k,j) (k-j)^{n'},
/// kept as a cross-check of occupancy_row on a regime where the cancellation
/// stays controllable. Evaluated in quad precision, log-space, with signed
/// accumulation around the largest term.
inline ClickDistribution occupancy_row_reference(int n_photons, std::uint64_t n_bins) {
  if (n_photons < 0) throw std::domain_error("occupancy_row_reference: n_photons must be >= 0");
  if (n_bins == 0) throw std::domain_error("occupancy_row_reference: n_bins must be >= 1");
  if (n_photons > 30 || n_bins > 1024)
    throw std::domain_error(
        "occupancy_row_reference: outside the cancellation-safe regime "
        "(n_photons <= 30, n_bins <= 1024); use occupancy_row");

  const std::size_t k_max =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(n_photons), n_bins);
  std::vector<double> p(k_max + 1, 0.0);
  if (n_photons == 0) {
    p[0] = 1.0;
    return ClickDistribution(std::move(p), n_bins);
  }

  const __float128 log_nbins = logq(static_cast<__float128>(n_bins));
  for (std::size_t k = 1; k <= k_max; ++k) {
    // The j = k term has (k-j)^{n'} = 0 and is dropped.
    __float128 max_log = -HUGE_VALQ;
    std::vector<__float128> logs(k);
    for (std::size_t j = 0; j < k; ++j) {
      logs[j] = detail::log_binomial_q(static_cast<int>(k), static_cast<int>(j)) +
                static_cast<__float128>(n_photons) * logq(static_cast<__float128>(k - j));
      if (logs[j] > max_log) max_log = logs[j];
    }
    __float128 signed_sum = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const __float128 t = expq(logs[j] - max_log);
      signed_sum += (j % 2 == 0) ? t : -t;
    }
    if (signed_sum <= 0) continue;  // exact zero after cancellation
    const __float128 log_value =
        detail::log_binomial_q(static_cast<int>(n_bins), static_cast<int>(k)) -
        static_cast<__float128>(n_photons) * log_nbins + max_log + logq(signed_sum);
    const double v = static_cast<double>(expq(log_value));
    p[k] = v < kProbabilityFloor ? 0.0 : v;
  }
  return ClickDistribution(std::move(p), n_bins);
}

} // namespace tmd
