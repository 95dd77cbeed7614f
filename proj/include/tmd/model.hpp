#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "tmd/core_math.hpp"
#include "tmd/distributions.hpp"

namespace tmd {

/// Dense row-major matrix of probabilities; rows are distributions.
struct ProbMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> data;

  ProbMatrix() = default;
  ProbMatrix(std::size_t rows, std::size_t cols)
      : n_rows(rows), n_cols(cols), data(rows * cols, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * n_cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * n_cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * n_cols, n_cols};
  }
};

/// Network geometry and component loss parameters of a time-multiplexed detector.
///
/// The detector spreads each pulse over N = 2^stages time bins spaced by the
/// dead time; the delay fiber of the longest path and one splitter pass per
/// stage set the internal loss budget.
struct TmdConfig {
  unsigned stages = 0;                    ///< b, giving N = 2^b bins
  double dead_time_s = 10e-9;             ///< bin spacing, 10 ns default
  double splitter_loss_db = 0.05;         ///< dB per beam splitter
  double fiber_loss_db_per_km = 0.2;      ///< dB/km delay fiber
  double fiber_speed_m_per_s = 2.0e8;     ///< light speed in fiber
  double eta_ex = 1.0;                    ///< setup + detection efficiency

  std::uint64_t n_bins() const { return std::uint64_t{1} << stages; }

  /// Same geometry with splitter and fiber losses zeroed.
  TmdConfig ideal_geometry() const {
    TmdConfig c = *this;
    c.splitter_loss_db = 0.0;
    c.fiber_loss_db_per_km = 0.0;
    return c;
  }

  void validate() const {
    if (stages > 20) throw std::domain_error("TmdConfig: stages must be <= 20");
    if (!(dead_time_s > 0.0)) throw std::domain_error("TmdConfig: dead_time must be > 0");
    if (!(splitter_loss_db >= 0.0) || !(fiber_loss_db_per_km >= 0.0))
      throw std::domain_error("TmdConfig: loss figures must be >= 0");
    if (!(fiber_speed_m_per_s > 0.0))
      throw std::domain_error("TmdConfig: fiber_speed must be > 0");
    if (!(eta_ex >= 0.0) || !(eta_ex <= 1.0))
      throw std::domain_error("TmdConfig: eta_ex must lie in [0,1]");
  }
};

/// Binomial loss matrix, rows = input photon number, columns = surviving number.
struct LossMatrix {
  ProbMatrix m;
  double eta = 1.0;
};

/// Occupancy convolution matrix, rows = photon number after loss, columns = clicks.
struct ConvolutionMatrix {
  ProbMatrix m;
  std::uint64_t n_bins = 0;
};

namespace detail {

/// Row n of the binomial loss channel: P(n' survive | n sent, efficiency eta).
inline std::vector<double> binomial_loss_row(int n, double eta) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  if (eta == 0.0) {
    row[0] = 1.0;
    return row;
  }
  if (eta == 1.0) {
    row.back() = 1.0;
    return row;
  }
  const double log_eta = std::log(eta);
  const double log_one_minus = std::log1p(-eta);
  for (int k = 0; k <= n; ++k) {
    const LogWeight w = LogWeight::from_log(log_binomial(n, k) + k * log_eta +
                                            (n - k) * log_one_minus);
    row[static_cast<std::size_t>(k)] = w.to_probability();
  }
  return row;
}

} // namespace detail

/// (n_max+1) x (n_max+1) binomial loss matrix with efficiency eta.
inline LossMatrix loss_matrix(double eta, int n_max) {
  if (!(eta >= 0.0) || !(eta <= 1.0))
    throw std::domain_error("loss_matrix: eta must lie in [0,1]");
  if (n_max < 0) throw std::domain_error("loss_matrix: n_max must be >= 0");
  LossMatrix lm;
  lm.eta = eta;
  lm.m = ProbMatrix(static_cast<std::size_t>(n_max) + 1, static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const std::vector<double> row = detail::binomial_loss_row(n, eta);
    for (int k = 0; k <= n; ++k) lm.m.at(n, k) = row[static_cast<std::size_t>(k)];
  }
  return lm;
}

/// Occupancy matrix mapping photon number n' = 0..n_max to clicks on n_bins bins.
inline ConvolutionMatrix convolution_matrix(std::uint64_t n_bins, int n_max) {
  if (n_bins == 0) throw std::domain_error("convolution_matrix: n_bins must be >= 1");
  if (n_max < 0) throw std::domain_error("convolution_matrix: n_max must be >= 0");
  const std::size_t k_cols =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(n_max), n_bins) + 1;
  ConvolutionMatrix cm;
  cm.n_bins = n_bins;
  cm.m = ProbMatrix(static_cast<std::size_t>(n_max) + 1, k_cols);
  for (int n = 0; n <= n_max; ++n) {
    const ClickDistribution row = occupancy_row(n, n_bins);
    for (std::size_t k = 0; k < row.probabilities.size(); ++k)
      cm.m.at(static_cast<std::size_t>(n), k) = row.probabilities[k];
  }
  return cm;
}

/// Transmission of the network itself: b splitter passes plus the full
/// longest-path delay line, (2^b - 1) dead times of fiber, in dB.
inline double tmd_efficiency(const TmdConfig& config) {
  config.validate();
  const double longest_path_m = config.fiber_speed_m_per_s *
                                static_cast<double>(config.n_bins() - 1) * config.dead_time_s;
  const double db_total = static_cast<double>(config.stages) * config.splitter_loss_db +
                          (longest_path_m / 1000.0) * config.fiber_loss_db_per_km;
  return std::pow(10.0, -db_total / 10.0);
}

/// Click distribution of an input photon-number state after the detector:
/// the binomial loss channel (total efficiency eta_ex * network transmission)
/// followed by the occupancy convolution onto N = 2^stages bins.
inline ClickDistribution click_statistics(const PhotonStatistics& rho_in,
                                          const TmdConfig& config) {
  config.validate();
  double sum = 0.0;
  for (double v : rho_in.probabilities) sum += v;
  if (std::abs(sum - 1.0) > kInputNormalizationTol)
    throw std::domain_error("click_statistics: input state is not normalized");

  const int n_max = static_cast<int>(rho_in.n_max());
  const double eta = config.eta_ex * tmd_efficiency(config);

  const LossMatrix loss = loss_matrix(eta, n_max);
  std::vector<double> after_loss(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    const double rho_n = rho_in.probabilities[static_cast<std::size_t>(n)];
    if (rho_n == 0.0) continue;
    for (int np = 0; np <= n; ++np)
      after_loss[static_cast<std::size_t>(np)] += rho_n * loss.m.at(n, np);
  }

  const std::uint64_t n_bins = config.n_bins();
  const ConvolutionMatrix conv = convolution_matrix(n_bins, n_max);
  std::vector<double> clicks(conv.m.n_cols, 0.0);
  for (int np = 0; np <= n_max; ++np) {
    const double w = after_loss[static_cast<std::size_t>(np)];
    if (w == 0.0) continue;
    const auto row = conv.m.row(static_cast<std::size_t>(np));
    for (std::size_t k = 0; k < row.size(); ++k) clicks[k] += w * row[k];
  }
  return ClickDistribution(std::move(clicks), n_bins);
}

/// click_statistics applied to the pure Fock state |n>.
inline ClickDistribution fock_click_statistics(int n, const TmdConfig& config) {
  return click_statistics(PhotonStatistics::fock(n), config);
}

} // namespace tmd
