#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "tmd/distributions.hpp"

namespace tmd::oracle {

/// Exact click distribution by enumerating all N^n equiprobable photon-to-bin
/// assignments and counting occupied bins. Integer counts throughout; the only
/// rounding is the final division by N^n.
inline ClickDistribution enumerate_click_distribution(int n_photons, std::uint64_t n_bins) {
  if (n_photons < 0)
    throw std::domain_error("enumerate_click_distribution: n_photons must be >= 0");
  if (n_bins == 0)
    throw std::domain_error("enumerate_click_distribution: n_bins must be >= 1");
  const double assignments =
      std::pow(static_cast<double>(n_bins), static_cast<double>(n_photons));
  if (assignments > 1e8)
    throw std::domain_error(
        "enumerate_click_distribution: N^n exceeds the 1e8 feasibility guard");

  const std::size_t k_max =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(n_photons), n_bins);
  std::vector<std::uint64_t> counts(k_max + 1, 0);
  std::vector<int> bin_load(n_bins, 0);

  // Depth-first over photon placements; occupied tracks distinct bins so far.
  const auto descend = [&](auto&& self, int photon, std::size_t occupied) -> void {
    if (photon == n_photons) {
      ++counts[occupied];
      return;
    }
    for (std::uint64_t b = 0; b < n_bins; ++b) {
      const bool fresh = bin_load[b] == 0;
      ++bin_load[b];
      self(self, photon + 1, occupied + (fresh ? 1 : 0));
      --bin_load[b];
    }
  };
  descend(descend, 0, 0);

  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  std::vector<double> p(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    p[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  return ClickDistribution(std::move(p), n_bins);
}

/// Parameters of a Monte-Carlo run. Identical configs give bit-identical output.
struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 12345;
  int n_photons = 0;
  std::uint64_t n_bins = 1;
  double eta = 1.0;

  void validate() const {
    if (samples == 0) throw std::domain_error("McConfig: samples must be >= 1");
    if (n_photons < 0) throw std::domain_error("McConfig: n_photons must be >= 0");
    if (n_bins == 0) throw std::domain_error("McConfig: n_bins must be >= 1");
    if (!(eta >= 0.0) || !(eta <= 1.0)) throw std::domain_error("McConfig: eta not in [0,1]");
  }
};

namespace detail {

// Sampling primitives are spelled out against the raw mt19937_64 stream so the
// draws are identical on every standard-conforming platform.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_bin(std::mt19937_64& gen, std::uint64_t n_bins) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n_bins;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n_bins;
}

} // namespace detail

/// Stochastic twin of the analytic pipeline for Fock inputs: each photon
/// survives independently with probability eta, survivors land uniformly at
/// random among the bins, the occupied-bin count is recorded per sample.
inline ClickDistribution mc_click_distribution(const McConfig& config) {
  config.validate();
  std::mt19937_64 gen(config.seed);

  const std::size_t k_max =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(config.n_photons), config.n_bins);
  std::vector<std::uint64_t> counts(k_max + 1, 0);
  std::vector<std::uint64_t> stamp(config.n_bins, 0);

  for (std::uint64_t s = 1; s <= config.samples; ++s) {
    std::size_t occupied = 0;
    for (int photon = 0; photon < config.n_photons; ++photon) {
      if (detail::uniform01(gen) >= config.eta) continue;
      const std::uint64_t bin = detail::uniform_bin(gen, config.n_bins);
      if (stamp[bin] != s) {
        stamp[bin] = s;
        ++occupied;
      }
    }
    ++counts[occupied];
  }

  std::vector<double> p(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    p[k] = static_cast<double>(counts[k]) / static_cast<double>(config.samples);
  return ClickDistribution(std::move(p), config.n_bins);
}

} // namespace tmd::oracle
