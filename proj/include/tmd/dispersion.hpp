#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tmd/parallel.hpp"

namespace tmd {

/// Pulse and fiber parameters for the dispersion-limited bin count.
struct DispersionParams {
  double tau_in_ps = 1.0;              ///< input pulse FWHM
  double wavelength_nm = 1550.0;       ///< operating wavelength
  double dispersion_ps_nm_km = 18.0;   ///< D_lambda of standard SMF28 fiber
  double rep_rate_hz = 1.0e6;          ///< experiment repetition rate
  double fiber_speed_m_per_s = 2.0e8;  ///< light speed in fiber

  void validate() const {
    if (!(tau_in_ps > 0.0)) throw std::domain_error("DispersionParams: tau_in must be > 0");
    if (!(rep_rate_hz > 0.0)) throw std::domain_error("DispersionParams: rep_rate must be > 0");
    if (!(dispersion_ps_nm_km >= 0.0))
      throw std::domain_error("DispersionParams: dispersion_coeff must be >= 0");
    if (!(wavelength_nm > 0.0))
      throw std::domain_error("DispersionParams: wavelength must be > 0");
    if (!(fiber_speed_m_per_s > 0.0))
      throw std::domain_error("DispersionParams: fiber_speed must be > 0");
  }
};

/// Output pulse FWHM after group-velocity dispersion over the full experiment
/// length L = fiber_speed / rep_rate, in ps.
///
/// All bookkeeping is done in SI; the mixed ps/nm/km inputs are converted on
/// entry. The in-fiber light speed enters both the GVD coefficient and the
/// fiber length, so its value cancels from the broadening term.
inline double dispersed_width_ps(const DispersionParams& params) {
  params.validate();
  const double tau_s = params.tau_in_ps * 1e-12;
  const double lambda_m = params.wavelength_nm * 1e-9;
  const double d_si = params.dispersion_ps_nm_km * 1e-6;  // ps/(nm km) -> s/m^2
  const double c = params.fiber_speed_m_per_s;
  const double length_m = c / params.rep_rate_hz;

  const double chirp = (4.0 * std::numbers::ln2 / (tau_s * tau_s)) *
                       (lambda_m * lambda_m / (2.0 * std::numbers::pi * c)) * d_si * length_m;
  return params.tau_in_ps * std::sqrt(1.0 + chirp * chirp);
}

/// Dispersion-limited maximum bin count: output pulses per repetition period,
/// halved so that neighbouring bins stay resolvable. Zero when the period is
/// too short for even one resolvable bin.
inline std::uint64_t max_bins(const DispersionParams& params) {
  const double width_s = dispersed_width_ps(params) * 1e-12;
  const double raw = 1.0 / (params.rep_rate_hz * width_s);
  const double halved = std::floor(raw / 2.0);
  if (halved < 1.0) return 0;
  if (!(halved < 1.8e19))
    throw std::domain_error("max_bins: bin count does not fit a 64-bit integer");
  return static_cast<std::uint64_t>(halved);
}

struct DispersionPoint {
  double rep_rate_hz = 0.0;
  double tau_in_ps = 0.0;
  std::uint64_t n_max_bins = 0;
};

/// Dense (rep_rate, pulse_width) table of max_bins, row-major over rep rates.
inline std::vector<DispersionPoint> dispersion_map(const std::vector<double>& rep_rates_hz,
                                                   const std::vector<double>& pulse_widths_ps,
                                                   const DispersionParams& params) {
  if (rep_rates_hz.empty() || pulse_widths_ps.empty())
    throw std::domain_error("dispersion_map: grids must be non-empty");
  std::vector<DispersionPoint> table(rep_rates_hz.size() * pulse_widths_ps.size());
  parallel_for(rep_rates_hz.size(), [&](std::size_t r) {
    for (std::size_t t = 0; t < pulse_widths_ps.size(); ++t) {
      DispersionParams p = params;
      p.rep_rate_hz = rep_rates_hz[r];
      p.tau_in_ps = pulse_widths_ps[t];
      table[r * pulse_widths_ps.size() + t] =
          DispersionPoint{p.rep_rate_hz, p.tau_in_ps, max_bins(p)};
    }
  });
  return table;
}

/// n values linearly spaced over [lo, hi].
inline std::vector<double> lin_spaced(double lo, double hi, std::size_t n) {
  if (n == 0) throw std::domain_error("lin_spaced: need at least one point");
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
  v.back() = hi;
  return v;
}

/// n values logarithmically spaced over [lo, hi], lo and hi > 0.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > 0.0))
    throw std::domain_error("log_spaced: bounds must be positive");
  std::vector<double> v = lin_spaced(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  v.front() = lo;
  v.back() = hi;
  return v;
}

} // namespace tmd
