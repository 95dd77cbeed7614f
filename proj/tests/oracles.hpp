#pragma once

// Independent oracles used only by the test suites. They share no code with
// the library paths they certify: factorials come from exact big integers or
// the Stirling series, dispersion from a separate mixed-unit evaluation.

#include <cmath>
#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracles {

inline boost::multiprecision::cpp_int exact_factorial(int n) {
  boost::multiprecision::cpp_int f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline boost::multiprecision::cpp_int exact_binomial(int n, int k) {
  boost::multiprecision::cpp_int b = 1;
  for (int i = 0; i < k; ++i) {
    b *= (n - i);
    b /= (i + 1);
  }
  return b;
}

inline double exact_log_factorial(int n) {
  return std::log(exact_factorial(n).convert_to<double>());
}

inline double exact_log_binomial(int n, int k) {
  return std::log(exact_binomial(n, k).convert_to<double>());
}

/// Stirling series for ln(n!), truncation error < 1/(1188 n^9); independent of
/// both lgamma and the big-integer route. Valid for n >= 10.
inline double stirling_log_factorial(double n) {
  const double n2 = n * n;
  return n * std::log(n) - n + 0.5 * std::log(2.0 * M_PI * n) + 1.0 / (12.0 * n) -
         1.0 / (360.0 * n * n2) + 1.0 / (1260.0 * n * n2 * n2) -
         1.0 / (1680.0 * n * n2 * n2 * n2);
}

/// Dispersed pulse width evaluated entirely in the paper's mixed units
/// (ps, nm, km), as a round-trip check of the library's SI path.
inline double dispersed_width_mixed_units_ps(double tau_ps, double lambda_nm,
                                             double d_ps_nm_km, double rep_hz,
                                             double fiber_speed_m_s) {
  const double c_nm_per_ps = fiber_speed_m_s * 1e-3;
  const double lam2_d = lambda_nm * lambda_nm * d_ps_nm_km;      // nm * ps / km
  const double gvd_ps2_per_km = lam2_d / (2.0 * M_PI * c_nm_per_ps);
  const double length_km = fiber_speed_m_s / rep_hz / 1000.0;
  const double chirp =
      4.0 * std::log(2.0) * gvd_ps2_per_km * length_km / (tau_ps * tau_ps);
  return tau_ps * std::sqrt(1.0 + chirp * chirp);
}

} // namespace oracles
