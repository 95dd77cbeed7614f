#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "tmd/core_math.hpp"
#include "tmd/distributions.hpp"
#include "tmd/model.hpp"
#include "tmd/parallel.hpp"

namespace tmd {

/// Which part of the detector response a sweep isolates.
enum class OverlapMode {
  convolution_only,  ///< eta = 1, pure occupancy convolution
  loss_only,         ///< clicks = surviving photons, binning replaced by identity
  combined           ///< full loss-then-convolution pipeline
};

inline const char* to_string(OverlapMode mode) {
  switch (mode) {
    case OverlapMode::convolution_only: return "convolution_only";
    case OverlapMode::loss_only: return "loss_only";
    case OverlapMode::combined: return "combined";
  }
  return "?";
}

struct CurveMeta {
  int n1 = 0;
  int n2 = 0;
  double eta_ex = 1.0;
  OverlapMode mode = OverlapMode::combined;
};

/// Overlap values against either bin exponent b or Fock offset delta-n.
struct OverlapCurve {
  std::vector<double> abscissa;
  std::vector<double> values;
  CurveMeta meta;

  OverlapCurve(std::vector<double> x, std::vector<double> v, CurveMeta m)
      : abscissa(std::move(x)), values(std::move(v)), meta(m) {
    if (abscissa.size() != values.size() || abscissa.empty())
      throw std::domain_error("OverlapCurve: abscissa/value length mismatch");
    for (std::size_t i = 1; i < abscissa.size(); ++i)
      if (!(abscissa[i] > abscissa[i - 1]))
        throw std::domain_error("OverlapCurve: abscissa must be strictly increasing");
    for (double v : values)
      if (!(v >= 0.0) || !(v <= 1.0))
        throw std::domain_error("OverlapCurve: overlap values must lie in [0,1]");
  }
};

struct OptimalPoint {
  std::uint64_t best_bins = 0;  ///< N = 2^b at the minimum, ties broken downward
  double best_overlap = 1.0;
};

/// Bhattacharyya coefficient of two probability vectors padded to common
/// support: sum_k sqrt(p_k q_k). 1 iff elementwise equal, 0 iff disjoint.
inline double bhattacharyya(std::span<const double> p, std::span<const double> q) {
  if (p.size() == q.size() && std::equal(p.begin(), p.end(), q.begin())) return 1.0;
  const std::size_t m = std::min(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += std::sqrt(p[i] * q[i]);
  return std::clamp(s, 0.0, 1.0);
}

/// Overlap of two click distributions from detectors of the same size.
inline double overlap(const ClickDistribution& p, const ClickDistribution& q) {
  if (p.n_bins != q.n_bins)
    throw std::domain_error("overlap: click distributions have different bin counts");
  return bhattacharyya(p.probabilities, q.probabilities);
}

namespace detail {

inline void check_fock_pair(int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw std::domain_error("Fock indices must be >= 0");
  if (n1 == n2) throw std::domain_error("Fock pair must be distinct (overlap is trivially 1)");
}

inline void check_eta_ex(double eta_ex) {
  if (!(eta_ex >= 0.0) || !(eta_ex <= 1.0))
    throw std::domain_error("eta_ex must lie in [0,1]");
}

inline double overlap_at(int n1, int n2, double eta_ex, unsigned b, OverlapMode mode,
                         const TmdConfig& config) {
  TmdConfig cfg = config;
  cfg.stages = b;
  cfg.eta_ex = eta_ex;
  switch (mode) {
    case OverlapMode::convolution_only: {
      const ClickDistribution a = occupancy_row(n1, cfg.n_bins());
      const ClickDistribution c = occupancy_row(n2, cfg.n_bins());
      return overlap(a, c);
    }
    case OverlapMode::loss_only: {
      const double eta = eta_ex * tmd_efficiency(cfg);
      const std::vector<double> a = detail::binomial_loss_row(n1, eta);
      const std::vector<double> c = detail::binomial_loss_row(n2, eta);
      return bhattacharyya(a, c);
    }
    case OverlapMode::combined:
      return overlap(fock_click_statistics(n1, cfg), fock_click_statistics(n2, cfg));
  }
  throw std::domain_error("overlap_at: unknown mode");
}

} // namespace detail

/// Overlap of the Fock pair (n1, n2) against the bin exponent b = b_min..b_max.
/// convolution_only fixes eta = 1; loss_only keeps the loss budget of each b
/// but identifies clicks with surviving photons; combined runs the full pipeline.
inline OverlapCurve overlap_vs_bins(int n1, int n2, double eta_ex, unsigned b_min,
                                    unsigned b_max, OverlapMode mode,
                                    const TmdConfig& config) {
  detail::check_fock_pair(n1, n2);
  detail::check_eta_ex(eta_ex);
  if (b_min < 1 || b_min > b_max || b_max > 20)
    throw std::domain_error("overlap_vs_bins: need 1 <= b_min <= b_max <= 20");
  std::vector<double> xs, vs;
  for (unsigned b = b_min; b <= b_max; ++b) {
    xs.push_back(static_cast<double>(b));
    vs.push_back(detail::overlap_at(n1, n2, eta_ex, b, mode, config));
  }
  return OverlapCurve(std::move(xs), std::move(vs), CurveMeta{n1, n2, eta_ex, mode});
}

/// Bin count minimizing the combined overlap over b = 1..b_max; ties are
/// broken toward smaller b (cheaper hardware at equal performance).
inline OptimalPoint optimal_bins(int n1, int n2, double eta_ex, unsigned b_max,
                                 const TmdConfig& config) {
  detail::check_fock_pair(n1, n2);
  detail::check_eta_ex(eta_ex);
  if (b_max < 1 || b_max > 20)
    throw std::domain_error("optimal_bins: need 1 <= b_max <= 20");
  OptimalPoint best;
  best.best_overlap = std::numeric_limits<double>::infinity();
  for (unsigned b = 1; b <= b_max; ++b) {
    const double v =
        detail::overlap_at(n1, n2, eta_ex, b, OverlapMode::combined, config);
    if (v < best.best_overlap) {
      best.best_overlap = v;
      best.best_bins = std::uint64_t{1} << b;
    }
  }
  return best;
}

struct SweepRow {
  int n = 0;
  std::uint64_t best_bins = 0;
  double best_overlap = 1.0;
};

/// optimal_bins applied to the pairs (n, n+separation), n = 0..n_max-separation.
inline std::vector<SweepRow> optimal_bins_sweep(int separation, int n_max, double eta_ex,
                                                unsigned b_max, const TmdConfig& config) {
  if (separation != 1 && separation != 2 && separation != 4)
    throw std::domain_error("optimal_bins_sweep: separation must be 1, 2 or 4");
  if (n_max < separation)
    throw std::domain_error("optimal_bins_sweep: n_max must be >= separation");
  const std::size_t count = static_cast<std::size_t>(n_max - separation) + 1;
  std::vector<SweepRow> rows(count);
  parallel_for(count, [&](std::size_t i) {
    const int n = static_cast<int>(i);
    const OptimalPoint p = optimal_bins(n, n + separation, eta_ex, b_max, config);
    rows[i] = SweepRow{n, p.best_bins, p.best_overlap};
  });
  return rows;
}

/// Overlap between |n_center> and its neighbours |n_center + delta| after the
/// detector with 2^b bins; deltas that would reach below the vacuum are
/// dropped, so the scan window is clipped at n = 0.
inline OverlapCurve reconstruction_scan(int n_center, unsigned b, int delta_min,
                                        int delta_max, double eta_ex,
                                        const TmdConfig& config) {
  if (n_center < 0) throw std::domain_error("reconstruction_scan: n_center must be >= 0");
  detail::check_eta_ex(eta_ex);
  if (delta_min > delta_max)
    throw std::domain_error("reconstruction_scan: empty delta range");
  if (n_center + delta_max < 0)
    throw std::domain_error("reconstruction_scan: entire scan below the vacuum state");
  if (b > 20) throw std::domain_error("reconstruction_scan: b must be <= 20");

  TmdConfig cfg = config;
  cfg.stages = b;
  cfg.eta_ex = eta_ex;
  const ClickDistribution base = fock_click_statistics(n_center, cfg);

  const int lo = std::max(delta_min, -n_center);
  std::vector<double> xs, vs;
  xs.reserve(static_cast<std::size_t>(delta_max - lo) + 1);
  for (int d = lo; d <= delta_max; ++d) {
    xs.push_back(static_cast<double>(d));
    vs.push_back(d == 0 ? 1.0 : overlap(base, fock_click_statistics(n_center + d, cfg)));
  }
  return OverlapCurve(std::move(xs), std::move(vs),
                      CurveMeta{n_center, n_center, eta_ex, OverlapMode::combined});
}

struct WidthResult {
  double width = 0.0;
  bool truncated = false;  ///< the curve never reached level*peak on >= 1 side
};

/// Width of a unimodal curve at the given fraction of its peak, with linear
/// interpolation between samples. If one side never falls below the threshold
/// inside the scan range, the other side's half-width is doubled and the
/// result flagged truncated; if neither side does, the full scan span is
/// returned (a lower bound) with the same flag.
inline WidthResult curve_width(const OverlapCurve& curve, double level = 0.5) {
  if (!(level > 0.0) || !(level < 1.0))
    throw std::domain_error("curve_width: level must lie in (0,1)");
  const auto& xs = curve.abscissa;
  const auto& vs = curve.values;
  if (vs.size() < 2) throw std::domain_error("curve_width: need at least two samples");

  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) - vs.begin());
  const double peak_value = vs[peak];
  if (std::count(vs.begin(), vs.end(), peak_value) != 1)
    throw std::domain_error("curve_width: curve has no unique maximum");
  constexpr double kSlack = 1e-12;
  for (std::size_t i = 0; i + 1 < peak; ++i)
    if (vs[i] > vs[i + 1] + kSlack)
      throw std::domain_error("curve_width: curve is not unimodal");
  for (std::size_t i = peak; i + 1 < vs.size(); ++i)
    if (vs[i + 1] > vs[i] + kSlack)
      throw std::domain_error("curve_width: curve is not unimodal");

  const double threshold = level * peak_value;
  const auto cross = [&](std::size_t hi, std::size_t lo) {
    // hi is on/above the threshold, lo below; interpolate between them.
    return xs[hi] + (xs[lo] - xs[hi]) * (vs[hi] - threshold) / (vs[hi] - vs[lo]);
  };

  bool have_left = false, have_right = false;
  double left = 0.0, right = 0.0;
  for (std::size_t i = peak; i > 0; --i) {
    if (vs[i] >= threshold && vs[i - 1] < threshold) {
      left = cross(i, i - 1);
      have_left = true;
      break;
    }
  }
  for (std::size_t i = peak; i + 1 < vs.size(); ++i) {
    if (vs[i] >= threshold && vs[i + 1] < threshold) {
      right = cross(i, i + 1);
      have_right = true;
      break;
    }
  }

  if (have_left && have_right) return WidthResult{right - left, false};
  if (have_right) return WidthResult{2.0 * (right - xs[peak]), true};
  if (have_left) return WidthResult{2.0 * (xs[peak] - left), true};
  return WidthResult{xs.back() - xs.front(), true};
}

} // namespace tmd
