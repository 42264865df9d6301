#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nse/grid.hpp"
#include "nse/harmonics.hpp"
#include "nse/window.hpp"

namespace nse {

/// One needlet scale: the windows b_{j,l}, the scale pixelization (order
/// at least 4 L_j^(b)) and the transform plans built on it.
///
/// K(t) = sum_l b_{j,l} L_l(t) is the scale's zonal kernel, so that
/// psi_{j,k}(xi) = sqrt(lambda_k) K(xi . xi_k).  Its square expands as
/// K^2(t) = sum_L c_L L_L(t) with L <= 2 l_max; the c_L are computed once by
/// Gauss-Legendre quadrature, which is exact for this polynomial degree.
class NeedletScale {
 public:
  NeedletScale(const WindowFamily& fam, int j);
  /// Throws InvalidParameter when order < 4 L_j^(b).
  NeedletScale(const WindowFamily& fam, int j, int order);

  int j() const { return j_; }
  double band_ratio() const { return band_ratio_; }
  int band_limit() const { return band_limit_; }
  const ScaleBand& band() const { return band_; }
  /// Highest l of the window table; 0 when the band is empty.
  int lmax() const { return lmax_; }
  bool empty() const { return band_.empty(); }

  const Pixelization& pix() const { return pix_; }
  std::size_t size() const { return pix_.size(); }

  /// b_{j,l}, l = 0..lmax().
  std::span<const double> window() const { return window_; }
  /// c_L, L = 0..2 lmax().
  std::span<const double> squared_kernel() const { return squared_; }

  /// K(1) = sum_l b_{j,l} (2l+1)/(4 pi).
  double kernel_peak() const { return peak_; }
  /// sum_l b_{j,l}^2 (2l+1)/(4 pi) = integral of K^2 over the sphere.
  double kernel_energy() const { return energy_; }

  const ShtPlan& plan() const { return plan_; }
  const ShtPlan& squared_plan() const { return squared_plan_; }

  /// K(t).
  double kernel(double t) const;

 private:
  int j_;
  double band_ratio_;
  int band_limit_;
  ScaleBand band_;
  int lmax_;
  Pixelization pix_;
  std::vector<double> window_;
  std::vector<double> squared_;
  double peak_ = 0.0;
  double energy_ = 0.0;
  ShtPlan plan_;
  ShtPlan squared_plan_;
};

/// psi_{j,k}(xi) = sqrt(lambda_k) sum_l b_{j,l} L_l(xi . xi_k).  k is
/// 0-based; throws IndexError when k >= N_j.
double eval_needlet(const NeedletScale& scale, std::size_t k, const UnitVector& xi);

/// gamma_{j,k} = sum_{l,m} b_{j,l} a_{l,m} Y_{l,m}(xi_k) for a band-limited
/// field given by its coefficients (entries above the window band are
/// ignored).
std::vector<double> needlet_transform(const Alm& alm, const NeedletScale& scale);

/// Generalized coefficients of a finite sequence on the scale points:
/// forward transform on the scale pixelization, filter by b, inverse
/// transform back to the same points.  Throws ShapeError on a length
/// mismatch.
std::vector<double> needlet_coeffs_of_sequence(std::span<const double> values,
                                               const NeedletScale& scale);

/// sum_L c_L Y_{L,m}(xi_k) sum_p h_p conj(Y_{L,m}(xi_p)), i.e.
/// sum_p lambda_p h_p K^2(xi_k . xi_p), for every k, without forming the
/// N_j x N_j kernel table.
std::vector<double> squared_kernel_filter(std::span<const double> h, const NeedletScale& scale);

/// Cov[eta_k, eta_k'] = sum_l b_{j,l}^2 C_l L_l(xi_k . xi_k').
double signal_covariance(const NeedletScale& scale, std::span<const double> spectrum,
                         std::size_t k, std::size_t k2);

/// Cov[zeta_k, zeta_k'] = (lambda_k lambda_k')^{-1/2}
///   sum_p lambda_p^2 s_p^2 psi_k(xi_p) psi_k'(xi_p), with s = W sigma.
/// Direct O(N_j) sum per pair.
double noise_covariance(const NeedletScale& scale, std::span<const double> sigma_eff,
                        std::size_t k, std::size_t k2);

struct NormIdentity {
  double lhs = 0.0;  ///< sum_p lambda_p psi_k(xi_p)^2, by direct summation
  double rhs = 0.0;  ///< lambda_k sum_l b_{j,l}^2 (2l+1)/(4 pi)
};

NormIdentity needlet_norm_identity_check(const NeedletScale& scale, std::size_t k);

struct DecaySample {
  double scaled_distance = 0.0;  ///< B^j d
  double value = 0.0;
};

struct DecayReport {
  std::vector<DecaySample> samples;
  double slope = 0.0;   ///< least-squares slope of log value against log(1 + B^j d)
  double fit_lo = 0.0;  ///< fit range in B^j d
  double fit_hi = 0.0;
  std::size_t fit_points = 0;
};

/// |psi_{j,k}| along a great circle from xi_k, sampled at n points per unit
/// of B^j d up to max_scaled_distance.  The slope is fitted to the running
/// maximum from the far end (the envelope), which removes the oscillation
/// zeros of the kernel.
DecayReport needlet_decay_profile(const NeedletScale& scale, double max_scaled_distance,
                                  int samples_per_unit, double fit_lo, double fit_hi);

/// |Corr[eta_{j,k}, eta_{j,k'}]| for k' against a reference point k = 0 of
/// the scale grid, over all k', with the envelope slope fitted on
/// [fit_lo, fit_hi] in B^j d.
DecayReport correlation_decay_report(const NeedletScale& scale, std::span<const double> spectrum,
                                     double fit_lo, double fit_hi);

/// Least-squares slope of log(envelope) against log(1 + x) over samples
/// with x in [lo, hi].  The envelope at x is the largest value at any
/// sample with distance >= x.
double envelope_slope(std::span<const DecaySample> samples, double lo, double hi,
                      std::size_t* used = nullptr);

}  // namespace nse
