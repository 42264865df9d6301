#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nse/grid.hpp"

namespace nse {

/// Spherical-harmonic coefficients a_{l,m} of a real field, 0 <= m <= l <=
/// lmax.  Orthonormal complex harmonics with the Condon-Shortley phase, so
/// the implied negative orders are a_{l,-m} = (-1)^m conj(a_{l,m}).
class Alm {
 public:
  explicit Alm(int lmax = 0);

  int lmax() const { return lmax_; }
  std::size_t size() const { return data_.size(); }

  static std::size_t index(int l, int m) {
    return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
  }
  static std::size_t count(int lmax) { return index(lmax + 1, 0); }

  std::complex<double>& operator()(int l, int m) { return data_[index(l, m)]; }
  const std::complex<double>& operator()(int l, int m) const { return data_[index(l, m)]; }

  std::span<std::complex<double>> data() { return data_; }
  std::span<const std::complex<double>> data() const { return data_; }

  /// Copy restricted (or zero-extended) to a new lmax.
  Alm resized(int lmax) const;

 private:
  int lmax_;
  std::vector<std::complex<double>> data_;
};

/// Orthonormal Y_{l,m}(xi); negative m allowed.  Throws InvalidParameter
/// when |m| > l.
std::complex<double> eval_ylm(int l, int m, const UnitVector& xi);

/// L_l(t) = (2l+1)/(4 pi) P_l(t).
double eval_legendre_kernel(int l, double t);

/// L_0(t) .. L_lmax(t).
std::vector<double> legendre_kernel_values(int lmax, double t);

/// sum_l coeffs[l] L_l(t), the zonal kernel with the given Legendre profile.
double zonal_kernel(std::span<const double> coeffs, double t);

/// Reusable transform between samples on a pixelization and an Alm of
/// fixed lmax.  Holds only ring geometry and tables, so it is cheap to copy
/// and independent of the Pixelization object's lifetime.
class ShtPlan {
 public:
  ShtPlan(const Pixelization& pix, int lmax);

  int lmax() const { return lmax_; }
  std::size_t n_points() const { return n_rings_ * static_cast<std::size_t>(n_phi_); }

  /// a_{l,m} = sum_k lambda_k f_k conj(Y_{l,m}(xi_k)).  Accumulates rings
  /// in ascending order.  Throws ShapeError on a length mismatch.
  Alm forward(std::span<const double> samples) const;

  /// f(xi_k) = sum_{l,m} a_{l,m} Y_{l,m}(xi_k).  Throws ConventionViolation
  /// when the imaginary residue exceeds 1e-10 of the field's max norm.
  std::vector<double> inverse(const Alm& alm) const;

 private:
  int lmax_;
  int order_;
  std::size_t n_rings_;
  int n_phi_;
  std::vector<double> cos_theta_;
  std::vector<double> sin_theta_;
  std::vector<double> ring_weight_;
  std::vector<double> cos_table_;  // n_phi x (lmax+1), row-major
  std::vector<double> sin_table_;
  std::vector<double> rec_a_;      // Legendre recursion coefficients, Alm layout
  std::vector<double> rec_b_;
  std::vector<double> mm_factor_;
};

/// Requires lmax <= pix.order(); throws InvalidParameter otherwise.
Alm forward_sht(std::span<const double> samples, const Pixelization& pix, int lmax);
std::vector<double> inverse_sht(const Alm& alm, const Pixelization& pix);
std::vector<double> inverse_sht(const Alm& alm, std::span<const UnitVector> points);

}  // namespace nse
