#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nse {

/// Smooth cutoff a(x) of a B-adic needlet family.
///
/// a(x) = 1 on |x| <= 1/B, a(x) = 0 on |x| >= 1, and on the transition
/// interval a = 1 - H(u) with u = (|x| - 1/B) / (1 - 1/B).  H is the unique
/// polynomial of degree 2M+1 with H(0) = 0, H(1) = 1 and vanishing
/// derivatives of order 1..M at both endpoints, which makes a non-increasing
/// and M times continuously differentiable.
class CutoffFunction {
 public:
  /// Throws InvalidParameter unless band_ratio > 1 and smoothness >= 3.
  static CutoffFunction build(double band_ratio, int smoothness);

  double band_ratio() const { return band_ratio_; }
  int smoothness() const { return smoothness_; }
  int degree() const { return 2 * smoothness_ + 1; }

  /// Monomial coefficients of H on [0, 1], index = power of u.
  std::span<const double> coefficients() const { return coeffs_; }

  double operator()(double x) const;

  /// r-th derivative of a at x, by analytic differentiation of H.
  double derivative(double x, int order) const;

  /// H(u) and its derivatives; u is clamped to [0, 1].
  double transition(double u) const;
  double transition_derivative(double u, int order) const;

 private:
  CutoffFunction(double band_ratio, int smoothness, std::vector<double> coeffs);

  double band_ratio_;
  int smoothness_;
  std::vector<double> coeffs_;
  // coefficient vectors of H', H'', ... up to order M+1
  std::vector<std::vector<double>> derived_;
};

enum class WindowMode {
  tight,    ///< b^2 = a(x/B) - a(x); squares telescope to one
  literal,  ///< b = a(x/B) - a(x)
};

WindowMode parse_window_mode(std::string_view name);
std::string_view to_string(WindowMode mode);

struct ScaleBand {
  int l_min = 0;
  int l_max = -1;
  bool empty() const { return l_max < l_min; }
};

/// Per-scale frequency windows b_{j,l} = b(B^{-j} l) over an inclusive
/// range of scales.  Tables are built once; the object is immutable.
class WindowFamily {
 public:
  WindowFamily(CutoffFunction cutoff, WindowMode mode, int j_min, int j_max);

  const CutoffFunction& cutoff() const { return cutoff_; }
  WindowMode mode() const { return mode_; }
  double band_ratio() const { return cutoff_.band_ratio(); }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  bool contains(int j) const { return j >= j_min_ && j <= j_max_; }

  /// b_{j,l}; zero outside the support band.  Throws IndexError when j is
  /// outside the family's range.
  double operator()(int j, int l) const;

  /// Smallest and largest l with b_{j,l} != 0.
  ScaleBand band(int j) const;

  /// ceil(B^{j+1}), the per-scale band limit.
  int band_limit(int j) const;

  /// b_{j,l} for l = 0..band(j).l_max (empty when the band is empty).
  std::span<const double> table(int j) const;

  /// Continuous profile b(x), in the family's mode.
  double profile(double x) const;

 private:
  double squared_or_literal(double lo_arg, double hi_arg) const;

  CutoffFunction cutoff_;
  WindowMode mode_;
  int j_min_;
  int j_max_;
  std::vector<std::vector<double>> tables_;
  std::vector<ScaleBand> bands_;
};

/// B^{-j}, computed identically wherever a window argument l * B^{-j} is
/// formed so that adjacent scales telescope exactly.
double inverse_scale_power(double band_ratio, int j);

}  // namespace nse
