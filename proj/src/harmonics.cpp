#include "nse/harmonics.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nse/error.hpp"

namespace nse {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kInvSqrt4Pi = 0.28209479177387814347;  // 1/sqrt(4 pi)

// Below this the sectoral start value is dropped; the largest growth the
// l-recursion can apply within the supported bands keeps the discarded
// terms far below double precision of the field.
constexpr double kUnderflow = 1e-280;

double mm_factor(int m) { return -std::sqrt((2.0 * m + 1.0) / (2.0 * m)); }

double rec_a(int l, int m) {
  return std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
}

// Normalized associated Legendre lambda_{l,|m|}(x) (Condon-Shortley phase
// included), so that Y_{l,m} = lambda_{l,m}(cos theta) e^{i m phi}.
double normalized_legendre(int l, int m, double x, double s) {
  double pmm = kInvSqrt4Pi;
  for (int i = 1; i <= m; ++i) pmm *= mm_factor(i) * s;
  if (l == m) return pmm;
  double p2 = 0.0, p1 = pmm;
  for (int ll = m + 1; ll <= l; ++ll) {
    const double a = rec_a(ll, m);
    const double b = (ll - 1 == m) ? 0.0 : a / rec_a(ll - 1, m);
    const double p = a * x * p1 - b * p2;
    p2 = p1;
    p1 = p;
  }
  return p1;
}

}  // namespace

Alm::Alm(int lmax) : lmax_(lmax) {
  if (lmax < 0) throw InvalidParameter("Alm lmax must be >= 0");
  data_.assign(count(lmax), {0.0, 0.0});
}

Alm Alm::resized(int lmax) const {
  Alm out(lmax);
  const int lcopy = std::min(lmax, lmax_);
  std::copy_n(data_.begin(), count(lcopy), out.data_.begin());
  return out;
}

std::complex<double> eval_ylm(int l, int m, const UnitVector& xi) {
  if (l < 0 || std::abs(m) > l)
    throw InvalidParameter("eval_ylm: need 0 <= |m| <= l, got l=" + std::to_string(l) +
                           " m=" + std::to_string(m));
  const int am = std::abs(m);
  const double s = std::hypot(xi.x, xi.y);
  const double x = xi.z;
  const double lam = normalized_legendre(l, am, x, s);
  const double phi = std::atan2(xi.y, xi.x);
  const std::complex<double> y = std::polar(lam, am * phi);
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

double eval_legendre_kernel(int l, double t) {
  if (l < 0) throw InvalidParameter("eval_legendre_kernel: l must be >= 0");
  double p0 = 1.0, p1 = t;
  if (l == 0) return p0 / (4.0 * std::numbers::pi);
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return (2.0 * l + 1.0) / (4.0 * std::numbers::pi) * p1;
}

std::vector<double> legendre_kernel_values(int lmax, double t) {
  std::vector<double> out(static_cast<std::size_t>(std::max(lmax + 1, 0)));
  double p0 = 1.0, p1 = t;
  for (int l = 0; l <= lmax; ++l) {
    double p;
    if (l == 0) {
      p = 1.0;
    } else if (l == 1) {
      p = t;
    } else {
      p = ((2.0 * l - 1.0) * t * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p;
    }
    out[l] = (2.0 * l + 1.0) / (4.0 * std::numbers::pi) * p;
  }
  return out;
}

double zonal_kernel(std::span<const double> coeffs, double t) {
  double sum = 0.0;
  double p0 = 1.0, p1 = t;
  const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    double p;
    if (l == 0) {
      p = 1.0;
    } else if (l == 1) {
      p = t;
    } else {
      const double dl = static_cast<double>(l);
      p = ((2.0 * dl - 1.0) * t * p1 - (dl - 1.0) * p0) / dl;
      p0 = p1;
      p1 = p;
    }
    sum += coeffs[l] * (2.0 * l + 1.0) * inv4pi * p;
  }
  return sum;
}

ShtPlan::ShtPlan(const Pixelization& pix, int lmax)
    : lmax_(lmax),
      order_(pix.order()),
      n_rings_(static_cast<std::size_t>(pix.n_rings())),
      n_phi_(pix.n_phi()) {
  if (lmax < 0) throw InvalidParameter("ShtPlan: lmax must be >= 0");
  for (const auto& ring : pix.rings()) {
    cos_theta_.push_back(std::cos(ring.theta));
    sin_theta_.push_back(std::sin(ring.theta));
    ring_weight_.push_back(ring.weight * 2.0 * std::numbers::pi / n_phi_);
  }
  const std::size_t ncol = static_cast<std::size_t>(lmax) + 1;
  cos_table_.resize(static_cast<std::size_t>(n_phi_) * ncol);
  sin_table_.resize(cos_table_.size());
  for (int i = 0; i < n_phi_; ++i) {
    for (int m = 0; m <= lmax; ++m) {
      const long long idx = (static_cast<long long>(i) * m) % n_phi_;
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(idx) / n_phi_;
      cos_table_[i * ncol + m] = std::cos(ang);
      sin_table_[i * ncol + m] = m == 0 ? 0.0 : std::sin(ang);
    }
  }
  rec_a_.assign(Alm::count(lmax), 0.0);
  rec_b_.assign(Alm::count(lmax), 0.0);
  for (int l = 1; l <= lmax; ++l) {
    for (int m = 0; m < l; ++m) {
      rec_a_[Alm::index(l, m)] = rec_a(l, m);
      rec_b_[Alm::index(l, m)] = (l - 1 == m) ? 0.0 : rec_a(l, m) / rec_a(l - 1, m);
    }
  }
  mm_factor_.assign(ncol, 0.0);
  for (int m = 1; m <= lmax; ++m) mm_factor_[m] = mm_factor(m);
}

Alm ShtPlan::forward(std::span<const double> samples) const {
  if (samples.size() != n_points())
    throw ShapeError("forward_sht: got " + std::to_string(samples.size()) + " samples for " +
                     std::to_string(n_points()) + " points");
  const std::size_t ncol = static_cast<std::size_t>(lmax_) + 1;
  Eigen::Map<const RowMatrix> f(samples.data(), static_cast<Eigen::Index>(n_rings_), n_phi_);
  Eigen::Map<const RowMatrix> ct(cos_table_.data(), n_phi_, static_cast<Eigen::Index>(ncol));
  Eigen::Map<const RowMatrix> st(sin_table_.data(), n_phi_, static_cast<Eigen::Index>(ncol));
  const RowMatrix fc = f * ct;
  const RowMatrix fs = f * st;

  Alm alm(lmax_);
  auto* out = alm.data().data();
  for (std::size_t r = 0; r < n_rings_; ++r) {
    const double x = cos_theta_[r];
    const double s = sin_theta_[r];
    const double w = ring_weight_[r];
    double pmm = kInvSqrt4Pi;
    for (int m = 0; m <= lmax_; ++m) {
      if (m > 0) pmm *= mm_factor_[m] * s;
      if (std::abs(pmm) < kUnderflow) break;
      const double gre = w * fc(static_cast<Eigen::Index>(r), m);
      const double gim = -w * fs(static_cast<Eigen::Index>(r), m);
      double p2 = 0.0, p1 = pmm;
      std::size_t idx = Alm::index(m, m);
      out[idx] += std::complex<double>(gre * p1, gim * p1);
      for (int l = m + 1; l <= lmax_; ++l) {
        idx += static_cast<std::size_t>(l);
        const double p = rec_a_[idx] * x * p1 - rec_b_[idx] * p2;
        p2 = p1;
        p1 = p;
        out[idx] += std::complex<double>(gre * p, gim * p);
      }
    }
  }
  return alm;
}

std::vector<double> ShtPlan::inverse(const Alm& alm) const {
  if (alm.lmax() > lmax_)
    throw ShapeError("inverse_sht: Alm lmax " + std::to_string(alm.lmax()) +
                     " exceeds plan lmax " + std::to_string(lmax_));
  const int lmax = alm.lmax();
  const std::size_t ncol = static_cast<std::size_t>(lmax_) + 1;
  RowMatrix hre = RowMatrix::Zero(static_cast<Eigen::Index>(n_rings_), static_cast<Eigen::Index>(ncol));
  RowMatrix him = RowMatrix::Zero(static_cast<Eigen::Index>(n_rings_), static_cast<Eigen::Index>(ncol));
  const auto* a = alm.data().data();
  double residue = 0.0;
  for (std::size_t r = 0; r < n_rings_; ++r) {
    const double x = cos_theta_[r];
    const double s = sin_theta_[r];
    double pmm = kInvSqrt4Pi;
    for (int m = 0; m <= lmax; ++m) {
      if (m > 0) pmm *= mm_factor_[m] * s;
      if (std::abs(pmm) < kUnderflow) break;
      double p2 = 0.0, p1 = pmm;
      std::size_t idx = Alm::index(m, m);
      double sre = a[idx].real() * p1;
      double sim = a[idx].imag() * p1;
      for (int l = m + 1; l <= lmax; ++l) {
        idx += static_cast<std::size_t>(l);
        const double p = rec_a_[idx] * x * p1 - rec_b_[idx] * p2;
        p2 = p1;
        p1 = p;
        sre += a[idx].real() * p;
        sim += a[idx].imag() * p;
      }
      if (m == 0) {
        residue = std::max(residue, std::abs(sim));
        sim = 0.0;
      } else {
        sre *= 2.0;
        sim *= 2.0;
      }
      hre(static_cast<Eigen::Index>(r), m) = sre;
      him(static_cast<Eigen::Index>(r), m) = sim;
    }
  }
  Eigen::Map<const RowMatrix> ct(cos_table_.data(), n_phi_, static_cast<Eigen::Index>(ncol));
  Eigen::Map<const RowMatrix> st(sin_table_.data(), n_phi_, static_cast<Eigen::Index>(ncol));
  std::vector<double> out(n_points());
  Eigen::Map<RowMatrix> f(out.data(), static_cast<Eigen::Index>(n_rings_), n_phi_);
  f.noalias() = hre * ct.transpose();
  f.noalias() -= him * st.transpose();

  if (residue > 0.0) {
    const double norm = f.cwiseAbs().maxCoeff();
    if (residue > 1e-10 * norm)
      throw ConventionViolation("inverse_sht: imaginary residue " + std::to_string(residue) +
                                " exceeds tolerance; a_{l,0} must be real");
  }
  return out;
}

Alm forward_sht(std::span<const double> samples, const Pixelization& pix, int lmax) {
  if (lmax < 0 || lmax > pix.order())
    throw InvalidParameter("forward_sht: need 0 <= lmax <= pixelization order (" +
                           std::to_string(pix.order()) + "), got " + std::to_string(lmax));
  return ShtPlan(pix, lmax).forward(samples);
}

std::vector<double> inverse_sht(const Alm& alm, const Pixelization& pix) {
  return ShtPlan(pix, alm.lmax()).inverse(alm);
}

std::vector<double> inverse_sht(const Alm& alm, std::span<const UnitVector> points) {
  const int lmax = alm.lmax();
  std::vector<double> out(points.size());
  double residue = 0.0;
  double norm = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& xi = points[k];
    const double s = std::hypot(xi.x, xi.y);
    const double x = xi.z;
    const double phi = std::atan2(xi.y, xi.x);
    double value = 0.0;
    double pmm = kInvSqrt4Pi;
    for (int m = 0; m <= lmax; ++m) {
      if (m > 0) pmm *= mm_factor(m) * s;
      if (std::abs(pmm) < kUnderflow) break;
      double p2 = 0.0, p1 = pmm;
      std::complex<double> h = alm(m, m) * p1;
      for (int l = m + 1; l <= lmax; ++l) {
        const double a = rec_a(l, m);
        const double b = (l - 1 == m) ? 0.0 : a / rec_a(l - 1, m);
        const double p = a * x * p1 - b * p2;
        p2 = p1;
        p1 = p;
        h += alm(l, m) * p;
      }
      if (m == 0) {
        residue = std::max(residue, std::abs(h.imag()));
        value += h.real();
      } else {
        value += 2.0 * (h * std::polar(1.0, m * phi)).real();
      }
    }
    out[k] = value;
    norm = std::max(norm, std::abs(value));
  }
  if (residue > 0.0 && residue > 1e-10 * norm)
    throw ConventionViolation("inverse_sht: imaginary residue exceeds tolerance; a_{l,0} must be real");
  return out;
}

}  // namespace nse
