#include "nse/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nse/error.hpp"

namespace nse {

namespace {

// atan2 form stays accurate for nearly coincident directions, where acos
// of a rounded dot product does not.
double angle_between(const UnitVector& a, const UnitVector& b) {
  const double cx = a.y * b.z - a.z * b.y;
  const double cy = a.z * b.x - a.x * b.z;
  const double cz = a.x * b.y - a.y * b.x;
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), a.dot(b));
}

}  // namespace

UnitVector UnitVector::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

double UnitVector::colatitude() const { return std::atan2(std::hypot(x, y), z); }

double UnitVector::longitude() const {
  const double p = std::atan2(y, x);
  return p < 0.0 ? p + 2.0 * std::numbers::pi : p;
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw InvalidParameter("Gauss-Legendre rule needs n >= 1");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th largest root
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) {
      p1 = x;
      p0 = 1.0;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = x;
    gl.nodes[n - 1 - i] = -x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) gl.nodes[n / 2] = 0.0;
  return gl;
}

Pixelization::Pixelization(int order) : order_(order), n_phi_(order + 1) {
  if (order < 0) throw InvalidParameter("pixelization order must be >= 0");
  const int n_rings = order / 2 + 1;
  const auto gl = gauss_legendre(n_rings);
  rings_.reserve(n_rings);
  for (int r = 0; r < n_rings; ++r) {
    const double z = std::clamp(gl.nodes[r], -1.0, 1.0);
    rings_.push_back({std::acos(z), gl.weights[r]});
  }
  const double dphi = 2.0 * std::numbers::pi / n_phi_;
  points_.reserve(static_cast<std::size_t>(n_rings) * n_phi_);
  weights_.reserve(points_.capacity());
  for (int r = 0; r < n_rings; ++r) {
    const double z = gl.nodes[r];
    const double s = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));
    for (int i = 0; i < n_phi_; ++i) {
      const double phi = phi_of(i);
      points_.push_back({s * std::cos(phi), s * std::sin(phi), z});
      weights_.push_back(rings_[r].weight * dphi);
    }
  }
}

double Pixelization::phi_of(int i) const { return 2.0 * std::numbers::pi * i / n_phi_; }

double geodesic_distance(const UnitVector& a, const UnitVector& b) {
  for (const auto* v : {&a, &b}) {
    const double norm = std::sqrt(v->dot(*v));
    if (!(std::abs(norm - 1.0) <= 1e-9))
      throw InvalidParameter("geodesic_distance: input is not unit-normalized (norm " +
                             std::to_string(norm) + ")");
  }
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

std::vector<std::size_t> points_within(const Pixelization& pix, const UnitVector& center,
                                       double radius) {
  if (!(radius >= 0.0 && radius <= std::numbers::pi))
    throw InvalidParameter("points_within: radius must lie in [0, pi]");
  const double theta0 = center.colatitude();
  std::vector<std::size_t> out;
  const auto rings = pix.rings();
  const std::size_t nphi = static_cast<std::size_t>(pix.n_phi());
  for (std::size_t r = 0; r < rings.size(); ++r) {
    // every point on a ring is at least |theta_r - theta0| away
    if (std::abs(rings[r].theta - theta0) > radius + 1e-12) continue;
    for (std::size_t i = 0; i < nphi; ++i) {
      const std::size_t k = r * nphi + i;
      if (angle_between(center, pix.point(k)) <= radius) out.push_back(k);
    }
  }
  return out;
}

}  // namespace nse
