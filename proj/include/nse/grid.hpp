#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nse {

struct UnitVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  static UnitVector from_angles(double theta, double phi);

  double dot(const UnitVector& o) const { return x * o.x + y * o.y + z * o.z; }
  double colatitude() const;
  double longitude() const;
};

/// Gauss-Legendre nodes/weights on [-1, 1], nodes in descending order.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on the roots of P_n (tolerance 1e-15, at most 100
/// iterations per node).
GaussLegendre gauss_legendre(int n);

struct Ring {
  double theta;   ///< colatitude in radians
  double weight;  ///< Gauss-Legendre weight in cos(theta)
};

/// Cubature points and weights exact for every spherical harmonic of degree
/// <= order.  Product grid: floor(order/2)+1 Gauss-Legendre rings in
/// cos(theta), order+1 equispaced longitudes.  Points are stored ring-major
/// (north to south, then by longitude).
class Pixelization {
 public:
  explicit Pixelization(int order);

  int order() const { return order_; }
  std::size_t size() const { return points_.size(); }
  int n_rings() const { return static_cast<int>(rings_.size()); }
  int n_phi() const { return n_phi_; }

  std::span<const Ring> rings() const { return rings_; }
  std::span<const UnitVector> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

  const UnitVector& point(std::size_t k) const { return points_[k]; }
  double weight(std::size_t k) const { return weights_[k]; }
  int ring_of(std::size_t k) const { return static_cast<int>(k / n_phi_); }
  double theta(std::size_t k) const { return rings_[ring_of(k)].theta; }
  double phi(std::size_t k) const { return phi_of(static_cast<int>(k % n_phi_)); }
  double phi_of(int i) const;

 private:
  int order_;
  int n_phi_;
  std::vector<Ring> rings_;
  std::vector<UnitVector> points_;
  std::vector<double> weights_;
};

inline Pixelization build_pixelization(int order) { return Pixelization(order); }

/// arccos of the clamped dot product.  Throws InvalidParameter when either
/// input deviates from unit norm by more than 1e-9.
double geodesic_distance(const UnitVector& a, const UnitVector& b);

/// Indices k with d(center, xi_k) <= radius, ascending.
std::vector<std::size_t> points_within(const Pixelization& pix, const UnitVector& center,
                                       double radius);

}  // namespace nse
