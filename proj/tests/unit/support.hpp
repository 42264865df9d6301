#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nse/harmonics.hpp"

namespace testing {

// Random real-field Alm with unit-scale entries, a_{l,0} real.
inline nse::Alm random_alm(int lmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  nse::Alm alm(lmax);
  for (int l = 0; l <= lmax; ++l) {
    alm(l, 0) = {n(rng), 0.0};
    for (int m = 1; m <= l; ++m) alm(l, m) = {n(rng), n(rng)};
  }
  return alm;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;  // standard error of the mean
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  for (double v : x) m.mean += v;
  m.mean /= x.size();
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= (x.size() - 1);
  m.se = std::sqrt(m.var / x.size());
  return m;
}

}  // namespace testing
