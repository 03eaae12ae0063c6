#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "netrec/types.hpp"

namespace netrec {

/// Sample mean with a two-sided 95% Student-t interval.
struct Band {
  double mean = kUndefined;
  double lo = kUndefined;
  double hi = kUndefined;
  std::size_t n = 0;

  double half_width() const noexcept { return hi - mean; }
};

inline double student_t_975(std::size_t dof) {
  return boost::math::quantile(boost::math::students_t_distribution<double>(static_cast<double>(dof)), 0.975);
}

/// Undefined entries are skipped. One defined value gives a zero-width band;
/// none gives an undefined band.
inline Band confidence_band(std::span<const double> values) {
  std::vector<double> xs;
  for (double v : values) {
    if (!is_undefined(v)) xs.push_back(v);
  }
  Band b;
  b.n = xs.size();
  if (xs.empty()) return b;
  double sum = 0.0;
  for (double x : xs) sum += x;
  b.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) {
    b.lo = b.hi = b.mean;
    return b;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - b.mean) * (x - b.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  const double half = student_t_975(xs.size() - 1) * sd / std::sqrt(static_cast<double>(xs.size()));
  b.lo = b.mean - half;
  b.hi = b.mean + half;
  return b;
}

}  // namespace netrec
