#pragma once

#include <random>

#include "nullcurve/series.hpp"

namespace testing_support {

using nullcurve::cplx;

inline cplx random_cplx(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng)};
}

/// Random coefficients on [lo, hi] with geometric decay away from degree 0.
inline nullcurve::SeriesMap random_series(std::mt19937_64& rng, nullcurve::Domain dom, int lo,
                                          int hi, std::size_t dim, double decay = 0.9) {
  nullcurve::SeriesMap m(dom, lo, hi, dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (int d = lo; d <= hi; ++d) m.at(c, d) = random_cplx(rng, std::pow(decay, std::abs(d)));
  return m;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_norm(const std::vector<cplx>& a) {
  double m = 0.0;
  for (const auto& z : a) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace testing_support
