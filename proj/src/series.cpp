#include "nullcurve/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace nullcurve {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::nonzero_residue: return "nonzero-residue";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::non_holomorphic: return "non-holomorphic-data";
    case ErrorKind::not_null: return "not-null";
    case ErrorKind::unsupported_zeros: return "unsupported-zero-configuration";
    case ErrorKind::pole: return "pole";
    case ErrorKind::not_in_sl2: return "not-in-SL2";
    case ErrorKind::not_in_h3: return "not-in-H3";
    case ErrorKind::period_obstruction: return "period-obstruction";
    case ErrorKind::non_dominating_spray: return "non-dominating-spray";
    case ErrorKind::convergence: return "convergence-failure";
    case ErrorKind::tolerance_unachievable: return "tolerance-unachievable";
    case ErrorKind::degree: return "degree";
    case ErrorKind::degenerate_immersion: return "degenerate-immersion";
    case ErrorKind::unknown_name: return "unknown-name";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Domain Domain::annulus(double r0) {
  if (!(r0 > 0.0 && r0 < 1.0))
    throw Error(ErrorKind::invalid_argument, "annulus inner radius must lie in (0,1)");
  return {DomainKind::annulus, r0};
}

bool Domain::contains(cplx z, double slack) const {
  const double r = std::abs(z);
  if (r > 1.0 + slack) return false;
  if (is_annulus() && r < r0 - slack) return false;
  if (is_circle() && r < 1.0 - slack) return false;
  return true;
}

SeriesMap::SeriesMap(Domain domain, int lo, int hi, std::size_t dim)
    : domain_(domain), lo_(lo), hi_(hi), comps_(dim, CVec(static_cast<std::size_t>(hi - lo + 1))) {
  if (hi < lo) throw Error(ErrorKind::invalid_argument, "empty degree window");
  if (domain.is_disc() && lo < 0)
    throw Error(ErrorKind::invalid_argument, "disc maps cannot carry negative degrees");
  if (domain.is_annulus() && !(domain.r0 > 0.0 && domain.r0 < 1.0))
    throw Error(ErrorKind::invalid_argument, "annulus inner radius must lie in (0,1)");
}

SeriesMap SeriesMap::from_coefficients(Domain domain, int lo, std::vector<CVec> comps) {
  if (comps.empty()) throw Error(ErrorKind::invalid_argument, "map needs at least one component");
  const std::size_t len = comps.front().size();
  if (len == 0) throw Error(ErrorKind::invalid_argument, "empty coefficient list");
  for (const auto& c : comps)
    if (c.size() != len)
      throw Error(ErrorKind::invalid_argument, "components must share one degree window");
  SeriesMap m(domain, lo, lo + static_cast<int>(len) - 1, comps.size());
  m.comps_ = std::move(comps);
  return m;
}

SeriesMap SeriesMap::constant(Domain domain, std::span<const cplx> value) {
  SeriesMap m(domain, 0, 0, value.size());
  for (std::size_t c = 0; c < value.size(); ++c) m.comps_[c][0] = value[c];
  return m;
}

SeriesMap SeriesMap::monomial(Domain domain, int degree, cplx c) {
  const cplx v[] = {c};
  return monomial(domain, degree, v);
}

SeriesMap SeriesMap::monomial(Domain domain, int degree, std::span<const cplx> value) {
  const int lo = domain.is_disc() ? 0 : std::min(0, degree);
  SeriesMap m(domain, lo, std::max(0, degree), value.size());
  for (std::size_t c = 0; c < value.size(); ++c) m.at(c, degree) = value[c];
  return m;
}

cplx SeriesMap::coeff(std::size_t comp, int degree) const {
  if (degree < lo_ || degree > hi_) return 0.0;
  return comps_[comp][static_cast<std::size_t>(degree - lo_)];
}

cplx& SeriesMap::at(std::size_t comp, int degree) {
  if (degree < lo_ || degree > hi_)
    throw Error(ErrorKind::invalid_argument, "degree outside the series window");
  return comps_[comp][static_cast<std::size_t>(degree - lo_)];
}

SeriesMap SeriesMap::component(std::size_t comp) const {
  return from_coefficients(domain_, lo_, {comps_.at(comp)});
}

SeriesMap SeriesMap::widened(int lo, int hi) const {
  lo = std::min(lo, lo_);
  hi = std::max(hi, hi_);
  if (lo == lo_ && hi == hi_) return *this;
  SeriesMap m(domain_, lo, hi, dim());
  for (std::size_t c = 0; c < dim(); ++c)
    std::copy(comps_[c].begin(), comps_[c].end(), m.comps_[c].begin() + (lo_ - lo));
  return m;
}

SeriesMap SeriesMap::trimmed() const {
  auto zero_at = [&](int d) {
    for (const auto& c : comps_)
      if (c[static_cast<std::size_t>(d - lo_)] != 0.0) return false;
    return true;
  };
  int lo = lo_, hi = hi_;
  while (lo < 0 && lo < hi && zero_at(lo)) ++lo;
  while (hi > 0 && hi > lo && zero_at(hi)) --hi;
  if (lo == lo_ && hi == hi_) return *this;
  return truncate(*this, lo, hi).map;
}

SeriesMap SeriesMap::on_domain(Domain domain) const {
  SeriesMap m = trimmed();
  if (domain.is_disc() && m.lo_ < 0)
    throw Error(ErrorKind::domain, "map with negative degrees cannot live on the disc");
  m.domain_ = domain;
  return m;
}

double SeriesMap::max_coefficient() const {
  double best = 0.0;
  for (const auto& c : comps_)
    for (const auto& x : c) best = std::max(best, std::abs(x));
  return best;
}

std::vector<cplx> SeriesMap::operator()(cplx z) const { return eval(*this, z); }

SeriesMap stack(std::span<const SeriesMap> parts) {
  if (parts.empty()) throw Error(ErrorKind::invalid_argument, "nothing to stack");
  int lo = parts.front().lo(), hi = parts.front().hi();
  for (const auto& p : parts) {
    if (!(p.domain() == parts.front().domain()))
      throw Error(ErrorKind::invalid_argument, "stacked maps must share a domain");
    lo = std::min(lo, p.lo());
    hi = std::max(hi, p.hi());
  }
  std::vector<CVec> comps;
  for (const auto& p : parts) {
    SeriesMap w = p.widened(lo, hi);
    for (std::size_t c = 0; c < w.dim(); ++c)
      comps.emplace_back(w.coefficients(c).begin(), w.coefficients(c).end());
  }
  return SeriesMap::from_coefficients(parts.front().domain(), lo, std::move(comps));
}

namespace {

void require_same_domain(const SeriesMap& a, const SeriesMap& b) {
  if (!(a.domain() == b.domain()))
    throw Error(ErrorKind::invalid_argument, "series live on different domains");
  if (a.dim() != b.dim() && a.dim() != 1 && b.dim() != 1)
    throw Error(ErrorKind::invalid_argument, "series dimensions do not match");
}

}  // namespace

SeriesMap operator+(const SeriesMap& a, const SeriesMap& b) {
  require_same_domain(a, b);
  if (a.dim() != b.dim()) throw Error(ErrorKind::invalid_argument, "series dimensions do not match");
  const int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  SeriesMap r = a.widened(lo, hi);
  for (std::size_t c = 0; c < b.dim(); ++c)
    for (int d = b.lo(); d <= b.hi(); ++d) r.at(c, d) += b.coeff(c, d);
  return r;
}

SeriesMap operator-(const SeriesMap& a) { return cplx(-1.0) * a; }

SeriesMap operator-(const SeriesMap& a, const SeriesMap& b) { return a + (-b); }

SeriesMap operator*(cplx s, const SeriesMap& a) {
  SeriesMap r = a;
  for (std::size_t c = 0; c < r.dim(); ++c)
    for (auto& x : r.coefficients(c)) x *= s;
  return r;
}

SeriesMap multiply(const SeriesMap& a, const SeriesMap& b) {
  require_same_domain(a, b);
  const std::size_t dim = std::max(a.dim(), b.dim());
  std::vector<CVec> comps(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const auto ca = a.coefficients(a.dim() == 1 ? 0 : c);
    const auto cb = b.coefficients(b.dim() == 1 ? 0 : c);
    comps[c] = detail::convolve(CVec(ca.begin(), ca.end()), CVec(cb.begin(), cb.end()));
  }
  return SeriesMap::from_coefficients(a.domain(), a.lo() + b.lo(), std::move(comps));
}

SeriesMap shift_degree(const SeriesMap& a, int shift) {
  if (a.domain().is_disc() && a.lo() + shift < 0) {
    // Only legal when the low coefficients vanish.
    SeriesMap t = a.trimmed();
    if (t.lo() + shift < 0) {
      for (std::size_t c = 0; c < t.dim(); ++c)
        for (int d = t.lo(); d < -shift; ++d)
          if (t.coeff(c, d) != 0.0)
            throw Error(ErrorKind::domain, "shift would create a pole on the disc");
      t = truncate(t, -shift, std::max(t.hi(), -shift)).map;
    }
    std::vector<CVec> comps;
    for (std::size_t c = 0; c < t.dim(); ++c)
      comps.emplace_back(t.coefficients(c).begin(), t.coefficients(c).end());
    return SeriesMap::from_coefficients(t.domain(), t.lo() + shift, std::move(comps));
  }
  std::vector<CVec> comps;
  for (std::size_t c = 0; c < a.dim(); ++c)
    comps.emplace_back(a.coefficients(c).begin(), a.coefficients(c).end());
  return SeriesMap::from_coefficients(a.domain(), a.lo() + shift, std::move(comps));
}

SeriesMap dot(const SeriesMap& a, const SeriesMap& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::invalid_argument, "series dimensions do not match");
  SeriesMap p = multiply(a, b);
  SeriesMap r(p.domain(), p.lo(), p.hi(), 1);
  for (std::size_t c = 0; c < p.dim(); ++c)
    for (int d = p.lo(); d <= p.hi(); ++d) r.at(0, d) += p.coeff(c, d);
  return r;
}

Truncation truncate(const SeriesMap& a, int lo, int hi) {
  if (a.domain().is_disc()) lo = std::max(lo, 0);
  SeriesMap r(a.domain(), lo, hi, a.dim());
  double total = 0.0, kept = 0.0;
  for (std::size_t c = 0; c < a.dim(); ++c)
    for (int d = a.lo(); d <= a.hi(); ++d) {
      const double e = std::norm(a.coeff(c, d));
      total += e;
      if (d >= lo && d <= hi) {
        r.at(c, d) = a.coeff(c, d);
        kept += e;
      }
    }
  return {std::move(r), total > 0.0 ? std::max(0.0, total - kept) / total : 0.0};
}

std::vector<cplx> eval(const SeriesMap& map, cplx z) {
  if (!map.domain().contains(z)) {
    std::ostringstream os;
    os << "point " << z << " lies outside the domain";
    throw Error(ErrorKind::domain, os.str());
  }
  return eval_unchecked(map, z);
}

std::vector<cplx> eval_unchecked(const SeriesMap& map, cplx z) {
  std::vector<cplx> out(map.dim());
  const int lo = map.lo(), hi = map.hi();
  for (std::size_t c = 0; c < map.dim(); ++c) {
    const auto coef = map.coefficients(c);
    cplx pos = 0.0;
    for (int d = hi; d >= std::max(lo, 0); --d) pos = pos * z + coef[static_cast<std::size_t>(d - lo)];
    if (lo < 0) {
      const cplx w = 1.0 / z;
      cplx neg = 0.0;
      for (int d = lo; d <= std::min(hi, -1); ++d) neg = neg * w + coef[static_cast<std::size_t>(d - lo)];
      // Horner from the most negative degree leaves one factor of w missing.
      int top = std::min(hi, -1);
      neg *= std::pow(w, -top);
      pos += neg;
    }
    out[c] = pos;
  }
  return out;
}

SeriesMap derivative(const SeriesMap& map) {
  const int lo = map.lo() < 0 ? map.lo() - 1 : 0;
  const int hi = std::max(map.hi() - 1, lo);
  SeriesMap r(map.domain(), lo, hi, map.dim());
  for (std::size_t c = 0; c < map.dim(); ++c)
    for (int d = map.lo(); d <= map.hi(); ++d)
      if (d != 0) r.at(c, d - 1) = static_cast<double>(d) * map.coeff(c, d);
  return r;
}

SeriesMap antiderivative(const SeriesMap& map, cplx base_point,
                         std::span<const cplx> base_value, double residue_tol) {
  if (base_value.size() != map.dim())
    throw Error(ErrorKind::invalid_argument, "base value dimension mismatch");
  for (std::size_t c = 0; c < map.dim(); ++c)
    if (std::abs(map.coeff(c, -1)) >= residue_tol) {
      std::ostringstream os;
      os << "component " << c << " has residue " << map.coeff(c, -1)
         << "; the map has no single-valued antiderivative";
      throw Error(ErrorKind::nonzero_residue, os.str());
    }
  const int lo = map.lo() <= -2 ? map.lo() + 1 : 0;
  const int hi = std::max(map.hi() + 1, 0);
  SeriesMap r(map.domain(), lo, hi, map.dim());
  for (std::size_t c = 0; c < map.dim(); ++c)
    for (int d = map.lo(); d <= map.hi(); ++d)
      if (d != -1) r.at(c, d + 1) = map.coeff(c, d) / static_cast<double>(d + 1);
  const auto at_base = eval(r, base_point);
  for (std::size_t c = 0; c < map.dim(); ++c) r.at(c, 0) += base_value[c] - at_base[c];
  return r;
}

std::vector<CVec> sample_circle(const SeriesMap& map, double radius, std::size_t count,
                                double phase) {
  std::vector<CVec> out(map.dim(), CVec(count));
  const long n = static_cast<long>(count);
  for (std::size_t c = 0; c < map.dim(); ++c) {
    CVec buf(count);
    for (int d = map.lo(); d <= map.hi(); ++d) {
      const cplx a = map.coeff(c, d);
      if (a == 0.0) continue;
      const cplx w = std::pow(radius, d) * std::polar(1.0, phase * d);
      long idx = d % n;
      if (idx < 0) idx += n;
      buf[static_cast<std::size_t>(idx)] += a * w;
    }
    detail::dft(buf, +1);
    out[c] = std::move(buf);
  }
  return out;
}

std::size_t alias_free_size(int span, std::size_t floor) {
  std::size_t n = 1;
  const std::size_t need = std::max<std::size_t>(floor, 4 * static_cast<std::size_t>(std::max(span, 1)));
  while (n < need) n <<= 1;
  return n;
}

BoundarySamples boundary_samples(const SeriesMap& map, std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw Error(ErrorKind::aliasing, "sample count must be a power of two");
  if (n < 4 * static_cast<std::size_t>(map.span())) {
    std::ostringstream os;
    os << n << " samples alias a degree window of span " << map.span();
    throw Error(ErrorKind::aliasing, os.str());
  }
  BoundarySamples s;
  s.n = n;
  s.outer = sample_circle(map, 1.0, n);
  if (map.domain().is_annulus()) {
    s.r0 = map.domain().r0;
    s.inner = sample_circle(map, s.r0, n);
  }
  return s;
}

Fit fit_from_boundary(const BoundarySamples& samples, Domain domain, int lo, int hi,
                      double fit_tol) {
  const std::size_t n = samples.n;
  if (hi < lo) throw Error(ErrorKind::invalid_argument, "empty degree window");
  if (static_cast<std::size_t>(hi - lo) >= n)
    throw Error(ErrorKind::aliasing, "degree window wider than the sample count");
  if (domain.is_disc()) lo = std::max(lo, 0);
  SeriesMap out(domain, lo, hi, samples.outer.size());
  double total = 0.0, kept = 0.0;
  const long ln = static_cast<long>(n);
  for (std::size_t c = 0; c < samples.outer.size(); ++c) {
    CVec buf = samples.outer[c];
    detail::dft(buf, -1);
    for (auto& x : buf) {
      x /= static_cast<double>(n);
      total += std::norm(x);
    }
    for (int d = lo; d <= hi; ++d) {
      long idx = d % ln;
      if (idx < 0) idx += ln;
      const cplx a = buf[static_cast<std::size_t>(idx)];
      out.at(c, d) = a;
      kept += std::norm(a);
    }
  }
  const double leak = total > 0.0 ? std::max(0.0, total - kept) / total : 0.0;
  if (leak > fit_tol) {
    std::ostringstream os;
    os << "boundary data leaks " << leak << " of its energy outside degrees [" << lo << ", " << hi
       << "]";
    throw Error(ErrorKind::non_holomorphic, os.str());
  }
  return {std::move(out), leak};
}

double sup_boundary(const SeriesMap& map, std::size_t n) {
  if (n == 0) n = alias_free_size(map.span());
  auto circle_sup = [&](double radius) {
    const auto vals = sample_circle(map, radius, n);
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (const auto& comp : vals) s += std::norm(comp[j]);
      best = std::max(best, std::sqrt(s));
    }
    return best;
  };
  double best = circle_sup(1.0);
  if (map.domain().is_annulus()) best = std::max(best, circle_sup(map.domain().r0));
  return best;
}

}  // namespace nullcurve
