#include "nullcurve/null_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nullcurve {

double norm(const Vec3& v) {
  return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

cplx hdot(const Vec3& a, const Vec3& b) {
  return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

double null_residual(const Vec3& v) { return std::abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

NullVector::NullVector(const Vec3& v, double tol) : v_(v) {
  const double n = norm(v);
  if (n == 0.0) throw Error(ErrorKind::not_null, "zero vector is not in the punctured quadric");
  if (null_residual(v) > tol * n * n) {
    std::ostringstream os;
    os << "vector has null residual " << null_residual(v) / (n * n);
    throw Error(ErrorKind::not_null, os.str());
  }
}

std::array<cplx, 2> NullVector::spinor() const {
  const cplx a2 = (v_[0] - kI * v_[1]) / 2.0;
  const cplx b2 = -(v_[0] + kI * v_[1]) / 2.0;
  if (std::abs(a2) >= std::abs(b2)) {
    const cplx a = std::sqrt(a2);
    return {a, v_[2] / (2.0 * a)};
  }
  const cplx b = std::sqrt(b2);
  return {v_[2] / (2.0 * b), b};
}

Vec3 spinor_point(cplx u, cplx v) {
  return {u * u - v * v, kI * (u * u + v * v), 2.0 * u * v};
}

SeriesMap spinor_project(const SpinorPair& s) {
  const SeriesMap uu = multiply(s.u, s.u);
  const SeriesMap vv = multiply(s.v, s.v);
  const SeriesMap uv = multiply(s.u, s.v);
  const SeriesMap parts[] = {uu - vv, kI * (uu + vv), cplx(2.0) * uv};
  return stack(parts);
}

SeriesMap spinor_bilinear(const SpinorPair& s, cplx a, cplx b) {
  const SeriesMap ua = a * s.u, vb = b * s.v, ub = b * s.u, va = a * s.v;
  const SeriesMap parts[] = {ua - vb, kI * (ua + vb), ub + va};
  return stack(parts);
}

namespace {

struct Winding {
  int turns = 0;
  double min_modulus = 0.0;
  double max_modulus = 0.0;
};

Winding winding_of(const CVec& vals) {
  Winding w;
  w.min_modulus = std::abs(vals.front());
  double total = 0.0;
  for (std::size_t j = 0; j < vals.size(); ++j) {
    const cplx a = vals[j], b = vals[(j + 1) % vals.size()];
    w.min_modulus = std::min(w.min_modulus, std::abs(a));
    w.max_modulus = std::max(w.max_modulus, std::abs(a));
    if (a != 0.0 && b != 0.0) total += std::arg(b / a);
  }
  w.turns = static_cast<int>(std::lround(total / (2.0 * kPi)));
  return w;
}

// Square root of a zero-free scalar map via exp(log(g)/2), log g taken from
// the antiderivative of g'/g. Winding must be even on annuli, zero on discs.
SeriesMap series_sqrt(const SeriesMap& g, int turns, const LiftOptions& opts) {
  const Domain dom = g.domain();
  const std::size_t n = std::max(opts.samples, alias_free_size(std::max(g.span(), 2 * opts.degree_cap)));
  const int half = turns / 2;
  // h = g z^-turns has winding zero.
  const SeriesMap h = shift_degree(g, -turns).on_domain(dom);
  const SeriesMap dh = derivative(h);
  const auto hv = sample_circle(h, 1.0, n);
  const auto dv = sample_circle(dh, 1.0, n);
  BoundarySamples ratio;
  ratio.n = n;
  ratio.outer.assign(1, CVec(n));
  for (std::size_t j = 0; j < n; ++j) ratio.outer[0][j] = dv[0][j] / hv[0][j];
  const int lo = dom.is_disc() ? 0 : -opts.degree_cap;
  const SeriesMap logd = fit_from_boundary(ratio, dom, lo, opts.degree_cap, 1e-8).map;
  // Choose the branch of log h at z = 1 from the sample itself.
  const cplx log_at_one = std::log(hv[0][0]);
  const cplx base[] = {log_at_one};
  const SeriesMap logh = antiderivative(logd, 1.0, base, 1e-8 * (1.0 + logd.max_coefficient()));
  const auto lv = sample_circle(logh, 1.0, n);
  BoundarySamples root;
  root.n = n;
  root.outer.assign(1, CVec(n));
  for (std::size_t j = 0; j < n; ++j) root.outer[0][j] = std::exp(0.5 * lv[0][j]);
  SeriesMap r = fit_from_boundary(root, dom, lo, opts.degree_cap, 1e-8).map;
  return shift_degree(r, half).on_domain(dom);
}

// Pointwise quotient a / b through boundary samples, refit on a window.
SeriesMap series_divide(const SeriesMap& a, const SeriesMap& b, const LiftOptions& opts) {
  const Domain dom = a.domain();
  const int cap = std::max({opts.degree_cap, a.hi(), -a.lo()});
  const std::size_t n = std::max(opts.samples, alias_free_size(2 * cap));
  const auto av = sample_circle(a, 1.0, n);
  const auto bv = sample_circle(b, 1.0, n);
  BoundarySamples q;
  q.n = n;
  q.outer.assign(1, CVec(n));
  for (std::size_t j = 0; j < n; ++j) q.outer[0][j] = av[0][j] / bv[0][j];
  return fit_from_boundary(q, dom, dom.is_disc() ? 0 : -cap, cap, 1e-8).map;
}

SeriesMap clean(const SeriesMap& m, double scale) {
  // Zero coefficients that are pure round-off, then trim the window.
  SeriesMap r = m;
  for (std::size_t c = 0; c < r.dim(); ++c)
    for (auto& x : r.coefficients(c))
      if (std::abs(x) <= 1e-15 * scale) x = 0.0;
  return r.trimmed();
}

}  // namespace

SpinorPair spinor_lift(const SeriesMap& f, const LiftOptions& opts) {
  if (f.dim() != 3) throw Error(ErrorKind::invalid_argument, "lift needs a map into C^3");
  const std::size_t n = std::max(opts.samples, alias_free_size(f.span()));
  const auto fv = sample_circle(f, 1.0, n);
  double fmax = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 p{fv[0][j], fv[1][j], fv[2][j]};
    const double pn = norm(p);
    fmax = std::max(fmax, pn);
    if (pn == 0.0) {
      std::ostringstream os;
      os << "map vanishes at boundary sample " << j;
      throw Error(ErrorKind::not_null, os.str());
    }
    if (null_residual(p) > opts.null_tol * pn * pn) {
      std::ostringstream os;
      os << "map leaves the null quadric at boundary sample " << j << " (residual "
         << null_residual(p) / (pn * pn) << ")";
      throw Error(ErrorKind::not_null, os.str());
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 p{fv[0][j], fv[1][j], fv[2][j]};
    if (norm(p) <= opts.zero_tol * fmax) {
      std::ostringstream os;
      os << "map vanishes (numerically) at boundary sample " << j;
      throw Error(ErrorKind::not_null, os.str());
    }
  }

  const SeriesMap f1 = f.component(0), f2 = f.component(1), f3 = f.component(2);
  const SeriesMap u2 = cplx(0.5) * (f1 - kI * f2);
  const SeriesMap v2 = cplx(-0.5) * (f1 + kI * f2);
  const double scale = f.max_coefficient();

  auto usable = [&](const SeriesMap& g) -> std::optional<Winding> {
    CVec vals = sample_circle(g, 1.0, n)[0];
    Winding w = winding_of(vals);
    if (w.max_modulus == 0.0 || w.min_modulus <= opts.zero_tol * fmax) return std::nullopt;
    if (f.domain().is_annulus()) {
      Winding inner = winding_of(sample_circle(g, f.domain().r0, n)[0]);
      if (inner.min_modulus <= opts.zero_tol * fmax || inner.turns != w.turns) return std::nullopt;
      if (w.turns % 2 != 0) return std::nullopt;
    } else if (w.turns != 0) {
      return std::nullopt;  // zeros inside the disc
    }
    return w;
  };

  SpinorPair s;
  if (auto w = usable(u2)) {
    s.u = series_sqrt(u2, w->turns, opts);
    s.v = series_divide(cplx(0.5) * f3, s.u, opts);
  } else if (auto w2 = usable(v2)) {
    s.v = series_sqrt(v2, w2->turns, opts);
    s.u = series_divide(cplx(0.5) * f3, s.v, opts);
  } else {
    throw Error(ErrorKind::unsupported_zeros,
                "neither candidate square is zero-free on the domain; lift unsupported");
  }
  s.u = clean(s.u, std::sqrt(scale));
  s.v = clean(s.v, std::sqrt(scale));
  // Common window so both components live on the same degree range.
  const int lo = std::min(s.u.lo(), s.v.lo()), hi = std::max(s.u.hi(), s.v.hi());
  s.u = s.u.widened(lo, hi);
  s.v = s.v.widened(lo, hi);

  const cplx u1 = eval(s.u, 1.0)[0], v1 = eval(s.v, 1.0)[0];
  const double tie = 1e-12 * (std::abs(u1) + std::abs(v1));
  bool flip;
  if (std::abs(u1.real()) > tie) flip = u1.real() < 0.0;
  else if (std::abs(v1.real()) > tie) flip = v1.real() < 0.0;
  else if (std::abs(u1.imag()) > tie) flip = u1.imag() < 0.0;
  else flip = v1.imag() < 0.0;
  if (flip) {
    s.u = -s.u;
    s.v = -s.v;
  }
  return s;
}

SL2Point tmap(const Vec3& p, double pole_tol) {
  if (std::abs(p[2]) <= pole_tol) {
    std::ostringstream os;
    os << "third coordinate " << p[2] << " is at the pole of the T-map";
    throw Error(ErrorKind::pole, os.str());
  }
  const cplx inv = 1.0 / p[2];
  // z1^2 + z2^2 = (z1 + i z2)(z1 - i z2) keeps det = 1 to round-off.
  const cplx plus = p[0] + kI * p[1], minus = p[0] - kI * p[1];
  return {inv, plus * inv, minus * inv, (plus * minus + p[2] * p[2]) * inv};
}

Vec3 tmap_inverse(const SL2Point& m, double pole_tol) {
  if (std::abs(m.z11) <= pole_tol)
    throw Error(ErrorKind::pole, "z11 vanishes; point is outside the image of the T-map");
  const cplx z3 = 1.0 / m.z11;
  const cplx plus = m.z12 * z3, minus = m.z21 * z3;
  return {(plus + minus) / 2.0, (plus - minus) / (2.0 * kI), z3};
}

void require_zero_free_third(const SeriesMap& F, double pole_tol) {
  if (F.dim() != 3) throw Error(ErrorKind::invalid_argument, "T-map needs a map into C^3");
  const SeriesMap f3 = F.component(2);
  const std::size_t n = alias_free_size(f3.span());
  auto winding = [&](double rad) {
    const auto s = sample_circle(f3, rad, n)[0];
    double turn = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(s[j]) <= pole_tol) {
        std::ostringstream os;
        os << "F3 = " << s[j] << " at z = " << std::polar(rad, 2.0 * kPi * j / n) << " hits the pole of the T-map";
        throw Error(ErrorKind::pole, os.str());
      }
      turn += std::arg(s[(j + 1) % n] / s[j]);
    }
    return static_cast<long>(std::lround(turn / (2.0 * kPi)));
  };
  const double inner = F.domain().is_annulus() ? F.domain().r0 : 0.0;
  long zeros = winding(1.0);
  if (F.domain().is_annulus()) zeros -= winding(inner);
  if (zeros == 0 || F.domain().is_circle()) return;

  // Locate one zero: best node of a polar grid, then Newton.
  cplx z = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 32; ++i)
    for (int j = 0; j < 64; ++j) {
      const cplx w = std::polar(inner + (1.0 - inner) * i / 32.0, 2.0 * kPi * j / 64.0);
      const double a = std::abs(eval(f3, w)[0]);
      if (a < best) best = a, z = w;
    }
  const SeriesMap d3 = derivative(f3);
  for (int it = 0; it < 50; ++it) {
    const cplx d = eval_unchecked(d3, z)[0];
    if (d == 0.0) break;
    const cplx step = eval_unchecked(f3, z)[0] / d;
    z -= step;
    if (std::abs(step) < 1e-15) break;
  }
  std::ostringstream os;
  os << "F3 has " << zeros << " zero(s) inside the domain (one near z = " << z << "); the T-map has a pole there";
  throw Error(ErrorKind::pole, os.str());
}

SL2Curve tmap_on_curve(const SeriesMap& F, std::size_t samples, double pole_tol) {
  require_zero_free_third(F, pole_tol);
  const std::size_t n = samples;
  const auto vals = sample_circle(F, 1.0, n);
  SL2Curve curve;
  curve.nodes.resize(n);
  curve.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    curve.nodes[j] = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n));
    const Vec3 p{vals[0][j], vals[1][j], vals[2][j]};
    if (std::abs(p[2]) <= pole_tol) {
      std::ostringstream os;
      os << "F3 = " << p[2] << " at boundary sample " << j << " (z = " << curve.nodes[j]
         << ") hits the pole of the T-map";
      throw Error(ErrorKind::pole, os.str());
    }
    curve.values[j] = tmap(p, pole_tol);
    curve.max_det_error = std::max(curve.max_det_error, std::abs(curve.values[j].det() - 1.0));
  }
  // Fourth-order centered differences in the angle, step 2 pi / n.
  const double h = 2.0 * kPi / static_cast<double>(n);
  auto at = [&](long j) -> const SL2Point& {
    const long m = static_cast<long>(n);
    return curve.values[static_cast<std::size_t>(((j % m) + m) % m)];
  };
  for (std::size_t j = 0; j < n; ++j) {
    const long i = static_cast<long>(j);
    auto diff = [&](auto field) {
      return (-field(at(i + 2)) + 8.0 * field(at(i + 1)) - 8.0 * field(at(i - 1)) +
              field(at(i - 2))) /
             (12.0 * h);
    };
    const SL2Point d{diff([](const SL2Point& p) { return p.z11; }),
                     diff([](const SL2Point& p) { return p.z12; }),
                     diff([](const SL2Point& p) { return p.z21; }),
                     diff([](const SL2Point& p) { return p.z22; })};
    curve.det_derivative_residual = std::max(curve.det_derivative_residual, std::abs(d.det()));
  }
  return curve;
}

H3Point bryant_project(const SL2Point& m, double det_tol) {
  if (std::abs(m.det() - 1.0) > det_tol) {
    std::ostringstream os;
    os << "determinant " << m.det() << " differs from 1";
    throw Error(ErrorKind::not_in_sl2, os.str());
  }
  H3Point h;
  h.h11 = std::norm(m.z11) + std::norm(m.z12);
  h.h22 = std::norm(m.z21) + std::norm(m.z22);
  h.h12 = m.z11 * std::conj(m.z21) + m.z12 * std::conj(m.z22);
  return h;
}

std::array<double, 4> h3_minkowski(const H3Point& h, double tol) {
  const double scale = std::max(1.0, h.h11 + h.h22);
  if (!(h.h11 > 0.0 && h.h22 > 0.0) || std::abs(h.det() - 1.0) > tol * scale * scale) {
    std::ostringstream os;
    os << "matrix with diagonal (" << h.h11 << ", " << h.h22 << ") and det " << h.det()
       << " is not a point of H3";
    throw Error(ErrorKind::not_in_h3, os.str());
  }
  return {(h.h11 + h.h22) / 2.0, h.h12.real(), h.h12.imag(), (h.h11 - h.h22) / 2.0};
}

MinimalPart minimal_part(const SeriesMap& F, std::size_t radial, std::size_t angular) {
  if (F.dim() != 3) throw Error(ErrorKind::invalid_argument, "minimal part needs a map into C^3");
  const SeriesMap dF = derivative(F);
  MinimalPart out;
  const double r_in = F.domain().is_annulus() ? F.domain().r0 : 0.0;
  double max_lambda2 = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i <= radial; ++i) {
    const double r = r_in + (1.0 - r_in) * static_cast<double>(i) / static_cast<double>(radial);
    const std::size_t count = (r == 0.0) ? 1 : angular;
    const auto fv = sample_circle(F, r, count);
    const auto dv = sample_circle(dF, r, count);
    for (std::size_t j = 0; j < count; ++j) {
      out.nodes.push_back(std::polar(r, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(count)));
      out.points.push_back({fv[0][j].real(), fv[1][j].real(), fv[2][j].real()});
      double l2 = 0.0, re2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        l2 += std::norm(dv[c][j]);
        re2 += dv[c][j].real() * dv[c][j].real();  // d/dx Re F = Re F'
      }
      out.conformal_factor.push_back(std::sqrt(l2));
      max_lambda2 = std::max(max_lambda2, l2);
      worst = std::max(worst, std::abs(l2 - 2.0 * re2));
    }
  }
  out.degenerate = max_lambda2 == 0.0;
  out.metric_identity_residual = out.degenerate ? 0.0 : worst / max_lambda2;
  return out;
}

}  // namespace nullcurve
