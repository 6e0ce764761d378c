#include "nullcurve/weierstrass.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace nullcurve {

double PeriodMatrix::max_norm() const {
  double best = 0.0;
  for (const auto& c : columns) best = std::max(best, norm(c));
  return best;
}

PeriodMatrix periods(const SeriesMap& f) {
  PeriodMatrix p;
  if (f.domain().is_disc()) return p;
  if (f.dim() != 3) throw Error(ErrorKind::invalid_argument, "periods need a map into C^3");
  Vec3 col;
  for (std::size_t c = 0; c < 3; ++c) col[c] = 2.0 * kPi * kI * f.coeff(c, -1);
  p.columns.push_back(col);
  p.loop_radii.push_back(std::sqrt(f.domain().r0));
  return p;
}

double quadric_residual(const SeriesMap& f) {
  if (f.dim() != 3) throw Error(ErrorKind::invalid_argument, "quadric residual needs C^3 maps");
  double denom = 0.0;
  SeriesMap sum;
  for (std::size_t c = 0; c < 3; ++c) {
    const SeriesMap fc = f.component(c);
    const SeriesMap sq = multiply(fc, fc);
    denom = std::max(denom, sq.max_coefficient());
    sum = c == 0 ? sq : sum + sq;
  }
  return denom == 0.0 ? 0.0 : sum.max_coefficient() / denom;
}

SeriesMap integrate_null(const SeriesMap& f, cplx base_point, std::span<const cplx> base_value,
                         double null_tol, double period_tol) {
  const double q = quadric_residual(f);
  if (q > null_tol) {
    std::ostringstream os;
    os << "derivative has normalized null residual " << q;
    throw Error(ErrorKind::not_null, os.str());
  }
  const PeriodMatrix p = periods(f);
  const double scale = 1.0 + f.max_coefficient();
  if (p.max_norm() > period_tol * scale) {
    std::ostringstream os;
    os << "f dz is not exact: period norm " << p.max_norm();
    throw PeriodObstruction(p, os.str());
  }
  // Residues below tolerance are dropped by the antiderivative.
  SeriesMap g = f;
  for (std::size_t c = 0; c < 3; ++c)
    if (g.lo() <= -1) g.at(c, -1) = 0.0;
  return antiderivative(g, base_point, base_value);
}

SpraySpec SpraySpec::inner_weighted(double r0, int terms) {
  SpraySpec spec;
  const Domain dom = Domain::annulus(r0);
  const SeriesMap zero(dom, 0, 0, 1);
  // Independent shifts of u and v: a shared parameter would make the period
  // columns (b(u - v), i b(u + v), b(u + v)), never of rank 3.
  for (int j = 1; j <= terms; ++j) {
    const SeriesMap b = SeriesMap::monomial(dom, -j, std::pow(r0, j));
    spec.phi.push_back(b);
    spec.psi.push_back(zero);
    spec.phi.push_back(zero);
    spec.psi.push_back(b);
  }
  return spec;
}

SpinorPair apply_spray(const SpinorPair& s, const SpraySpec& spec, std::span<const cplx> t) {
  SpinorPair r = s;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (t[j] == 0.0) continue;
    r.u = r.u + t[j] * spec.phi[j];
    r.v = r.v + t[j] * spec.psi[j];
  }
  return r;
}

namespace {

// Coefficient of z^-1 in a * b.
cplx residue_of_product(const SeriesMap& a, const SeriesMap& b) {
  cplx sum = 0.0;
  for (int d = a.lo(); d <= a.hi(); ++d) {
    const int e = -1 - d;
    if (e < b.lo() || e > b.hi()) continue;
    sum += a.coeff(0, d) * b.coeff(0, e);
  }
  return sum;
}

Vec3 spinor_period(const SpinorPair& s) {
  const cplx uu = residue_of_product(s.u, s.u);
  const cplx vv = residue_of_product(s.v, s.v);
  const cplx uv = residue_of_product(s.u, s.v);
  const cplx f = 2.0 * kPi * kI;
  return {f * (uu - vv), f * kI * (uu + vv), f * 2.0 * uv};
}

double vnorm(const Vec3& v) { return norm(v); }

}  // namespace

Vec3 spray_period(const SpinorPair& s, const SpraySpec& spec, std::span<const cplx> t) {
  return spinor_period(apply_spray(s, spec, t));
}

PeriodKill kill_periods(const SpinorPair& s, const SpraySpec& spec, const KillOptions& opts) {
  if (!s.u.domain().is_annulus())
    throw Error(ErrorKind::domain, "period killing needs an annulus spinor");
  const std::size_t n = spec.size();
  if (n < 3 || spec.psi.size() != n) {
    throw Error(ErrorKind::non_dominating_spray,
                "spray needs at least three complex parameters to dominate C^3");
  }

  using Mat = Eigen::MatrixXcd;
  auto jacobian = [&](const std::vector<cplx>& t) {
    Mat J(3, static_cast<Eigen::Index>(n));
    std::vector<cplx> tp = t, tm = t;
    for (std::size_t j = 0; j < n; ++j) {
      tp[j] = t[j] + opts.fd_step;
      tm[j] = t[j] - opts.fd_step;
      const Vec3 a = spray_period(s, spec, tp), b = spray_period(s, spec, tm);
      for (int c = 0; c < 3; ++c) J(c, static_cast<Eigen::Index>(j)) = (a[c] - b[c]) / (2.0 * opts.fd_step);
      tp[j] = t[j];
      tm[j] = t[j];
    }
    return J;
  };

  auto scale_of = [&](const std::vector<cplx>& tt) {
    const SpinorPair sp = apply_spray(s, spec, tt);
    return 1.0 + std::max(sp.u.max_coefficient(), sp.v.max_coefficient());
  };

  PeriodKill out;
  std::vector<cplx> t(n, 0.0);
  Vec3 P = spray_period(s, spec, t);
  double res = vnorm(P);
  out.trace.push_back({t, res});
  {
    Mat J0 = jacobian(t);
    Eigen::JacobiSVD<Mat> svd(J0);
    const auto& sv = svd.singularValues();
    out.smallest_singular_value = sv.size() >= 3 ? sv(2) : 0.0;
    // A root at the origin needs no submersion.
    const double scale = scale_of(t);
    const bool at_root = res <= opts.tol * scale * scale;
    if (!at_root && (sv.size() < 3 || sv(2) < opts.sigma_min)) {
      std::ostringstream os;
      os << "period map is not submersive at t = 0 (smallest singular value "
         << out.smallest_singular_value << ")";
      throw Error(ErrorKind::non_dominating_spray, os.str());
    }
  }

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const double scale = scale_of(t);
    if (res <= opts.tol * scale * scale) {
      out.t0 = t;
      out.spinor = apply_spray(s, spec, t);
      out.g = spinor_project(out.spinor);
      return out;
    }
    const Mat J = jacobian(t);
    Eigen::VectorXcd rhs(3);
    for (int c = 0; c < 3; ++c) rhs(c) = -P[c];
    const Eigen::VectorXcd step =
        J.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    double alpha = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings, alpha *= 0.5) {
      std::vector<cplx> trial = t;
      for (std::size_t j = 0; j < n; ++j) trial[j] += alpha * step(static_cast<Eigen::Index>(j));
      const Vec3 Pt = spray_period(s, spec, trial);
      if (vnorm(Pt) < res) {
        t = trial;
        P = Pt;
        res = vnorm(Pt);
        accepted = true;
        break;
      }
    }
    out.trace.push_back({t, res});
    if (!accepted) break;
    double tn = 0.0;
    for (const auto& x : t) tn += std::norm(x);
    if (std::sqrt(tn) > spec.ball_radius) {
      throw ConvergenceFailure(out.trace, "Newton iterate left the parameter ball");
    }
  }
  const double scale = scale_of(t);
  if (res <= opts.tol * scale * scale) {
    out.t0 = t;
    out.spinor = apply_spray(s, spec, t);
    out.g = spinor_project(out.spinor);
    return out;
  }
  std::ostringstream os;
  os << "period Newton stopped at residual " << res << " after " << out.trace.size() - 1
     << " steps";
  throw ConvergenceFailure(out.trace, os.str());
}

}  // namespace nullcurve
