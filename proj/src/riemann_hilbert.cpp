#include "nullcurve/riemann_hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fft.hpp"

namespace nullcurve {

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

double vec_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cplx vec_hdot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

// Distance from q to the circle {w c : |w| = 1}.
double dist_to_circle(std::span<const cplx> q, std::span<const cplx> c) {
  const double cn = vec_norm(c);
  if (cn == 0.0) return vec_norm(q);
  const cplx proj = vec_hdot(q, c);
  const cplx w = std::abs(proj) > 0.0 ? proj / std::abs(proj) : cplx(1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += std::norm(q[i] - w * c[i]);
  return std::sqrt(s);
}

// Distance from q to the filled disc {w c : |w| <= 1}.
double dist_to_disc(std::span<const cplx> q, std::span<const cplx> c) {
  const double cn = vec_norm(c);
  if (cn == 0.0) return vec_norm(q);
  cplx w = vec_hdot(q, c) / (cn * cn);
  if (std::abs(w) > 1.0) w /= std::abs(w);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += std::norm(q[i] - w * c[i]);
  return std::sqrt(s);
}

// Generic distances for families of order J > 1: coarse sampling of the
// parameter followed by local refinement.
struct PolyDisc {
  std::vector<CVec> coef;  // coef[j][comp] for w^(j+1)

  CVec at(cplx w) const {
    CVec out(coef.front().size());
    cplx wp = w;
    for (const auto& c : coef) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * wp;
      wp *= w;
    }
    return out;
  }
  double gap(std::span<const cplx> q, cplx w) const {
    const CVec g = at(w);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += std::norm(q[i] - g[i]);
    return std::sqrt(s);
  }
};

double dist_to_torus(const PolyDisc& pd, std::span<const cplx> q, std::size_t tau_samples) {
  double best = std::numeric_limits<double>::infinity();
  double best_tau = 0.0;
  const double step = 2.0 * kPi / static_cast<double>(tau_samples);
  for (std::size_t t = 0; t < tau_samples; ++t) {
    const double tau = step * static_cast<double>(t);
    const double g = pd.gap(q, std::polar(1.0, tau));
    if (g < best) {
      best = g;
      best_tau = tau;
    }
  }
  // Golden-section refinement on the bracketing interval.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_tau - step, hi = best_tau + step;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = pd.gap(q, std::polar(1.0, x1)), f2 = pd.gap(q, std::polar(1.0, x2));
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = pd.gap(q, std::polar(1.0, x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = pd.gap(q, std::polar(1.0, x2));
    }
  }
  return std::min({best, f1, f2});
}

double dist_to_filled(const PolyDisc& pd, std::span<const cplx> q, std::size_t tau_samples) {
  double best = std::numeric_limits<double>::infinity();
  double br = 0.0, bt = 0.0;
  const std::size_t rings = 16;
  const std::size_t angles = std::max<std::size_t>(16, tau_samples / 4);
  for (std::size_t i = 0; i <= rings; ++i) {
    const double rho = static_cast<double>(i) / rings;
    for (std::size_t t = 0; t < angles; ++t) {
      const double tau = 2.0 * kPi * static_cast<double>(t) / static_cast<double>(angles);
      const double g = pd.gap(q, std::polar(rho, tau));
      if (g < best) {
        best = g;
        br = rho;
        bt = tau;
      }
    }
  }
  double dr = 1.0 / rings, dt = 2.0 * kPi / static_cast<double>(angles);
  for (int it = 0; it < 60; ++it) {
    bool moved = false;
    for (auto [sr, st] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const double r = std::clamp(br + sr * dr, 0.0, 1.0), t = bt + st * dt;
      const double g = pd.gap(q, std::polar(r, t));
      if (g < best) {
        best = g;
        br = r;
        bt = t;
        moved = true;
      }
    }
    if (!moved) {
      dr *= 0.5;
      dt *= 0.5;
    }
  }
  return best;
}

std::vector<double> sample_angles(std::size_t n) {
  std::vector<double> a(n);
  for (std::size_t j = 0; j < n; ++j) a[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
  return a;
}

}  // namespace

int BoundaryDiscFamily::fourier_degree() const {
  int m = 0;
  for (const auto& t : terms) m = std::max({m, -t.lo(), t.hi()});
  return m;
}

SeriesMap rh_formula(const SeriesMap& f, const BoundaryDiscFamily& fam, int k) {
  const int m = fam.fourier_degree();
  if (k <= m) {
    std::ostringstream os;
    os << "k = " << k << " does not exceed the Fourier degree " << m << "; the pole survives";
    throw Error(ErrorKind::degree, os.str());
  }
  SeriesMap F = f;
  for (std::size_t j = 0; j < fam.order(); ++j) {
    if (fam.terms[j].dim() != f.dim())
      throw Error(ErrorKind::invalid_argument, "family dimension differs from the map");
    const SeriesMap shifted =
        shift_degree(fam.terms[j], k * static_cast<int>(j + 1)).on_domain(f.domain());
    F = F + shifted;
  }
  return F;
}

RHCertificate rh_certify(const SeriesMap& f, const BoundaryDiscFamily& fam, int k, double r,
                         double eps, const RhOptions& opts) {
  if (!f.domain().is_disc()) throw Error(ErrorKind::domain, "rh_approx works on the disc");
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::invalid_argument, "r must lie in (0,1)");
  if (!(eps > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
  const double rp = opts.r_prime.value_or(r);
  if (!(rp >= r && rp < 1.0)) throw Error(ErrorKind::invalid_argument, "r' must lie in [r, 1)");

  const SeriesMap F = rh_formula(f, fam, k);
  const std::size_t n = alias_free_size(std::max(F.span(), 2 * fam.fourier_degree()), opts.samples);
  const std::size_t dim = f.dim();
  const std::size_t J = fam.order();

  RHCertificate cert;
  cert.k = k;
  cert.r_prime = rp;
  cert.epsilon = eps;
  cert.samples = n;

  const auto fb = sample_circle(f, 1.0, n);
  std::vector<std::vector<CVec>> cb;  // [j][comp][sample]
  for (const auto& t : fam.terms) cb.push_back(sample_circle(t, 1.0, n));

  auto family_at = [&](std::size_t s) {
    PolyDisc pd;
    pd.coef.assign(J, CVec(dim));
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t c = 0; c < dim; ++c) pd.coef[j][c] = cb[j][c][s];
    return pd;
  };

  // (a) on the boundary circle.
  {
    const auto Fb = sample_circle(F, 1.0, n);
    CVec q(dim);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t c = 0; c < dim; ++c) q[c] = Fb[c][s] - fb[c][s];
      double d;
      if (J == 0) d = vec_norm(q);
      else if (J == 1) d = dist_to_circle(q, family_at(s).coef[0]);
      else d = dist_to_torus(family_at(s), q, opts.tau_samples);
      cert.a = std::max(cert.a, d);
    }
  }
  // (b) on the radial grid [r', 1].
  for (std::size_t i = 0; i < opts.radial; ++i) {
    const double rho =
        opts.radial == 1 ? 1.0 : rp + (1.0 - rp) * static_cast<double>(i) / static_cast<double>(opts.radial - 1);
    const auto Fr = sample_circle(F, rho, n);
    CVec q(dim);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t c = 0; c < dim; ++c) q[c] = Fr[c][s] - fb[c][s];
      double d;
      if (J == 0) d = vec_norm(q);
      else if (J == 1) d = dist_to_disc(q, family_at(s).coef[0]);
      else d = dist_to_filled(family_at(s), q, opts.tau_samples);
      cert.b = std::max(cert.b, d);
    }
  }
  // (c) on |z| = r' (maximum principle for F - f).
  {
    const auto diff = sample_circle(F - f, rp, n);
    for (std::size_t s = 0; s < n; ++s) {
      double e = 0.0;
      for (std::size_t c = 0; c < dim; ++c) e += std::norm(diff[c][s]);
      cert.c = std::max(cert.c, std::sqrt(e));
    }
  }
  cert.valid = cert.a < eps && cert.b < eps && cert.c < eps;
  return cert;
}

namespace {

double violation(const RHCertificate& c) {
  return std::max({c.a, c.b, c.c, c.d}) / c.epsilon;
}

// Doubling then bisection over k for a monotone validity predicate.
template <class Trial>
RHCertificate search_k(int k_first, int k_max, Trial&& trial) {
  std::vector<KTrial> traj;
  RHCertificate best;
  bool have_best = false;
  auto run = [&](int k) {
    RHCertificate c = trial(k);
    traj.push_back({k, c.a, c.b, c.c, c.d, c.valid});
    if (!have_best || violation(c) < violation(best)) {
      best = c;
      have_best = true;
    }
    return c;
  };

  int lo = k_first - 1;  // largest known invalid (or the pole bound)
  int k = k_first;
  RHCertificate hi_cert;
  int hi = -1;
  while (true) {
    RHCertificate c = run(k);
    if (c.valid) {
      hi = k;
      hi_cert = c;
      break;
    }
    lo = k;
    if (k >= k_max) break;
    k = std::min(2 * k, k_max);
  }
  if (hi < 0) {
    best.trajectory = traj;
    std::ostringstream os;
    os << "no k <= " << k_max << " meets epsilon = " << best.epsilon << " (best k = " << best.k
       << ": a=" << best.a << " b=" << best.b << " c=" << best.c << " d=" << best.d << ")";
    throw ToleranceUnachievable(best, os.str());
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    RHCertificate c = run(mid);
    if (c.valid) {
      hi = mid;
      hi_cert = c;
    } else {
      lo = mid;
    }
  }
  hi_cert.trajectory = traj;
  return hi_cert;
}

}  // namespace

RhSolution rh_approx(const SeriesMap& f, const BoundaryDiscFamily& fam, double r, double eps,
                     const RhOptions& opts) {
  const int m = fam.fourier_degree();
  if (m >= opts.k_max) {
    std::ostringstream os;
    os << "family Fourier degree " << m << " reaches k_max = " << opts.k_max;
    throw Error(ErrorKind::degree, os.str());
  }
  RHCertificate cert = search_k(m + 1, opts.k_max, [&](int k) {
    return rh_certify(f, fam, k, r, eps, opts);
  });
  return {rh_formula(f, fam, cert.k), cert};
}

// ---------------------------------------------------------------------------
// Null-curve deformations.

void BoundaryData::validate() const {
  if (!(arc_hi > arc_lo)) throw Error(ErrorKind::invalid_argument, "arc must have positive length");
  if (!(arc_hi - arc_lo < 2.0 * kPi))
    throw Error(ErrorKind::invalid_argument, "arc must be a proper subarc of the circle");
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::invalid_argument, "r must lie in (0,1)");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
  if (!(taper >= 0.0)) throw Error(ErrorKind::invalid_argument, "taper must be nonnegative");
  if (mu.empty()) throw Error(ErrorKind::invalid_argument, "mu needs at least one sample");
  for (double m : mu)
    if (!(m >= 0.0) || !std::isfinite(m))
      throw Error(ErrorKind::invalid_argument, "mu must be finite and nonnegative");
  NullVector check(theta);  // throws not_null
  (void)check;
}

double BoundaryData::offset(double angle) const { return wrap_angle(angle - arc_lo); }

bool BoundaryData::in_arc(double angle, double padding) const {
  const double len = arc_length() + 2.0 * padding;
  if (len >= 2.0 * kPi) return true;
  return wrap_angle(angle - arc_lo + padding) <= len;
}

double BoundaryData::amplitude(double angle) const {
  if (!in_arc(angle)) return 0.0;
  if (mu.size() == 1) return mu.front();
  const double t = std::min(offset(angle), arc_length()) / arc_length() *
                   static_cast<double>(mu.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(t), mu.size() - 2);
  const double frac = t - static_cast<double>(i);
  return (1.0 - frac) * mu[i] + frac * mu[i + 1];
}

double BoundaryData::cutoff(double angle) const {
  if (!in_arc(angle)) return 0.0;
  const double width = std::min(taper, 0.5 * arc_length());
  if (width <= 0.0) return 1.0;
  const double off = offset(angle);
  const double edge = std::min(off, arc_length() - off);
  if (edge >= width) return 1.0;
  // sin(pi/2 * psi) over the C^2 smoothstep psi(x) = x - sin(2 pi x) / (2 pi).
  // Since psi(x) + psi(1 - x) = 1, mirrored ramps have chi^2 summing to one.
  const double x = std::max(edge, 0.0) / width;
  return std::sin(0.5 * kPi * (x - std::sin(2.0 * kPi * x) / (2.0 * kPi)));
}

double BoundaryData::effective_amplitude(double angle) const {
  const double c = cutoff(angle);
  return c * c * amplitude(angle);
}

bool BoundaryData::is_zero() const {
  return std::all_of(mu.begin(), mu.end(), [](double m) { return m == 0.0; });
}

cplx integration_base_point(const Domain& dom) {
  return dom.is_annulus() ? cplx(std::sqrt(dom.r0), 0.0) : cplx(0.0, 0.0);
}

namespace {

// s(z) = chi(z) sqrt(mu(z)) as a Laurent series on the circle, smallest
// window [-m, m] (m <= cap) holding all but 1e-24 of its energy. With a prior
// amplitude p the increment sqrt(p + chi^2 mu) - sqrt(p) is used instead.
SeriesMap amplitude_series(const BoundaryData& bd, int cap, std::size_t n,
                           const std::function<double(double)>& prior) {
  CVec buf(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    if (prior) {
      const double p = std::max(prior(a), 0.0);
      buf[j] = std::sqrt(p + bd.effective_amplitude(a)) - std::sqrt(p);
    } else {
      buf[j] = bd.cutoff(a) * std::sqrt(bd.amplitude(a));
    }
  }
  detail::dft(buf, -1);
  double total = 0.0;
  for (auto& x : buf) {
    x /= static_cast<double>(n);
    total += std::norm(x);
  }
  const long ln = static_cast<long>(n);
  auto at = [&](int d) {
    long i = d % ln;
    if (i < 0) i += ln;
    return buf[static_cast<std::size_t>(i)];
  };
  int m = 0;
  double kept = std::norm(at(0));
  while (m < cap && total - kept > 1e-24 * total) {
    ++m;
    kept += std::norm(at(m)) + std::norm(at(-m));
  }
  SeriesMap s(Domain::circle(), -m, m, 1);
  for (int d = -m; d <= m; ++d) s.at(0, d) = at(d);
  return s;
}

class NullCertifier {
 public:
  NullCertifier(const SeriesMap& F, const BoundaryData& bd, const RhNullOptions& opts)
      : F_(F), bd_(bd), opts_(opts), theta_(bd.theta.begin(), bd.theta.end()) {
    const double sup_dF = sup_boundary(derivative(F));
    if (opts.omega_width) {
      width_ = *opts.omega_width;
    } else if (opts.condition_b == ConditionB::retraction) {
      width_ = std::min(1.0 - bd.r, bd.epsilon / (4.0 * std::max(sup_dF, 1e-300)));
    } else {
      width_ = 1.0 - bd.r;
    }
    if (F.domain().is_annulus()) width_ = std::min(width_, 0.5 * (1.0 - F.domain().r0));
  }

  double width() const { return width_; }
  double omega_pad() const { return 2.0 * bd_.taper; }
  double u_pad() const { return bd_.taper; }

  RHCertificate certify(const SeriesMap& G, int k) {
    RHCertificate cert;
    cert.k = k;
    cert.epsilon = bd_.epsilon;
    cert.omega_padding = omega_pad();
    cert.omega_width = width_;
    cert.r_prime = 1.0 - width_;
    const std::size_t n = alias_free_size(std::max(G.span(), F_.span()), opts_.samples);
    cert.samples = n;
    prepare(n);
    const SeriesMap h = G - F_;
    const double step = 2.0 * kPi / static_cast<double>(n);

    // (a) on every boundary sample.
    const auto hb = sample_circle(h, 1.0, n);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx q[3] = {hb[0][j], hb[1][j], hb[2][j]};
      cert.a = std::max(cert.a, dist_to_circle(q, target_[j]));
    }

    // (b) on the Omega grid.
    for (std::size_t i = 0; i < opts_.omega_radial; ++i) {
      const double rho = 1.0 - width_ * static_cast<double>(i) /
                                   static_cast<double>(std::max<std::size_t>(opts_.omega_radial - 1, 1));
      const auto Gr = sample_circle(opts_.condition_b == ConditionB::retraction ? G : h, rho, n);
      for (std::size_t j = 0; j < n; ++j) {
        if (!bd_.in_arc(angles_[j], omega_pad())) continue;
        cplx q[3];
        for (int c = 0; c < 3; ++c)
          q[c] = opts_.condition_b == ConditionB::retraction ? Gr[c][j] - Fb_[c][j] : Gr[c][j];
        cert.b = std::max(cert.b, dist_to_disc(q, target_[j]));
      }
    }

    // (c) off Omega and (d) off U, in the C^1 sample norm on region boundaries.
    const auto hin = sample_circle(h, 1.0 - width_, n);
    cert.c = c1_off(h, hb, hin, omega_pad(), step, n);
    cert.d = c1_off(h, hb, hin, u_pad(), step, n);

    cert.valid = cert.a < bd_.epsilon && cert.b < bd_.epsilon && cert.c < bd_.epsilon &&
                 cert.d < bd_.epsilon;
    return cert;
  }

 private:
  void prepare(std::size_t n) {
    if (n == n_) return;
    n_ = n;
    angles_ = sample_angles(n);
    Fb_ = sample_circle(F_, 1.0, n);
    target_.assign(n, CVec(3));
    for (std::size_t j = 0; j < n; ++j) {
      const double mu = bd_.effective_amplitude(angles_[j]);
      for (int c = 0; c < 3; ++c) target_[j][c] = mu * theta_[c];
    }
  }

  static double value_plus_slope(const std::vector<CVec>& v, std::size_t j, std::size_t n,
                                 double step, double rho) {
    const std::size_t jp = (j + 1) % n, jm = (j + n - 1) % n;
    double val = 0.0, der = 0.0;
    for (const auto& comp : v) {
      val += std::norm(comp[j]);
      der += std::norm((comp[jp] - comp[jm]) / (2.0 * step * rho));
    }
    return std::sqrt(val) + std::sqrt(der);
  }

  double c1_off(const SeriesMap& h, const std::vector<CVec>& hb, const std::vector<CVec>& hin,
                double pad, double step, std::size_t n) const {
    double worst = 0.0;
    const bool full = bd_.arc_length() + 2.0 * pad >= 2.0 * kPi;
    for (std::size_t j = 0; j < n; ++j) {
      if (!full && !bd_.in_arc(angles_[j], pad))
        worst = std::max(worst, value_plus_slope(hb, j, n, step, 1.0));
      else
        worst = std::max(worst, value_plus_slope(hin, j, n, step, 1.0 - width_));
    }
    if (!full) {
      // Radial sides of the removed sector.
      for (double edge : {bd_.arc_lo - pad, bd_.arc_hi + pad}) {
        const std::size_t pts = std::max<std::size_t>(opts_.omega_radial, 2);
        for (std::size_t i = 0; i < pts; ++i) {
          const double rho = 1.0 - width_ * static_cast<double>(i) / static_cast<double>(pts - 1);
          const cplx dir = std::polar(1.0, edge);
          const auto v = eval_unchecked(h, rho * dir);
          const auto vp = eval_unchecked(h, (rho + step) * dir);
          const auto vm = eval_unchecked(h, (rho - step) * dir);
          double val = 0.0, der = 0.0;
          for (int c = 0; c < 3; ++c) {
            val += std::norm(v[c]);
            der += std::norm((vp[c] - vm[c]) / (2.0 * step));
          }
          worst = std::max(worst, std::sqrt(val) + std::sqrt(der));
        }
      }
    }
    if (F_.domain().is_annulus()) {
      const double r0 = F_.domain().r0;
      const auto hr = sample_circle(h, r0, n);
      for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, value_plus_slope(hr, j, n, step, r0));
    }
    return worst;
  }

  const SeriesMap& F_;
  const BoundaryData& bd_;
  const RhNullOptions& opts_;
  CVec theta_;
  double width_ = 0.0;
  std::size_t n_ = 0;
  std::vector<double> angles_;
  std::vector<CVec> Fb_;
  std::vector<CVec> target_;
};

}  // namespace

NullDeformation rh_null_deform(const SeriesMap& F, const SpinorPair& lift, const BoundaryData& bd,
                               const RhNullOptions& opts) {
  bd.validate();
  if (F.dim() != 3) throw Error(ErrorKind::invalid_argument, "null deformation needs C^3 maps");
  if (F.domain().is_circle()) throw Error(ErrorKind::domain, "curve must live on a disc or annulus");
  const Domain dom = F.domain();
  NullDeformation out;
  if (bd.is_zero()) {
    out.G = F;
    out.spinor = lift;
    out.cert.epsilon = bd.epsilon;
    out.cert.valid = true;
    if (dom.is_annulus()) out.t0.assign(2 * static_cast<std::size_t>(opts.spray_terms), 0.0);
    return out;
  }

  const auto ab = NullVector(bd.theta).spinor();
  // The window never reaches k_max; a truncation that costs accuracy then
  // shows up in the certificate rather than as a degree error.
  const int cap = std::max(1, std::min(opts.fourier_cap, opts.k_max - 1));
  const SeriesMap s = amplitude_series(bd, cap, std::max<std::size_t>(opts.samples, 4096), opts.prior_mu);
  out.fourier_degree = std::max(-s.lo(), s.hi());
  const SeriesMap uv_parts[] = {lift.u, lift.v};
  const SeriesMap uv = stack(uv_parts);
  const cplx base = integration_base_point(dom);
  const std::vector<cplx> base_value = eval(F, base);
  const SpraySpec spray = dom.is_annulus() ? SpraySpec::inner_weighted(dom.r0, opts.spray_terms)
                                           : SpraySpec{};

  struct Built {
    SeriesMap G;
    SpinorPair spinor;
    std::vector<cplx> t0;
    double period_norm = 0.0;
  };
  auto build = [&](int k) {
    const double amp = std::sqrt(2.0 * k + 1.0);
    const cplx dir[] = {ab[0], ab[1]};
    BoundaryDiscFamily fam;
    fam.terms.push_back(multiply(cplx(amp) * s, SeriesMap::constant(Domain::circle(), dir)));
    const SeriesMap pushed = rh_formula(uv, fam, k);
    Built b;
    b.spinor = {pushed.component(0), pushed.component(1)};
    SeriesMap g;
    if (dom.is_annulus()) {
      const PeriodKill kill = kill_periods(b.spinor, spray, opts.kill);
      b.spinor = kill.spinor;
      b.t0 = kill.t0;
      g = kill.g;
      b.period_norm = periods(g).max_norm();
    } else {
      g = spinor_project(b.spinor);
    }
    b.G = integrate_null(g, base, base_value, 1e-9);
    return b;
  };

  NullCertifier certifier(F, bd, opts);
  auto trial = [&](int k) {
    const Built b = build(k);
    RHCertificate c = certifier.certify(b.G, k);
    c.period_norm = b.period_norm;
    c.valid = c.valid && c.period_norm <= kPeriodTol * (1.0 + b.G.max_coefficient());
    return c;
  };

  RHCertificate cert;
  if (opts.fixed_k) {
    cert = trial(*opts.fixed_k);
    cert.trajectory.push_back({cert.k, cert.a, cert.b, cert.c, cert.d, cert.valid});
  } else {
    const int m = out.fourier_degree;
    cert = search_k(m + 1, opts.k_max, trial);
  }
  const Built b = build(cert.k);
  out.G = b.G;
  out.spinor = b.spinor;
  out.t0 = b.t0;
  out.cert = cert;
  return out;
}

NullDeformation rh_null_disc(const SeriesMap& F, const BoundaryData& bd, const RhNullOptions& opts) {
  if (!F.domain().is_disc()) throw Error(ErrorKind::domain, "rh_null_disc needs a disc curve");
  bd.validate();
  if (bd.is_zero()) return rh_null_deform(F, SpinorPair{}, bd, opts);
  return rh_null_deform(F, spinor_lift(derivative(F)), bd, opts);
}

NullDeformation rh_null_annulus(const SeriesMap& F, const BoundaryData& bd,
                                const RhNullOptions& opts) {
  if (!F.domain().is_annulus()) throw Error(ErrorKind::domain, "rh_null_annulus needs an annulus curve");
  bd.validate();
  if (bd.is_zero()) {
    NullDeformation out = rh_null_deform(F, SpinorPair{}, bd, opts);
    out.t0.assign(2 * static_cast<std::size_t>(opts.spray_terms), 0.0);
    return out;
  }
  return rh_null_deform(F, spinor_lift(derivative(F)), bd, opts);
}

}  // namespace nullcurve
