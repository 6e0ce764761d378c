#include <doctest.h>

#include <map>
#include <random>

#include "nullcurve/null_geometry.hpp"
#include "nullcurve/weierstrass.hpp"
#include "support.hpp"

using namespace nullcurve;
using testing_support::random_series;

namespace {

const Domain kAnn = Domain::annulus(0.25);
const Domain kDisc = Domain::disc();

SeriesMap laurent(Domain dom, std::map<int, cplx> terms) {
  const int lo = terms.begin()->first, hi = terms.rbegin()->first;
  CVec c(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [d, v] : terms) c[static_cast<std::size_t>(d - lo)] = v;
  return SeriesMap::from_coefficients(dom, lo, {std::move(c)});
}

// Oracle for the z^-1 coefficients of pi(u, v): Laurent products written out
// on sparse maps, independent of the library's convolution.
using Sparse = std::map<int, cplx>;

Sparse times(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) out[i + j] += x * y;
  return out;
}

Vec3 oracle_period(const Sparse& u, const Sparse& v) {
  const Sparse uu = times(u, u), vv = times(v, v), uv = times(u, v);
  auto r = [](const Sparse& s) {
    const auto it = s.find(-1);
    return it == s.end() ? cplx(0.0) : it->second;
  };
  const cplx tpi = 2.0 * kPi * kI;
  return {tpi * (r(uu) - r(vv)), tpi * kI * (r(uu) + r(vv)), tpi * 2.0 * r(uv)};
}

double vnorm(const Vec3& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2])); }

constexpr double kEps = 0.1;

using Params = std::array<cplx, 6>;

// u = 1 + t1 + t2 z + t3 / z, v = 1/z + eps z + t4 + t5 z + t6 / z.
Vec3 perturbed_period(const Params& t) {
  const Sparse u{{0, 1.0 + t[0]}, {1, t[1]}, {-1, t[2]}};
  const Sparse v{{-1, 1.0 + t[5]}, {0, t[3]}, {1, kEps + t[4]}};
  return oracle_period(u, v);
}

// phi = {1, z, 1/z} on u and psi = {1, z, 1/z} on v, independently.
SpraySpec basis_spec() {
  SpraySpec spec;
  const SeriesMap zero(kAnn, 0, 0, 1);
  for (int d : {0, 1, -1}) {
    spec.phi.push_back(laurent(kAnn, {{d, 1.0}}));
    spec.psi.push_back(zero);
  }
  for (int d : {0, 1, -1}) {
    spec.phi.push_back(zero);
    spec.psi.push_back(laurent(kAnn, {{d, 1.0}}));
  }
  return spec;
}

}  // namespace

TEST_CASE("periods examples") {
  const SeriesMap f = SeriesMap::from_coefficients(kAnn, -1, {{1.0}, {kI}, {0.0}});
  const PeriodMatrix p = periods(f);
  REQUIRE(p.columns.size() == 1);
  CHECK(std::abs(p.columns[0][0] - 2.0 * kPi * kI) < 1e-15);
  CHECK(std::abs(p.columns[0][1] + 2.0 * kPi) < 1e-15);
  CHECK(p.columns[0][2] == cplx(0.0));
  CHECK(std::abs(p.loop_radii[0] - 0.5) < 1e-15);

  const SeriesMap poly = SeriesMap::from_coefficients(kAnn, 0, {{1.0, 2.0}, {0.0, 1.0}, {3.0, 0.0}});
  CHECK(periods(poly).max_norm() == 0.0);

  const SeriesMap g = spinor_project({laurent(kAnn, {{0, 1.0}}), laurent(kAnn, {{-1, 1.0}})});
  const PeriodMatrix q = periods(g);
  CHECK(std::abs(q.columns[0][0]) < 1e-15);
  CHECK(std::abs(q.columns[0][1]) < 1e-15);
  CHECK(std::abs(q.columns[0][2] - 4.0 * kPi * kI) < 1e-14);

  CHECK(periods(SeriesMap::from_coefficients(kDisc, 0, {{1.0}, {kI}, {0.0}})).columns.empty());
}

TEST_CASE("property: derivatives have zero periods") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const SeriesMap F = random_series(rng, kAnn, -10, 10, 3);
    CHECK(periods(derivative(F)).max_norm() == 0.0);
  }
}

TEST_CASE("integrate_null examples") {
  const SeriesMap f = spinor_project({laurent(kDisc, {{0, 1.0}}), laurent(kDisc, {{0, 0.0}, {1, 1.0}})});
  const cplx zero[] = {0.0, 0.0, 0.0};
  const SeriesMap F = integrate_null(f, 0.0, zero);
  CHECK(std::abs(F.coeff(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(F.coeff(0, 3) + 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(F.coeff(1, 3) - kI / 3.0) < 1e-15);
  CHECK(std::abs(F.coeff(2, 2) - 1.0) < 1e-15);

  const SeriesMap g = spinor_project({laurent(kAnn, {{0, 1.0}}), laurent(kAnn, {{-1, 1.0}})});
  try {
    integrate_null(g, 0.5, zero);
    FAIL("expected a period obstruction");
  } catch (const PeriodObstruction& e) {
    CHECK(e.kind() == ErrorKind::period_obstruction);
    CHECK(std::abs(e.periods().columns[0][2] - 4.0 * kPi * kI) < 1e-14);
  }

  const cplx five[] = {5.0, 0.0, 0.0};
  const SeriesMap h = integrate_null(SeriesMap::from_coefficients(kDisc, 0, {{1.0}, {kI}, {0.0}}), 0.0, five);
  CHECK(h.coeff(0, 0) == cplx(5.0));
  CHECK(h.coeff(0, 1) == cplx(1.0));
  CHECK(h.coeff(1, 1) == kI);

  const cplx bad[] = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(integrate_null(SeriesMap::constant(kDisc, bad), 0.0, zero), Error);
}

TEST_CASE("property: integrate_null inverts derivative") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    SeriesMap u = random_series(rng, kDisc, 0, 20, 1, 0.7);
    const SeriesMap v = random_series(rng, kDisc, 0, 20, 1, 0.7);
    const cplx zero[] = {0.0, 0.0, 0.0};
    const SeriesMap F = integrate_null(spinor_project({u, v}), 0.0, zero);
    const cplx p = std::polar(0.6, 0.3 * trial);
    const auto Fp = eval(F, p);
    const SeriesMap G = integrate_null(derivative(F), p, Fp);
    double err = 0.0;
    for (std::size_t c = 0; c < 3; ++c)
      for (int d = 0; d <= F.hi(); ++d) err = std::max(err, std::abs(G.coeff(c, d) - F.coeff(c, d)));
    CHECK(err <= 1e-12 * (1.0 + F.max_coefficient()));
  }
}

TEST_CASE("kill_periods: root at the origin") {
  const SpinorPair s{laurent(kAnn, {{0, 1.0}}), laurent(kAnn, {{0, 0.0}, {1, 1.0}})};
  const PeriodKill k = kill_periods(s, basis_spec());
  for (const cplx& t : k.t0) CHECK(t == cplx(0.0));
  CHECK(k.trace.size() <= 1);
}

TEST_CASE("kill_periods: perturbed spinor against a grid oracle") {
  const SpinorPair s{laurent(kAnn, {{0, 1.0}}), laurent(kAnn, {{-1, 1.0}, {0, 0.0}, {1, kEps}})};
  const SpraySpec spec = basis_spec();
  const PeriodKill k = kill_periods(s, spec);
  REQUIRE(k.t0.size() == 6);
  CHECK(k.trace.size() <= 20);
  CHECK(periods(k.g).max_norm() < 1e-10);

  Params t0;
  double t0_norm = 0.0;
  for (std::size_t i = 0; i < 6; ++i) t0[i] = k.t0[i], t0_norm += std::norm(t0[i]);
  CHECK(vnorm(perturbed_period(t0)) < 1e-10);
  CHECK(std::sqrt(t0_norm) <= spec.ball_radius);

  // Brute-force 3-d slice through t0 (real parts of the constant and 1/z
  // shifts of u and the 1/z shift of v):
  // the center is the unique grid minimum, so the zero is isolated there.
  const double h = 0.02;
  double center = 0.0, others = std::numeric_limits<double>::infinity();
  for (int a = -5; a <= 5; ++a)
    for (int b = -5; b <= 5; ++b)
      for (int c = -5; c <= 5; ++c) {
        Params t = t0;
        t[0] += h * a;
        t[2] += h * b;
        t[5] += h * c;
        const double p = vnorm(perturbed_period(t));
        if (a == 0 && b == 0 && c == 0) center = p;
        else others = std::min(others, p);
      }
  CHECK(center < 1e-10);
  CHECK(others > 1e3 * center);

  // After the kill, integration succeeds and stays null.
  const cplx base[] = {0.0, 0.0, 0.0};
  const SeriesMap F = integrate_null(k.g, 0.5, base);
  CHECK(quadric_residual(derivative(F)) <= 1e-11);
}

TEST_CASE("kill_periods: Newton residuals decrease after the first step") {
  const SpinorPair s{laurent(kAnn, {{0, 1.0}}), laurent(kAnn, {{-1, 1.0}, {0, 0.0}, {1, kEps}})};
  const PeriodKill k = kill_periods(s, basis_spec());
  for (std::size_t i = 2; i < k.trace.size(); ++i) CHECK(k.trace[i].residual_norm < k.trace[i - 1].residual_norm);
}

TEST_CASE("kill_periods: degenerate spray") {
  const SpinorPair s{laurent(kAnn, {{0, 1.0}}), laurent(kAnn, {{-1, 1.0}, {0, 0.0}, {1, kEps}})};
  SpraySpec spec;
  for (int j = 0; j < 3; ++j) {
    spec.phi.push_back(laurent(kAnn, {{0, 0.0}}));
    spec.psi.push_back(laurent(kAnn, {{0, 0.0}}));
  }
  try {
    kill_periods(s, spec);
    FAIL("expected a non-dominating spray");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_dominating_spray);
  }
}

TEST_CASE("kill_periods on the inner-weighted spray") {
  const SpinorPair s{laurent(kAnn, {{0, 1.0}, {1, 0.3}}), laurent(kAnn, {{-1, 0.05}, {0, 0.2}, {1, 0.5}})};
  const PeriodKill k = kill_periods(s, SpraySpec::inner_weighted(0.25));
  CHECK(periods(k.g).max_norm() < 1e-10 * (1.0 + k.g.max_coefficient()));
  CHECK(quadric_residual(k.g) <= 1e-13);
}
