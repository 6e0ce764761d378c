#include <doctest.h>

#include <random>

#include "nullcurve/null_geometry.hpp"
#include "support.hpp"

using namespace nullcurve;
using testing_support::random_cplx;
using testing_support::random_series;

namespace {

const Domain kDisc = Domain::disc();

SeriesMap scalar(CVec c) { return SeriesMap::from_coefficients(kDisc, 0, {std::move(c)}); }

double coeff_dist(const SeriesMap& a, const SeriesMap& b) {
  double m = 0.0;
  const int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  for (std::size_t c = 0; c < a.dim(); ++c)
    for (int d = lo; d <= hi; ++d) m = std::max(m, std::abs(a.coeff(c, d) - b.coeff(c, d)));
  return m;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("null_residual examples") {
  CHECK(null_residual({1.0, kI, 0.0}) == 0.0);
  CHECK(null_residual({1.0, 0.0, 0.0}) == 1.0);
  CHECK(null_residual({0.0, 2.0 * kI, 2.0}) == 0.0);
}

TEST_CASE("NullVector spinor projects back") {
  for (const Vec3& v : {Vec3{1.0, kI, 0.0}, Vec3{1.0, -kI, 0.0}, Vec3{0.0, 2.0 * kI, 2.0},
                        spinor_point(cplx(0.3, 1.0), cplx(-2.0, 0.5))}) {
    const auto ab = NullVector(v).spinor();
    const Vec3 w = spinor_point(ab[0], ab[1]);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(w[c] - v[c]) < 1e-14 * (1.0 + norm(v)));
  }
  CHECK(kind_of([] { NullVector(Vec3{1.0, 0.0, 0.0}); }) == ErrorKind::not_null);
}

TEST_CASE("spinor_project examples") {
  const SeriesMap a = spinor_project({scalar({1.0}), scalar({0.0})});
  CHECK(a.coeff(0, 0) == cplx(1.0));
  CHECK(a.coeff(1, 0) == kI);
  CHECK(a.coeff(2, 0) == cplx(0.0));

  const SeriesMap b = spinor_project({scalar({1.0}), scalar({1.0})});
  CHECK(b.coeff(0, 0) == cplx(0.0));
  CHECK(b.coeff(1, 0) == 2.0 * kI);
  CHECK(b.coeff(2, 0) == cplx(2.0));

  const SeriesMap c = spinor_project({scalar({1.0}), scalar({0.0, 1.0})});
  const SeriesMap expect =
      SeriesMap::from_coefficients(kDisc, 0, {{1.0, 0.0, -1.0}, {kI, 0.0, kI}, {0.0, 2.0, 0.0}});
  CHECK(coeff_dist(c, expect) == 0.0);
}

TEST_CASE("property: spinor images are exactly null") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int hi = static_cast<int>(rng() % 65);
    const SpinorPair s{random_series(rng, kDisc, 0, hi, 1, 1.0), random_series(rng, kDisc, 0, hi, 1, 1.0)};
    const SeriesMap f = spinor_project(s);
    const SeriesMap q = dot(f, f);
    double scale = 0.0;
    for (std::size_t c = 0; c < 3; ++c) scale = std::max(scale, multiply(f.component(c), f.component(c)).max_coefficient());
    CHECK(q.max_coefficient() <= 1e-13 * scale);
  }
}

TEST_CASE("property: the covering is two-sheeted") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const SpinorPair s{random_series(rng, kDisc, 0, 16, 1), random_series(rng, kDisc, 0, 16, 1)};
    CHECK(spinor_project({-s.u, -s.v}) == spinor_project(s));
  }
}

TEST_CASE("spinor_bilinear examples and the quadratic expansion") {
  const SeriesMap b = spinor_bilinear({scalar({1.0}), scalar({0.0})}, 0.0, 1.0);
  CHECK(b.coeff(0, 0) == cplx(0.0));
  CHECK(b.coeff(1, 0) == cplx(0.0));
  CHECK(b.coeff(2, 0) == cplx(1.0));

  const cplx a0 = cplx(0.5, -1.0), b0 = cplx(2.0, 0.25);
  const SeriesMap diag = spinor_bilinear({scalar({a0}), scalar({b0})}, a0, b0);
  CHECK(coeff_dist(diag, spinor_project({scalar({a0}), scalar({b0})})) < 1e-15);

  // pi(1, s) = (1 - s^2, i (1 + s^2), 2 s) at s = 0.7.
  const double sv = 0.7;
  const Vec3 lhs = spinor_point(1.0, sv);
  const Vec3 rhs{1.0 - sv * sv, kI * (1.0 + sv * sv), 2.0 * sv};
  for (int c = 0; c < 3; ++c) CHECK(std::abs(lhs[c] - rhs[c]) < 1e-15);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const SpinorPair s{random_series(rng, kDisc, 0, 12, 1), random_series(rng, kDisc, 0, 12, 1)};
    const cplx a = random_cplx(rng), bb = random_cplx(rng), t = random_cplx(rng);
    const cplx ab[] = {a, bb};
    const SeriesMap one = SeriesMap::constant(kDisc, std::span<const cplx>(ab, 1));
    const SeriesMap two = SeriesMap::constant(kDisc, std::span<const cplx>(ab + 1, 1));
    const SeriesMap left = spinor_project({s.u + t * one, s.v + t * two});
    const SeriesMap right = spinor_project(s) + (2.0 * t) * spinor_bilinear(s, a, bb) +
                            (t * t) * spinor_project({one, two});
    CHECK(coeff_dist(left, right) <= 1e-12 * (1.0 + left.max_coefficient()));
  }
}

TEST_CASE("spinor_lift examples") {
  const cplx v[] = {1.0, kI, 0.0};
  const SpinorPair s = spinor_lift(SeriesMap::constant(kDisc, v));
  CHECK(std::abs(s.u.coeff(0, 0) - 1.0) < 1e-14);
  CHECK(s.v.max_coefficient() < 1e-14);

  const SpinorPair t = spinor_lift(spinor_project({scalar({1.0}), scalar({0.0, 1.0})}));
  CHECK(coeff_dist(t.u, scalar({1.0})) < 1e-12);
  CHECK(coeff_dist(t.v, scalar({0.0, 1.0})) < 1e-12);

  const cplx bad[] = {1.0, 0.0, 0.0};
  CHECK(kind_of([&] { spinor_lift(SeriesMap::constant(kDisc, bad)); }) == ErrorKind::not_null);

  // u = v = z: both candidate squares vanish at the origin.
  CHECK(kind_of([] { spinor_lift(spinor_project({scalar({0.0, 1.0}), scalar({0.0, 1.0})})); }) ==
        ErrorKind::unsupported_zeros);
}

TEST_CASE("property: lift then project is the identity") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const int hi = static_cast<int>(rng() % 33);
    SeriesMap u = random_series(rng, kDisc, 0, hi, 1, 0.5);
    u.at(0, 0) = 2.5;  // keeps u zero-free on the closed disc
    const SeriesMap v = random_series(rng, kDisc, 0, hi, 1, 0.9);
    const SeriesMap f = spinor_project({u, v});
    const SpinorPair s = spinor_lift(f);
    CHECK(coeff_dist(spinor_project(s), f) <= 1e-10 * f.max_coefficient());
    // The lift is one of +-(u, v), with the sign rule applied.
    const double plus = coeff_dist(s.u, u), minus = coeff_dist(s.u, -u);
    CHECK(std::min(plus, minus) < 1e-9);
    CHECK(eval(s.u, 1.0)[0].real() >= 0.0);
  }
}

TEST_CASE("tmap examples") {
  const SL2Point id = tmap({0.0, 0.0, 1.0});
  CHECK(id.z11 == cplx(1.0));
  CHECK(id.z12 == cplx(0.0));
  CHECK(id.z21 == cplx(0.0));
  CHECK(id.z22 == cplx(1.0));

  const cplx c(0.5, 2.0);
  const SL2Point d = tmap({0.0, 0.0, c});
  CHECK(std::abs(d.z11 - 1.0 / c) < 1e-15);
  CHECK(std::abs(d.z22 - c) < 1e-15);

  const SL2Point m = tmap({1.0, kI, 1.0});
  CHECK(std::abs(m.z11 - 1.0) < 1e-15);
  CHECK(std::abs(m.z12) < 1e-15);
  CHECK(std::abs(m.z21 - 2.0) < 1e-15);
  CHECK(std::abs(m.z22 - 1.0) < 1e-15);

  CHECK(kind_of([] { tmap({1.0, 0.0, 1e-12}); }) == ErrorKind::pole);
}

TEST_CASE("property: tmap determinant and inverse") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), mag(0.1, 3.0);
  double det_err = 0.0, inv_err = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 p{random_cplx(rng), random_cplx(rng), std::polar(mag(rng), ang(rng))};
    det_err = std::max(det_err, std::abs(tmap(p).det() - 1.0));

    // Random SL2 point with z11 != 0.
    const cplx z11 = std::polar(mag(rng), ang(rng)), z12 = random_cplx(rng), z21 = random_cplx(rng);
    const SL2Point m{z11, z12, z21, (1.0 + z12 * z21) / z11};
    const SL2Point back = tmap(tmap_inverse(m));
    const double scale = 1.0 + std::abs(m.z22) + std::abs(z12) + std::abs(z21);
    inv_err = std::max(inv_err, (std::abs(back.z11 - m.z11) + std::abs(back.z12 - m.z12) +
                                 std::abs(back.z21 - m.z21) + std::abs(back.z22 - m.z22)) /
                                    scale);
  }
  CHECK(det_err <= 1e-12);
  CHECK(inv_err <= 1e-10);
}

TEST_CASE("tmap_on_curve") {
  const cplx e3[] = {0.0, 0.0, 1.0};
  const SL2Curve c = tmap_on_curve(SeriesMap::constant(kDisc, e3), 256);
  CHECK(c.det_derivative_residual == 0.0);
  CHECK(std::abs(c.values[17].z11 - 1.0) == 0.0);

  const SeriesMap F = SeriesMap::from_coefficients(
      kDisc, 0, {{0.0, 1.0, 0.0, -1.0 / 3.0}, {0.0, kI, 0.0, kI / 3.0}, {2.0, 0.0, 1.0, 0.0}});
  const SL2Curve g = tmap_on_curve(F, 4096);
  CHECK(g.det_derivative_residual < 1e-6);
  CHECK(g.max_det_error < 1e-12);

  // F3 = z: no boundary hit, but a zero inside the disc.
  const SeriesMap H = SeriesMap::from_coefficients(kDisc, 0, {{0.0, 1.0}, {0.0, 0.0}, {0.0, 1.0}});
  try {
    tmap_on_curve(H, 512);
    FAIL("expected pole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::pole);
    CHECK(std::string(e.what()).find("(0,0)") != std::string::npos);
  }
}

TEST_CASE("bryant_project examples") {
  const H3Point id = bryant_project({1.0, 0.0, 0.0, 1.0});
  CHECK(id.h11 == 1.0);
  CHECK(id.h22 == 1.0);
  CHECK(id.h12 == cplx(0.0));

  const H3Point d = bryant_project({2.0, 0.0, 0.0, 0.5});
  CHECK(d.h11 == 4.0);
  CHECK(d.h22 == 0.25);

  const H3Point m = bryant_project({1.0, 0.0, 2.0, 1.0});
  CHECK(std::abs(m.h11 - 1.0) < 1e-15);
  CHECK(std::abs(m.h12 - 2.0) < 1e-15);
  CHECK(std::abs(m.h22 - 5.0) < 1e-15);
  CHECK(std::abs(m.det() - 1.0) < 1e-14);

  CHECK(kind_of([] { bryant_project({2.0, 0.0, 0.0, 2.0}); }) == ErrorKind::not_in_sl2);
}

TEST_CASE("property: Bryant images are hermitian positive with det 1") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), mag(0.2, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const cplx z11 = std::polar(mag(rng), ang(rng)), z12 = random_cplx(rng), z21 = random_cplx(rng);
    const SL2Point m{z11, z12, z21, (1.0 + z12 * z21) / z11};
    const H3Point h = bryant_project(m);
    // Oracle: explicit product m conj(m)^T.
    const cplx h12 = m.z11 * std::conj(m.z21) + m.z12 * std::conj(m.z22);
    CHECK(std::abs(h.h12 - h12) <= 1e-12 * (1.0 + std::abs(h12)));
    CHECK(std::abs(h.det() - 1.0) <= 1e-10 * (h.h11 * h.h22));
    CHECK(h.h11 + h.h22 > 0.0);
    CHECK(h.h11 > 0.0);
  }
}

TEST_CASE("h3_minkowski examples") {
  const auto a = h3_minkowski({1.0, 0.0, 1.0});
  CHECK(a == std::array<double, 4>{1.0, 0.0, 0.0, 0.0});

  const auto b = h3_minkowski({4.0, 0.0, 0.25});
  CHECK(std::abs(b[0] - 17.0 / 8.0) < 1e-15);
  CHECK(std::abs(b[3] - 15.0 / 8.0) < 1e-15);
  CHECK(b[1] == 0.0);
  CHECK(b[2] == 0.0);

  const auto c = h3_minkowski({1.0, 2.0, 5.0});
  CHECK(std::abs(c[0] - 3.0) < 1e-15);
  CHECK(std::abs(c[1] - 2.0) < 1e-15);
  CHECK(std::abs(c[2]) < 1e-15);
  CHECK(std::abs(c[3] + 2.0) < 1e-15);

  CHECK(kind_of([] { h3_minkowski({-1.0, 0.0, -1.0}); }) == ErrorKind::not_in_h3);
}

TEST_CASE("minimal_part: conformal factor and the factor-2 identity") {
  const SeriesMap lin = SeriesMap::from_coefficients(kDisc, 0, {{0.0, 1.0}, {0.0, kI}, {0.0, 0.0}});
  const MinimalPart p = minimal_part(lin, 8, 16);
  for (double lam : p.conformal_factor) CHECK(std::abs(lam - std::sqrt(2.0)) < 1e-14);
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    CHECK(std::abs(p.points[i][0] - p.nodes[i].real()) < 1e-15);
    CHECK(std::abs(p.points[i][1] + p.nodes[i].imag()) < 1e-15);
  }

  const cplx c[] = {1.0, 2.0, 3.0};
  CHECK(minimal_part(SeriesMap::constant(kDisc, c), 4, 8).degenerate);

  // Finite differences of Re F as the oracle for |F'|^2 = 2 |d/dx Re F|^2.
  const SeriesMap F = SeriesMap::from_coefficients(
      kDisc, 0, {{0.0, 1.0, 0.0, -1.0 / 3.0}, {0.0, kI, 0.0, kI / 3.0}, {0.0, 0.0, 1.0, 0.0}});
  const MinimalPart q = minimal_part(F, 6, 24);
  const double h = 1e-5;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const auto up = eval_unchecked(F, q.nodes[i] + h), dn = eval_unchecked(F, q.nodes[i] - h);
    double dx2 = 0.0;
    for (int k = 0; k < 3; ++k) dx2 += std::pow((up[k].real() - dn[k].real()) / (2.0 * h), 2);
    const double lam2 = q.conformal_factor[i] * q.conformal_factor[i];
    CHECK(std::abs(lam2 - 2.0 * dx2) <= 1e-8 * (1.0 + lam2));
  }
  CHECK(q.metric_identity_residual <= 1e-10);
}
