#include <doctest.h>

#include <random>

#include "nullcurve/diagnostics.hpp"
#include "nullcurve/pipelines.hpp"
#include "nullcurve/riemann_hilbert.hpp"
#include "support.hpp"

using namespace nullcurve;

namespace {

const Domain kDisc = Domain::disc();

SeriesMap linear() { return SeriesMap::from_coefficients(kDisc, 0, {{0.0, 1.0}, {0.0, kI}, {0.0, 0.0}}); }

// All-pairs search with the same distance and tie rule as the report.
EmbeddednessReport brute_force(const SeriesMap& F, std::size_t n, double d_dom, double d_amb) {
  const auto zs = embedding_samples(F.domain(), n);
  EmbeddednessReport rep;
  rep.samples = zs.size();
  std::vector<std::vector<cplx>> vals;
  for (const auto& z : zs) vals.push_back(eval(F, z));
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = i + 1; j < zs.size(); ++j) {
      if (std::abs(zs[i] - zs[j]) < d_dom) continue;
      double d = 0.0;
      for (std::size_t q = 0; q < vals[i].size(); ++q) d += std::norm(vals[i][q] - vals[j][q]);
      d = std::sqrt(d);
      if (d < rep.min_separation) rep.min_separation = d, rep.pair_index = {i, j};
    }
  rep.flagged = rep.min_separation < d_amb;
  return rep;
}

}  // namespace

TEST_CASE("nullity_residual examples") {
  CHECK(nullity_residual(catalog("cubic_enneper_like")) == 0.0);
  CHECK(nullity_residual(SeriesMap::from_coefficients(kDisc, 0, {{0.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}})) == 1.0);
  CHECK(nullity_residual(linear()) == 0.0);
}

TEST_CASE("intrinsic_radius examples") {
  const RadiusReport r = intrinsic_radius(linear());
  CHECK(std::abs(r.intrinsic_radius - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(r.extrinsic_radius - std::sqrt(2.0)) < 1e-12);
  CHECK(r.radial == 128);
  CHECK(r.angular == 512);

  const cplx c = std::polar(2.5, 0.3);
  const RadiusReport s = intrinsic_radius(c * linear());
  CHECK(std::abs(s.intrinsic_radius - 2.5 * std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(s.extrinsic_radius - 2.5 * std::sqrt(2.0)) < 1e-10);

  // Cubic: lambda = sqrt(2) (1 + |z|^2) is radial, so the geodesic from the
  // center is a ray of length 4 sqrt(2) / 3. Paths on the graph only
  // overestimate, up to the midpoint rule's error on each edge.
  const RadiusReport q = intrinsic_radius(catalog("cubic_enneper_like"));
  const double exact = 4.0 * std::sqrt(2.0) / 3.0;
  CHECK(q.intrinsic_radius >= exact * (1.0 - 1e-4));
  CHECK(q.intrinsic_radius <= exact * 1.02);
}

TEST_CASE("intrinsic_radius: degenerate immersion") {
  const cplx p[] = {1.0, 2.0, 3.0};
  try {
    intrinsic_radius(SeriesMap::constant(kDisc, p));
    FAIL("expected degenerate_immersion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_immersion);
  }
}

TEST_CASE("property: radius scaling and grid convergence on the catalog") {
  for (const auto& name : catalog_names()) {
    const SeriesMap F = catalog(name);
    const RadiusReport fine = intrinsic_radius(F, 0.0, 128, 512);
    const RadiusReport coarse = intrinsic_radius(F, 0.0, 64, 256);
    CHECK(fine.intrinsic_radius >= 0.0);
    CHECK(std::abs(fine.intrinsic_radius - coarse.intrinsic_radius) < 0.02 * coarse.intrinsic_radius);
    CHECK(fine.intrinsic_radius <= coarse.intrinsic_radius * 1.02);

    const cplx c = std::polar(0.7, -1.1);
    const RadiusReport s = intrinsic_radius(c * F, 0.0, 64, 256);
    CHECK(std::abs(s.intrinsic_radius - 0.7 * coarse.intrinsic_radius) <= 1e-10 * coarse.intrinsic_radius);
  }
}

TEST_CASE("property: lambda^2 = 2 |d/dx Re F|^2 for null maps") {
  std::vector<SeriesMap> curves;
  for (const auto& name : catalog_names()) curves.push_back(catalog(name));
  BoundaryData bd;
  bd.arc_lo = 0.5;
  bd.arc_hi = 2.0;
  bd.mu = {0.2};
  bd.theta = spinor_point(1.0, kI);
  bd.epsilon = 0.5;
  RhNullOptions opts;
  opts.fixed_k = 80;
  opts.fourier_cap = 32;
  curves.push_back(rh_null_disc(catalog("cubic_enneper_like"), bd, opts).G);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const auto& F : curves) {
    const SeriesMap dF = derivative(F);
    const double lo = F.domain().is_annulus() ? F.domain().r0 : 0.0;
    for (int t = 0; t < 200; ++t) {
      const cplx z = std::polar(lo + (1.0 - lo) * U(rng), 2.0 * kPi * U(rng));
      const auto d = eval(dF, z);
      double lam2 = 0.0, re2 = 0.0;
      for (const auto& x : d) lam2 += std::norm(x), re2 += x.real() * x.real();
      CHECK(std::abs(lam2 - 2.0 * re2) <= 1e-8 * (1.0 + lam2));
    }
  }
}

TEST_CASE("bounded_coordinate_report examples") {
  const BoundedCoordinateReport a = bounded_coordinate_report(linear());
  CHECK(a.sup_f3 == 0.0);
  CHECK(std::abs(a.min_f12 - std::sqrt(2.0)) < 1e-12);

  const BoundedCoordinateReport b =
      bounded_coordinate_report(SeriesMap::from_coefficients(kDisc, 0, {{0.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}}));
  CHECK(std::abs(b.sup_f3 - 1.0) < 1e-12);
  CHECK(b.min_f12 == 0.0);
}

TEST_CASE("property: the interior never exceeds the boundary sup of F3") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 10; ++t) {
    const SeriesMap F = testing_support::random_series(rng, kDisc, 0, 12, 3, 0.8);
    const BoundedCoordinateReport r = bounded_coordinate_report(F);
    CHECK(r.interior_sup_f3 <= r.sup_f3 + 1e-9);
    // Brute-force boundary sup on a finer grid.
    double sup = 0.0;
    for (int j = 0; j < 8192; ++j) sup = std::max(sup, std::abs(eval(F, std::polar(1.0, 2.0 * kPi * j / 8192))[2]));
    CHECK(r.sup_f3 <= sup + 1e-12);
    CHECK(r.sup_f3 >= sup * (1.0 - 1e-3));
  }
}

TEST_CASE("embedded_check examples") {
  const EmbeddednessReport a = embedded_check(linear(), 2000, 0.1, 1e-3);
  CHECK_FALSE(a.flagged);
  CHECK(!a.pair);

  const SeriesMap even = SeriesMap::from_coefficients(kDisc, 0, {{0.0, 0.0, 1.0}, {0.0, 0.0, kI}, {0.0, 0.0, 0.0}});
  const EmbeddednessReport b = embedded_check(even, 2000, 0.1, 1e-3);
  REQUIRE(b.flagged);
  REQUIRE(b.pair);
  CHECK(std::abs(b.pair->first + b.pair->second) < 1e-12);

  const EmbeddednessReport c = embedded_check(catalog("cubic_enneper_like"), 2000, 0.5, 1e-3);
  CHECK_FALSE(c.flagged);
}

TEST_CASE("property: embedded_check agrees with all-pairs search") {
  const SeriesMap even = SeriesMap::from_coefficients(kDisc, 0, {{0.0, 0.0, 1.0}, {0.0, 0.0, kI}, {0.0, 0.0, 0.0}});
  const SeriesMap folded = SeriesMap::from_coefficients(kDisc, 0, {{0.0, 1.0, 0.0, 0.8}, {0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, 0.0}});
  struct Case {
    SeriesMap F;
    double d_dom, d_amb;
  };
  const std::vector<Case> cases = {{linear(), 0.1, 1e-3},
                                   {even, 0.1, 1e-3},
                                   {catalog("cubic_enneper_like"), 0.5, 1e-3},
                                   {catalog("cubic_enneper_like"), 0.2, 0.05},
                                   {folded, 0.3, 0.05},
                                   {catalog("annulus_basic"), 0.2, 0.02}};
  for (const auto& c : cases) {
    const EmbeddednessReport fast = embedded_check(c.F, 1500, c.d_dom, c.d_amb);
    const EmbeddednessReport slow = brute_force(c.F, 1500, c.d_dom, c.d_amb);
    CHECK(fast.samples == slow.samples);
    CHECK(fast.flagged == slow.flagged);
    if (slow.flagged) {
      CHECK(fast.min_separation == slow.min_separation);
      CHECK(fast.pair_index == slow.pair_index);
    }
  }
}
