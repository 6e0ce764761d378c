#pragma once

// Quantitative checks on null curves: nullity residuals, intrinsic and
// extrinsic radii, the bounded third coordinate and sampled embeddedness.

#include <cstddef>
#include <limits>
#include <optional>

#include "nullcurve/series.hpp"

namespace nullcurve {

/// Max coefficient of (F1')^2 + (F2')^2 + (F3')^2 over the max coefficient of
/// the individual squares. Zero for exactly null maps.
double nullity_residual(const SeriesMap& F);

struct RadiusReport {
  double intrinsic_radius = 0.0;
  double extrinsic_radius = 0.0;
  /// Shortest path between the boundary arcs of angular half-width pi/8
  /// centered at 0 and at pi; short values flag a sliding curtain.
  double shortcut_length = 0.0;
  std::size_t radial = 0;
  std::size_t angular = 0;
  double r_core = 0.0;
};

/// Dijkstra on a polar graph with 8-neighbor edges weighted by |F'| at the
/// edge midpoint times the chord length, from |z| = r_core (raised to r0 on
/// annuli) to the outer circle. Rings are graded toward |z| = 1.
RadiusReport intrinsic_radius(const SeriesMap& F, double r_core = 0.0, std::size_t radial = 128,
                              std::size_t angular = 512);

struct BoundedCoordinateReport {
  double sup_f3 = 0.0;           // boundary sup of |F3|
  double min_f12 = 0.0;          // boundary min of |(F1, F2)|
  double interior_sup_f3 = 0.0;  // cross-check on interior rings
};

BoundedCoordinateReport bounded_coordinate_report(const SeriesMap& F, std::size_t n = 0);

struct EmbeddednessReport {
  std::size_t samples = 0;
  /// Smallest ambient distance among pairs at domain distance >= d_dom that
  /// share a hash neighborhood; infinity when there are none.
  double min_separation = std::numeric_limits<double>::infinity();
  bool flagged = false;
  std::optional<std::pair<cplx, cplx>> pair;
  std::optional<std::pair<std::size_t, std::size_t>> pair_index;
};

/// Polar sample grid with an even number of angles, so z and -z both occur.
std::vector<cplx> embedding_samples(const Domain& dom, std::size_t n);

/// Flags sample pairs with domain distance >= d_dom and ambient distance
/// < d_amb. A necessary check only.
EmbeddednessReport embedded_check(const SeriesMap& F, std::size_t n_samples, double d_dom,
                                  double d_amb);

}  // namespace nullcurve
