#pragma once

// Null curves from their derivatives with theta = dz: periods over the
// homology generator of an annulus, integration, and Newton-based period
// killing over a spray of spinor shifts.

#include <vector>

#include "nullcurve/null_geometry.hpp"
#include "nullcurve/series.hpp"

namespace nullcurve {

/// Columns P_j(f) = integral of f dz over the generators of H_1. Empty for
/// the disc, one column for an annulus.
struct PeriodMatrix {
  std::vector<Vec3> columns;
  std::vector<double> loop_radii;

  double max_norm() const;
};

/// Exact periods: 2 pi i times the z^-1 coefficient of each component, on the
/// loop |z| = sqrt(r0).
PeriodMatrix periods(const SeriesMap& f);

class PeriodObstruction : public Error {
 public:
  PeriodObstruction(PeriodMatrix p, const std::string& what)
      : Error(ErrorKind::period_obstruction, what), periods_(std::move(p)) {}
  const PeriodMatrix& periods() const { return periods_; }

 private:
  PeriodMatrix periods_;
};

/// Normalized quadric residual of a map f into C^3: max coefficient of
/// f1^2 + f2^2 + f3^2 over the max coefficient of the individual squares.
double quadric_residual(const SeriesMap& f);

inline constexpr double kPeriodTol = 1e-10;

/// F(z) = base_value + integral from base_point to z of f dz.
SeriesMap integrate_null(const SeriesMap& f, cplx base_point, std::span<const cplx> base_value,
                         double null_tol = kNullTol, double period_tol = kPeriodTol);

/// Additive spray (u + sum t_j phi_j, v + sum t_j psi_j), t in C^N.
struct SpraySpec {
  std::vector<SeriesMap> phi;
  std::vector<SeriesMap> psi;
  double ball_radius = 10.0;

  std::size_t size() const { return phi.size(); }
  /// 2 * terms parameters: (r0/z)^j added to u alone and to v alone,
  /// j = 1..terms. The shifts are O(r0^j) on the outer circle.
  static SpraySpec inner_weighted(double r0, int terms = 3);
};

SpinorPair apply_spray(const SpinorPair& s, const SpraySpec& spec, std::span<const cplx> t);

struct NewtonStep {
  std::vector<cplx> t;
  double residual_norm = 0.0;
};

struct KillOptions {
  double fd_step = 1e-6;
  double sigma_min = 1e-8;
  int max_iter = 50;
  double tol = 1e-10;
};

struct PeriodKill {
  std::vector<cplx> t0;
  SpinorPair spinor;    // shifted spinor
  SeriesMap g;          // pi of the shifted spinor
  std::vector<NewtonStep> trace;
  double smallest_singular_value = 0.0;
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(std::vector<NewtonStep> history, const std::string& what)
      : Error(ErrorKind::convergence, what), history_(std::move(history)) {}
  const std::vector<NewtonStep>& history() const { return history_; }

 private:
  std::vector<NewtonStep> history_;
};

/// Period of pi(spray(t)) as a C^3 vector (annulus, one generator).
Vec3 spray_period(const SpinorPair& s, const SpraySpec& spec, std::span<const cplx> t);

/// Damped Newton on t -> P(pi(spray(t))) starting at t = 0.
PeriodKill kill_periods(const SpinorPair& s, const SpraySpec& spec, const KillOptions& opts = {});

}  // namespace nullcurve
