#pragma once

// Approximate Riemann-Hilbert problems: the closed-form C^n solver
// F = f + sum_j z^{kj} c_j(z), and its null-curve versions on the disc and the
// annulus built on top of the spinor representation.

#include <functional>
#include <optional>
#include <vector>

#include "nullcurve/null_geometry.hpp"
#include "nullcurve/series.hpp"
#include "nullcurve/weierstrass.hpp"

namespace nullcurve {

/// Boundary discs g_z(w) = f(z) + sum_{j=1..J} c_j(z) w^j, z on the unit
/// circle. terms[j-1] is c_j, a Laurent series on Domain::circle() with
/// degrees inside [-m, m]. g_z(0) = f(z) holds by construction.
struct BoundaryDiscFamily {
  std::vector<SeriesMap> terms;

  int fourier_degree() const;  // m
  std::size_t dim() const { return terms.empty() ? 0 : terms.front().dim(); }
  std::size_t order() const { return terms.size(); }  // J
};

struct KTrial {
  int k = 0;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  bool valid = false;
};

/// Measured maxima of the approximation conditions on samples.
struct RHCertificate {
  int k = 0;
  double r_prime = 0.0;
  double epsilon = 0.0;
  double a = 0.0;  // boundary distance to the target circles / tori
  double b = 0.0;  // distance to the filled discs near the boundary
  double c = 0.0;  // closeness to the original map (C^1 for null variants)
  double d = 0.0;  // C^1 closeness off the neighborhood U (null variants)
  double omega_padding = 0.0;  // angular padding of Omega around the arc
  double omega_width = 0.0;    // radial depth of Omega
  double period_norm = 0.0;    // annulus only
  std::size_t samples = 0;
  bool valid = false;
  std::vector<KTrial> trajectory;
};

class ToleranceUnachievable : public Error {
 public:
  ToleranceUnachievable(RHCertificate best, const std::string& what)
      : Error(ErrorKind::tolerance_unachievable, what), best_(std::move(best)) {}
  const RHCertificate& best() const { return best_; }

 private:
  RHCertificate best_;
};

struct RhOptions {
  std::size_t samples = kDefaultSamples;  // floor; raised to 4 x span
  std::size_t tau_samples = 256;
  std::size_t radial = 64;
  int k_max = 1 << 16;
  /// Radius r' in [r, 1) where condition (c) is checked; defaults to r.
  std::optional<double> r_prime;
};

/// F = f + sum_j z^{kj} c_j(z); a polynomial series whenever k > m.
SeriesMap rh_formula(const SeriesMap& f, const BoundaryDiscFamily& fam, int k);

struct RhSolution {
  SeriesMap F;
  RHCertificate cert;
};

/// Smallest valid k > m by doubling then bisection.
RhSolution rh_approx(const SeriesMap& f, const BoundaryDiscFamily& fam, double r, double eps,
                     const RhOptions& opts = {});

/// Certificate of F = rh_formula(f, fam, k) without searching.
RHCertificate rh_certify(const SeriesMap& f, const BoundaryDiscFamily& fam, int k, double r,
                         double eps, const RhOptions& opts = {});

/// Deformation datum kappa(x, xi) = F(x) + mu(x) xi theta on an arc of the
/// outer circle.
struct BoundaryData {
  double arc_lo = 0.0;  // radians, arc runs counterclockwise to arc_hi
  double arc_hi = 0.0;
  /// mu sampled uniformly on [arc_lo, arc_hi] (endpoints included); one value
  /// means constant on the arc. Zero outside.
  std::vector<double> mu;
  Vec3 theta{};
  double taper = 0.1;  // width (radians) of the C^2 cutoff inside each arc end
  double epsilon = 0.05;
  double r = 0.5;

  void validate() const;
  double arc_length() const { return arc_hi - arc_lo; }
  /// Angular offset of `angle` from arc_lo in [0, 2 pi).
  double offset(double angle) const;
  bool in_arc(double angle, double padding = 0.0) const;
  /// Raw amplitude mu(angle).
  double amplitude(double angle) const;
  /// C^2 cutoff chi in [0, 1]: zero outside the arc, one away from its ends.
  /// Ramps of arcs overlapping by exactly the taper satisfy chi1^2 + chi2^2 = 1.
  double cutoff(double angle) const;
  /// The realized amplitude chi(angle)^2 mu(angle).
  double effective_amplitude(double angle) const;
  bool is_zero() const;
};

enum class ConditionB {
  retraction,  // dist(G(x), F(rho(x)) + mu(rho(x)) D theta), rho radial
  local,       // dist(G(x) - F(x), mu(rho(x)) D theta)
};

struct RhNullOptions {
  std::size_t samples = kDefaultSamples;  // floor; raised to 4 x span
  int fourier_cap = 256;                  // max m for the amplitude series
  int k_max = 1 << 14;
  std::size_t omega_radial = 32;
  ConditionB condition_b = ConditionB::retraction;
  /// Radial depth of Omega; default min(1 - r, eps / (4 sup |F'|)) for the
  /// retraction form and 1 - r for the local form.
  std::optional<double> omega_width;
  /// Fixed k instead of the search (certificate still measured).
  std::optional<int> fixed_k;
  KillOptions kill{};
  int spray_terms = 3;
  /// Amplitude already realized along the same theta at the same k (by
  /// earlier pushes with fixed_k). The spinor increment then lifts the
  /// accumulated amplitude from prior to prior + chi^2 mu, so repeated pushes
  /// add instead of interfering.
  std::function<double(double)> prior_mu;
};

struct NullDeformation {
  SeriesMap G;
  SpinorPair spinor;  // G' = pi(spinor)
  RHCertificate cert;
  std::vector<cplx> t0;  // spray parameters (annulus)
  int fourier_degree = 0;
};

/// Disc: lift F', push the spinor along theta's spinor with amplitude
/// sqrt((2k+1) mu), project and integrate from z = 0.
NullDeformation rh_null_disc(const SeriesMap& F, const BoundaryData& bd,
                             const RhNullOptions& opts = {});

/// Annulus: the same deformation followed by period killing over
/// SpraySpec::inner_weighted; base point sqrt(r0).
NullDeformation rh_null_annulus(const SeriesMap& F, const BoundaryData& bd,
                                const RhNullOptions& opts = {});

/// Shared engine taking an existing lift of F'. Dispatches on the domain.
NullDeformation rh_null_deform(const SeriesMap& F, const SpinorPair& lift, const BoundaryData& bd,
                               const RhNullOptions& opts = {});

/// Base point used for integration on the given domain.
cplx integration_base_point(const Domain& dom);

}  // namespace nullcurve
