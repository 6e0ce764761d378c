#pragma once

// Algebra of the null quadric {z1^2 + z2^2 + z3^2 = 0} in C^3 and of its
// SL2(C) counterpart {det = 0}: spinor parametrization, the T-map, the Bryant
// projection to hyperbolic space and the real (minimal surface) part.

#include <array>
#include <vector>

#include "nullcurve/series.hpp"

namespace nullcurve {

using Vec3 = std::array<cplx, 3>;

inline constexpr double kPoleTol = 1e-10;
inline constexpr double kDetTol = 1e-9;
inline constexpr double kNullTol = 1e-10;

double norm(const Vec3& v);
/// Hermitian product sum a_i conj(b_i).
cplx hdot(const Vec3& a, const Vec3& b);

/// |v1^2 + v2^2 + v3^2|, unnormalized.
double null_residual(const Vec3& v);

/// A nonzero vector on the null quadric.
class NullVector {
 public:
  /// Throws not_null unless |v1^2+v2^2+v3^2| <= tol |v|^2 and v != 0.
  explicit NullVector(const Vec3& v, double tol = kNullTol);
  const Vec3& value() const { return v_; }
  /// One of the two spinors (a, b) with pi(a, b) = v.
  std::array<cplx, 2> spinor() const;

 private:
  Vec3 v_;
};

/// Spinor (u, v) of scalar maps on a shared domain.
struct SpinorPair {
  SeriesMap u;
  SeriesMap v;
};

/// pi(u, v) = (u^2 - v^2, i(u^2 + v^2), 2uv) pointwise.
Vec3 spinor_point(cplx u, cplx v);

/// pi applied to series by exact convolution.
SeriesMap spinor_project(const SpinorPair& s);

/// Polar form B((u,v),(a,b)) = (ua - vb, i(ua + vb), ub + va) of pi:
/// pi(u + s a, v + s b) = pi(u, v) + 2 s B + s^2 pi(a, b).
SeriesMap spinor_bilinear(const SpinorPair& s, cplx a, cplx b);

struct LiftOptions {
  std::size_t samples = kDefaultSamples;
  int degree_cap = kDefaultDegreeCap;
  double null_tol = kNullTol;
  /// Relative floor under which a candidate square counts as vanishing.
  double zero_tol = 1e-8;
};

/// Lift of a map into the punctured null quadric through pi. Works on the disc
/// and, when u^2 or v^2 has even winding, on annuli. The returned lift has
/// u(1) in the closed right half-plane (ties broken by v).
SpinorPair spinor_lift(const SeriesMap& f, const LiftOptions& opts = {});

struct SL2Point {
  cplx z11, z12, z21, z22;
  cplx det() const { return z11 * z22 - z12 * z21; }
};

/// The T-map (1/z3) [[1, z1 + i z2], [z1 - i z2, z1^2 + z2^2 + z3^2]].
SL2Point tmap(const Vec3& p, double pole_tol = kPoleTol);
/// Inverse of tmap on {z11 != 0}.
Vec3 tmap_inverse(const SL2Point& m, double pole_tol = kPoleTol);

struct SL2Curve {
  std::vector<cplx> nodes;        // boundary sample points
  std::vector<SL2Point> values;   // T(F(node))
  /// Max |det((T o F)')| over nodes, derivatives by centered differences
  /// along the circle.
  double det_derivative_residual = 0.0;
  double max_det_error = 0.0;     // max |det(T o F) - 1|
};

/// Throws pole when F3 comes within pole_tol of zero on the boundary or, by
/// the argument principle, has a zero inside the domain (located by Newton).
void require_zero_free_third(const SeriesMap& F, double pole_tol = kPoleTol);

/// T o F sampled on `samples` boundary points of the outer circle, after
/// require_zero_free_third.
SL2Curve tmap_on_curve(const SeriesMap& F, std::size_t samples = kDefaultSamples,
                       double pole_tol = kPoleTol);

/// 2x2 hermitian matrix [[h11, h12], [conj(h12), h22]].
struct H3Point {
  double h11 = 1.0;
  cplx h12 = 0.0;
  double h22 = 1.0;
  double det() const { return h11 * h22 - std::norm(h12); }
};

/// m conj(m)^T; requires |det m - 1| <= det_tol.
H3Point bryant_project(const SL2Point& m, double det_tol = kDetTol);

/// Hyperboloid coordinates (x0, x1, x2, x3) with
/// h = [[x0 + x3, x1 + i x2], [x1 - i x2, x0 - x3]].
std::array<double, 4> h3_minkowski(const H3Point& h, double tol = 1e-10);

struct MinimalPart {
  std::vector<cplx> nodes;                    // polar grid points
  std::vector<std::array<double, 3>> points;  // Re F(node)
  std::vector<double> conformal_factor;       // |F'(node)|
  /// max | |F'|^2 - 2 |Re F'|^2 | / max(|F'|^2, tiny) over nodes.
  double metric_identity_residual = 0.0;
  bool degenerate = false;                    // F' vanishes identically
};

/// Re F and |F'| on a polar grid of `radial` x `angular` nodes (radii
/// i/radial for the disc, spread over [r0, 1] for annuli).
MinimalPart minimal_part(const SeriesMap& F, std::size_t radial = 32,
                         std::size_t angular = 128);

}  // namespace nullcurve
