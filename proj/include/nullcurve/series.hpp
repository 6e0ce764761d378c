#pragma once

// Truncated power / Laurent series of vector-valued holomorphic maps on the
// closed unit disc and on annuli {r0 <= |z| <= 1}.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nullcurve/errors.hpp"

namespace nullcurve {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Default cap on the degree window of series produced by fitting.
inline constexpr int kDefaultDegreeCap = 256;
/// Default number of boundary samples.
inline constexpr std::size_t kDefaultSamples = 4096;

/// circle: Laurent data that only lives on the unit circle (boundary families).
enum class DomainKind { disc, annulus, circle };

struct Domain {
  DomainKind kind = DomainKind::disc;
  double r0 = 0.0;  // inner radius, annulus only

  static Domain disc() { return {DomainKind::disc, 0.0}; }
  static Domain annulus(double r0);
  static Domain circle() { return {DomainKind::circle, 0.0}; }

  bool is_disc() const { return kind == DomainKind::disc; }
  bool is_annulus() const { return kind == DomainKind::annulus; }
  bool is_circle() const { return kind == DomainKind::circle; }
  bool contains(cplx z, double slack = 1e-12) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// A map into C^dim given by truncated series sum_{d=lo}^{hi} c_d z^d per
/// component. All components share one degree window and one domain.
class SeriesMap {
 public:
  SeriesMap() = default;
  /// Zero map with the given window.
  SeriesMap(Domain domain, int lo, int hi, std::size_t dim);

  /// comps[c][i] is the coefficient of z^(lo + i) in component c.
  static SeriesMap from_coefficients(Domain domain, int lo,
                                     std::vector<CVec> comps);
  static SeriesMap constant(Domain domain, std::span<const cplx> value);
  /// Scalar map c * z^degree.
  static SeriesMap monomial(Domain domain, int degree, cplx c = 1.0);
  /// Vector map z^degree * value.
  static SeriesMap monomial(Domain domain, int degree,
                            std::span<const cplx> value);

  const Domain& domain() const { return domain_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int span() const { return hi_ - lo_; }
  std::size_t dim() const { return comps_.size(); }

  /// Coefficient of z^degree; zero outside the window.
  cplx coeff(std::size_t comp, int degree) const;
  /// Mutable coefficient; degree must lie in the window.
  cplx& at(std::size_t comp, int degree);

  std::span<const cplx> coefficients(std::size_t comp) const { return comps_[comp]; }
  std::span<cplx> coefficients(std::size_t comp) { return comps_[comp]; }

  /// Scalar map holding one component.
  SeriesMap component(std::size_t comp) const;

  /// Same map on a larger window (lo <= this->lo, hi >= this->hi).
  SeriesMap widened(int lo, int hi) const;
  /// Same map reinterpreted on another domain; a disc target requires lo >= 0
  /// after trimming.
  SeriesMap on_domain(Domain domain) const;
  /// Drops leading/trailing coefficients that are exactly zero in every
  /// component (the window keeps degree 0 for disc maps).
  SeriesMap trimmed() const;

  /// Largest coefficient modulus over all components.
  double max_coefficient() const;

  std::vector<cplx> operator()(cplx z) const;

  friend bool operator==(const SeriesMap&, const SeriesMap&) = default;

 private:
  Domain domain_{};
  int lo_ = 0;
  int hi_ = 0;
  std::vector<CVec> comps_;
};

/// Stacks scalar maps (or maps of any dimension) into one map.
SeriesMap stack(std::span<const SeriesMap> parts);

SeriesMap operator+(const SeriesMap& a, const SeriesMap& b);
SeriesMap operator-(const SeriesMap& a, const SeriesMap& b);
SeriesMap operator-(const SeriesMap& a);
SeriesMap operator*(cplx s, const SeriesMap& a);
/// Product of a scalar map with a map of any dimension (broadcast), or the
/// componentwise product of two maps of equal dimension. Full convolution:
/// the window grows to [lo_a + lo_b, hi_a + hi_b].
SeriesMap multiply(const SeriesMap& a, const SeriesMap& b);
/// Multiplication by z^shift.
SeriesMap shift_degree(const SeriesMap& a, int shift);
/// Sum over components of a_c * b_c (bilinear, not hermitian).
SeriesMap dot(const SeriesMap& a, const SeriesMap& b);

struct Truncation {
  SeriesMap map;
  double leakage = 0.0;  // dropped energy / total energy
};
/// Restricts the window to [lo, hi], reporting the dropped energy fraction.
Truncation truncate(const SeriesMap& a, int lo, int hi);

/// Evaluation with Horner's scheme on both halves of the Laurent window.
std::vector<cplx> eval(const SeriesMap& map, cplx z);
/// Same scheme without the domain check (finite-difference stencils that
/// step slightly past the boundary).
std::vector<cplx> eval_unchecked(const SeriesMap& map, cplx z);

SeriesMap derivative(const SeriesMap& map);

inline constexpr double kDefaultResidueTol = 1e-10;
/// Termwise antiderivative normalized to base_value at base_point. Annulus
/// maps must have negligible z^-1 coefficients.
SeriesMap antiderivative(const SeriesMap& map, cplx base_point,
                         std::span<const cplx> base_value,
                         double residue_tol = kDefaultResidueTol);

/// Values at radius * exp(i (phase + 2 pi j / count)), j = 0..count-1,
/// indexed [component][j]. Exact for any count (coefficients are folded).
std::vector<CVec> sample_circle(const SeriesMap& map, double radius,
                                std::size_t count, double phase = 0.0);

struct BoundarySamples {
  std::size_t n = 0;
  std::vector<CVec> outer;                 // [component][j]
  std::optional<std::vector<CVec>> inner;  // annuli: |z| = r0
  double r0 = 0.0;

  cplx value(std::size_t j, std::size_t comp) const { return outer[comp][j]; }
};

/// Smallest power of two >= max(floor, 4 * span).
std::size_t alias_free_size(int span, std::size_t floor = kDefaultSamples);

BoundarySamples boundary_samples(const SeriesMap& map, std::size_t n);

inline constexpr double kDefaultFitTol = 1e-8;

struct Fit {
  SeriesMap map;
  double leakage = 0.0;
};
/// Discrete Fourier projection of outer-circle samples onto [lo, hi].
/// Throws non_holomorphic when the leakage fraction exceeds fit_tol.
Fit fit_from_boundary(const BoundarySamples& samples, Domain domain, int lo,
                      int hi, double fit_tol = kDefaultFitTol);

/// Max Euclidean norm over the boundary (both circles for annuli).
double sup_boundary(const SeriesMap& map, std::size_t n = 0);

}  // namespace nullcurve
