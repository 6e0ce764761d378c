#pragma once

// Recursive boundary-push drivers (completeness and bounded third coordinate),
// the seed catalog and mesh export.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nullcurve/null_geometry.hpp"
#include "nullcurve/series.hpp"

namespace nullcurve {

/// linear_v1, cubic_enneper_like, annulus_basic.
SeriesMap catalog(const std::string& name);
std::vector<std::string> catalog_names();

enum class PipelineKind { completeness, bounded_third };
enum class Schedule { harmonic, constant };  // delta / k, or delta

struct PipelineConfig {
  int schema = 1;
  PipelineKind kind = PipelineKind::completeness;
  std::string seed_curve = "linear_v1";
  /// Restrict the seed to the annulus {r0 <= |z| <= 1}.
  std::optional<double> annulus_r0;
  double delta = 0.2;
  Schedule schedule = Schedule::harmonic;
  int iterations = 5;
  double epsilon = 0.05;
  int arcs = 8;
  double taper = 0.2;  // radians; also the overlap of adjacent arcs
  double r = 0.5;
  double budget = 0.2;  // bound on sup |F3| (bounded_third)
  /// Amplitude of the first V1 round of bounded_third. A V1 push moves
  /// (F1 - i F2)/2 = z by a winding phase, so the boundary min of |(F1, F2)|
  /// only grows when this exceeds 2; later V1 rounds are coherent with it.
  double lift = 2.5;
  /// RH exponent shared by every push. When unset it is searched on the
  /// first push and multiplied by k_margin.
  std::optional<int> k;
  double k_margin = 1.25;
  int k_max = 1 << 14;
  int fourier_cap = 256;
  std::size_t radial = 128;
  std::size_t angular = 512;
  std::uint64_t seed = 0;
  int toy_power = 50;

  void validate() const;
  double delta_at(int round) const;
};

struct LedgerRow {
  int k = 0;  // round
  double delta = 0.0;
  double intrinsic = 0.0;
  double extrinsic = 0.0;
  double sup_f3 = 0.0;
  double min_f12 = 0.0;
  double shortcut = 0.0;
  double cert_a = 0.0, cert_b = 0.0, cert_c = 0.0, cert_d = 0.0;
  int rh_k = 0;
  std::vector<int> directions;  // dictionary index per arc (-1: V1, -2: V2)
};

struct GrowthLedger {
  std::vector<LedgerRow> rows;
  SeriesMap curve;  // final curve
  /// Boundary min of |(F1, F2)| for the non-null comparison z V1 + z^N V2.
  std::optional<double> toy_min_f12;

  void append(LedgerRow row);  // enforces strictly increasing k
};

class PipelineAborted : public Error {
 public:
  PipelineAborted(ErrorKind kind, const std::string& what, GrowthLedger partial)
      : Error(kind, what), partial_(std::move(partial)) {}
  const GrowthLedger& partial() const { return partial_; }

 private:
  GrowthLedger partial_;
};

/// Null directions pi(a, b) over a fixed 16-point design of unit spinors.
std::vector<Vec3> direction_dictionary();
/// Dictionary index minimizing |<theta, F(z)>|^2 + |<theta, i z F'(z)>|^2
/// (normalized hermitian products) at the boundary point z.
int choose_direction(const SeriesMap& F, cplx z);

GrowthLedger run_completeness_recursion(const PipelineConfig& cfg);
GrowthLedger run_bounded_third(const PipelineConfig& cfg);
GrowthLedger run_pipeline(const PipelineConfig& cfg);

/// Boundary min of |(F1, F2)| for z V1 + z^N V2.
double toy_min_f12(int N, std::size_t samples = kDefaultSamples);

enum class ExportTarget { r3, h3 };

struct Mesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<double> x0;  // h3 only: the Minkowski time coordinate
  std::vector<std::array<std::size_t, 3>> faces;  // zero-based
};

/// Polar grid mesh of Re F (r3) or of the Bryant projection of T(F) in the
/// hyperboloid model (h3). Vertex count is radial * angular.
Mesh surface_mesh(const SeriesMap& F, ExportTarget target, std::size_t radial = 32,
                  std::size_t angular = 128);
std::string mesh_to_obj(const Mesh& mesh);
void export_surface(const SeriesMap& F, ExportTarget target, const std::string& path,
                    std::size_t radial = 32, std::size_t angular = 128);

}  // namespace nullcurve
