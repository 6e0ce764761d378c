#include "nullcurve/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "nullcurve/weierstrass.hpp"

namespace nullcurve {

double nullity_residual(const SeriesMap& F) { return quadric_residual(derivative(F)); }

namespace {

std::vector<double> magnitudes(const std::vector<CVec>& s) {
  std::vector<double> out(s.front().size(), 0.0);
  for (const auto& comp : s)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += std::norm(comp[j]);
  for (auto& x : out) x = std::sqrt(x);
  return out;
}

class PolarGraph {
 public:
  PolarGraph(const SeriesMap& F, double r_core, std::size_t radial, std::size_t angular)
      : radial_(radial), angular_(angular) {
    const SeriesMap dF = derivative(F);
    radii_.resize(radial);
    // Rings cluster cubically toward the outer circle, where boundary pushes
    // concentrate the metric in a layer of width ~ 1/k.
    for (std::size_t i = 0; i < radial; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(radial - 1);
      radii_[i] = r_core + (1.0 - r_core) * (1.0 - std::pow(1.0 - t, 3));
    }
    const double half = kPi / static_cast<double>(angular);
    const double scale = 1.0 + dF.max_coefficient();
    node_.resize(radial);
    node_half_.resize(radial);
    mid_.resize(radial - 1);
    mid_half_.resize(radial - 1);
    for (std::size_t i = 0; i < radial; ++i) {
      node_[i] = magnitudes(sample_circle(dF, radii_[i], angular));
      node_half_[i] = magnitudes(sample_circle(dF, radii_[i], angular, half));
      if (radii_[i] > 0.0) {
        for (std::size_t j = 0; j < angular; ++j) {
          if (node_[i][j] <= 1e-14 * scale) {
            std::ostringstream os;
            os << "conformal factor vanishes at z = " << std::polar(radii_[i], 2.0 * half * j);
            throw Error(ErrorKind::degenerate_immersion, os.str());
          }
        }
      }
      if (i + 1 < radial) {
        const double rm = 0.5 * (radii_[i] + radii_[i + 1]);
        mid_[i] = magnitudes(sample_circle(dF, rm, angular));
        mid_half_[i] = magnitudes(sample_circle(dF, rm, angular, half));
      }
    }
  }

  std::size_t size() const { return radial_ * angular_; }
  std::size_t id(std::size_t i, std::size_t j) const { return i * angular_ + j; }
  std::size_t ring_of(std::size_t v) const { return v / angular_; }
  std::size_t angle_of(std::size_t v) const { return v % angular_; }
  double angle(std::size_t j) const { return 2.0 * kPi * static_cast<double>(j) / static_cast<double>(angular_); }

  /// Shortest weighted distances from the given sources.
  std::vector<double> dijkstra(const std::vector<std::size_t>& sources) const {
    std::vector<double> dist(size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (auto s : sources) {
      dist[s] = 0.0;
      pq.push({0.0, s});
    }
    while (!pq.empty()) {
      const auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      const std::size_t i = ring_of(v), j = angle_of(v);
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const long ni = static_cast<long>(i) + di;
          if (ni < 0 || ni >= static_cast<long>(radial_)) continue;
          const std::size_t nj = (j + angular_ + dj) % angular_;
          const std::size_t w = id(static_cast<std::size_t>(ni), nj);
          const double nd = d + weight(i, j, static_cast<std::size_t>(ni), nj, di, dj);
          if (nd < dist[w]) {
            dist[w] = nd;
            pq.push({nd, w});
          }
        }
      }
    }
    return dist;
  }

 private:
  double weight(std::size_t i, std::size_t j, std::size_t ni, std::size_t nj, int di, int dj) const {
    const cplx a = std::polar(radii_[i], angle(j)), b = std::polar(radii_[ni], angle(nj));
    const double len = std::abs(a - b);
    // Midpoint factor: angular offset by half a step lands on the shifted grid.
    const std::size_t jl = dj == 0 ? j : (dj > 0 ? j : nj);
    double lam;
    if (di == 0) lam = node_half_[i][jl];
    else {
      const std::size_t im = std::min(i, ni);
      lam = dj == 0 ? mid_[im][j] : mid_half_[im][jl];
    }
    return lam * len;
  }

  std::size_t radial_, angular_;
  std::vector<double> radii_;
  std::vector<std::vector<double>> node_, node_half_, mid_, mid_half_;
};

}  // namespace

RadiusReport intrinsic_radius(const SeriesMap& F, double r_core, std::size_t radial,
                              std::size_t angular) {
  if (radial < 2 || angular < 4) throw Error(ErrorKind::invalid_argument, "grid too coarse");
  if (F.domain().is_circle()) throw Error(ErrorKind::domain, "radius needs a disc or annulus map");
  if (F.domain().is_annulus()) r_core = std::max(r_core, F.domain().r0);
  if (!(r_core >= 0.0 && r_core < 1.0)) throw Error(ErrorKind::invalid_argument, "r_core must lie in [0,1)");

  const PolarGraph g(F, r_core, radial, angular);
  RadiusReport rep;
  rep.radial = radial;
  rep.angular = angular;
  rep.r_core = r_core;
  rep.extrinsic_radius = sup_boundary(F);

  std::vector<std::size_t> core;
  for (std::size_t j = 0; j < angular; ++j) core.push_back(g.id(0, j));
  const auto dist = g.dijkstra(core);
  rep.intrinsic_radius = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < angular; ++j)
    rep.intrinsic_radius = std::min(rep.intrinsic_radius, dist[g.id(radial - 1, j)]);

  std::vector<std::size_t> east, west;
  for (std::size_t j = 0; j < angular; ++j) {
    const double a = g.angle(j);
    if (a <= kPi / 8.0 + 1e-12 || a >= 2.0 * kPi - kPi / 8.0 - 1e-12) east.push_back(g.id(radial - 1, j));
    if (std::abs(a - kPi) <= kPi / 8.0 + 1e-12) west.push_back(g.id(radial - 1, j));
  }
  const auto across = g.dijkstra(east);
  rep.shortcut_length = std::numeric_limits<double>::infinity();
  for (auto w : west) rep.shortcut_length = std::min(rep.shortcut_length, across[w]);
  return rep;
}

BoundedCoordinateReport bounded_coordinate_report(const SeriesMap& F, std::size_t n) {
  if (F.dim() != 3) throw Error(ErrorKind::invalid_argument, "report needs a map into C^3");
  if (n == 0) n = alias_free_size(F.span());
  BoundedCoordinateReport rep;
  rep.min_f12 = std::numeric_limits<double>::infinity();
  std::vector<double> circles{1.0};
  if (F.domain().is_annulus()) circles.push_back(F.domain().r0);
  for (double rad : circles) {
    const auto s = sample_circle(F, rad, n);
    for (std::size_t j = 0; j < n; ++j) {
      rep.sup_f3 = std::max(rep.sup_f3, std::abs(s[2][j]));
      rep.min_f12 = std::min(rep.min_f12, std::sqrt(std::norm(s[0][j]) + std::norm(s[1][j])));
    }
  }
  const double inner = F.domain().is_annulus() ? F.domain().r0 : 0.0;
  const SeriesMap f3 = F.component(2);
  for (int i = 0; i < 8; ++i) {
    const double rad = inner + (1.0 - inner) * (i + 0.5) / 8.0;
    const auto s = sample_circle(f3, rad, n);
    for (const auto& v : s[0]) rep.interior_sup_f3 = std::max(rep.interior_sup_f3, std::abs(v));
  }
  return rep;
}

std::vector<cplx> embedding_samples(const Domain& dom, std::size_t n) {
  const std::size_t rings = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(n / 6.0))));
  std::size_t angles = (n + rings - 1) / rings;
  angles += angles % 2;
  std::vector<cplx> out;
  out.reserve(rings * angles);
  for (std::size_t i = 0; i < rings; ++i) {
    double rad;
    if (dom.is_annulus())
      rad = rings == 1 ? 1.0 : dom.r0 + (1.0 - dom.r0) * static_cast<double>(i) / static_cast<double>(rings - 1);
    else
      rad = static_cast<double>(i + 1) / static_cast<double>(rings);
    for (std::size_t j = 0; j < angles; ++j)
      out.push_back(std::polar(rad, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(angles)));
  }
  return out;
}

EmbeddednessReport embedded_check(const SeriesMap& F, std::size_t n_samples, double d_dom,
                                  double d_amb) {
  if (!(d_amb > 0.0)) throw Error(ErrorKind::invalid_argument, "d_amb must be positive");
  const auto zs = embedding_samples(F.domain(), n_samples);
  EmbeddednessReport rep;
  rep.samples = zs.size();
  std::vector<std::vector<cplx>> vals;
  vals.reserve(zs.size());
  for (const auto& z : zs) vals.push_back(eval_unchecked(F, z));

  // Hash on the real parts: ambient neighbors always share a neighborhood.
  using Key = std::array<long, 3>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return static_cast<std::size_t>(k[0] * 73856093L ^ k[1] * 19349663L ^ k[2] * 83492791L);
    }
  };
  auto key_of = [&](const std::vector<cplx>& v) {
    Key k{};
    for (std::size_t c = 0; c < 3 && c < v.size(); ++c)
      k[c] = static_cast<long>(std::floor(v[c].real() / d_amb));
    return k;
  };
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> grid;
  for (std::size_t i = 0; i < vals.size(); ++i) grid[key_of(vals[i])].push_back(i);

  for (std::size_t i = 0; i < vals.size(); ++i) {
    const Key k = key_of(vals[i]);
    for (long a = -1; a <= 1; ++a)
      for (long b = -1; b <= 1; ++b)
        for (long c = -1; c <= 1; ++c) {
          const auto it = grid.find({k[0] + a, k[1] + b, k[2] + c});
          if (it == grid.end()) continue;
          for (std::size_t j : it->second) {
            if (j <= i || std::abs(zs[i] - zs[j]) < d_dom) continue;
            double d = 0.0;
            for (std::size_t q = 0; q < vals[i].size(); ++q) d += std::norm(vals[i][q] - vals[j][q]);
            d = std::sqrt(d);
            const bool better = d < rep.min_separation ||
                                (d == rep.min_separation && rep.pair_index &&
                                 std::pair{i, j} < *rep.pair_index);
            if (better) {
              rep.min_separation = d;
              rep.pair_index = {i, j};
              rep.pair = {zs[i], zs[j]};
            }
          }
        }
  }
  rep.flagged = rep.min_separation < d_amb;
  if (!rep.flagged) {
    // Pairs beyond d_amb are only partially visited; report none.
    rep.min_separation = std::numeric_limits<double>::infinity();
    rep.pair.reset();
    rep.pair_index.reset();
  }
  return rep;
}

}  // namespace nullcurve
