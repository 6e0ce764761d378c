#include "nullcurve/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "nullcurve/diagnostics.hpp"
#include "nullcurve/riemann_hilbert.hpp"

namespace nullcurve {

SeriesMap catalog(const std::string& name) {
  const Domain disc = Domain::disc();
  if (name == "linear_v1") return SeriesMap::monomial(disc, 1, std::vector<cplx>{1.0, kI, 0.0});
  if (name == "cubic_enneper_like" || name == "annulus_basic") {
    // (z - z^3/3, i (z + z^3/3), z^2)
    std::vector<CVec> c{{0.0, 1.0, 0.0, -1.0 / 3.0},
                        {0.0, kI, 0.0, kI / 3.0},
                        {0.0, 0.0, 1.0, 0.0}};
    const SeriesMap F = SeriesMap::from_coefficients(disc, 0, std::move(c));
    return name == "annulus_basic" ? F.on_domain(Domain::annulus(0.25)) : F;
  }
  throw Error(ErrorKind::unknown_name, "unknown catalog curve '" + name + "'");
}

std::vector<std::string> catalog_names() { return {"linear_v1", "cubic_enneper_like", "annulus_basic"}; }

void PipelineConfig::validate() const {
  if (schema != 1) throw Error(ErrorKind::invalid_argument, "unsupported config schema");
  if (iterations < 0) throw Error(ErrorKind::invalid_argument, "iterations must be >= 0");
  if (arcs < 2) throw Error(ErrorKind::invalid_argument, "arcs must be >= 2 to cover the circle with proper subarcs");
  if (!(epsilon > 0.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be positive");
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_argument, "delta must be positive");
  if (!(taper > 0.0 && taper <= 2.0 * kPi / arcs))
    throw Error(ErrorKind::invalid_argument, "taper must lie in (0, 2 pi / arcs]");
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::invalid_argument, "r must lie in (0,1)");
  if (!(budget > 0.0)) throw Error(ErrorKind::invalid_argument, "budget must be positive");
  if (!(lift > 0.0)) throw Error(ErrorKind::invalid_argument, "lift must be positive");
  if (k && *k < 1) throw Error(ErrorKind::invalid_argument, "k must be positive");
  if (!(k_margin >= 1.0)) throw Error(ErrorKind::invalid_argument, "k_margin must be >= 1");
  if (radial < 2 || angular < 4) throw Error(ErrorKind::invalid_argument, "radius grid too coarse");
  if (annulus_r0 && !(*annulus_r0 > 0.0 && *annulus_r0 < 1.0))
    throw Error(ErrorKind::invalid_argument, "annulus r0 must lie in (0,1)");
}

double PipelineConfig::delta_at(int round) const {
  return schedule == Schedule::harmonic ? delta / static_cast<double>(round) : delta;
}

void GrowthLedger::append(LedgerRow row) {
  if (!rows.empty() && row.k <= rows.back().k)
    throw Error(ErrorKind::invalid_argument, "ledger rows must have increasing k");
  rows.push_back(std::move(row));
}

std::vector<Vec3> direction_dictionary() {
  std::vector<std::pair<cplx, cplx>> spinors{{1.0, 0.0}, {0.0, 1.0}};
  for (double alpha : {kPi / 3.0, 2.0 * kPi / 3.0})
    for (int j = 0; j < 7; ++j)
      spinors.push_back({std::cos(alpha / 2.0), std::polar(std::sin(alpha / 2.0), 2.0 * kPi * j / 7.0)});
  std::vector<Vec3> out;
  for (const auto& [a, b] : spinors) out.push_back(spinor_point(a, b));
  return out;
}

int choose_direction(const SeriesMap& F, cplx z) {
  const auto fv = eval(F, z);
  const auto dv = eval(derivative(F), z);
  Vec3 p{fv[0], fv[1], fv[2]}, t{};
  for (int c = 0; c < 3; ++c) t[c] = kI * z * dv[c];
  auto unit = [](Vec3 v) {
    const double n = norm(v);
    if (n > 0.0)
      for (auto& x : v) x /= n;
    return v;
  };
  p = unit(p);
  t = unit(t);
  const auto dict = direction_dictionary();
  int best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dict.size(); ++i) {
    const Vec3 th = unit(dict[i]);
    const double score = std::norm(hdot(th, p)) + std::norm(hdot(th, t));
    if (score < best_score - 1e-12) {
      best_score = score;
      best = static_cast<int>(i);
    }
  }
  return best;
}

namespace {

constexpr std::size_t kPriorGrid = 8192;
const Vec3 kV1{1.0, kI, 0.0};
const Vec3 kV2{1.0, -kI, 0.0};

struct Arc {
  double lo, hi;
};

std::vector<Arc> arc_layout(const PipelineConfig& cfg) {
  std::vector<Arc> arcs;
  for (int j = 0; j < cfg.arcs; ++j)
    arcs.push_back({2.0 * kPi * j / cfg.arcs - cfg.taper, 2.0 * kPi * (j + 1) / cfg.arcs});
  return arcs;
}

// Curve, lift and the amplitude already pushed per direction at the shared k.
class PushState {
 public:
  PushState(SeriesMap F, const PipelineConfig& cfg) : F_(std::move(F)), cfg_(cfg) {
    lift_ = spinor_lift(derivative(F_));
    k_ = cfg.k;
  }

  const SeriesMap& curve() const { return F_; }
  std::optional<int> k() const { return k_; }

  RHCertificate push(const Arc& arc, double mu, const Vec3& theta, int dir_id) {
    BoundaryData bd;
    bd.arc_lo = arc.lo;
    bd.arc_hi = arc.hi;
    bd.mu = {mu};
    bd.theta = theta;
    bd.taper = cfg_.taper;
    bd.epsilon = cfg_.epsilon;
    bd.r = cfg_.r;

    RhNullOptions opts;
    opts.condition_b = ConditionB::local;
    opts.k_max = cfg_.k_max;
    opts.fourier_cap = cfg_.fourier_cap;
    if (!k_) {
      const NullDeformation probe = rh_null_deform(F_, lift_, bd, opts);
      k_ = static_cast<int>(std::ceil(cfg_.k_margin * probe.cert.k));
    }
    opts.fixed_k = *k_;
    auto& prior = prior_[dir_id];
    if (prior.empty()) prior.assign(kPriorGrid, 0.0);
    if (std::any_of(prior.begin(), prior.end(), [](double x) { return x > 0.0; })) {
      opts.prior_mu = [&prior](double angle) {
        double t = std::fmod(angle, 2.0 * kPi);
        if (t < 0.0) t += 2.0 * kPi;
        t *= static_cast<double>(kPriorGrid) / (2.0 * kPi);
        const std::size_t i = static_cast<std::size_t>(t) % kPriorGrid;
        const double f = t - std::floor(t);
        return (1.0 - f) * prior[i] + f * prior[(i + 1) % kPriorGrid];
      };
    }
    const NullDeformation d = rh_null_deform(F_, lift_, bd, opts);
    if (!d.cert.valid) {
      std::ostringstream os;
      os << "push certificate invalid at k = " << d.cert.k << " (a=" << d.cert.a << " b=" << d.cert.b
         << " c=" << d.cert.c << " d=" << d.cert.d << ", epsilon " << bd.epsilon << ")";
      throw Error(ErrorKind::tolerance_unachievable, os.str());
    }
    for (std::size_t i = 0; i < kPriorGrid; ++i)
      prior[i] += bd.effective_amplitude(2.0 * kPi * static_cast<double>(i) / kPriorGrid);
    F_ = d.G;
    lift_ = d.spinor;
    return d.cert;
  }

 private:
  SeriesMap F_;
  SpinorPair lift_;
  const PipelineConfig& cfg_;
  std::optional<int> k_;
  std::map<int, std::vector<double>> prior_;
};

LedgerRow measure(const SeriesMap& F, const PipelineConfig& cfg, int round, double delta) {
  LedgerRow row;
  row.k = round;
  row.delta = delta;
  const RadiusReport rr = intrinsic_radius(F, 0.0, cfg.radial, cfg.angular);
  row.intrinsic = rr.intrinsic_radius;
  row.extrinsic = rr.extrinsic_radius;
  row.shortcut = rr.shortcut_length;
  const BoundedCoordinateReport bc = bounded_coordinate_report(F);
  row.sup_f3 = bc.sup_f3;
  row.min_f12 = bc.min_f12;
  return row;
}

void absorb(LedgerRow& row, const RHCertificate& c) {
  row.cert_a = std::max(row.cert_a, c.a);
  row.cert_b = std::max(row.cert_b, c.b);
  row.cert_c = std::max(row.cert_c, c.c);
  row.cert_d = std::max(row.cert_d, c.d);
  row.rh_k = c.k;
}

SeriesMap seed_of(const PipelineConfig& cfg) {
  SeriesMap F = catalog(cfg.seed_curve);
  if (cfg.annulus_r0) F = F.on_domain(Domain::annulus(*cfg.annulus_r0));
  return F;
}

template <class Round>
GrowthLedger drive(const PipelineConfig& cfg, Round&& round) {
  cfg.validate();
  GrowthLedger ledger;
  PushState state(seed_of(cfg), cfg);
  ledger.append(measure(state.curve(), cfg, 0, 0.0));
  ledger.curve = state.curve();
  for (int k = 1; k <= cfg.iterations; ++k) {
    const double delta = cfg.delta_at(k);
    LedgerRow certs;
    certs.delta = delta;
    try {
      round(state, k, delta, certs);
    } catch (const Error& e) {
      ledger.curve = state.curve();
      std::ostringstream os;
      os << "round " << k << ": " << e.what();
      throw PipelineAborted(e.kind(), os.str(), ledger);
    }
    LedgerRow row = measure(state.curve(), cfg, k, certs.delta);
    row.cert_a = certs.cert_a;
    row.cert_b = certs.cert_b;
    row.cert_c = certs.cert_c;
    row.cert_d = certs.cert_d;
    row.rh_k = certs.rh_k;
    row.directions = certs.directions;
    ledger.append(std::move(row));
    ledger.curve = state.curve();
  }
  return ledger;
}

}  // namespace

GrowthLedger run_completeness_recursion(const PipelineConfig& cfg) {
  const auto arcs = arc_layout(cfg);
  const auto dict = direction_dictionary();
  std::vector<int> chosen;  // per arc, fixed after the first round
  return drive(cfg, [&](PushState& state, int, double delta, LedgerRow& row) {
    if (chosen.empty()) {
      for (const auto& a : arcs)
        chosen.push_back(choose_direction(state.curve(), std::polar(1.0, 0.5 * (a.lo + a.hi))));
    }
    for (std::size_t j = 0; j < arcs.size(); ++j) {
      absorb(row, state.push(arcs[j], delta, dict[static_cast<std::size_t>(chosen[j])], chosen[j]));
      row.directions.push_back(chosen[j]);
    }
  });
}

GrowthLedger run_bounded_third(const PipelineConfig& cfg) {
  const auto arcs = arc_layout(cfg);
  GrowthLedger ledger = drive(cfg, [&](PushState& state, int k, double delta, LedgerRow& row) {
    const bool v2 = k % 2 == 1;
    const double mu = k == 2 ? cfg.lift : delta;
    row.delta = mu;
    for (const auto& a : arcs) {
      absorb(row, state.push(a, mu, v2 ? kV2 : kV1, v2 ? -2 : -1));
      row.directions.push_back(v2 ? -2 : -1);
    }
    const double f3 = bounded_coordinate_report(state.curve()).sup_f3;
    if (f3 > cfg.budget) {
      std::ostringstream os;
      os << "sup |F3| = " << f3 << " exceeds the budget " << cfg.budget;
      throw Error(ErrorKind::tolerance_unachievable, os.str());
    }
  });
  ledger.toy_min_f12 = toy_min_f12(cfg.toy_power);
  return ledger;
}

GrowthLedger run_pipeline(const PipelineConfig& cfg) {
  return cfg.kind == PipelineKind::completeness ? run_completeness_recursion(cfg)
                                                : run_bounded_third(cfg);
}

double toy_min_f12(int N, std::size_t samples) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples; ++j) {
    const cplx z = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(samples));
    const cplx zn = std::pow(z, N);
    const cplx f1 = z + zn, f2 = kI * (z - zn);
    best = std::min(best, std::sqrt(std::norm(f1) + std::norm(f2)));
  }
  return best;
}

Mesh surface_mesh(const SeriesMap& F, ExportTarget target, std::size_t radial, std::size_t angular) {
  if (F.dim() != 3) throw Error(ErrorKind::invalid_argument, "mesh export needs a map into C^3");
  if (radial < 2 || angular < 3) throw Error(ErrorKind::invalid_argument, "mesh grid too coarse");
  const Domain& dom = F.domain();
  if (dom.is_circle()) throw Error(ErrorKind::domain, "mesh export needs a disc or annulus map");
  if (target == ExportTarget::h3) require_zero_free_third(F);
  Mesh mesh;
  for (std::size_t i = 0; i < radial; ++i) {
    const double rho = dom.is_annulus()
                           ? dom.r0 + (1.0 - dom.r0) * static_cast<double>(i) / static_cast<double>(radial - 1)
                           : static_cast<double>(i + 1) / static_cast<double>(radial);
    for (std::size_t j = 0; j < angular; ++j) {
      const cplx z = std::polar(rho, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(angular));
      const auto v = eval_unchecked(F, z);
      if (target == ExportTarget::r3) {
        mesh.vertices.push_back({v[0].real(), v[1].real(), v[2].real()});
      } else {
        const auto x = h3_minkowski(bryant_project(tmap({v[0], v[1], v[2]})));
        mesh.x0.push_back(x[0]);
        mesh.vertices.push_back({x[1], x[2], x[3]});
      }
    }
  }
  for (std::size_t i = 0; i + 1 < radial; ++i) {
    for (std::size_t j = 0; j < angular; ++j) {
      const std::size_t a = i * angular + j, b = i * angular + (j + 1) % angular;
      const std::size_t c = b + angular, d = a + angular;
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  return mesh;
}

std::string mesh_to_obj(const Mesh& mesh) {
  std::ostringstream os;
  os.precision(17);
  os << "# nullcurve mesh: " << mesh.vertices.size() << " vertices, " << mesh.faces.size()
     << " faces\n";
  if (!mesh.x0.empty()) os << "# hyperboloid model: each '#x0' line gives the time coordinate of the next vertex\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (!mesh.x0.empty()) os << "#x0 " << mesh.x0[i] << "\n";
    const auto& v = mesh.vertices[i];
    os << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
  }
  for (const auto& f : mesh.faces) os << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  return os.str();
}

void export_surface(const SeriesMap& F, ExportTarget target, const std::string& path,
                    std::size_t radial, std::size_t angular) {
  const std::string obj = mesh_to_obj(surface_mesh(F, target, radial, angular));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  out << obj;
  if (!out) throw Error(ErrorKind::io, "write to '" + path + "' failed");
}

}  // namespace nullcurve
