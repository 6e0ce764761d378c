#include "nullcurve/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace nullcurve {

namespace {

Json pair_of(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx cplx_of(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::invalid_argument, "expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

// JSON has no infinities; they are written as null.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

const Json& field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::invalid_argument, std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorKind::invalid_argument, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw Error(ErrorKind::invalid_argument, std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

const char* domain_name(DomainKind k) {
  switch (k) {
    case DomainKind::disc: return "disc";
    case DomainKind::annulus: return "annulus";
    case DomainKind::circle: return "circle";
  }
  return "disc";
}

}  // namespace

Json to_json(const SeriesMap& F) {
  Json j;
  j["domain"] = domain_name(F.domain().kind);
  j["r0"] = F.domain().r0;
  j["degree_lo"] = F.lo();
  j["degree_hi"] = F.hi();
  Json comps = Json::array();
  for (std::size_t c = 0; c < F.dim(); ++c) {
    Json row = Json::array();
    for (const cplx& z : F.coefficients(c)) row.push_back(pair_of(z));
    comps.push_back(std::move(row));
  }
  j["components"] = std::move(comps);
  return j;
}

SeriesMap series_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, "series JSON must be an object");
  const std::string name = field(j, "domain").get<std::string>();
  Domain dom;
  if (name == "disc") dom = Domain::disc();
  else if (name == "annulus") dom = Domain::annulus(number(j, "r0"));
  else if (name == "circle") dom = Domain::circle();
  else throw Error(ErrorKind::invalid_argument, "unknown domain '" + name + "'");
  const int lo = integer(j, "degree_lo"), hi = integer(j, "degree_hi");
  if (hi < lo) throw Error(ErrorKind::invalid_argument, "degree_hi < degree_lo");
  const Json& comps = field(j, "components");
  if (!comps.is_array() || comps.empty()) throw Error(ErrorKind::invalid_argument, "components must be a non-empty array");
  std::vector<CVec> c;
  for (const Json& row : comps) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(hi - lo + 1))
      throw Error(ErrorKind::invalid_argument, "component length does not match the degree range");
    CVec v;
    v.reserve(row.size());
    for (const Json& z : row) v.push_back(cplx_of(z));
    c.push_back(std::move(v));
  }
  return SeriesMap::from_coefficients(dom, lo, std::move(c));
}

Json to_json(const BoundaryData& bd) {
  Json j;
  j["arc"] = Json::array({bd.arc_lo, bd.arc_hi});
  j["mu"] = bd.mu;
  Json th = Json::array();
  for (const cplx& z : bd.theta) th.push_back(pair_of(z));
  j["theta"] = std::move(th);
  j["taper"] = bd.taper;
  j["epsilon"] = bd.epsilon;
  j["r"] = bd.r;
  return j;
}

BoundaryData boundary_data_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, "boundary data JSON must be an object");
  BoundaryData bd;
  const Json& arc = field(j, "arc");
  if (!arc.is_array() || arc.size() != 2) throw Error(ErrorKind::invalid_argument, "arc must be [lo, hi]");
  bd.arc_lo = arc[0].get<double>();
  bd.arc_hi = arc[1].get<double>();
  const Json& mu = field(j, "mu");
  if (mu.is_number()) bd.mu = {mu.get<double>()};
  else bd.mu = mu.get<std::vector<double>>();
  const Json& th = field(j, "theta");
  if (!th.is_array() || th.size() != 3) throw Error(ErrorKind::invalid_argument, "theta must have three entries");
  for (std::size_t c = 0; c < 3; ++c) bd.theta[c] = cplx_of(th[c]);
  if (j.contains("taper")) bd.taper = number(j, "taper");
  if (j.contains("epsilon")) bd.epsilon = number(j, "epsilon");
  if (j.contains("r")) bd.r = number(j, "r");
  bd.validate();
  return bd;
}

Json to_json(const RHCertificate& cert) {
  Json j;
  j["valid"] = cert.valid;
  j["k"] = cert.k;
  j["epsilon"] = cert.epsilon;
  j["r_prime"] = cert.r_prime;
  j["a"] = cert.a;
  j["b"] = cert.b;
  j["c"] = cert.c;
  j["d"] = cert.d;
  j["omega_padding"] = cert.omega_padding;
  j["omega_width"] = cert.omega_width;
  j["period_norm"] = cert.period_norm;
  j["samples"] = cert.samples;
  Json traj = Json::array();
  for (const auto& t : cert.trajectory)
    traj.push_back({{"k", t.k}, {"a", t.a}, {"b", t.b}, {"c", t.c}, {"d", t.d}, {"valid", t.valid}});
  j["trajectory"] = std::move(traj);
  return j;
}

Json to_json(const PeriodMatrix& p) {
  Json cols = Json::array();
  for (std::size_t i = 0; i < p.columns.size(); ++i) {
    Json v = Json::array();
    for (const cplx& z : p.columns[i]) v.push_back(pair_of(z));
    cols.push_back({{"loop_radius", p.loop_radii[i]}, {"period", std::move(v)}});
  }
  return cols;
}

Json to_json(const RadiusReport& r) {
  return {{"intrinsic", r.intrinsic_radius},
          {"extrinsic", r.extrinsic_radius},
          {"shortcut", r.shortcut_length},
          {"radial", r.radial},
          {"angular", r.angular},
          {"r_core", r.r_core}};
}

Json to_json(const BoundedCoordinateReport& r) {
  return {{"sup_f3", r.sup_f3}, {"min_f12", r.min_f12}, {"interior_sup_f3", r.interior_sup_f3}};
}

Json to_json(const EmbeddednessReport& r) {
  Json j;
  j["samples"] = r.samples;
  j["flagged"] = r.flagged;
  j["min_separation"] = finite_or_null(r.min_separation);
  if (r.pair) j["pair"] = Json::array({pair_of(r.pair->first), pair_of(r.pair->second)});
  else j["pair"] = nullptr;
  return j;
}

Json kill_trace_json(const std::vector<NewtonStep>& trace) {
  Json it = Json::array();
  for (const auto& s : trace) {
    Json t = Json::array();
    for (const cplx& z : s.t) t.push_back(pair_of(z));
    it.push_back({{"t", std::move(t)}, {"residual_norm", s.residual_norm}});
  }
  return {{"iterations", std::move(it)}};
}

Json to_json(const PipelineConfig& cfg) {
  Json j;
  j["schema"] = cfg.schema;
  j["kind"] = cfg.kind == PipelineKind::completeness ? "completeness" : "bounded_third";
  j["seed_curve"] = cfg.seed_curve;
  j["annulus_r0"] = cfg.annulus_r0 ? Json(*cfg.annulus_r0) : Json(nullptr);
  j["delta"] = cfg.delta;
  j["schedule"] = cfg.schedule == Schedule::harmonic ? "harmonic" : "constant";
  j["iterations"] = cfg.iterations;
  j["epsilon"] = cfg.epsilon;
  j["arcs"] = cfg.arcs;
  j["taper"] = cfg.taper;
  j["r"] = cfg.r;
  j["budget"] = cfg.budget;
  j["lift"] = cfg.lift;
  j["k"] = cfg.k ? Json(*cfg.k) : Json(nullptr);
  j["k_margin"] = cfg.k_margin;
  j["k_max"] = cfg.k_max;
  j["fourier_cap"] = cfg.fourier_cap;
  j["radial"] = cfg.radial;
  j["angular"] = cfg.angular;
  j["seed"] = cfg.seed;
  j["toy_power"] = cfg.toy_power;
  return j;
}

PipelineConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, "config JSON must be an object");
  static const std::set<std::string> known{"schema", "kind",     "seed_curve", "annulus_r0", "delta",
                                           "schedule", "iterations", "epsilon", "arcs", "taper",
                                           "r",      "budget",   "lift",       "k",          "k_margin",
                                           "k_max",  "fourier_cap", "radial",  "angular",    "seed",
                                           "toy_power"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw Error(ErrorKind::invalid_argument, "unknown config field '" + key + "'");
  PipelineConfig cfg;
  cfg.schema = integer(j, "schema");
  if (cfg.schema != 1) throw Error(ErrorKind::invalid_argument, "unsupported config schema");
  try {
    if (j.contains("kind")) {
      const auto k = j["kind"].get<std::string>();
      if (k == "completeness") cfg.kind = PipelineKind::completeness;
      else if (k == "bounded_third") cfg.kind = PipelineKind::bounded_third;
      else throw Error(ErrorKind::invalid_argument, "unknown pipeline kind '" + k + "'");
    }
    if (j.contains("seed_curve")) cfg.seed_curve = j["seed_curve"].get<std::string>();
    if (j.contains("annulus_r0") && !j["annulus_r0"].is_null()) cfg.annulus_r0 = j["annulus_r0"].get<double>();
    if (j.contains("delta")) cfg.delta = number(j, "delta");
    if (j.contains("schedule")) {
      const auto s = j["schedule"].get<std::string>();
      if (s == "harmonic") cfg.schedule = Schedule::harmonic;
      else if (s == "constant") cfg.schedule = Schedule::constant;
      else throw Error(ErrorKind::invalid_argument, "unknown schedule '" + s + "'");
    }
    if (j.contains("iterations")) cfg.iterations = integer(j, "iterations");
    if (j.contains("epsilon")) cfg.epsilon = number(j, "epsilon");
    if (j.contains("arcs")) cfg.arcs = integer(j, "arcs");
    if (j.contains("taper")) cfg.taper = number(j, "taper");
    if (j.contains("r")) cfg.r = number(j, "r");
    if (j.contains("budget")) cfg.budget = number(j, "budget");
    if (j.contains("lift")) cfg.lift = number(j, "lift");
    if (j.contains("k") && !j["k"].is_null()) cfg.k = integer(j, "k");
    if (j.contains("k_margin")) cfg.k_margin = number(j, "k_margin");
    if (j.contains("k_max")) cfg.k_max = integer(j, "k_max");
    if (j.contains("fourier_cap")) cfg.fourier_cap = integer(j, "fourier_cap");
    if (j.contains("radial")) cfg.radial = j["radial"].get<std::size_t>();
    if (j.contains("angular")) cfg.angular = j["angular"].get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("toy_power")) cfg.toy_power = integer(j, "toy_power");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string ledger_csv(const GrowthLedger& ledger) {
  std::ostringstream os;
  os << "k,delta,intrinsic,extrinsic,supF3,cert_a,cert_b,cert_c,rh_k,cert_d,minF12,shortcut,directions\n";
  for (const auto& r : ledger.rows) {
    os << r.k << ',' << format_double(r.delta) << ',' << format_double(r.intrinsic) << ','
       << format_double(r.extrinsic) << ',' << format_double(r.sup_f3) << ',' << format_double(r.cert_a) << ','
       << format_double(r.cert_b) << ',' << format_double(r.cert_c) << ',' << r.rh_k << ','
       << format_double(r.cert_d) << ',' << format_double(r.min_f12) << ',' << format_double(r.shortcut) << ',';
    for (std::size_t i = 0; i < r.directions.size(); ++i) os << (i ? ";" : "") << r.directions[i];
    os << '\n';
  }
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::invalid_argument, "'" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

}  // namespace nullcurve
