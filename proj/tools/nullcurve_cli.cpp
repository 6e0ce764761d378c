// Command-line front end: construct, deform, verify, recurse, export.
// Exit codes: 0 success, 1 domain and input errors, 2 tolerance failures,
// 64 usage errors.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nullcurve/diagnostics.hpp"
#include "nullcurve/io.hpp"
#include "nullcurve/pipelines.hpp"
#include "nullcurve/riemann_hilbert.hpp"
#include "nullcurve/weierstrass.hpp"

using namespace nullcurve;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitTolerance = 2;
constexpr int kExitUsage = 64;

int exit_code(const Error& e) { return e.is_tolerance_failure() ? kExitTolerance : kExitDomain; }

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) std::cout << text;
  else write_text_file(path, text);
}

std::string dumped(const Json& j) { return j.dump(2) + "\n"; }

struct Args {
  std::uint64_t seed = 0;
  bool seed_given = false;

  std::string name;
  std::string curve_path, bd_path, config_path;
  std::string out, report;

  std::optional<int> k;
  std::string condition_b = "retraction";

  std::size_t radial = 128, angular = 512;
  std::size_t samples = 4096;
  double d_dom = 0.1, d_amb = 1e-3;

  std::string target = "r3";
  std::size_t mesh_radial = 32, mesh_angular = 128;
};

int cmd_construct(const Args& a) {
  emit(dumped(to_json(catalog(a.name))), a.out);
  return 0;
}

int cmd_deform(const Args& a) {
  const SeriesMap F = series_from_json(read_json_file(a.curve_path));
  const BoundaryData bd = boundary_data_from_json(read_json_file(a.bd_path));
  RhNullOptions opts;
  opts.condition_b = a.condition_b == "local" ? ConditionB::local : ConditionB::retraction;
  if (a.k) opts.fixed_k = *a.k;
  try {
    const NullDeformation d =
        F.domain().is_annulus() ? rh_null_annulus(F, bd, opts) : rh_null_disc(F, bd, opts);
    if (!a.report.empty()) {
      Json rep;
      rep["certificate"] = to_json(d.cert);
      Json t0 = Json::array();
      for (const cplx& t : d.t0) t0.push_back(Json::array({t.real(), t.imag()}));
      rep["t0"] = std::move(t0);
      rep["fourier_degree"] = d.fourier_degree;
      write_text_file(a.report, dumped(rep));
    }
    emit(dumped(to_json(d.G)), a.out);
    return d.cert.valid ? 0 : kExitTolerance;
  } catch (const ToleranceUnachievable& e) {
    if (!a.report.empty()) write_text_file(a.report, dumped({{"certificate", to_json(e.best())}}));
    throw;
  } catch (const ConvergenceFailure& e) {
    if (!a.report.empty()) write_text_file(a.report, dumped(kill_trace_json(e.history())));
    throw;
  }
}

int cmd_verify(const Args& a) {
  const SeriesMap F = series_from_json(read_json_file(a.curve_path));
  Json j;
  j["nullity"] = nullity_residual(F);
  j["radii"] = to_json(intrinsic_radius(F, 0.0, a.radial, a.angular));
  if (F.dim() == 3) j["bounded_coordinate"] = to_json(bounded_coordinate_report(F));
  if (F.domain().is_annulus()) j["periods"] = to_json(periods(derivative(F)));
  j["embeddedness"] = to_json(embedded_check(F, a.samples, a.d_dom, a.d_amb));
  std::cout << dumped(j);
  return 0;
}

int cmd_recurse(const Args& a) {
  PipelineConfig cfg = config_from_json(read_json_file(a.config_path));
  if (a.seed_given) cfg.seed = a.seed;
  try {
    const GrowthLedger ledger = run_pipeline(cfg);
    emit(ledger_csv(ledger), a.out);
    if (!a.report.empty()) write_text_file(a.report, dumped(to_json(ledger.curve)));
    return 0;
  } catch (const PipelineAborted& e) {
    emit(ledger_csv(e.partial()), a.out);
    if (!a.report.empty()) write_text_file(a.report, dumped(to_json(e.partial().curve)));
    throw;
  }
}

int cmd_export(const Args& a) {
  const SeriesMap F = series_from_json(read_json_file(a.curve_path));
  export_surface(F, a.target == "h3" ? ExportTarget::h3 : ExportTarget::r3, a.out, a.mesh_radial,
                 a.mesh_angular);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Null holomorphic curves: construction, boundary pushes and diagnostics"};
  app.require_subcommand(1);
  Args a;
  app.add_option_function<std::uint64_t>(
         "--seed", [&](std::uint64_t s) { a.seed = s, a.seed_given = true; },
         "Seed for randomized choices (recorded in pipeline configs)")
      ->capture_default_str();

  auto* construct = app.add_subcommand("construct", "Print a catalog curve as JSON");
  construct->add_option("name", a.name, "linear_v1 | cubic_enneper_like | annulus_basic")->required();
  construct->add_option("--out", a.out, "Write to a file instead of stdout");

  auto* deform = app.add_subcommand("deform", "Apply one null boundary push");
  deform->add_option("curve", a.curve_path, "Curve JSON")->required()->check(CLI::ExistingFile);
  deform->add_option("boundary_data", a.bd_path, "Boundary data JSON")->required()->check(CLI::ExistingFile);
  deform->add_option("--out", a.out, "Write the deformed curve to a file instead of stdout");
  deform->add_option("--report", a.report, "Write the certificate (or failure data) as JSON");
  deform->add_option("--k", a.k, "Fixed RH exponent instead of the search")->check(CLI::PositiveNumber);
  deform->add_option("--condition-b", a.condition_b, "retraction | local")
      ->check(CLI::IsMember({"retraction", "local"}));

  auto* verify = app.add_subcommand("verify", "Print nullity, radii, periods and embeddedness as JSON");
  verify->add_option("curve", a.curve_path, "Curve JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--radial", a.radial, "Radius graph rings")->check(CLI::Range(2, 1 << 16));
  verify->add_option("--angular", a.angular, "Radius graph angles")->check(CLI::Range(4, 1 << 20));
  verify->add_option("--samples", a.samples, "Embeddedness samples")->check(CLI::Range(2, 1 << 22));
  verify->add_option("--d-dom", a.d_dom, "Minimum domain distance of flagged pairs");
  verify->add_option("--d-amb", a.d_amb, "Ambient distance below which pairs are flagged")
      ->check(CLI::PositiveNumber);

  auto* recurse = app.add_subcommand("recurse", "Run a pipeline and write its ledger CSV");
  recurse->add_option("config", a.config_path, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
  recurse->add_option("--out", a.out, "Write the ledger to a file instead of stdout");
  recurse->add_option("--curve-out", a.report, "Write the final curve JSON");

  auto* exp = app.add_subcommand("export", "Write an OBJ mesh of Re F (r3) or its Bryant image (h3)");
  exp->add_option("curve", a.curve_path, "Curve JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--target", a.target, "r3 | h3")->check(CLI::IsMember({"r3", "h3"}));
  exp->add_option("--out", a.out, "Output OBJ path")->required();
  exp->add_option("--radial", a.mesh_radial, "Mesh rings")->check(CLI::Range(2, 1 << 14));
  exp->add_option("--angular", a.mesh_angular, "Mesh angles")->check(CLI::Range(3, 1 << 16));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*construct) return cmd_construct(a);
    if (*deform) return cmd_deform(a);
    if (*verify) return cmd_verify(a);
    if (*recurse) return cmd_recurse(a);
    if (*exp) return cmd_export(a);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error (invalid_argument): " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
