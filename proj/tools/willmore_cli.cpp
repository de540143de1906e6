#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace {

using Command = willmore::RunReport (*)(const cli::Context&);

const char* kDefaults = R"(Config is one JSON document (file path or '-' for stdin). Defaults:
  profile:   n 2, p [2..8], rho0 0.4, f0 1, fp0 0.4, rho_lo 0.05, rho_hi 2, samples 400,
             tolerance 1e-6, residual_tolerance 1e-8, ode_tolerance 1e-12, initial_csv (optional: restart from a CSV row)
  eval:      surface {id, res 32, ...}, functional {kind W_nps, p 2}, expected, tolerance 1e-8
  elcheck:   surface, functional, tolerance 1e-8, precondition_tolerance 1e-8, willmore false
  varcheck:  surface {id bumpy-torus, s 2, res 24}, form printed|corrected (printed),
             cases "all", points 24, t_values [1e-3, 5e-4, 2.5e-4], u {seed 1}, f {seed 2},
             tensor_check false, kf_three_ways false, identities (none), identity_tolerance 1e-8
  confcheck: surface {id sheared-torus-3, res 8, bump 0.1}, r 2, mode inversion|homothety,
             scale 2, tolerance 1e-6 (inversion) or 1e-12 (homothety)
  secondvar: mode patch|revolution; patch: surface, functional, u, critical false,
             t_steps [0.02, 0.01, 0.005]; revolution: profile {n 2, p 3, ...}, window [0.2, 0.6],
             harmonics [0, 1], res 24; tolerance 1e-6
Surfaces: sphere {n, s, radius}, torus {R, r, s}, cylinder, cone, plane, bumpy-torus {s, amplitude},
  sheared-torus-3 {shear, bump}, revolution {profile keys, window_lo, window_hi, s}.
Fields: {type random, seed} | {type constant, value} | {type harmonic, j}.
Exit codes: 0 all checks pass, 1 usage error, 2 computation or precondition error, or a failed check.)";

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

nlohmann::json read_config(const std::string& path) {
  try {
    if (path == "-") return nlohmann::json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw cli::UsageError("cannot open config " + path);
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw cli::UsageError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Willmore-type functionals on foliated hypersurfaces"};
  app.footer(kDefaults);
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  bool verbose = false;
  const std::map<std::string, std::pair<Command, const char*>> commands = {
      {"profile", {cli::cmd_profile, "critical revolution profiles: ODE vs closed form, CSV and SVG"}},
      {"eval", {cli::cmd_eval, "evaluate a functional on a catalog surface"}},
      {"elcheck", {cli::cmd_elcheck, "Euler-Lagrange residuals"}},
      {"varcheck", {cli::cmd_varcheck, "finite-difference check of the evolution equations"}},
      {"confcheck", {cli::cmd_confcheck, "conformal invariance of the Q_r density"}},
      {"secondvar", {cli::cmd_secondvar, "second variation: analytic vs numeric, or on a revolution profile"}},
  };
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", config_path, "JSON config path, or - for stdin")->required();
    sub->add_option("--out-dir", out_dir, "directory for report.json and tables")->capture_default_str();
    sub->add_flag("--verbose", verbose, "print result details");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    cli::Context ctx{read_config(config_path), out_dir, verbose};
    std::filesystem::create_directories(ctx.out_dir);
    const auto start = std::chrono::steady_clock::now();
    auto report = commands.at(name).first(ctx);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    willmore::write_text((ctx.out_dir / "report.json").string(), report.to_json().dump(2) + "\n");
    for (const auto& r : report.results) {
      std::printf("%s %s = %s (tolerance %s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                  shortest(r.value).c_str(), shortest(r.tolerance).c_str());
      if (verbose && !r.detail.is_null()) std::fprintf(stderr, "  %s\n", r.detail.dump().c_str());
    }
    return report.all_pass() ? 0 : 2;
  } catch (const cli::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
