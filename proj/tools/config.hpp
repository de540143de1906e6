#pragma once

// JSON config -> library objects for the command-line tool.

#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "willmore/catalog.hpp"
#include "willmore/functionals.hpp"
#include "willmore/revolution.hpp"

namespace cli {

using nlohmann::json;

// Bad or missing config entries: exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double number(const json& j, const std::string& key, double fallback);
double number(const json& j, const std::string& key);
int integer(const json& j, const std::string& key, int fallback);
std::string text(const json& j, const std::string& key, const std::string& fallback);
bool flag(const json& j, const std::string& key, bool fallback);
const json& object(const json& j, const std::string& key);

// Critical profile {n, p, rho0, f0, fp0, rho_lo, rho_hi}.
willmore::RevolutionProfile make_profile(const json& j);

// {"id": catalog id, ...parameters}.  "revolution" builds the critical profile surface
// over [window_lo, window_hi].
willmore::Surface make_surface(const json& j);

// {"kind": "W_nps" | "J_nps" | "W_conf" | "WF_of_HF", "p": .., "r": ..}; WF_of_HF uses F(x) = x^p.
willmore::FunctionalSpec make_functional(const json& j);

// {"type": "random", "seed": k} | {"type": "constant", "value": c} | {"type": "harmonic", "j": k}.
willmore::JetScalar make_field(const json& j, int dims);

}  // namespace cli
