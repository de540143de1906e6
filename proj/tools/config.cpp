#include "config.hpp"

#include <cmath>

namespace cli {

using namespace willmore;

namespace {

const json& at(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError("missing config entry '" + key + "'");
  return j.at(key);
}

}  // namespace

double number(const json& j, const std::string& key) {
  const auto& v = at(j, key);
  if (!v.is_number()) throw UsageError("'" + key + "' must be a number");
  return v.get<double>();
}

double number(const json& j, const std::string& key, double fallback) {
  return j.is_object() && j.contains(key) ? number(j, key) : fallback;
}

int integer(const json& j, const std::string& key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw UsageError("'" + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw UsageError("'" + key + "' must be a string");
  return v.get<std::string>();
}

bool flag(const json& j, const std::string& key, bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw UsageError("'" + key + "' must be true or false");
  return v.get<bool>();
}

const json& object(const json& j, const std::string& key) {
  const auto& v = at(j, key);
  if (!v.is_object()) throw UsageError("'" + key + "' must be an object");
  return v;
}

RevolutionProfile make_profile(const json& j) {
  return critical_ode_solve(integer(j, "n", 2), number(j, "p", 3), number(j, "rho0", 0.4), number(j, "f0", 1.0),
                            number(j, "fp0", 0.4), number(j, "rho_lo", 0.05), number(j, "rho_hi", 1.0));
}

Surface make_surface(const json& j) {
  const std::string id = text(j, "id", "");
  const int res = integer(j, "res", 32);
  if (id == "sphere") return sphere(integer(j, "n", 2), integer(j, "s", integer(j, "n", 2)), res, number(j, "radius", 1));
  if (id == "torus") {
    return torus(number(j, "R", std::sqrt(2.0)), number(j, "r", 1), integer(j, "s", 2), res);
  }
  if (id == "cylinder") return cylinder(number(j, "radius", 1), number(j, "z_lo", -1), number(j, "z_hi", 1), res);
  if (id == "cone") {
    return cone(integer(j, "n", 2), number(j, "slope", 1), number(j, "rho_lo", 0.5), number(j, "rho_hi", 1.5), res);
  }
  if (id == "plane") return plane(res);
  if (id == "bumpy-torus") return bumpy_torus(integer(j, "s", 2), res, number(j, "amplitude", 0.15));
  if (id == "sheared-torus-3") return sheared_torus3(res, number(j, "shear", 0.3), number(j, "bump", 0.0));
  if (id == "revolution") {
    const auto profile = make_profile(j);
    return revolution_surface(profile, number(j, "window_lo", 0.2), number(j, "window_hi", 0.6),
                              integer(j, "s", profile.n() - 1), res);
  }
  std::string known;
  for (const auto& k : catalog_ids()) known += " " + k;
  throw UsageError("unknown surface id '" + id + "' (known:" + known + ")");
}

FunctionalSpec make_functional(const json& j) {
  const std::string kind = text(j, "kind", "W_nps");
  const double p = number(j, "p", 2);
  if (kind == "W_nps") return FunctionalSpec::willmore(p);
  if (kind == "J_nps") return FunctionalSpec::norm_power(p);
  if (kind == "W_conf") return FunctionalSpec::conformal(integer(j, "r", 2));
  if (kind == "WF_of_HF") {
    return FunctionalSpec::of_hf([p](double x) { return std::pow(x, p); },
                                 [p](double x) { return p * std::pow(x, p - 1); },
                                 [p](double x) { return p * (p - 1) * std::pow(x, p - 2); });
  }
  throw UsageError("unsupported functional kind '" + kind + "' (W_nps, J_nps, W_conf, WF_of_HF)");
}

JetScalar make_field(const json& j, int dims) {
  const std::string type = text(j, "type", "random");
  if (type == "random") return random_field(dims, static_cast<unsigned>(integer(j, "seed", 1)));
  if (type == "constant") {
    const double c = number(j, "value", 1);
    return [c](const JetVec&) { return Jet(c); };
  }
  if (type == "harmonic") {
    const double k = integer(j, "j", 1);
    return [k](const JetVec& x) { return cos(k * x[0]); };
  }
  throw UsageError("unknown field type '" + type + "' (random, constant, harmonic)");
}

}  // namespace cli
