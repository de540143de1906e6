#pragma once

#include <filesystem>

#include "json.hpp"
#include "willmore/report.hpp"

namespace cli {

struct Context {
  nlohmann::json config;
  std::filesystem::path out_dir;
  bool verbose = false;
};

willmore::RunReport cmd_profile(const Context& ctx);
willmore::RunReport cmd_eval(const Context& ctx);
willmore::RunReport cmd_elcheck(const Context& ctx);
willmore::RunReport cmd_varcheck(const Context& ctx);
willmore::RunReport cmd_confcheck(const Context& ctx);
willmore::RunReport cmd_secondvar(const Context& ctx);

}  // namespace cli
