#include "rncurves/config.hpp"

#include <fstream>

#include <json.hpp>

namespace rncurves {

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "quad_tol") cfg.quad_tol = it.value().get<double>();
    else if (k == "series_order") cfg.series_order = it.value().get<int>();
    else if (k == "fd_step") cfg.fd_step = it.value().get<double>();
    else if (k == "format") cfg.format = it.value().get<std::string>();
    else if (k == "seed") cfg.seed = it.value().get<std::uint64_t>();
    else throw InputError("unknown config key: " + k);
  }
  cfg.validate();
  return cfg;
}

}  // namespace rncurves
