#pragma once

#include <cstdint>
#include <string>

#include "rncurves/errors.hpp"

namespace rncurves {

// Tunables shared by every pipeline; all tolerances flow from here, command
// handlers carry no hidden constants.
struct RunConfig {
  double quad_tol = 1e-12;
  int series_order = 20;
  double fd_step = 1e-5;
  std::string format = "json";  // json | csv (csv for sweeps only)
  std::uint64_t seed = 20240501;

  void validate() const {
    if (!(quad_tol > 0.0)) throw InputError("quadrature tolerance must be positive");
    if (!(fd_step > 0.0)) throw InputError("finite-difference step factor must be positive");
    if (series_order < 1 || series_order > 40)
      throw OrderTooLarge("series order must be in [1, 40]");
    if (format != "json" && format != "csv") throw InputError("format must be json or csv");
  }
};

// Loads a RunConfig from a JSON file; unknown keys are rejected.
RunConfig load_config(const std::string& path);

}  // namespace rncurves
