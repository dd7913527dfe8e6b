#include "rncurves/jsonio.hpp"

#include <cmath>
#include <cstdio>

namespace rncurves {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
  const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in;
        out += ordered_json(it.key()).dump();
        out += ": ";
        dump(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays (complex values, residual pairs) stay on one line.
      bool all_numeric = true;
      for (const auto& v : j)
        if (!v.is_number() && !v.is_null()) all_numeric = false;
      if (all_numeric && j.size() <= 4) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          dump(j[i], out, indent, depth);
          if (i + 1 < j.size()) out += ", ";
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += fmt_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json17(const ordered_json& j, int indent) {
  std::string out;
  dump(j, out, indent, 0);
  out += "\n";
  return out;
}

ordered_json complex_json(double re, double im) {
  return ordered_json::array({re, im});
}

}  // namespace rncurves
