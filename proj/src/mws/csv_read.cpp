#include "mws/csv_read.hpp"

#include <cstdlib>
#include <fstream>

#include "mws/errors.hpp"

namespace mws {

DensityProfile read_density_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");

  DensityProfile out;
  bool first = true;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    const double t = std::strtod(s, &end);
    if (end == s || *end != ',')
      throw IoError(path + ":" + std::to_string(lineno) + ": bad row");
    s = end + 1;
    const double x = std::strtod(s, &end);
    if (end == s || *end != ',')
      throw IoError(path + ":" + std::to_string(lineno) + ": bad row");
    s = end + 1;
    const double d = std::strtod(s, &end);
    if (end == s)
      throw IoError(path + ":" + std::to_string(lineno) + ": bad row");

    if (first || t != out.t) {
      out.t = t;
      out.x.clear();
      out.density.clear();
      first = false;
    }
    out.x.push_back(x);
    out.density.push_back(d);
  }
  if (first) throw IoError(path + ": no data rows");
  return out;
}

}  // namespace mws
