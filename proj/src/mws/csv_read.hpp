#ifndef MWS_CSV_READ_HPP
#define MWS_CSV_READ_HPP

#include <string>
#include <vector>

namespace mws {

struct DensityProfile {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> density;
};

/// Reads a "t,x,density" CSV (header required). Files holding several time
/// blocks yield the last block.
DensityProfile read_density_csv(const std::string& path);

}  // namespace mws

#endif
