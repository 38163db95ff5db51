#include "skycell/linkrate.hpp"

#include "skycell/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skycell::linkrate {

double spectral_efficiency(double sinr_db, double se_max_bps_hz, double attenuation) {
  if (!(se_max_bps_hz > 0.0)) throw Error(ErrorKind::InvalidArgument, "se_max must be > 0");
  if (!(attenuation > 0.0 && attenuation <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "attenuation must be in (0, 1]");
  if (std::isnan(sinr_db)) throw Error(ErrorKind::InvalidArgument, "SINR is NaN");
  if (sinr_db == -INFINITY) return 0.0;
  const double se = attenuation * std::log2(1.0 + std::pow(10.0, sinr_db / 10.0));
  return std::min(se_max_bps_hz, se);
}

double throughput_bps(double sinr_db, double bw_hz, int layers, const LinkConfig& config) {
  if (!(bw_hz > 0.0)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be > 0");
  if (layers < 1) throw Error(ErrorKind::InvalidArgument, "layers must be >= 1");
  const double cap = config.mod_bits * config.code_rate_max;
  return layers * bw_hz * spectral_efficiency(sinr_db, cap, config.attenuation);
}

double peak_rate_bps(double bw_hz, int layers, int mod_bits, double overhead_fraction,
                     double code_rate_max) {
  if (mod_bits != 2 && mod_bits != 4 && mod_bits != 6 && mod_bits != 8)
    throw Error(ErrorKind::InvalidArgument,
                "mod_bits must be one of 2, 4, 6, 8 (got " + std::to_string(mod_bits) + ")");
  if (!(overhead_fraction >= 0.0 && overhead_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "overhead must be in [0, 1)");
  if (!(bw_hz >= 0.0) || layers < 1)
    throw Error(ErrorKind::InvalidArgument, "bandwidth must be >= 0 and layers >= 1");
  return bw_hz * layers * mod_bits * code_rate_max * (1.0 - overhead_fraction);
}

} // namespace skycell::linkrate
