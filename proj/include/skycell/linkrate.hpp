#pragma once

namespace skycell::linkrate {

inline constexpr double kDefaultAttenuation = 0.75;
inline constexpr double kCodeRateMax = 0.93;

// Fitted against the single-user peak rates of the 5G reference table. TDD
// gives uplink a much smaller share of slots, so the two directions need
// separate overheads; one (code rate, overhead) pair per direction covers both
// the 3.5 GHz and 26 GHz rows.
inline constexpr double kDownlinkOverhead = 0.56;
inline constexpr double kUplinkOverhead = 0.84;

struct LinkConfig {
  double attenuation = kDefaultAttenuation;
  int mod_bits = 8;
  double code_rate_max = kCodeRateMax;
};

/// Truncated Shannon: min(se_max, attenuation * log2(1 + SINR)).
double spectral_efficiency(double sinr_db, double se_max_bps_hz, double attenuation);

/// layers * bw * SE with the per-layer cap mod_bits * code_rate_max.
double throughput_bps(double sinr_db, double bw_hz, int layers, const LinkConfig& config = {});

/// bw * layers * mod_bits * code_rate_max * (1 - overhead).
double peak_rate_bps(double bw_hz, int layers, int mod_bits, double overhead_fraction,
                     double code_rate_max = kCodeRateMax);

} // namespace skycell::linkrate
