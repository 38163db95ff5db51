#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "skycell/deployment.hpp"

namespace skycell {

struct ChannelParams {
  double shadow_sigma_los_db = 4.0;
  double shadow_sigma_nlos_db = 6.0;
  double indoor_penetration_db = 20.0;
  double ue_noise_figure_db = 9.0;
  int n_subcarriers = 1200; // 100 RBs x 12 subcarriers at 20 MHz

  void validate() const;
};

struct PerCellMeasurement {
  int cell_id = 0;
  double rsrp_dbm = 0.0;
  double rx_power_dbm = 0.0;
  bool los = false;
};

struct RadioSample {
  UeDrop drop;
  std::vector<PerCellMeasurement> cells; // descending RSRP, ties by ascending cell_id
  double rssi_dbm = 0.0;
  int serving_cell_id = 0;
  double sinr_db = 0.0;
};

namespace radio {

inline constexpr double kGroundModelMaxHeightM = 22.5;
inline constexpr double kAlwaysLosHeightM = 100.0;
inline constexpr double kMinPathlossDistanceM = 10.0;
inline constexpr double kMaxAntennaGainDbi = 8.0;

/// LOS probability of the urban-macro family with the aerial extension above 22.5 m.
double los_probability(double d2d_m, double h_ut_m);

/// Pathloss in dB. NLOS is clamped to never fall below LOS at the same geometry.
double pathloss_db(double d3d_m, double fc_ghz, double h_ut_m, bool los);

/// Sector pattern: 65 deg horizontal / 10 deg vertical half-power beamwidths,
/// 30 dB front-to-back and sidelobe floors. Elevation is the depression angle
/// below the horizon as seen from the BS.
double antenna_gain_dbi(double azimuth_off_deg, double elevation_deg, double downtilt_deg);

/// Thermal noise over `bw_hz` plus receiver noise figure.
double noise_power_dbm(double bw_hz, double noise_figure_db);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Wraps an angle to [-180, 180].
double wrap_degrees(double deg);

} // namespace radio

/// One snapshot for a UE: all cells transmit full-buffer. Randomness is drawn per
/// (seed, drop_index, cell_id).
RadioSample compute_sample(const NetworkLayout& layout, const UeDrop& drop,
                           const ChannelParams& params, std::uint64_t seed);

/// Sorts by descending RSRP, ties by ascending cell_id.
void sort_measurements(std::vector<PerCellMeasurement>& cells);

void write_radio_csv_header(std::ostream& out);
void write_radio_csv_row(std::ostream& out, const RadioSample& sample);

} // namespace skycell
