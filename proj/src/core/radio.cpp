#include "skycell/radio.hpp"

#include "skycell/error.hpp"
#include "skycell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "csv_format.hpp"

namespace skycell {

void ChannelParams::validate() const {
  if (shadow_sigma_los_db < 0.0 || shadow_sigma_nlos_db < 0.0)
    throw Error(ErrorKind::InvalidArgument, "shadowing sigmas must be >= 0");
  if (n_subcarriers <= 0) throw Error(ErrorKind::InvalidArgument, "n_subcarriers must be > 0");
  if (!std::isfinite(indoor_penetration_db) || !std::isfinite(ue_noise_figure_db))
    throw Error(ErrorKind::InvalidArgument, "channel parameters must be finite");
}

namespace radio {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double wrap_degrees(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  return w - 180.0;
}

double los_probability(double d2d_m, double h_ut_m) {
  if (!(h_ut_m >= kGroundUeHeightM))
    throw Error(ErrorKind::Domain, "UE height must be >= 1.5 m, got " + std::to_string(h_ut_m));
  if (!(d2d_m >= 0.0)) throw Error(ErrorKind::Domain, "2D distance must be >= 0");
  if (h_ut_m >= kAlwaysLosHeightM) return 1.0;

  double d1 = 18.0;
  double p1 = 63.0;
  if (h_ut_m > kGroundModelMaxHeightM) {
    const double lh = std::log10(h_ut_m);
    p1 = 4300.0 * lh - 3800.0;
    d1 = std::max(460.0 * lh - 700.0, 18.0);
  }
  if (d2d_m <= d1) return 1.0;
  return d1 / d2d_m + std::exp(-d2d_m / p1) * (1.0 - d1 / d2d_m);
}

double pathloss_db(double d3d_m, double fc_ghz, double h_ut_m, bool los) {
  if (!(d3d_m >= kMinPathlossDistanceM))
    throw Error(ErrorKind::Domain,
                "3D distance must be >= 10 m, got " + std::to_string(d3d_m));
  if (!(fc_ghz > 0.0)) throw Error(ErrorKind::Domain, "carrier frequency must be > 0");
  if (!(h_ut_m >= kGroundUeHeightM))
    throw Error(ErrorKind::Domain, "UE height must be >= 1.5 m");

  const double pl_los = 28.0 + 22.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz);
  if (los) return pl_los;

  double pl_nlos = 0.0;
  if (h_ut_m <= kGroundModelMaxHeightM) {
    pl_nlos = 13.54 + 39.08 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz) -
              0.6 * (h_ut_m - 1.5);
  } else {
    pl_nlos = -17.5 + (46.0 - 7.0 * std::log10(h_ut_m)) * std::log10(d3d_m) +
              20.0 * std::log10(40.0 * std::numbers::pi * fc_ghz / 3.0);
  }
  return std::max(pl_los, pl_nlos);
}

double antenna_gain_dbi(double azimuth_off_deg, double elevation_deg, double downtilt_deg) {
  const double h = azimuth_off_deg / 65.0;
  const double v = (elevation_deg - downtilt_deg) / 10.0;
  const double a_h = -std::min(12.0 * h * h, 30.0);
  const double a_v = -std::min(12.0 * v * v, 30.0);
  const double a = -std::min(-(a_h + a_v), 30.0);
  return kMaxAntennaGainDbi + a;
}

double noise_power_dbm(double bw_hz, double noise_figure_db) {
  if (!(bw_hz > 0.0)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be > 0");
  return -174.0 + 10.0 * std::log10(bw_hz) + noise_figure_db;
}

} // namespace radio

void sort_measurements(std::vector<PerCellMeasurement>& cells) {
  std::sort(cells.begin(), cells.end(), [](const PerCellMeasurement& a, const PerCellMeasurement& b) {
    if (a.rsrp_dbm != b.rsrp_dbm) return a.rsrp_dbm > b.rsrp_dbm;
    return a.cell_id < b.cell_id;
  });
}

RadioSample compute_sample(const NetworkLayout& layout, const UeDrop& drop,
                           const ChannelParams& params, std::uint64_t seed) {
  if (layout.cells.empty()) throw Error(ErrorKind::InvalidArgument, "layout has no cells");
  params.validate();

  const double rsrp_offset = 10.0 * std::log10(static_cast<double>(params.n_subcarriers));
  const double bw_hz = layout.cells.front().bw_hz;
  const double noise_mw = radio::db_to_linear(radio::noise_power_dbm(bw_hz, params.ue_noise_figure_db));
  const double h_ut = drop.position.z;
  const bool indoor = drop.ue_class == UeClass::Indoor;

  RadioSample sample;
  sample.drop = drop;
  sample.cells.reserve(layout.cells.size());
  std::vector<double> rx_mw(layout.cells.size());

  for (std::size_t i = 0; i < layout.cells.size(); ++i) {
    const Cell& cell = layout.cells[i];
    const Point2& site = layout.sites[static_cast<std::size_t>(cell.site_index)];
    const double dx = drop.position.x - site.x;
    const double dy = drop.position.y - site.y;
    const double dz = layout.bs_height_m - h_ut;
    const double d2d = std::hypot(dx, dy);
    const double d3d = std::hypot(d2d, dz);

    rng::Stream stream(rng::derive_seed(seed, "radio", static_cast<std::uint64_t>(drop.drop_index),
                                        static_cast<std::uint64_t>(cell.cell_id)));
    const double coin = stream.uniform();
    const double shadow_unit = stream.normal();
    const bool los = !indoor && coin < radio::los_probability(d2d, h_ut);
    const double sigma = los ? params.shadow_sigma_los_db : params.shadow_sigma_nlos_db;

    const double bearing = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
    const double az_off = radio::wrap_degrees(bearing - cell.azimuth_deg);
    const double elevation = std::atan2(dz, d2d) * 180.0 / std::numbers::pi;
    const double gain = radio::antenna_gain_dbi(az_off, elevation, cell.downtilt_deg);

    double rx = cell.tx_power_dbm + gain - radio::pathloss_db(d3d, cell.fc_ghz, h_ut, los) -
                sigma * shadow_unit;
    if (indoor) rx -= params.indoor_penetration_db;

    rx_mw[i] = radio::db_to_linear(rx);
    sample.cells.push_back(PerCellMeasurement{cell.cell_id, rx - rsrp_offset, rx, los});
  }

  double total_mw = noise_mw;
  for (double p : rx_mw) total_mw += p;
  sample.rssi_dbm = radio::linear_to_db(total_mw);

  sort_measurements(sample.cells);
  const auto& serving = sample.cells.front();
  sample.serving_cell_id = serving.cell_id;
  const double serving_mw = radio::db_to_linear(serving.rx_power_dbm);
  double interference_mw = noise_mw;
  for (std::size_t i = 0; i < layout.cells.size(); ++i) {
    if (layout.cells[i].cell_id != serving.cell_id) interference_mw += rx_mw[i];
  }
  sample.sinr_db = radio::linear_to_db(serving_mw / interference_mw);
  return sample;
}

void write_radio_csv_header(std::ostream& out) {
  out << "drop_index,ue_class,height_m,serving_cell_id,sinr_db,rssi_dbm";
  for (int k = 1; k <= 8; ++k) out << ",rsrp_" << k;
  out << '\n';
}

void write_radio_csv_row(std::ostream& out, const RadioSample& s) {
  out << s.drop.drop_index << ',' << to_string(s.drop.ue_class) << ','
      << csv::num(s.drop.position.z) << ',' << s.serving_cell_id << ',' << csv::num(s.sinr_db)
      << ',' << csv::num(s.rssi_dbm);
  for (std::size_t k = 0; k < 8; ++k) {
    out << ',';
    if (k < s.cells.size()) out << csv::num(s.cells[k].rsrp_dbm);
  }
  out << '\n';
}

} // namespace skycell
