#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace skycell {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Per-cell radio configuration shared by every sector of a layout.
struct CellTemplate {
  double tx_power_dbm = 46.0;
  double fc_ghz = 2.0;
  double bw_hz = 20e6;
  double downtilt_deg = 6.0;
  double bs_height_m = 25.0;
};

struct Cell {
  int cell_id = 0;
  int site_index = 0;
  double azimuth_deg = 0.0;
  double downtilt_deg = 0.0;
  double tx_power_dbm = 0.0;
  double fc_ghz = 0.0;
  double bw_hz = 0.0;
};

struct NetworkLayout {
  std::vector<Point2> sites;
  double isd_m = 0.0;
  double bs_height_m = 0.0;
  int rings = 0;
  std::vector<Cell> cells;

  /// Radius of the disc UEs are dropped in (center site's dominance area).
  double serving_radius_m() const;
};

enum class UeClass { Indoor, Outdoor, Aerial };

std::string_view to_string(UeClass c);
UeClass parse_ue_class(std::string_view text);

inline constexpr double kGroundUeHeightM = 1.5;

struct UeDrop {
  Point3 position;
  UeClass ue_class = UeClass::Outdoor;
  int drop_index = 0;
};

/// Drop counts. Aerial drops are placed `aerial_per_height` times at each height.
struct PlacementSpec {
  int indoor = 0;
  int outdoor = 0;
  int aerial_per_height = 0;
  std::vector<double> aerial_heights_m;

  static PlacementSpec defaults();
  int total() const;
};

inline constexpr double kMinHorizontalDistanceM = 35.0;

/// Sites ordered ring by ring, then by polar angle in [0, 2pi); three sectors per
/// site at azimuths 0/120/240.
NetworkLayout build_hex_layout(int rings, double isd_m, const CellTemplate& cell);

/// Indoor drops first, then outdoor, then aerial grouped by height. Each drop's
/// position comes from its own substream so the list is order-independent.
std::vector<UeDrop> place_ues(const NetworkLayout& layout, const PlacementSpec& spec,
                              std::uint64_t seed);

void write_layout_csv(std::ostream& out, const NetworkLayout& layout);

} // namespace skycell
