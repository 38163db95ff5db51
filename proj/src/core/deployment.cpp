#include "skycell/deployment.hpp"

#include "skycell/error.hpp"
#include "skycell/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "csv_format.hpp"

namespace skycell {

namespace {

int hex_distance(int q, int r) {
  return (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2;
}

} // namespace

double NetworkLayout::serving_radius_m() const { return isd_m / std::sqrt(3.0); }

std::string_view to_string(UeClass c) {
  switch (c) {
  case UeClass::Indoor: return "indoor";
  case UeClass::Outdoor: return "outdoor";
  case UeClass::Aerial: return "aerial";
  }
  return "unknown";
}

UeClass parse_ue_class(std::string_view text) {
  if (text == "indoor") return UeClass::Indoor;
  if (text == "outdoor") return UeClass::Outdoor;
  if (text == "aerial") return UeClass::Aerial;
  throw Error(ErrorKind::InvalidArgument, "unknown ue_class '" + std::string(text) + "'");
}

PlacementSpec PlacementSpec::defaults() {
  return PlacementSpec{200, 200, 100, {15.0, 30.0, 60.0, 100.0, 200.0, 300.0}};
}

int PlacementSpec::total() const {
  return indoor + outdoor + aerial_per_height * static_cast<int>(aerial_heights_m.size());
}

NetworkLayout build_hex_layout(int rings, double isd_m, const CellTemplate& cell) {
  if (rings < 0) throw Error(ErrorKind::InvalidArgument, "rings must be >= 0");
  if (!(isd_m > 0.0)) throw Error(ErrorKind::InvalidArgument, "isd_m must be > 0");
  if (!(cell.tx_power_dbm > 0.0) || !(cell.fc_ghz > 0.0) || !(cell.bw_hz > 0.0))
    throw Error(ErrorKind::InvalidArgument, "tx_power_dbm, fc_ghz and bw_hz must be > 0");
  if (!(cell.bs_height_m > 0.0))
    throw Error(ErrorKind::InvalidArgument, "bs_height_m must be > 0");

  struct Candidate {
    int ring;
    double angle;
    Point2 pos;
  };
  std::vector<Candidate> candidates;
  const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  for (int q = -rings; q <= rings; ++q) {
    for (int r = -rings; r <= rings; ++r) {
      const int ring = hex_distance(q, r);
      if (ring > rings) continue;
      // Axial lattice with unit spacing isd: adjacent sites are exactly isd apart.
      const Point2 pos{isd_m * (q + 0.5 * r), isd_m * half_sqrt3 * r};
      double angle = std::atan2(pos.y, pos.x);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      candidates.push_back({ring, ring == 0 ? 0.0 : angle, pos});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.ring != b.ring) return a.ring < b.ring;
    return a.angle < b.angle;
  });

  NetworkLayout layout;
  layout.isd_m = isd_m;
  layout.bs_height_m = cell.bs_height_m;
  layout.rings = rings;
  layout.sites.reserve(candidates.size());
  for (const auto& c : candidates) layout.sites.push_back(c.pos);

  int cell_id = 0;
  for (int s = 0; s < static_cast<int>(layout.sites.size()); ++s) {
    for (int sector = 0; sector < 3; ++sector) {
      layout.cells.push_back(Cell{cell_id++, s, 120.0 * sector, cell.downtilt_deg,
                                  cell.tx_power_dbm, cell.fc_ghz, cell.bw_hz});
    }
  }
  return layout;
}

std::vector<UeDrop> place_ues(const NetworkLayout& layout, const PlacementSpec& spec,
                              std::uint64_t seed) {
  if (layout.sites.empty() || layout.cells.empty())
    throw Error(ErrorKind::InvalidArgument, "layout has no sites");
  if (spec.indoor < 0 || spec.outdoor < 0 || spec.aerial_per_height < 0)
    throw Error(ErrorKind::InvalidArgument, "drop counts must be >= 0");
  for (double h : spec.aerial_heights_m) {
    if (!(h > kGroundUeHeightM))
      throw Error(ErrorKind::InvalidArgument,
                  "aerial heights must be > 1.5 m, got " + std::to_string(h));
  }

  const double radius = layout.serving_radius_m();
  const double min_d = std::min(kMinHorizontalDistanceM, 0.5 * radius);
  std::vector<UeDrop> drops;
  drops.reserve(static_cast<std::size_t>(spec.total()));

  auto place = [&](UeClass cls, double z) {
    const int index = static_cast<int>(drops.size());
    rng::Stream stream(rng::derive_seed(seed, "place", static_cast<std::uint64_t>(index)));
    Point2 p;
    for (;;) {
      p.x = stream.uniform(-radius, radius);
      p.y = stream.uniform(-radius, radius);
      const double d = std::hypot(p.x, p.y);
      if (d <= radius && d >= min_d) break;
    }
    drops.push_back(UeDrop{{p.x, p.y, z}, cls, index});
  };

  for (int i = 0; i < spec.indoor; ++i) place(UeClass::Indoor, kGroundUeHeightM);
  for (int i = 0; i < spec.outdoor; ++i) place(UeClass::Outdoor, kGroundUeHeightM);
  for (double h : spec.aerial_heights_m)
    for (int i = 0; i < spec.aerial_per_height; ++i) place(UeClass::Aerial, h);
  return drops;
}

void write_layout_csv(std::ostream& out, const NetworkLayout& layout) {
  out << "cell_id,site_index,site_x_m,site_y_m,azimuth_deg,downtilt_deg,tx_power_dbm,fc_ghz,bw_hz\n";
  for (const auto& c : layout.cells) {
    const auto& site = layout.sites[static_cast<std::size_t>(c.site_index)];
    out << c.cell_id << ',' << c.site_index << ',' << csv::num(site.x) << ','
        << csv::num(site.y) << ',' << csv::num(c.azimuth_deg) << ','
        << csv::num(c.downtilt_deg) << ',' << csv::num(c.tx_power_dbm) << ','
        << csv::num(c.fc_ghz) << ',' << csv::num(c.bw_hz) << '\n';
  }
}

} // namespace skycell
