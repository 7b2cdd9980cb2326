#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mmudn/blockage.hpp"

namespace mmudn {

/// Parses a GeoJSON FeatureCollection of Polygon / MultiPolygon features, each carrying an
/// integer `floors` property. Coordinates must be in a metric projected CRS. Only exterior
/// rings are used; each MultiPolygon part becomes its own record. Self-intersecting or
/// degenerate footprints are rejected with the offending feature index.
std::vector<BuildingRecord> parse_geojson_buildings(const std::string& text);
std::vector<BuildingRecord> read_geojson_buildings(const std::filesystem::path& path);

/// Parses CSV with a header row containing `perimeter_m`, `area_m2` and `floors` columns
/// (any order, extra columns ignored).
std::vector<BuildingMetrics> parse_csv_buildings(std::istream& in);
std::vector<BuildingMetrics> read_csv_buildings(const std::filesystem::path& path);

/// Flat `key = value` text for CLI interchange; round-trips exactly.
std::string format_building_stats(const BuildingStats& stats);
BuildingStats parse_building_stats(const std::string& text);

}  // namespace mmudn
