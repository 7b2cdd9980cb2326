#include "mmudn/building_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mmudn/error.hpp"
#include "mmudn/text_format.hpp"

namespace mmudn {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int floors_of(const json& feature, std::size_t index) {
  const auto where = "feature " + std::to_string(index);
  if (!feature.contains("properties") || !feature["properties"].is_object() ||
      !feature["properties"].contains("floors")) {
    throw InvalidInput(where + ": missing integer 'floors' property");
  }
  const json& f = feature["properties"]["floors"];
  if (f.is_number_integer()) return f.get<int>();
  if (f.is_number_float()) {
    const double v = f.get<double>();
    if (std::floor(v) == v) return static_cast<int>(v);
  }
  throw InvalidInput(where + ": 'floors' must be an integer");
}

std::vector<Point2> ring_of(const json& rings, const std::string& where) {
  if (!rings.is_array() || rings.empty() || !rings[0].is_array()) {
    throw InvalidInput(where + ": polygon has no exterior ring");
  }
  std::vector<Point2> ring;
  for (const json& c : rings[0]) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
      throw InvalidInput(where + ": malformed coordinate");
    }
    ring.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return ring;
}

}  // namespace

std::vector<BuildingRecord> parse_geojson_buildings(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("GeoJSON parse error: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw InvalidInput("expected a GeoJSON FeatureCollection");
  }

  std::vector<BuildingRecord> records;
  const json& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& feature = features[i];
    const std::string where = "feature " + std::to_string(i);
    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw InvalidInput(where + ": missing geometry");
    }
    const json& geometry = feature["geometry"];
    const std::string type = geometry.value("type", "");
    const int floors = floors_of(feature, i);
    if (floors < 1) throw InvalidInput(where + ": 'floors' must be >= 1");

    std::vector<std::vector<Point2>> parts;
    if (type == "Polygon") {
      parts.push_back(ring_of(geometry["coordinates"], where));
    } else if (type == "MultiPolygon") {
      for (const json& poly : geometry["coordinates"]) parts.push_back(ring_of(poly, where));
    } else {
      throw InvalidInput(where + ": unsupported geometry type '" + type + "'");
    }
    for (auto& ring : parts) {
      try {
        polygon_metrics(ring);
      } catch (const InvalidInput& e) {
        throw InvalidInput(where + ": " + e.what());
      }
      records.push_back({std::move(ring), floors});
    }
  }
  return records;
}

std::vector<BuildingRecord> read_geojson_buildings(const std::filesystem::path& path) {
  try {
    return parse_geojson_buildings(slurp(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.emplace_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::vector<BuildingMetrics> parse_csv_buildings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("building CSV is empty");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"perimeter_m", "area_m2", "floors"}) {
    if (!col.count(name)) throw InvalidInput(std::string("building CSV lacks column '") + name + "'");
  }

  std::vector<BuildingMetrics> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split_csv_line(line);
    const auto field = [&](const char* name) -> const std::string& {
      const std::size_t i = col.at(name);
      if (i >= fields.size()) {
        throw InvalidInput("building CSV line " + std::to_string(line_no) + ": missing " + name);
      }
      return fields[i];
    };
    BuildingMetrics m;
    m.perimeter = parse_double(field("perimeter_m"), "perimeter_m");
    m.area = parse_double(field("area_m2"), "area_m2");
    m.floors = static_cast<int>(parse_integer(field("floors"), "floors"));
    if (m.perimeter <= 0.0 || m.area <= 0.0 || m.floors < 1) {
      throw InvalidInput("building CSV line " + std::to_string(line_no) +
                         ": perimeter, area and floors must be positive");
    }
    out.push_back(m);
  }
  return out;
}

std::vector<BuildingMetrics> read_csv_buildings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return parse_csv_buildings(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

std::string format_building_stats(const BuildingStats& stats) {
  std::ostringstream out;
  out << "avg_perimeter_m = " << format_double(stats.avg_perimeter) << '\n'
      << "avg_area_m2 = " << format_double(stats.avg_area) << '\n'
      << "coverage = " << format_double(stats.coverage) << '\n'
      << "height_log_mu = " << format_double(stats.height.mu) << '\n'
      << "height_log_sigma = " << format_double(stats.height.sigma) << '\n'
      << "bs_height_m = " << format_double(stats.bs_height) << '\n';
  return out.str();
}

BuildingStats parse_building_stats(const std::string& text) {
  std::map<std::string, double> values;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw InvalidInput("expected key = value, got '" + std::string(t) + "'");
    const std::string key(trim(t.substr(0, eq)));
    values[key] = parse_double(t.substr(eq + 1), key);
  }
  const auto get = [&](const char* key) {
    auto it = values.find(key);
    if (it == values.end()) throw InvalidInput(std::string("building stats missing '") + key + "'");
    return it->second;
  };
  BuildingStats stats;
  stats.avg_perimeter = get("avg_perimeter_m");
  stats.avg_area = get("avg_area_m2");
  stats.coverage = get("coverage");
  stats.height = {get("height_log_mu"), get("height_log_sigma")};
  stats.bs_height = get("bs_height_m");
  stats.validate();
  return stats;
}

}  // namespace mmudn
