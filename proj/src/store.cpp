#include <fstream>
#include <sstream>

#include <json.hpp>

#include "warpgate/band_io.hpp"
#include "warpgate/error.hpp"
#include "warpgate/verification.hpp"

namespace warpgate {

using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::Schema, where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::Schema, where + "." + key + ": missing field");
  return *it;
}

std::size_t as_count(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw Error(ErrorKind::Schema, where + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

double as_real(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorKind::Schema, where + ": expected a number");
  return v.get<double>();
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw Error(ErrorKind::Schema, where + ": expected an array");
  return v;
}

json band_json(const BandConstraint& band) {
  return json{{"length", band.size()}, {"radii", std::vector<int>(band.radii().begin(), band.radii().end())}};
}

BandConstraint band_of(const json& obj, const std::string& where) {
  const std::size_t length = as_count(field(obj, "length", where), where + ".length");
  const json& radii = as_array(field(obj, "radii", where), where + ".radii");
  if (radii.size() != length) {
    throw Error(ErrorKind::Schema, where + ".radii: has " + std::to_string(radii.size()) + " entries, length says " +
                                       std::to_string(length));
  }
  std::vector<int> r;
  r.reserve(length);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    r.push_back(static_cast<int>(as_count(radii[i], where + ".radii[" + std::to_string(i) + "]")));
  }
  try {
    return BandConstraint(std::move(r));
  } catch (const Error& e) {
    throw Error(ErrorKind::Schema, where + ": " + e.detail());
  }
}

TimeSeries series_of(const json& arr, const std::string& where) {
  as_array(arr, where);
  std::vector<double> v;
  v.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v.push_back(as_real(arr[i], where + "[" + std::to_string(i) + "]"));
  try {
    return TimeSeries(std::move(v));
  } catch (const Error& e) {
    throw Error(ErrorKind::Schema, where + ": " + e.detail());
  }
}

}  // namespace

std::string band_to_json(const BandConstraint& band) { return band_json(band).dump() + "\n"; }

BandConstraint band_from_json(const std::string& text) { return band_of(parse_json(text), "band"); }

void write_band(const std::filesystem::path& path, const BandConstraint& band) { spit(path, band_to_json(band)); }

BandConstraint read_band(const std::filesystem::path& path) {
  try {
    return band_from_json(slurp(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

std::string class_bands_to_json(const ClassBands& bands) {
  json out = json::object();
  for (const auto& [label, band] : bands) out[label] = band_json(band);
  return out.dump() + "\n";
}

std::string profiles_to_json(std::span<const UserProfile> profiles) {
  json users = json::array();
  std::size_t series_len = profiles.empty() ? 0 : profiles.front().band.size();
  for (const auto& p : profiles) {
    json templates = json::array();
    for (const auto& t : p.templates) templates.push_back(std::vector<double>(t.values().begin(), t.values().end()));
    users.push_back({{"id", p.user_id}, {"templates", templates}, {"band", band_json(p.band)}, {"theta", p.theta}});
  }
  return json{{"series_len", series_len}, {"users", users}}.dump() + "\n";
}

std::vector<UserProfile> profiles_from_json(const std::string& text) {
  const json doc = parse_json(text);
  const std::size_t series_len = as_count(field(doc, "series_len", "store"), "store.series_len");
  const json& users = as_array(field(doc, "users", "store"), "store.users");
  std::vector<UserProfile> out;
  for (std::size_t u = 0; u < users.size(); ++u) {
    const std::string where = "store.users[" + std::to_string(u) + "]";
    const json& id = field(users[u], "id", where);
    if (!id.is_string() || id.get<std::string>().empty()) {
      throw Error(ErrorKind::Schema, where + ".id: expected a non-empty string");
    }
    const json& tmpl = as_array(field(users[u], "templates", where), where + ".templates");
    std::vector<TimeSeries> templates;
    for (std::size_t t = 0; t < tmpl.size(); ++t) {
      templates.push_back(series_of(tmpl[t], where + ".templates[" + std::to_string(t) + "]"));
      if (templates.back().size() != series_len) {
        throw Error(ErrorKind::Schema, where + ".templates[" + std::to_string(t) + "]: length differs from series_len");
      }
    }
    if (templates.size() < 2) throw Error(ErrorKind::Schema, where + ".templates: need at least 2 templates");
    BandConstraint band = band_of(field(users[u], "band", where), where + ".band");
    if (band.size() != series_len) throw Error(ErrorKind::Schema, where + ".band: length differs from series_len");
    const double theta = as_real(field(users[u], "theta", where), where + ".theta");
    if (!(theta > 0.0)) throw Error(ErrorKind::Schema, where + ".theta: must be positive");
    out.push_back(UserProfile{id.get<std::string>(), std::move(templates), std::move(band), theta});
  }
  return out;
}

void save_profiles(const std::filesystem::path& path, std::span<const UserProfile> profiles) {
  spit(path, profiles_to_json(profiles));
}

std::vector<UserProfile> load_profiles(const std::filesystem::path& path) {
  try {
    return profiles_from_json(slurp(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

}  // namespace warpgate
