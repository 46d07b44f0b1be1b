#include "qedcs_app/config.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qedcs/errors.hpp"

namespace qedcs::app {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config " + path + ": " + what);
}

const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

}  // namespace

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string ExperimentConfig::hash() const {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(raw.dump());
  return os.str();
}

double get_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_number(j, key, path);
}

int get_int(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

int get_int_or(const json& j, const std::string& key, int fallback, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get_int(j, key, path);
}

std::string get_string(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_array() || v.empty()) fail(path + "." + key, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) fail(path + "." + key, "expected a non-empty array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> get_ints(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_array() || v.empty()) fail(path + "." + key, "expected a non-empty array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(path + "." + key, "expected a non-empty array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

FourVector get_four_vector(const json& j, const std::string& key, const std::string& path) {
  const std::vector<double> v = get_numbers(j, key, path);
  if (v.size() != 4) fail(path + "." + key, "expected 4 components");
  return FourVector(v[0], v[1], v[2], v[3]);
}

Vec3 get_vec3(const json& j, const std::string& key, const std::string& path) {
  const std::vector<double> v = get_numbers(j, key, path);
  if (v.size() != 3) fail(path + "." + key, "expected 3 components");
  return Vec3(v[0], v[1], v[2]);
}

SurfacePtr parse_surface(const json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  if (type == "flat") return std::make_shared<FlatSurface>(get_number_or(j, "t0", 0.0, path));
  Vec3 center = Vec3::Zero();
  if (j.contains("center")) center = get_vec3(j, "center", path);
  if (type == "gaussian_bump")
    return std::make_shared<GaussianBumpSurface>(get_number(j, "height", path), get_number(j, "width", path), center);
  if (type == "tilted_bump")
    return std::make_shared<TiltedBumpSurface>(get_number(j, "slope", path), get_number(j, "width", path),
                                               get_int_or(j, "axis", 1, path));
  fail(path + ".type", "unknown surface '" + type + "' (flat, gaussian_bump, tilted_bump)");
}

FamilyPtr parse_family(const json& j, const std::string& path) {
  const std::string type = get_string(j, "type", path);
  if (type == "static") return std::make_shared<StaticFamily>(parse_surface(member(j, "surface", path), path + ".surface"));
  if (type == "flat_translation") return std::make_shared<FlatTranslationFamily>();
  if (type == "bump_interpolation") {
    Vec3 center = Vec3::Zero();
    if (j.contains("center")) center = get_vec3(j, "center", path);
    return std::make_shared<BumpInterpolationFamily>(get_number(j, "height", path), get_number(j, "width", path),
                                                     center);
  }
  fail(path + ".type", "unknown family '" + type + "' (static, flat_translation, bump_interpolation)");
}

std::shared_ptr<BumpField> parse_field(const json& j, const std::string& path) {
  const json& terms = member(j, "terms", path);
  if (!terms.is_array()) fail(path + ".terms", "expected an array");
  std::vector<BumpField::Term> out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string p = path + ".terms[" + std::to_string(k) + "]";
    BumpField::Term t;
    t.amplitude = get_four_vector(terms[k], "amplitude", p);
    t.bump.center = get_four_vector(terms[k], "center", p);
    t.bump.radius = get_number(terms[k], "radius", p);
    if (!(t.bump.radius > 0.0)) fail(p + ".radius", "must be positive");
    out.push_back(t);
  }
  return std::make_shared<BumpField>(std::move(out));
}

GaugeFunction parse_gauge(const json& j, const std::string& path) {
  const json& terms = member(j, "terms", path);
  if (!terms.is_array()) fail(path + ".terms", "expected an array");
  std::vector<GaugeFunction::Term> out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string p = path + ".terms[" + std::to_string(k) + "]";
    GaugeFunction::Term t;
    t.amplitude = get_number(terms[k], "amplitude", p);
    t.bump.center = get_four_vector(terms[k], "center", p);
    t.bump.radius = get_number(terms[k], "radius", p);
    if (!(t.bump.radius > 0.0)) fail(p + ".radius", "must be positive");
    out.push_back(t);
  }
  return GaugeFunction(std::move(out));
}

QuadratureRule parse_rule(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) return QuadratureRule::Midpoint;
  const std::string r = get_string(j, key, path);
  if (r == "midpoint") return QuadratureRule::Midpoint;
  if (r == "gauss") return QuadratureRule::Gauss;
  fail(path + "." + key, "expected 'midpoint' or 'gauss'");
}

const json& section(const ExperimentConfig& c, const std::string& name) { return member(c.raw, name, "$"); }

ExperimentConfig config_from_json(json j, const std::string& source_dir, bool quick,
                                  std::optional<std::uint64_t> seed) {
  if (!j.is_object()) fail("$", "expected an object");
  if (get_int(j, "schema_version", "$") != kSchemaVersion)
    fail("$.schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  if (quick && j.contains("quick")) {
    if (!j["quick"].is_object()) fail("$.quick", "expected an object");
    j.merge_patch(j["quick"]);
  }
  j.erase("quick");
  if (seed) j["seed"] = *seed;
  j["profile"] = quick ? "quick" : "default";
  ExperimentConfig c;
  c.source_dir = source_dir;
  c.quick = quick;
  c.mass = get_number_or(j, "mass", 1.0, "$");
  if (!(c.mass > 0.0)) fail("$.mass", "must be positive");
  if (!j.contains("seed") || !j["seed"].is_number_unsigned()) fail("$.seed", "expected a non-negative integer");
  c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("u")) {
    c.u = get_four_vector(j, "u", "$");
    if (!(c.u[0] < 0.0) || minkowski_dot(c.u, c.u) <= 0.0) fail("$.u", "must be past-directed time-like");
  }
  c.raw = std::move(j);
  return c;
}

ExperimentConfig load_config(const std::string& path, bool quick, std::optional<std::uint64_t> seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  const std::string dir = std::filesystem::absolute(path).parent_path().string();
  return config_from_json(std::move(j), dir, quick, seed);
}

}  // namespace qedcs::app
