#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qedcs/field.hpp"
#include "qedcs/operators.hpp"
#include "qedcs/surface.hpp"

namespace qedcs::app {

inline constexpr int kSchemaVersion = 1;

// Experiment configuration after validation.  The raw JSON (with the quick
// profile merged and the seed applied) is kept for hashing and reports.
struct ExperimentConfig {
  nlohmann::json raw;
  std::string source_dir;  // directory of the config file, for relative data paths
  double mass = 1.0;
  std::uint64_t seed = 1;
  FourVector u = FourVector(-1.0, 0.0, 0.0, 0.0);
  bool quick = false;

  std::string hash() const;  // FNV-1a 64 of the canonical JSON, hex
};

// Reads, merges the "quick" section when requested, applies the seed override
// and validates the common fields.  Throws ConfigError with a JSON-path diagnostic.
ExperimentConfig load_config(const std::string& path, bool quick, std::optional<std::uint64_t> seed);
ExperimentConfig config_from_json(nlohmann::json j, const std::string& source_dir, bool quick,
                                  std::optional<std::uint64_t> seed);

// Typed accessors with JSON-path diagnostics.
const nlohmann::json& section(const ExperimentConfig& c, const std::string& name);
double get_number(const nlohmann::json& j, const std::string& key, const std::string& path);
double get_number_or(const nlohmann::json& j, const std::string& key, double fallback, const std::string& path);
int get_int(const nlohmann::json& j, const std::string& key, const std::string& path);
int get_int_or(const nlohmann::json& j, const std::string& key, int fallback, const std::string& path);
std::string get_string(const nlohmann::json& j, const std::string& key, const std::string& path);
std::vector<double> get_numbers(const nlohmann::json& j, const std::string& key, const std::string& path);
std::vector<int> get_ints(const nlohmann::json& j, const std::string& key, const std::string& path);
FourVector get_four_vector(const nlohmann::json& j, const std::string& key, const std::string& path);
Vec3 get_vec3(const nlohmann::json& j, const std::string& key, const std::string& path);

SurfacePtr parse_surface(const nlohmann::json& j, const std::string& path);
FamilyPtr parse_family(const nlohmann::json& j, const std::string& path);
// {"terms": [{"amplitude": [c0..c3], "center": [x0..x3], "radius": R}, ...]}
std::shared_ptr<BumpField> parse_field(const nlohmann::json& j, const std::string& path);
// {"terms": [{"amplitude": a, "center": [...], "radius": R}, ...]}
GaugeFunction parse_gauge(const nlohmann::json& j, const std::string& path);
QuadratureRule parse_rule(const nlohmann::json& j, const std::string& key, const std::string& path);

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& data);

}  // namespace qedcs::app
