#pragma once

// JSON form of the model types. Readers reject unknown keys and report the
// offending field path, e.g. "environment.bounds.lamda: unknown key".

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "rankbandit/model.hpp"

namespace rankbandit {

using json = nlohmann::json;

// Throws ConfigError if `j` is not an object or carries keys outside `allowed`.
void expect_object(const json& j, std::initializer_list<const char*> allowed,
                   const std::string& path);

json to_json(const BoundParams& b);
json to_json(const NoiseSpec& n);
json to_json(const WindowSpec& w);
json to_json(const EnvironmentSpec& env);

// Missing optional fields keep the defaults already present in `base`.
BoundParams bounds_from_json(const json& j, const std::string& path,
                             BoundParams base = {});
NoiseSpec noise_from_json(const json& j, const std::string& path);
WindowSpec window_from_json(const json& j, const std::string& path);
EnvironmentSpec environment_from_json(const json& j, const std::string& path);

std::string dump_environment(const EnvironmentSpec& env);
EnvironmentSpec parse_environment(const std::string& text);

}  // namespace rankbandit
