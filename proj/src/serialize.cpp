#include "rankbandit/serialize.hpp"

#include <algorithm>
#include <cstring>

#include "rankbandit/errors.hpp"

namespace rankbandit {
namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

const json& field(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing required key");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    bad(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

Vec vec(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

std::vector<Vec> vecs(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of arrays");
  std::vector<Vec> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(vec(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void optional_number(const json& j, const char* key, const std::string& path,
                     double& out) {
  if (auto it = j.find(key); it != j.end()) out = number(*it, path + "." + key);
}

}  // namespace

void expect_object(const json& j, std::initializer_list<const char*> allowed,
                   const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) {
      return item.key() == k;
    });
    if (!known) bad(path + "." + item.key(), "unknown key");
  }
}

json to_json(const BoundParams& b) {
  return json{{"m1", b.m1}, {"m2", b.m2},       {"m3", b.m3},         {"c1", b.c1},
              {"c2", b.c2}, {"delta", b.delta}, {"lambda", b.lambda}};
}

json to_json(const NoiseSpec& n) {
  return json{{"gaussian_sd", n.gaussian_sd}, {"laplace_scale", n.laplace_scale}};
}

json to_json(const WindowSpec& w) { return json{{"S", w.S}, {"weights", w.weights}}; }

json to_json(const EnvironmentSpec& env) {
  json links = json::array();
  for (const auto& l : env.links) links.push_back(std::string(link_name(l.kind)));
  return json{{"d", env.d},
              {"K", env.K},
              {"L", env.L},
              {"theta", env.theta},
              {"w", env.w},
              {"arms", {{"count", env.arms.count()}, {"vectors", env.arms.vectors}, {"v0", env.arms.v0}}},
              {"links", links},
              {"noise", to_json(env.noise)},
              {"bounds", to_json(env.bounds)}};
}

BoundParams bounds_from_json(const json& j, const std::string& path, BoundParams base) {
  expect_object(j, {"m1", "m2", "m3", "c1", "c2", "delta", "lambda"}, path);
  optional_number(j, "m1", path, base.m1);
  optional_number(j, "m2", path, base.m2);
  optional_number(j, "m3", path, base.m3);
  optional_number(j, "c1", path, base.c1);
  optional_number(j, "c2", path, base.c2);
  optional_number(j, "delta", path, base.delta);
  optional_number(j, "lambda", path, base.lambda);
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
  return base;
}

NoiseSpec noise_from_json(const json& j, const std::string& path) {
  expect_object(j, {"gaussian_sd", "laplace_scale"}, path);
  NoiseSpec n;
  optional_number(j, "gaussian_sd", path, n.gaussian_sd);
  optional_number(j, "laplace_scale", path, n.laplace_scale);
  try {
    n.validate();
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
  return n;
}

WindowSpec window_from_json(const json& j, const std::string& path) {
  expect_object(j, {"S", "weights"}, path);
  WindowSpec w;
  w.S = count(field(j, "S", path), path + ".S");
  if (auto it = j.find("weights"); it != j.end()) w.weights = vecs(*it, path + ".weights");
  return w;
}

EnvironmentSpec environment_from_json(const json& j, const std::string& path) {
  expect_object(j, {"d", "K", "L", "theta", "w", "arms", "links", "noise", "bounds"}, path);
  EnvironmentSpec env;
  env.d = count(field(j, "d", path), path + ".d");
  env.K = count(field(j, "K", path), path + ".K");
  env.L = count(field(j, "L", path), path + ".L");
  env.theta = vecs(field(j, "theta", path), path + ".theta");
  env.w = vec(field(j, "w", path), path + ".w");

  const std::string arms_path = path + ".arms";
  const json& arms = field(j, "arms", path);
  expect_object(arms, {"count", "vectors", "v0"}, arms_path);
  env.arms.vectors = vecs(field(arms, "vectors", arms_path), arms_path + ".vectors");
  env.arms.v0 = vec(field(arms, "v0", arms_path), arms_path + ".v0");
  if (auto it = arms.find("count"); it != arms.end() &&
                                    count(*it, arms_path + ".count") != env.arms.count())
    bad(arms_path + ".count", "does not match the number of vectors");

  if (auto it = j.find("links"); it == j.end()) {
    env.links.assign(env.L, LinkFunction{});
  } else if (it->is_string()) {
    try {
      env.links.assign(env.L, LinkFunction{parse_link(it->get<std::string>())});
    } catch (const std::invalid_argument& e) {
      bad(path + ".links", e.what());
    }
  } else if (it->is_array()) {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& item = (*it)[i];
      const std::string p = path + ".links[" + std::to_string(i) + "]";
      if (!item.is_string()) bad(p, "expected a link name");
      try {
        env.links.push_back(LinkFunction{parse_link(item.get<std::string>())});
      } catch (const std::invalid_argument& e) {
        bad(p, e.what());
      }
    }
  } else {
    bad(path + ".links", "expected a link name or an array of link names");
  }

  if (auto it = j.find("noise"); it != j.end()) env.noise = noise_from_json(*it, path + ".noise");
  if (auto it = j.find("bounds"); it != j.end())
    env.bounds = bounds_from_json(*it, path + ".bounds");
  try {
    env.validate();
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
  return env;
}

std::string dump_environment(const EnvironmentSpec& env) { return to_json(env).dump(2); }

EnvironmentSpec parse_environment(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("environment: ") + e.what());
  }
  return environment_from_json(j, "environment");
}

}  // namespace rankbandit
