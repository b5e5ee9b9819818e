#include "rankbandit/config.hpp"

#include <fstream>
#include <sstream>

#include "rankbandit/errors.hpp"
#include "rankbandit/serialize.hpp"

namespace rankbandit {
namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

std::size_t count_at(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

bool bool_at(const json& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected true or false");
  return j.get<bool>();
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

template <class F>
void with(const json& j, const char* key, const std::string& path, F f) {
  if (auto it = j.find(key); it != j.end()) f(*it, path.empty() ? std::string(key) : path + "." + key);
}

GeneratorParams generator_from_json(const json& j, const std::string& path) {
  expect_object(j, {"d", "K", "L", "w_max", "env_seed", "fixed_env", "link"}, path);
  GeneratorParams g;
  with(j, "d", path, [&](const json& v, const std::string& p) { g.d = count_at(v, p); });
  with(j, "K", path, [&](const json& v, const std::string& p) { g.K = count_at(v, p); });
  with(j, "L", path, [&](const json& v, const std::string& p) { g.L = count_at(v, p); });
  with(j, "w_max", path, [&](const json& v, const std::string& p) { g.w_max = number_at(v, p); });
  with(j, "env_seed", path, [&](const json& v, const std::string& p) { g.env_seed = count_at(v, p); });
  with(j, "fixed_env", path, [&](const json& v, const std::string& p) { g.fixed_env = bool_at(v, p); });
  with(j, "link", path, [&](const json& v, const std::string& p) {
    try {
      g.link = parse_link(string_at(v, p));
    } catch (const std::invalid_argument& e) {
      bad(p, e.what());
    }
  });
  return g;
}

AgentConfig agent_from_json(const json& j, const std::string& path, const BoundParams& base) {
  AgentConfig a;
  a.bounds = base;
  auto kind = [&](const json& v, const std::string& p) {
    try {
      a.kind = parse_agent(string_at(v, p));
    } catch (const std::invalid_argument& e) {
      bad(p, e.what());
    }
  };
  if (j.is_string()) {
    kind(j, path);
  } else {
    expect_object(j, {"kind", "label", "bounds", "window", "forbid_adjacent_repeat"}, path);
    auto it = j.find("kind");
    if (it == j.end()) bad(path + ".kind", "missing required key");
    kind(*it, path + ".kind");
    with(j, "label", path, [&](const json& v, const std::string& p) { a.label = string_at(v, p); });
    with(j, "bounds", path, [&](const json& v, const std::string& p) { a.bounds = bounds_from_json(v, p, base); });
    with(j, "window", path, [&](const json& v, const std::string& p) { a.window = window_from_json(v, p); });
    with(j, "forbid_adjacent_repeat", path,
         [&](const json& v, const std::string& p) { a.forbid_adjacent_repeat = bool_at(v, p); });
  }
  if (a.kind == AgentKind::win_rank_ucb && !a.window) a.window = WindowSpec{};
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
  return a;
}

std::vector<double> numbers_at(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  expect_object(j, {"generator", "environment", "noise", "agents", "T", "runs", "run_seed_base",
                    "threads", "record_timing", "robust", "bench", "output"},
                "config");
  ExperimentConfig cfg;
  if (j.contains("generator") && j.contains("environment"))
    bad("config.environment", "give either a generator or an environment, not both");
  with(j, "generator", "", [&](const json& v, const std::string& p) { cfg.generator = generator_from_json(v, p); });
  with(j, "environment", "", [&](const json& v, const std::string& p) { cfg.env = environment_from_json(v, p); });
  with(j, "noise", "", [&](const json& v, const std::string& p) {
    cfg.noise = noise_from_json(v, p);
    if (cfg.env) cfg.env->noise = cfg.noise;
  });
  with(j, "T", "", [&](const json& v, const std::string& p) { cfg.T = count_at(v, p); });
  with(j, "runs", "", [&](const json& v, const std::string& p) { cfg.runs = count_at(v, p); });
  with(j, "run_seed_base", "", [&](const json& v, const std::string& p) { cfg.run_seed_base = count_at(v, p); });
  with(j, "threads", "", [&](const json& v, const std::string& p) {
    cfg.threads = static_cast<unsigned>(count_at(v, p));
  });
  with(j, "record_timing", "", [&](const json& v, const std::string& p) { cfg.record_timing = bool_at(v, p); });
  with(j, "robust", "", [&](const json& v, const std::string& p) {
    expect_object(v, {"eps"}, p);
    with(v, "eps", p, [&](const json& e, const std::string& q) { cfg.robust_eps = numbers_at(e, q); });
  });
  with(j, "bench", "", [&](const json& v, const std::string& p) {
    expect_object(v, {"K", "T", "runs"}, p);
    with(v, "K", p, [&](const json& e, const std::string& q) {
      if (!e.is_array()) bad(q, "expected an array of integers");
      cfg.bench.K.clear();
      for (std::size_t i = 0; i < e.size(); ++i) cfg.bench.K.push_back(count_at(e[i], q + "[" + std::to_string(i) + "]"));
    });
    with(v, "T", p, [&](const json& e, const std::string& q) { cfg.bench.T = count_at(e, q); });
    with(v, "runs", p, [&](const json& e, const std::string& q) { cfg.bench.runs = count_at(e, q); });
  });
  with(j, "output", "", [&](const json& v, const std::string& p) {
    expect_object(v, {"dir", "csv", "svg", "bounds"}, p);
    with(v, "dir", p, [&](const json& e, const std::string& q) { cfg.output.dir = string_at(e, q); });
    with(v, "csv", p, [&](const json& e, const std::string& q) { cfg.output.csv = string_at(e, q); });
    with(v, "svg", p, [&](const json& e, const std::string& q) { cfg.output.svg = string_at(e, q); });
    with(v, "bounds", p, [&](const json& e, const std::string& q) {
      if (!e.is_array()) bad(q, "expected an array of theorem ids");
      for (std::size_t i = 0; i < e.size(); ++i) {
        const std::size_t id = count_at(e[i], q + "[" + std::to_string(i) + "]");
        if (id < 1 || id > 4) bad(q + "[" + std::to_string(i) + "]", "theorem id must be 1..4");
        cfg.output.bound_overlays.push_back(static_cast<int>(id));
      }
    });
  });

  auto agents = j.find("agents");
  if (agents == j.end()) bad("agents", "missing required key");
  if (!agents->is_array() || agents->empty()) bad("agents", "expected a nonempty array");
  BoundParams base;
  try {
    base = environment_for_run(cfg, 0).bounds;
  } catch (const std::invalid_argument& e) {
    bad("generator", e.what());
  }
  for (std::size_t i = 0; i < agents->size(); ++i)
    cfg.agents.push_back(agent_from_json((*agents)[i], "agents[" + std::to_string(i) + "]", base));
  cfg.validate();
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return os.str();
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_text_file(path));
}

}  // namespace rankbandit
