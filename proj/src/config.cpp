#include "commaware/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace commaware {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

// Drops a trailing comment that is not inside quotes.
std::string strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"replicates", "seed", "out", "workers", "trace"}},
      {"env", {"size", "kind", "r_c", "r_f", "gradient_width", "patch_count", "patch_radius"}},
      {"swarm",
       {"agent_count", "comm_range", "t_max", "speed", "strategy", "planner", "explore_reward", "end_rule",
        "random_leg"}},
      {"gp", {"nu", "length_scale", "jitter", "capacity"}},
  };
  return keys;
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) fail(key, "expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) fail(key, "expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t to_seed(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) fail(key, "expected an unsigned integer, got '" + text + "'");
  return v;
}

class Reader {
 public:
  explicit Reader(const ConfigValues& v) : values_(v) {}

  const std::vector<std::string>* list(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

  std::optional<std::string> scalar(const std::string& key) const {
    const auto* l = list(key);
    if (!l) return std::nullopt;
    if (l->size() != 1) fail(key, "expected a single value");
    return l->front();
  }

  std::optional<double> number(const std::string& key) const {
    const auto s = scalar(key);
    return s ? std::optional<double>(to_double(key, *s)) : std::nullopt;
  }

  std::optional<long long> integer(const std::string& key) const {
    const auto s = scalar(key);
    return s ? std::optional<long long>(to_integer(key, *s)) : std::nullopt;
  }

 private:
  const ConfigValues& values_;
};

template <class T, class Parse>
std::vector<T> parse_each(const std::string& key, const std::vector<std::string>& items, Parse parse) {
  if (items.empty()) fail(key, "list must not be empty");
  std::vector<T> out;
  for (const auto& s : items) {
    try {
      out.push_back(parse(s));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }
  return out;
}

std::vector<double> checked_ratios(const std::string& key, std::vector<double> v, bool allow_zero) {
  if (v.empty()) fail(key, "list must not be empty");
  for (double x : v) {
    const bool ok = allow_zero ? (x >= 0.0 && x < 1.0) : (x > 0.0 && x < 1.0);
    if (!ok) {
      std::ostringstream msg;
      msg << "value " << x << " outside " << (allow_zero ? "[0,1)" : "(0,1)");
      fail(key, msg.str());
    }
  }
  return v;
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    std::string item = unquote(trim(text.substr(start, end - start)));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ConfigValues parse_config_text(std::string_view text) {
  ConfigValues values;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known_keys().count(section)) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) throw ConfigError(where + ": key '" + key + "' outside any section");
    if (key.empty() || value.empty()) throw ConfigError(where + ": expected key = value");
    const std::string full = section + "." + key;
    if (!known_keys().at(section).count(key)) throw ConfigError(full + ": unknown key");
    if (values.count(full)) throw ConfigError(full + ": duplicate key");

    if (value.front() == '[') {
      if (value.back() != ']') throw ConfigError(where + ": unterminated list for " + full);
      values[full] = split_list(std::string_view(value).substr(1, value.size() - 2));
    } else {
      values[full] = {unquote(value)};
    }
  }
  return values;
}

ExperimentSpec build_spec(const ConfigValues& values, const ConfigOverrides& overrides,
                          std::optional<std::uint64_t> fallback_seed) {
  const Reader r(values);
  ExperimentSpec spec;
  SimConfig base;

  if (auto v = r.integer("experiment.replicates")) spec.replicates = static_cast<int>(*v);
  if (auto v = r.scalar("experiment.seed")) spec.master_seed = to_seed("experiment.seed", *v);
  else if (fallback_seed) spec.master_seed = *fallback_seed;
  if (auto v = r.scalar("experiment.out")) spec.out = *v;
  if (auto v = r.integer("experiment.workers")) spec.workers = static_cast<int>(*v);
  if (auto v = r.scalar("experiment.trace")) spec.trace_dir = *v;

  if (auto v = r.integer("env.size")) base.env.size = static_cast<int>(*v);
  if (auto v = r.number("env.gradient_width")) base.env.gradient_width = *v;
  if (auto v = r.integer("env.patch_count")) base.env.patch_count = static_cast<int>(*v);
  if (auto v = r.number("env.patch_radius")) base.env.patch_radius = *v;

  if (auto v = r.integer("swarm.agent_count")) base.agent_count = static_cast<int>(*v);
  if (auto v = r.number("swarm.comm_range")) base.comm_range = *v;
  if (auto v = r.integer("swarm.t_max")) base.t_max = *v;
  if (auto v = r.number("swarm.speed")) base.speed = *v;
  if (auto v = r.number("swarm.random_leg")) base.random_leg = *v;
  try {
    if (auto v = r.scalar("swarm.explore_reward")) base.explore_reward = parse_explore_reward(*v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail("swarm.explore_reward", e.what());
  }
  try {
    if (auto v = r.scalar("swarm.end_rule")) base.end_rule = parse_end_rule(*v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail("swarm.end_rule", e.what());
  }

  if (auto v = r.number("gp.nu")) base.kernel.nu = *v;
  if (auto v = r.number("gp.length_scale")) base.kernel.length_scale = *v;
  if (auto v = r.number("gp.jitter")) base.kernel.jitter = *v;
  if (auto v = r.integer("gp.capacity")) {
    if (*v < 1) fail("gp.capacity", "must be >= 1");
    base.store_capacity = static_cast<std::size_t>(*v);
  }

  auto strings = [&](const std::string& key, const std::optional<std::vector<std::string>>& over,
                     std::vector<std::string> dflt) {
    if (over) return *over;
    if (const auto* l = r.list(key)) return *l;
    return dflt;
  };
  auto numbers = [&](const std::string& key, const std::optional<std::vector<double>>& over,
                     std::vector<double> dflt) {
    if (over) return *over;
    if (const auto* l = r.list(key)) return parse_each<double>(key, *l, [&](const std::string& s) {
      return to_double(key, s);
    });
    return dflt;
  };

  const auto strategies = parse_each<Strategy>(
      "swarm.strategy", strings("swarm.strategy", overrides.strategies, {"DC"}),
      [](const std::string& s) { return parse_strategy(s); });
  const auto planners = parse_each<PlannerKind>(
      "swarm.planner", strings("swarm.planner", overrides.planners, {"RB"}),
      [](const std::string& s) { return parse_planner(s); });
  const auto kinds = parse_each<EnvKind>("env.kind", strings("env.kind", overrides.env_kinds, {"uniform"}),
                                         [](const std::string& s) { return parse_env_kind(s); });
  const auto rcs = checked_ratios("env.r_c", numbers("env.r_c", overrides.r_c, {0.0}), true);
  const auto rfs = checked_ratios("env.r_f", numbers("env.r_f", overrides.r_f, {0.65}), false);

  if (overrides.replicates) spec.replicates = *overrides.replicates;
  if (overrides.seed) spec.master_seed = *overrides.seed;
  if (overrides.t_max) base.t_max = *overrides.t_max;
  if (overrides.out) spec.out = *overrides.out;
  if (overrides.workers) spec.workers = *overrides.workers;
  if (overrides.trace_dir) spec.trace_dir = *overrides.trace_dir;

  if (spec.replicates < 1) fail("experiment.replicates", "must be >= 1");
  if (spec.workers < 1) fail("experiment.workers", "must be >= 1");
  if (spec.out.empty()) fail("experiment.out", "must not be empty");
  base.master_seed = spec.master_seed;

  // Translate SimConfig validation errors back to the config key that owns them.
  static const std::vector<std::pair<std::string, std::string>> owners = {
      {"agent_count", "swarm.agent_count"}, {"t_max", "swarm.t_max"},
      {"comm_range", "swarm.comm_range"},   {"speed", "swarm.speed"},
      {"random_leg", "swarm.random_leg"},   {"store_capacity", "gp.capacity"},
      {"nu", "gp.nu"},                      {"length_scale", "gp.length_scale"},
      {"jitter", "gp.jitter"},              {"size", "env.size"},
      {"gradient_width", "env.gradient_width"}, {"patch", "env.patch"},
      {"uniform", "env.kind"},              {"r_c", "env.r_c"},
      {"r_f", "env.r_f"},                   {"capacity", "gp.capacity"},
  };

  for (Strategy s : strategies)
    for (PlannerKind p : planners)
      for (EnvKind k : kinds)
        for (double rc : rcs)
          for (double rf : rfs) {
            SimConfig c = base;
            c.strategy = s;
            c.planner = p;
            c.env.kind = k;
            c.env.denial_ratio = rc;
            c.env.feature_ratio = rf;
            try {
              c.validate();
            } catch (const std::exception& e) {
              const std::string msg = e.what();
              std::string key = "config";
              for (const auto& [needle, owner] : owners)
                if (msg.find(needle) != std::string::npos) {
                  key = owner;
                  break;
                }
              fail(key, msg + " (strategy=" + std::string(to_string(s)) + ", planner=" +
                            std::string(to_string(p)) + ", env=" + std::string(to_string(k)) + ")");
            }
            spec.configs.push_back(c);
          }
  return spec;
}

ExperimentSpec parse_config(const std::filesystem::path& path, const ConfigOverrides& overrides,
                            std::optional<std::uint64_t> fallback_seed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return build_spec(parse_config_text(text.str()), overrides, fallback_seed);
}

}  // namespace commaware
