#include "helixguard/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace helixguard {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("'" + s + "' is not a number");
  }
  return v;
}

template <typename Int>
Int to_int(const std::string& s) {
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("'" + s + "' is not an integer");
  }
  return v;
}

// Comma- or blank-separated list of exactly `n` numbers.
std::vector<double> to_list(const std::string& s, std::size_t n) {
  std::string spaced = s;
  for (char& c : spaced) {
    if (c == ',') {
      c = ' ';
    }
  }
  std::istringstream in(spaced);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    out.push_back(to_double(tok));
  }
  if (out.size() != n) {
    throw std::invalid_argument("expected " + std::to_string(n) + " values, got " +
                                std::to_string(out.size()));
  }
  return out;
}

template <typename Vec>
std::string format_list(const Vec& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out += (i ? ", " : "") + format(v[i]);
  }
  return out;
}

template <typename Vec>
void assign_list(Vec& v, const std::string& s) {
  const std::vector<double> vals = to_list(s, static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = vals[static_cast<std::size_t>(i)];
  }
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

// Getters reuse the mutable accessor; they only read through it.
Field number(std::string section, std::string key, std::function<double&(RunConfig&)> ref) {
  return {std::move(section), std::move(key),
          [ref](const RunConfig& c) { return format(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, const std::string& s) { ref(c) = to_double(s); }};
}

template <typename Vec>
Field list(std::string section, std::string key, std::function<Vec&(RunConfig&)> ref) {
  return {std::move(section), std::move(key),
          [ref](const RunConfig& c) { return format_list(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, const std::string& s) { assign_list(ref(c), s); }};
}

const std::vector<Field>& registry() {
  static const std::vector<Field> fields = [] {
    std::vector<Field> f;
    // Vehicle.
    f.push_back({"vehicle", "rotors",
                 [](const RunConfig& c) { return std::to_string(c.scenario.params.n_rotors); },
                 [](RunConfig& c, const std::string& s) {
                   c.scenario.params.n_rotors = to_int<int>(s);
                 }});
    f.push_back(number("vehicle", "tilt_angle_rad",
                       [](RunConfig& c) -> double& { return c.scenario.params.tilt_angle; }));
    f.push_back(number("vehicle", "mass",
                       [](RunConfig& c) -> double& { return c.scenario.params.mass; }));
    f.push_back(list<Vec3>("vehicle", "inertia",
                           [](RunConfig& c) -> Vec3& { return c.scenario.params.inertia_diag; }));
    f.push_back(number("vehicle", "arm_length",
                       [](RunConfig& c) -> double& { return c.scenario.params.arm_length; }));
    f.push_back(number("vehicle", "thrust_coeff",
                       [](RunConfig& c) -> double& { return c.scenario.params.c_f; }));
    f.push_back(number("vehicle", "torque_coeff",
                       [](RunConfig& c) -> double& { return c.scenario.params.c_t; }));
    f.push_back(number("vehicle", "gravity",
                       [](RunConfig& c) -> double& { return c.scenario.params.gravity; }));
    f.push_back(number("vehicle", "drag_coeff", [](RunConfig& c) -> double& {
      return c.scenario.params.drag_coeff_nominal;
    }));
    f.push_back(number("vehicle", "rotor_speed_min", [](RunConfig& c) -> double& {
      return c.scenario.params.rotor_speed_min;
    }));
    f.push_back(number("vehicle", "rotor_speed_max", [](RunConfig& c) -> double& {
      return c.scenario.params.rotor_speed_max;
    }));
    f.push_back(number("vehicle", "rotor_rate_max", [](RunConfig& c) -> double& {
      return c.scenario.params.rotor_rate_max;
    }));
    // Tower and reference.
    f.push_back(number("tower", "radius",
                       [](RunConfig& c) -> double& { return c.scenario.tower.radius; }));
    f.push_back(number("tower", "d_min",
                       [](RunConfig& c) -> double& { return c.scenario.tower.d_min; }));
    f.push_back(number("tower", "d_ref",
                       [](RunConfig& c) -> double& { return c.scenario.tower.d_ref; }));
    f.push_back(number("helix", "angular_rate",
                       [](RunConfig& c) -> double& { return c.scenario.helix.angular_rate; }));
    f.push_back(number("helix", "climb_rate",
                       [](RunConfig& c) -> double& { return c.scenario.helix.climb_rate; }));
    f.push_back(number("helix", "initial_altitude", [](RunConfig& c) -> double& {
      return c.scenario.helix.initial_altitude;
    }));
    f.push_back(number("helix", "initial_phase",
                       [](RunConfig& c) -> double& { return c.scenario.helix.initial_phase; }));
    // Controller.
    f.push_back({"nmpc", "horizon",
                 [](const RunConfig& c) { return std::to_string(c.scenario.nmpc.horizon); },
                 [](RunConfig& c, const std::string& s) {
                   c.scenario.nmpc.horizon = to_int<int>(s);
                 }});
    f.push_back(number("nmpc", "sampling_time",
                       [](RunConfig& c) -> double& { return c.scenario.nmpc.sampling_time; }));
    f.push_back(list<Vec3>("nmpc", "q_p", [](RunConfig& c) -> Vec3& { return c.scenario.nmpc.Q_p; }));
    f.push_back(list<Vec3>("nmpc", "q_v", [](RunConfig& c) -> Vec3& { return c.scenario.nmpc.Q_v; }));
    f.push_back(list<Vec3>("nmpc", "q_a", [](RunConfig& c) -> Vec3& { return c.scenario.nmpc.Q_a; }));
    f.push_back(list<Vec6>("nmpc", "q_u", [](RunConfig& c) -> Vec6& { return c.scenario.nmpc.Q_u; }));
    f.push_back(list<Vec3>("nmpc", "q_w", [](RunConfig& c) -> Vec3& { return c.scenario.nmpc.Q_w; }));
    f.push_back(number("nmpc", "q_xi", [](RunConfig& c) -> double& { return c.scenario.nmpc.Q_xi; }));
    f.push_back(list<Vec3>("nmpc", "q_f", [](RunConfig& c) -> Vec3& { return c.scenario.nmpc.Q_f; }));
    f.push_back(number("nmpc", "soft_penalty", [](RunConfig& c) -> double& {
      return c.scenario.nmpc.soft_penalty_weight;
    }));
    // Uncertainty and tightening.
    f.push_back({"uncertainty", "half_width",
                 [](const RunConfig& c) { return format_list(c.scenario.bounds.upper); },
                 [](RunConfig& c, const std::string& s) {
                   ZetaVec w;
                   assign_list(w, s);
                   c.scenario.bounds = UncertaintyBounds::symmetric(w);
                 }});
    f.push_back(number("tightening", "epsilon_s",
                       [](RunConfig& c) -> double& { return c.scenario.tightening.epsilon_s; }));
    f.push_back(number("gust", "bound",
                       [](RunConfig& c) -> double& { return c.scenario.gust_bound; }));
    f.push_back(number("gust", "correlation_time", [](RunConfig& c) -> double& {
      return c.scenario.gust_correlation_time;
    }));
    // Run.
    f.push_back({"run", "controller",
                 [](const RunConfig& c) { return std::string(to_string(c.controller)); },
                 [](RunConfig& c, const std::string& s) {
                   c.controller = variant_from_string(s);
                 }});
    f.push_back({"run", "trials", [](const RunConfig& c) { return std::to_string(c.n_trials); },
                 [](RunConfig& c, const std::string& s) { c.n_trials = to_int<int>(s); }});
    f.push_back({"run", "seed", [](const RunConfig& c) { return std::to_string(c.base_seed); },
                 [](RunConfig& c, const std::string& s) {
                   c.base_seed = to_int<std::uint64_t>(s);
                 }});
    f.push_back(number("run", "sim_time",
                       [](RunConfig& c) -> double& { return c.scenario.sim_time; }));
    f.push_back({"run", "warmup_iterations",
                 [](const RunConfig& c) { return std::to_string(c.scenario.warmup_iterations); },
                 [](RunConfig& c, const std::string& s) {
                   c.scenario.warmup_iterations = to_int<int>(s);
                 }});
    f.push_back({"run", "output_dir", [](const RunConfig& c) { return c.output_dir; },
                 [](RunConfig& c, const std::string& s) { c.output_dir = s; }});
    return f;
  }();
  return fields;
}

// Line of `key` inside `[section]`, for diagnostics.
int locate(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  std::string current;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') {
      continue;
    }
    if (t.front() == '[' && t.back() == ']') {
      current = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (current == section && eq != std::string::npos && trim(t.substr(0, eq)) == key) {
      return n;
    }
  }
  return 0;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

void RunConfig::validate() const {
  scenario.validate();
  if (n_trials < 1) {
    throw std::invalid_argument("trials must be at least 1");
  }
  if (output_dir.empty()) {
    throw std::invalid_argument("output_dir must not be empty");
  }
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.message(), static_cast<int>(e.line()));
  }

  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw ConfigError("key '" + section + "' outside of a section",
                        locate(text, "", section));
    }
    for (const auto& [key, value] : body) {
      const auto& fields = registry();
      const auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) {
        return f.section == section && f.key == key;
      });
      if (it == fields.end()) {
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]",
                          locate(text, section, key));
      }
      try {
        it->set(cfg, trim(value.data()));
      } catch (const std::exception& e) {
        throw ConfigError(section + "." + key + ": " + e.what(), locate(text, section, key));
      }
    }
  }

  cfg.scenario.sync_derived();
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), 0);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string(), 0);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const Field& f : registry()) {
    if (f.section != section) {
      out += (section.empty() ? "[" : "\n[") + f.section + "]\n";
      section = f.section;
    }
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace helixguard
