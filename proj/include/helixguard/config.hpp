/**
 * @file config.hpp
 * @brief Run configuration as a flat sectioned key/value file.
 *
 * Every key has a default, so an empty file describes the standard inspection
 * scenario. Derived quantities (orbit radius, m_min, actuator boxes) are not
 * keys; they follow from the primary fields.
 */
#pragma once

#include "helixguard/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace helixguard {

struct RunConfig {
  Scenario scenario = Scenario::defaults();
  Variant controller = Variant::kRobust;
  int n_trials = 100;
  std::uint64_t base_seed = 1;
  std::string output_dir = "helixguard_out";

  void validate() const;
};

/// Parse or validation failure. `line()` is 1-based, 0 when no line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line);
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Writes every key with round-trip precision.
std::string serialize_config(const RunConfig& cfg);

}  // namespace helixguard
