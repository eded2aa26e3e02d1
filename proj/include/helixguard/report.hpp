/**
 * @file report.hpp
 * @brief Result emission: trace and per-trial CSV, the campaign summary JSON
 * and the comparison table.
 *
 * CSV files use '.' decimals and LF line endings regardless of the locale.
 */
#pragma once

#include "helixguard/sim.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace helixguard {

inline constexpr const char* kTraceHeader =
    "t,px,py,pz,dT,s,alpha_p0,alpha_gN,solve_ms,slack_max";

void write_trace_csv(std::ostream& out, const TrialResult& trial);

/// One row per trial and controller, with the realized uncertainty.
void write_trials_csv(std::ostream& out, const Campaign& campaign, std::uint64_t base_seed);

/// Helix samples t, px, py, pz, vx, vy, vz, ax, ay, az on [0, duration].
void write_reference_csv(std::ostream& out, const HelixSpec& helix, double dt, double duration);

nlohmann::ordered_json summary_json(const McSummary& s);
nlohmann::ordered_json campaign_json(const Campaign& campaign, std::uint64_t base_seed);

/// Violations, clearance extremes and solve times side by side.
std::string comparison_table(const Campaign& campaign);

/// Clearance median of the pooled residuals: d_min - median(s).
double median_clearance(const McSummary& s, const TowerGeometry& tower);

}  // namespace helixguard
