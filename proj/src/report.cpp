#include "helixguard/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace helixguard {

namespace {

// Ten significant digits is finer than any logged quantity needs.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v + 0.0);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const TrialResult& trial) {
  out << kTraceHeader << '\n';
  for (const TraceSample& s : trial.trace) {
    out << num(s.t) << ',' << num(s.position.x()) << ',' << num(s.position.y()) << ','
        << num(s.position.z()) << ',' << num(s.distance) << ',' << num(s.residual) << ','
        << num(s.alpha_p_max) << ',' << num(s.alpha_g_terminal) << ',' << num(s.solve_ms)
        << ',' << num(s.slack_max) << '\n';
  }
}

void write_trials_csv(std::ostream& out, const Campaign& campaign, std::uint64_t base_seed) {
  out << "trial,seed,controller,violated,aborted,min_clearance,max_residual,tracking_rmse,"
         "solve_ms_mean,dm,dJx,dJy,dJz,dT,dD,wx,wy,wz\n";
  const std::size_t n = campaign.nominal_trials.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto* trials : {&campaign.nominal_trials, &campaign.robust_trials}) {
      const TrialResult& tr = (*trials)[i];
      const Variant v = trials == &campaign.nominal_trials ? Variant::kNominal : Variant::kRobust;
      out << i << ',' << base_seed + i << ',' << to_string(v) << ',' << (tr.violated ? 1 : 0)
          << ',' << (tr.aborted ? 1 : 0) << ',' << num(tr.min_clearance) << ','
          << num(tr.max_residual) << ',' << num(tr.tracking_rmse) << ','
          << num(1e3 * tr.avg_solve_time);
      const ZetaVec z = tr.zeta.flatten();
      for (int j = 0; j < kZetaDim; ++j) {
        out << ',' << num(z[j]);
      }
      out << '\n';
    }
  }
}

void write_reference_csv(std::ostream& out, const HelixSpec& helix, double dt, double duration) {
  out << "t,px,py,pz,vx,vy,vz,ax,ay,az\n";
  const auto steps = static_cast<long>(std::floor(duration / dt + 1e-9));
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const ReferencePoint r = helix_reference(t, helix);
    out << num(t);
    for (const Vec3* v : {&r.position, &r.velocity, &r.acceleration}) {
      for (int a = 0; a < 3; ++a) {
        out << ',' << num((*v)[a]);
      }
    }
    out << '\n';
  }
}

nlohmann::ordered_json summary_json(const McSummary& s) {
  nlohmann::ordered_json j;
  j["controller"] = to_string(s.controller);
  j["trials"] = s.n_trials;
  j["violations"] = s.violations;
  j["aborted"] = s.aborted;
  j["min_clearance"] = s.min_clearance_overall;
  j["residual_quartiles"] = {{"min", s.residual_quartiles.min},
                             {"q1", s.residual_quartiles.q1},
                             {"median", s.residual_quartiles.median},
                             {"q3", s.residual_quartiles.q3},
                             {"max", s.residual_quartiles.max}};
  j["solve_time_mean_ms"] = 1e3 * s.solve_time_mean;
  return j;
}

nlohmann::ordered_json campaign_json(const Campaign& campaign, std::uint64_t base_seed) {
  nlohmann::ordered_json j;
  j["base_seed"] = base_seed;
  j["controllers"] = {summary_json(campaign.nominal), summary_json(campaign.robust)};
  return j;
}

double median_clearance(const McSummary& s, const TowerGeometry& tower) {
  return tower.d_min - s.residual_quartiles.median;
}

std::string comparison_table(const Campaign& campaign) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %12s %16s %16s %14s\n", "controller", "violations",
                "min clearance", "median residual", "solve [ms]");
  out += line;
  for (const McSummary* s : {&campaign.nominal, &campaign.robust}) {
    char frac[32];
    std::snprintf(frac, sizeof(frac), "%d/%d", s->violations, s->n_trials);
    std::snprintf(line, sizeof(line), "%-10s %12s %16.4f %16.4f %14.3f\n",
                  to_string(s->controller), frac, s->min_clearance_overall,
                  s->residual_quartiles.median, 1e3 * s->solve_time_mean);
    out += line;
  }
  return out;
}

}  // namespace helixguard
