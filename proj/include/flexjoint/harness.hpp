#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "flexjoint/config.hpp"
#include "flexjoint/sim.hpp"

namespace flexjoint {

/// Builds the reference table for the configured trajectory over the
/// configured duration.
std::shared_ptr<const ReferenceTable> build_reference_table(
    const AppConfig& config);

/// Instantiates the configured controller (reference table shared across
/// controllers built from the same config).
std::unique_ptr<Controller> make_controller(
    const AppConfig& config, std::shared_ptr<const ReferenceTable> table);

struct FreeFallSummary {
  JointVector creep_deg;             ///< |theta(end) - theta(t_fast)| per joint
  JointVector residual_torsion_deg;  ///< torsion at the end of the run
  double settle_time = 0.0;          ///< velocities stay below threshold after
  bool settled = false;
  double fast_phase_end = 5.0;
  double velocity_threshold = 1e-5;  ///< rad/s
};

FreeFallSummary analyze_free_fall(const SimTrace& trace,
                                  double fast_phase_end = 5.0,
                                  double velocity_threshold = 1e-5);

struct TrackingSummary {
  std::string variant;
  JointVector max_abs_error;   ///< over the motion window (rad)
  JointVector rms_error;       ///< over the motion window (rad)
  JointVector terminal_error;  ///< mean |e| over the final 0.2 s (rad)
  double max_error_overall = 0.0;
  double motion_end = 0.0;
};

TrackingSummary analyze_tracking(const SimTrace& trace,
                                 const ReferenceTable& table,
                                 double motion_end);

struct CurvesSummary {
  double loop_closure_error = 0.0;  ///< |tau| mismatch after a repeat cycle
  double loop_area = 0.0;           ///< dissipated energy per cycle (N m deg)
  JointVector lost_motion_deg;      ///< |delta| at the zero-torque crossings
};

struct LocusSummary {
  bool derived_stable = false;  ///< non-origin roots strictly left half-plane
  double max_real_part = 0.0;   ///< over non-origin derived-form roots
};

/// u = 0 drop from the configured initial pose; writes trace.csv,
/// summary.json and manifest.json into outdir.
FreeFallSummary run_free_fall(const AppConfig& config,
                              const std::filesystem::path& outdir,
                              bool write_trace = true);

/// Closed-loop run of the configured controller on the configured
/// trajectory; writes trace.csv, errors.csv, summary.json, manifest.json.
TrackingSummary run_tracking(const AppConfig& config,
                             const std::filesystem::path& outdir,
                             bool write_trace = true);

/// Friction curve sweep and quasi-static major hysteresis loop; writes
/// friction_curve.csv, hysteresis_loop.csv, summary.json, manifest.json.
CurvesSummary run_curves(const AppConfig& config,
                         const std::filesystem::path& outdir);

/// Root loci of both characteristic-polynomial forms over a log-spaced gain
/// grid; writes locus_derived.csv, locus_reported.csv, summary.json,
/// manifest.json.
LocusSummary run_rootlocus(const AppConfig& config,
                           const std::filesystem::path& outdir);

/// Major-loop lost motion: |delta| at the zero-torque crossings of a closed
/// cycle of the given amplitude, traced quasi-statically from the virgin
/// state. Returns the larger of the two crossings.
double major_loop_lost_motion_deg(const HysteresisParams& p,
                                  double amplitude_deg,
                                  double step_deg = 1e-4);

void write_manifest(const AppConfig& config, const std::string& experiment,
                    const std::filesystem::path& outdir);

}  // namespace flexjoint
