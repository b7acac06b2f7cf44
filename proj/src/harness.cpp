#include "flexjoint/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <vector>

namespace flexjoint {

namespace {

using nlohmann::json;

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string());
  }
  out << j.dump(2) << "\n";
}

json vec_to_json(const JointVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

void write_manifest(const AppConfig& config, const std::string& experiment,
                    const std::filesystem::path& outdir) {
  json manifest;
  manifest["experiment"] = experiment;
  manifest["config"] = to_json(config);
  write_json(manifest, outdir / "manifest.json");
}

std::shared_ptr<const ReferenceTable> build_reference_table(
    const AppConfig& config) {
  ReferenceTrajectory trajectory(config.trajectory);
  TwoLinkArm model(config.arm);
  return std::make_shared<ReferenceTable>(
      trajectory, model, config.hysteresis, config.motor_inertia,
      config.friction, config.sim.control_period, config.sim.duration);
}

std::unique_ptr<Controller> make_controller(
    const AppConfig& config, std::shared_ptr<const ReferenceTable> table) {
  const std::string& variant = config.controller.variant;
  switch (config.controller.type) {
    case ControllerType::kNone:
      return std::make_unique<ZeroController>(2);
    case ControllerType::kControlOne: {
      ControlOne::Variant v = ControlOne::Variant::kFull;
      if (variant == "ff") v = ControlOne::Variant::kFeedforward;
      else if (variant == "ff_pd") v = ControlOne::Variant::kFeedforwardPd;
      else if (variant == "full") v = ControlOne::Variant::kFull;
      else throw std::invalid_argument("control1 variant must be ff|ff_pd|full");
      return std::make_unique<ControlOne>(std::move(table),
                                          config.controller.gains, v);
    }
    case ControllerType::kControlTwo: {
      ControlTwo::Variant v = ControlTwo::Variant::kFeedforwardPdVs;
      if (variant == "ff") v = ControlTwo::Variant::kFeedforward;
      else if (variant == "ff_pd") v = ControlTwo::Variant::kFeedforwardPd;
      else if (variant == "ff_pd_vs") v = ControlTwo::Variant::kFeedforwardPdVs;
      else throw std::invalid_argument(
          "control2 variant must be ff|ff_pd|ff_pd_vs");
      std::vector<FrictionParams> observer_friction = config.friction;
      for (auto& f : observer_friction) {
        f.coulomb *= config.observer.friction_scale;
        f.stribeck *= config.observer.friction_scale;
        f.viscous *= config.observer.friction_scale;
      }
      MomentumObserver observer(config.motor_inertia, observer_friction,
                                ObserverGains{config.observer.gain});
      VirtualSensor sensor(config.hysteresis);
      return std::make_unique<ControlTwo>(std::move(table),
                                          config.controller.gains, v,
                                          std::move(observer),
                                          std::move(sensor));
    }
  }
  throw std::invalid_argument("unknown controller type");
}

FreeFallSummary analyze_free_fall(const SimTrace& trace, double fast_phase_end,
                                  double velocity_threshold) {
  const int n = trace.dof();
  FreeFallSummary s;
  s.fast_phase_end = fast_phase_end;
  s.velocity_threshold = velocity_threshold;
  s.creep_deg = JointVector::Zero(n);
  s.residual_torsion_deg = JointVector::Zero(n);
  if (trace.rows() == 0) return s;

  const std::size_t last = trace.rows() - 1;
  std::size_t fast_row = 0;
  while (fast_row < last && trace.t(fast_row) < fast_phase_end) ++fast_row;

  for (int j = 0; j < n; ++j) {
    s.creep_deg[j] =
        std::abs(trace.theta(last, j) - trace.theta(fast_row, j)) * kDegPerRad;
    s.residual_torsion_deg[j] = trace.delta(last, j) * kDegPerRad;
  }

  // Settling: the earliest time after which every joint velocity stays
  // below the threshold through the end of the run.
  std::size_t first_quiet = last + 1;
  for (std::size_t row = last + 1; row-- > 0;) {
    double vmax = 0.0;
    for (int j = 0; j < n; ++j) {
      vmax = std::max({vmax, std::abs(trace.qd(row, j)),
                       std::abs(trace.thetad(row, j))});
    }
    if (vmax > velocity_threshold) break;
    first_quiet = row;
  }
  if (first_quiet <= last) {
    s.settled = true;
    s.settle_time = trace.t(first_quiet);
  }
  return s;
}

TrackingSummary analyze_tracking(const SimTrace& trace,
                                 const ReferenceTable& table,
                                 double motion_end) {
  const int n = trace.dof();
  TrackingSummary s;
  s.motion_end = motion_end;
  s.max_abs_error = JointVector::Zero(n);
  s.rms_error = JointVector::Zero(n);
  s.terminal_error = JointVector::Zero(n);
  JointVector sq_sum = JointVector::Zero(n);
  JointVector term_sum = JointVector::Zero(n);
  std::size_t motion_count = 0, term_count = 0;
  const double t_end = trace.t(trace.rows() - 1);

  for (std::size_t row = 0; row < trace.rows(); ++row) {
    const double t = trace.t(row);
    const std::size_t k = static_cast<std::size_t>(
        std::llround(t / table.control_period()));
    const ReferenceSample& ref = table.at(std::min(k, table.size() - 1));
    for (int j = 0; j < n; ++j) {
      const double e = ref.q[0][j] - trace.q(row, j);
      if (t <= motion_end) {
        s.max_abs_error[j] = std::max(s.max_abs_error[j], std::abs(e));
        sq_sum[j] += e * e;
      }
      if (t >= t_end - 0.2) {
        term_sum[j] += std::abs(e);
      }
    }
    if (t <= motion_end) ++motion_count;
    if (t >= t_end - 0.2) ++term_count;
  }
  if (motion_count > 0) {
    s.rms_error = (sq_sum / static_cast<double>(motion_count)).cwiseSqrt();
  }
  if (term_count > 0) {
    s.terminal_error = term_sum / static_cast<double>(term_count);
  }
  s.max_error_overall = s.max_abs_error.maxCoeff();
  return s;
}

FreeFallSummary run_free_fall(const AppConfig& config,
                              const std::filesystem::path& outdir,
                              bool write_trace) {
  config.validate();
  std::filesystem::create_directories(outdir);
  write_manifest(config, "free-fall", outdir);

  Plant plant(config.plant_params());
  ZeroController controller(plant.dof());
  PlantState init = PlantState::at_rest(config.initial_pose_deg * kRadPerDeg);
  SimTrace trace = run_closed_loop(plant, controller, init, config.sim);
  if (write_trace) trace.write_csv(outdir / "trace.csv");

  FreeFallSummary s = analyze_free_fall(trace);
  json summary;
  summary["creep_deg"] = vec_to_json(s.creep_deg);
  summary["residual_torsion_deg"] = vec_to_json(s.residual_torsion_deg);
  summary["settled"] = s.settled;
  summary["settle_time_s"] = s.settle_time;
  summary["fast_phase_end_s"] = s.fast_phase_end;
  summary["velocity_threshold_rad_s"] = s.velocity_threshold;
  write_json(summary, outdir / "summary.json");
  return s;
}

TrackingSummary run_tracking(const AppConfig& config,
                             const std::filesystem::path& outdir,
                             bool write_trace) {
  config.validate();
  std::filesystem::create_directories(outdir);
  write_manifest(config, "track", outdir);

  auto table = build_reference_table(config);
  Plant plant(config.plant_params());
  auto controller = make_controller(config, table);

  ReferenceTrajectory trajectory(config.trajectory);
  PlantState init =
      PlantState::at_rest(config.trajectory.start_deg * kRadPerDeg);
  SimTrace trace = run_closed_loop(plant, *controller, init, config.sim);
  if (write_trace) trace.write_csv(outdir / "trace.csv");

  TrackingSummary s =
      analyze_tracking(trace, *table, trajectory.motion_end());
  s.variant = config.controller.variant;

  if (write_trace) {
    std::ofstream err(outdir / "errors.csv");
    err << "t";
    for (int j = 1; j <= trace.dof(); ++j) err << ",e" << j;
    err << "\n";
    for (std::size_t row = 0; row < trace.rows(); ++row) {
      const std::size_t k = static_cast<std::size_t>(
          std::llround(trace.t(row) / table->control_period()));
      const ReferenceSample& ref = table->at(std::min(k, table->size() - 1));
      err << trace.t(row);
      for (int j = 0; j < trace.dof(); ++j) {
        err << "," << (ref.q[0][j] - trace.q(row, j));
      }
      err << "\n";
    }
  }

  json summary;
  summary["variant"] = s.variant;
  summary["max_abs_error_rad"] = vec_to_json(s.max_abs_error);
  summary["rms_error_rad"] = vec_to_json(s.rms_error);
  summary["terminal_error_rad"] = vec_to_json(s.terminal_error);
  summary["max_error_overall_rad"] = s.max_error_overall;
  summary["motion_window_s"] = s.motion_end;
  write_json(summary, outdir / "summary.json");
  return s;
}

double major_loop_lost_motion_deg(const HysteresisParams& p,
                                  double amplitude_deg, double step_deg) {
  HysteresisState state;
  double lost = 0.0;
  double delta = 0.0;
  // First cycle builds the memory; crossings are read off the second.
  const double path[] = {amplitude_deg, -amplitude_deg, amplitude_deg,
                         -amplitude_deg, amplitude_deg};
  bool measure = false;
  double prev_tau = torque(delta, state, p);
  for (double target : path) {
    const double dir = target > delta ? 1.0 : -1.0;
    while (std::abs(target - delta) > 1e-12) {
      const double next =
          dir > 0 ? std::min(delta + step_deg, target)
                  : std::max(delta - step_deg, target);
      advance_state(state, delta, next, p);
      const double tau_next = torque(next, state, p);
      if (measure && prev_tau * tau_next <= 0.0 && prev_tau != tau_next) {
        // Linear interpolation of the zero crossing.
        const double frac = prev_tau / (prev_tau - tau_next);
        lost = std::max(lost, std::abs(delta + frac * (next - delta)));
      }
      prev_tau = tau_next;
      delta = next;
    }
    measure = true;  // memory is cyclic after the first excursion
  }
  return lost;
}

CurvesSummary run_curves(const AppConfig& config,
                         const std::filesystem::path& outdir) {
  config.validate();
  std::filesystem::create_directories(outdir);
  write_manifest(config, "curves", outdir);

  // Friction-velocity sweep.
  {
    std::ofstream out(outdir / "friction_curve.csv");
    out << "thetad";
    for (std::size_t j = 1; j <= config.friction.size(); ++j) out << ",f" << j;
    out << "\n";
    const int ns = config.curves.friction_samples;
    const double vmax = config.curves.friction_velocity_max;
    out.precision(15);
    for (int i = 0; i < ns; ++i) {
      const double v = -vmax + 2.0 * vmax * i / (ns - 1);
      out << v;
      for (const auto& f : config.friction) {
        out << "," << friction_torque(v, f);
      }
      out << "\n";
    }
  }

  // Quasi-static major hysteresis loop, two cycles; the second retraces the
  // first once the memory is saturated.
  CurvesSummary s;
  const HysteresisParams& hp = config.hysteresis.front();
  const double amp = config.curves.loop_amplitude_deg;
  const double step = config.curves.loop_step_deg;
  {
    std::ofstream out(outdir / "hysteresis_loop.csv");
    out << "cycle,delta_deg,tau\n";
    out.precision(15);
    HysteresisState state;
    double delta = 0.0;
    double area = 0.0;
    double tau_first_cycle_end = 0.0;
    double prev_tau = torque(delta, state, hp);
    const double targets[] = {amp, -amp, amp, -amp, amp};
    int cycle = 0;
    out << cycle << "," << delta << "," << prev_tau << "\n";
    for (std::size_t leg = 0; leg < 5; ++leg) {
      const double target = targets[leg];
      const double dir = target > delta ? 1.0 : -1.0;
      while (std::abs(target - delta) > 1e-12) {
        const double next = dir > 0 ? std::min(delta + step, target)
                                    : std::max(delta - step, target);
        advance_state(state, delta, next, hp);
        const double tau_next = torque(next, state, hp);
        if (leg >= 3) {
          // Signed area over the closed repeat cycle (trapezoid rule).
          area += 0.5 * (tau_next + prev_tau) * (next - delta);
        }
        out << cycle << "," << next << "," << tau_next << "\n";
        prev_tau = tau_next;
        delta = next;
      }
      if (leg == 2) {
        tau_first_cycle_end = prev_tau;
        ++cycle;
      }
    }
    s.loop_closure_error = std::abs(prev_tau - tau_first_cycle_end);
    s.loop_area = area;
  }
  s.lost_motion_deg = JointVector::Constant(
      static_cast<Eigen::Index>(config.hysteresis.size()),
      major_loop_lost_motion_deg(hp, amp, step));

  json summary;
  summary["loop_closure_error"] = s.loop_closure_error;
  summary["loop_area"] = s.loop_area;
  summary["lost_motion_deg"] = vec_to_json(s.lost_motion_deg);
  write_json(summary, outdir / "summary.json");
  return s;
}

LocusSummary run_rootlocus(const AppConfig& config,
                           const std::filesystem::path& outdir) {
  config.validate();
  std::filesystem::create_directories(outdir);
  write_manifest(config, "rootlocus", outdir);

  const LinearJointModel model = config.linear_model();
  std::vector<double> grid(static_cast<std::size_t>(config.locus.kp_count));
  if (grid.size() == 1) {
    grid[0] = config.locus.kp_min;
  } else {
    const double lmin = std::log10(config.locus.kp_min);
    const double lmax = std::log10(config.locus.kp_max);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid[i] = std::pow(
          10.0, lmin + (lmax - lmin) * static_cast<double>(i) /
                           static_cast<double>(grid.size() - 1));
    }
  }

  LocusSummary s;
  s.max_real_part = -std::numeric_limits<double>::infinity();
  for (auto form : {CharacteristicForm::kDerived, CharacteristicForm::kReported}) {
    const auto locus = root_locus(model, grid, form);
    const char* name = form == CharacteristicForm::kDerived
                           ? "locus_derived.csv"
                           : "locus_reported.csv";
    std::ofstream out(outdir / name);
    std::size_t width = 0;
    for (const auto& pt : locus) width = std::max(width, pt.roots.size());
    out << "Kp";
    for (std::size_t i = 1; i <= width; ++i) out << ",re" << i << ",im" << i;
    out << "\n";
    out.precision(15);
    for (const auto& pt : locus) {
      out << pt.kp;
      for (std::size_t i = 0; i < width; ++i) {
        if (i < pt.roots.size()) {
          out << "," << pt.roots[i].real() << "," << pt.roots[i].imag();
        } else {
          out << ",,";
        }
      }
      out << "\n";
    }
    if (form == CharacteristicForm::kDerived) {
      bool stable = true;
      double max_re = -std::numeric_limits<double>::infinity();
      for (const auto& pt : locus) {
        for (const auto& r : pt.roots) {
          if (std::abs(r) < 1e-9) continue;  // structural rigid-body root
          max_re = std::max(max_re, r.real());
          if (r.real() >= 0.0) stable = false;
        }
      }
      s.derived_stable = stable;
      s.max_real_part = max_re;
    }
  }

  json summary;
  summary["derived_nonorigin_roots_stable"] = s.derived_stable;
  summary["derived_max_real_part"] = s.max_real_part;
  summary["grid_size"] = grid.size();
  write_json(summary, outdir / "summary.json");
  return s;
}

}  // namespace flexjoint
