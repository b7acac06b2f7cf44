#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "flexjoint/control.hpp"
#include "flexjoint/linear_analysis.hpp"
#include "flexjoint/plant.hpp"
#include "flexjoint/reference.hpp"
#include "flexjoint/sim.hpp"

namespace flexjoint {

enum class ControllerType { kNone, kControlOne, kControlTwo };

struct ControllerConfig {
  ControllerType type = ControllerType::kControlOne;
  std::string variant = "full";  ///< ff | ff_pd | full | ff_pd_vs
  GainSet gains;
};

struct ObserverConfig {
  JointVector gain;             ///< L per joint (1/s)
  double friction_scale = 1.0;  ///< perturbs the observer-side friction model
};

struct CurvesConfig {
  double friction_velocity_max = 10.0;  ///< rad/s, sweep is symmetric
  int friction_samples = 2001;
  double loop_amplitude_deg = 0.2;
  double loop_step_deg = 1e-4;
};

struct LocusConfig {
  double kp_min = 0.1;
  double kp_max = 100.0;
  int kp_count = 60;
  double link_inertia = 0.0;  ///< 0 selects h11 at the outstretched pose
};

/// Fully resolved experiment configuration; every default corresponds to
/// the values baked into the simulation study this library reproduces.
struct AppConfig {
  ArmGeometry arm;
  JointVector motor_inertia;
  std::vector<FrictionParams> friction;
  std::vector<HysteresisParams> hysteresis;
  JointVector joint_damping;
  int encoder_bits = 14;

  SimSettings sim;
  JointVector initial_pose_deg;  ///< q(0) = theta(0), at rest
  TrajectoryConfig trajectory;
  ControllerConfig controller;
  ObserverConfig observer;
  CurvesConfig curves;
  LocusConfig locus;

  PlantParams plant_params() const;
  LinearJointModel linear_model() const;
  void validate() const;
};

/// Two-joint defaults for every plant, control, and observer parameter.
AppConfig default_config();

nlohmann::json to_json(const AppConfig& c);
AppConfig from_json(const nlohmann::json& j);

/// Loads a configuration file: the built-in defaults patched by the file's
/// entries (JSON merge semantics). A manifest produced by a previous run is
/// accepted as-is, which re-runs that configuration exactly.
AppConfig load_config(const std::filesystem::path& path);

}  // namespace flexjoint
