#include "flexjoint/sim.hpp"

#include <cmath>

namespace flexjoint {

void SimSettings::validate() const {
  require(dt > 0.0, "SimSettings: dt must be > 0");
  require(control_period > 0.0, "SimSettings: control_period must be > 0");
  require(duration > 0.0, "SimSettings: duration must be > 0");
  require(record_stride >= 1, "SimSettings: record_stride must be >= 1");
  const double ratio = control_period / dt;
  require(std::abs(ratio - std::round(ratio)) < 1e-9 * ratio,
          "SimSettings: control_period must be an integer multiple of dt");
}

SimTrace run_closed_loop(const Plant& plant, Controller& controller,
                         PlantState state, const SimSettings& settings) {
  settings.validate();
  const int n = plant.dof();
  require(controller.dof() == n, "run_closed_loop: controller/plant dof");
  require(static_cast<int>(state.q.size()) == n,
          "run_closed_loop: state/plant dof");

  const int substeps =
      static_cast<int>(std::llround(settings.control_period / settings.dt));
  const std::size_t n_controls = static_cast<std::size_t>(
      std::llround(settings.duration / settings.control_period));

  SimTrace trace(n, settings.control_period *
                        static_cast<double>(settings.record_stride));
  JointVector theta_meas(n);
  for (std::size_t k = 0; k <= n_controls; ++k) {
    const double t = static_cast<double>(k) * settings.control_period;
    for (int i = 0; i < n; ++i) {
      theta_meas[i] = settings.quantize
                          ? quantize_encoder(state.theta[i],
                                             plant.params().encoder_bits)
                          : state.theta[i];
    }
    const JointVector u = controller.compute(k, t, theta_meas, state.thetad);
    if (k % static_cast<std::size_t>(settings.record_stride) == 0) {
      trace.append(t, state.q, state.qd, state.theta, state.thetad,
                   state.theta - state.q, plant.joint_torque(state), u,
                   controller.residual(), controller.torsion_estimate());
    }
    if (k == n_controls) break;
    for (int i = 0; i < substeps; ++i) {
      plant.step(state, u, settings.dt);
    }
  }
  return trace;
}

}  // namespace flexjoint
