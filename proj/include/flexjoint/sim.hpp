#pragma once

#include "flexjoint/control.hpp"
#include "flexjoint/plant.hpp"
#include "flexjoint/trace.hpp"

namespace flexjoint {

struct SimSettings {
  double dt = 1e-4;             ///< integrator step (s)
  double control_period = 1e-3; ///< zero-order-hold period (s)
  double duration = 5.0;        ///< total simulated time (s)
  int record_stride = 1;        ///< record every N-th controller sample
  bool quantize = true;         ///< feed quantized theta to the controller

  void validate() const;
};

/// Runs the sampled-data loop: at every control instant the controller sees
/// the (optionally quantized) motor position and the raw motor velocity,
/// its torque is held for the next interval, and the plant integrates
/// control_period / dt RK4 substeps in between. The trace is recorded at
/// the controller rate (subject to record_stride) and the run is fully
/// deterministic.
SimTrace run_closed_loop(const Plant& plant, Controller& controller,
                         PlantState state, const SimSettings& settings);

}  // namespace flexjoint
