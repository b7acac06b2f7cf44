// Experiment driver: free-fall, trajectory tracking, nonlinearity curves,
// and root-locus experiments with CSV + manifest outputs.

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "flexjoint/harness.hpp"

namespace {

using flexjoint::AppConfig;

struct Job {
  AppConfig config;
  std::filesystem::path outdir;
};

int run_tracking_jobs(const std::vector<Job>& jobs, int parallel) {
  std::atomic<int> next{0};
  std::atomic<int> failures{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < static_cast<int>(jobs.size());
         i = next.fetch_add(1)) {
      const Job& job = jobs[static_cast<std::size_t>(i)];
      try {
        const auto summary = flexjoint::run_tracking(job.config, job.outdir);
        std::printf("[track %-8s] max|e| = %.6e rad (window %.2f s) -> %s\n",
                    summary.variant.c_str(), summary.max_error_overall,
                    summary.motion_end, job.outdir.string().c_str());
      } catch (const std::exception& e) {
        std::fprintf(stderr, "[track] %s failed: %s\n",
                     job.outdir.string().c_str(), e.what());
        failures.fetch_add(1);
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads =
      std::max(1, std::min<int>(parallel, static_cast<int>(jobs.size())));
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return failures.load();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible-joint manipulator simulation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string controller;
  double dt_override = 0.0;
  double duration_override = 0.0;
  int jobs = 1;

  auto add_common = [&](CLI::App* cmd, bool with_controller) {
    cmd->add_option("--config", config_path, "configuration file (JSON)")
        ->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--dt", dt_override, "integrator step override (s)");
    cmd->add_option("--duration", duration_override,
                    "simulation duration override (s)");
    if (with_controller) {
      cmd->add_option("--controller", controller,
                      "variant: ff | ff_pd | full | ff_pd_vs | all");
      cmd->add_option("--jobs", jobs, "parallel runs for --controller all");
    }
  };

  CLI::App* free_fall = app.add_subcommand("free-fall", "u = 0 drop response");
  add_common(free_fall, false);
  CLI::App* track = app.add_subcommand("track", "closed-loop trajectory run");
  add_common(track, true);
  CLI::App* curves =
      app.add_subcommand("curves", "friction and hysteresis characteristics");
  add_common(curves, false);
  CLI::App* rootlocus =
      app.add_subcommand("rootlocus", "linearized torsion-feedback loci");
  add_common(rootlocus, false);

  CLI11_PARSE(app, argc, argv);

  try {
    AppConfig config = flexjoint::load_config(config_path);
    if (dt_override > 0.0) config.sim.dt = dt_override;
    if (duration_override > 0.0) config.sim.duration = duration_override;
    const std::filesystem::path out(out_dir);

    if (app.got_subcommand(free_fall)) {
      config.controller.type = flexjoint::ControllerType::kNone;
      const auto summary = flexjoint::run_free_fall(config, out);
      std::printf("[free-fall] creep = [%.4f, %.4f] deg, settled = %s at %.1f s\n",
                  summary.creep_deg[0], summary.creep_deg[1],
                  summary.settled ? "yes" : "no", summary.settle_time);
      return 0;
    }
    if (app.got_subcommand(curves)) {
      const auto summary = flexjoint::run_curves(config, out);
      std::printf("[curves] loop area = %.6f N m deg, closure = %.3e N m\n",
                  summary.loop_area, summary.loop_closure_error);
      return 0;
    }
    if (app.got_subcommand(rootlocus)) {
      const auto summary = flexjoint::run_rootlocus(config, out);
      std::printf("[rootlocus] non-origin derived roots stable: %s "
                  "(max Re = %.4f)\n",
                  summary.derived_stable ? "yes" : "no",
                  summary.max_real_part);
      return 0;
    }

    // track
    if (!controller.empty() && controller != "all") {
      config.controller.variant = controller;
    }
    if (controller == "all") {
      const bool control_two =
          config.controller.type == flexjoint::ControllerType::kControlTwo;
      const std::vector<std::string> variants =
          control_two ? std::vector<std::string>{"ff", "ff_pd", "ff_pd_vs"}
                      : std::vector<std::string>{"ff", "ff_pd", "full"};
      std::vector<Job> batch;
      for (const auto& v : variants) {
        Job job{config, out / v};
        job.config.controller.variant = v;
        batch.push_back(std::move(job));
      }
      return run_tracking_jobs(batch, jobs) == 0 ? 0 : 1;
    }
    const auto summary = flexjoint::run_tracking(config, out);
    std::printf("[track %-8s] max|e| = %.6e rad over [0, %.2f] s\n",
                summary.variant.c_str(), summary.max_error_overall,
                summary.motion_end);
    return 0;
  } catch (const flexjoint::NonFiniteStateError& e) {
    std::fprintf(stderr, "simulation diverged: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
