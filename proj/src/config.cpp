#include "flexjoint/config.hpp"

#include <fstream>

namespace flexjoint {

namespace {

using nlohmann::json;

json vec_to_json(const JointVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

JointVector vec_from_json(const json& a, const char* what) {
  if (!a.is_array() || a.empty()) {
    throw std::invalid_argument(std::string("config: ") + what +
                                " must be a non-empty array");
  }
  JointVector v(static_cast<Eigen::Index>(a.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = a[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

template <typename T, typename ToJson>
json per_joint_to_json(const std::vector<T>& items, ToJson field) {
  json a = json::array();
  for (const auto& it : items) a.push_back(field(it));
  return a;
}

}  // namespace

PlantParams AppConfig::plant_params() const {
  PlantParams p;
  p.model = std::make_shared<TwoLinkArm>(arm);
  p.motor_inertia = motor_inertia;
  p.friction = friction;
  p.hysteresis = hysteresis;
  p.joint_damping = joint_damping;
  p.encoder_bits = encoder_bits;
  return p;
}

LinearJointModel AppConfig::linear_model() const {
  LinearJointModel m;
  TwoLinkArm arm_model(arm);
  JointVector zero = JointVector::Zero(2);
  m.link_inertia = locus.link_inertia > 0.0 ? locus.link_inertia
                                            : arm_model.inertia(zero)(0, 0);
  m.motor_inertia = motor_inertia[0];
  m.viscous = friction[0].viscous;
  m.stiffness = hysteresis[0].k1 * kDegPerRad;
  m.observer_gain = observer.gain[0];
  return m;
}

void AppConfig::validate() const {
  plant_params().validate();
  sim.validate();
  check_dim(initial_pose_deg, 2, "config initial_pose_deg");
  trajectory.validate();
  controller.gains.validate();
  require((observer.gain.array() > 0.0).all(),
          "config: observer gains must be > 0");
  require(observer.friction_scale >= 0.0,
          "config: observer friction_scale must be >= 0");
  require(curves.friction_samples >= 2, "config: friction_samples >= 2");
  require(curves.friction_velocity_max > 0.0,
          "config: friction_velocity_max > 0");
  require(curves.loop_amplitude_deg > 0.0, "config: loop_amplitude_deg > 0");
  require(curves.loop_step_deg > 0.0, "config: loop_step_deg > 0");
  require(locus.kp_min > 0.0 && locus.kp_max >= locus.kp_min,
          "config: locus gain range invalid");
  require(locus.kp_count >= 1, "config: locus kp_count >= 1");
  const std::string& v = controller.variant;
  require(v == "ff" || v == "ff_pd" || v == "full" || v == "ff_pd_vs",
          "config: controller variant must be ff|ff_pd|full|ff_pd_vs");
}

AppConfig default_config() {
  AppConfig c;
  c.arm = ArmGeometry{};
  c.motor_inertia = JointVector::Constant(2, 1.0);
  c.friction.assign(2, FrictionParams{});
  c.hysteresis.assign(2, HysteresisParams{});
  c.joint_damping = JointVector::Constant(2, 1.0);
  c.encoder_bits = 14;

  c.sim = SimSettings{};
  c.initial_pose_deg = JointVector::Zero(2);

  // Motion of record: swing both joints to the upper pose, dwell, return.
  c.trajectory.start_deg = (JointVector(2) << -90.0, 0.0).finished();
  c.trajectory.waypoints = {
      Waypoint{(JointVector(2) << 0.0, 90.0).finished(), 1.1, 0.5},
      Waypoint{(JointVector(2) << -90.0, 0.0).finished(), 1.6, 0.0}};

  c.controller.type = ControllerType::kControlOne;
  c.controller.variant = "full";
  c.controller.gains.kp = JointVector::Constant(2, 1.3);
  c.controller.gains.kd = JointVector::Constant(2, 0.43);

  c.observer.gain = JointVector::Constant(2, 100.0);
  c.observer.friction_scale = 1.0;
  return c;
}

nlohmann::json to_json(const AppConfig& c) {
  json j;
  j["plant"] = {
      {"arm",
       {{"link_mass", c.arm.m},
        {"link_length", c.arm.l},
        {"link_inertia", c.arm.link_inertia},
        {"gravity", c.arm.gravity}}},
      {"motor_inertia", vec_to_json(c.motor_inertia)},
      {"friction",
       {{"coulomb", per_joint_to_json(c.friction,
                                      [](const auto& f) { return f.coulomb; })},
        {"stribeck",
         per_joint_to_json(c.friction,
                           [](const auto& f) { return f.stribeck; })},
        {"viscous",
         per_joint_to_json(c.friction,
                           [](const auto& f) { return f.viscous; })},
        {"stribeck_velocity",
         per_joint_to_json(c.friction,
                           [](const auto& f) { return f.stribeck_velocity; })},
        {"shape", per_joint_to_json(c.friction,
                                    [](const auto& f) { return f.shape; })},
        {"sigmoid_scale",
         per_joint_to_json(c.friction,
                           [](const auto& f) { return f.sigmoid_scale; })}}},
      {"hysteresis",
       {{"k1",
         per_joint_to_json(c.hysteresis, [](const auto& h) { return h.k1; })},
        {"k3",
         per_joint_to_json(c.hysteresis, [](const auto& h) { return h.k3; })},
        {"weight", per_joint_to_json(c.hysteresis,
                                     [](const auto& h) { return h.weight; })},
        {"psi",
         per_joint_to_json(c.hysteresis, [](const auto& h) { return h.psi; })},
        {"xi",
         per_joint_to_json(c.hysteresis, [](const auto& h) { return h.xi; })},
        {"eta", per_joint_to_json(c.hysteresis,
                                  [](const auto& h) { return h.eta; })}}},
      {"joint_damping", vec_to_json(c.joint_damping)},
      {"encoder_bits", c.encoder_bits}};

  j["sim"] = {{"dt", c.sim.dt},
              {"control_period", c.sim.control_period},
              {"duration", c.sim.duration},
              {"record_stride", c.sim.record_stride},
              {"quantize", c.sim.quantize}};

  j["initial_pose_deg"] = vec_to_json(c.initial_pose_deg);

  json waypoints = json::array();
  for (const auto& w : c.trajectory.waypoints) {
    waypoints.push_back({{"target_deg", vec_to_json(w.target_deg)},
                         {"duration", w.duration},
                         {"hold", w.hold}});
  }
  j["trajectory"] = {{"start_deg", vec_to_json(c.trajectory.start_deg)},
                     {"waypoints", waypoints}};

  const char* type = c.controller.type == ControllerType::kNone
                         ? "none"
                         : (c.controller.type == ControllerType::kControlOne
                                ? "control1"
                                : "control2");
  j["controller"] = {{"type", type},
                     {"variant", c.controller.variant},
                     {"kp", vec_to_json(c.controller.gains.kp)},
                     {"kd", vec_to_json(c.controller.gains.kd)}};

  j["observer"] = {{"gain", vec_to_json(c.observer.gain)},
                   {"friction_scale", c.observer.friction_scale}};

  j["curves"] = {{"friction_velocity_max", c.curves.friction_velocity_max},
                 {"friction_samples", c.curves.friction_samples},
                 {"loop_amplitude_deg", c.curves.loop_amplitude_deg},
                 {"loop_step_deg", c.curves.loop_step_deg}};

  j["locus"] = {{"kp_min", c.locus.kp_min},
                {"kp_max", c.locus.kp_max},
                {"kp_count", c.locus.kp_count},
                {"link_inertia", c.locus.link_inertia}};
  return j;
}

AppConfig from_json(const nlohmann::json& j) {
  AppConfig c;

  const json& plant = j.at("plant");
  const json& arm = plant.at("arm");
  c.arm.m = arm.at("link_mass").get<double>();
  c.arm.l = arm.at("link_length").get<double>();
  c.arm.link_inertia = arm.at("link_inertia").get<double>();
  c.arm.gravity = arm.at("gravity").get<double>();
  c.motor_inertia = vec_from_json(plant.at("motor_inertia"), "motor_inertia");
  const Eigen::Index n = c.motor_inertia.size();

  const json& fr = plant.at("friction");
  auto per_joint = [n](const json& a, const char* what) {
    JointVector v = vec_from_json(a, what);
    check_dim(v, n, what);
    return v;
  };
  const JointVector fc = per_joint(fr.at("coulomb"), "friction.coulomb");
  const JointVector fs = per_joint(fr.at("stribeck"), "friction.stribeck");
  const JointVector fb = per_joint(fr.at("viscous"), "friction.viscous");
  const JointVector fv =
      per_joint(fr.at("stribeck_velocity"), "friction.stribeck_velocity");
  const JointVector fm = per_joint(fr.at("shape"), "friction.shape");
  const JointVector fg =
      per_joint(fr.at("sigmoid_scale"), "friction.sigmoid_scale");
  c.friction.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& f = c.friction[static_cast<std::size_t>(i)];
    f.coulomb = fc[i];
    f.stribeck = fs[i];
    f.viscous = fb[i];
    f.stribeck_velocity = fv[i];
    f.shape = fm[i];
    f.sigmoid_scale = fg[i];
  }

  const json& hy = plant.at("hysteresis");
  const JointVector k1 = per_joint(hy.at("k1"), "hysteresis.k1");
  const JointVector k3 = per_joint(hy.at("k3"), "hysteresis.k3");
  const JointVector w = per_joint(hy.at("weight"), "hysteresis.weight");
  const JointVector psi = per_joint(hy.at("psi"), "hysteresis.psi");
  const JointVector xi = per_joint(hy.at("xi"), "hysteresis.xi");
  const JointVector eta = per_joint(hy.at("eta"), "hysteresis.eta");
  c.hysteresis.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& h = c.hysteresis[static_cast<std::size_t>(i)];
    h.k1 = k1[i];
    h.k3 = k3[i];
    h.weight = w[i];
    h.psi = psi[i];
    h.xi = xi[i];
    h.eta = eta[i];
  }

  c.joint_damping = per_joint(plant.at("joint_damping"), "joint_damping");
  c.encoder_bits = plant.at("encoder_bits").get<int>();

  const json& sim = j.at("sim");
  c.sim.dt = sim.at("dt").get<double>();
  c.sim.control_period = sim.at("control_period").get<double>();
  c.sim.duration = sim.at("duration").get<double>();
  c.sim.record_stride = sim.at("record_stride").get<int>();
  c.sim.quantize = sim.at("quantize").get<bool>();

  c.initial_pose_deg =
      vec_from_json(j.at("initial_pose_deg"), "initial_pose_deg");

  const json& tr = j.at("trajectory");
  c.trajectory.start_deg = vec_from_json(tr.at("start_deg"), "start_deg");
  c.trajectory.waypoints.clear();
  for (const json& wj : tr.at("waypoints")) {
    Waypoint wp;
    wp.target_deg = vec_from_json(wj.at("target_deg"), "waypoint target");
    wp.duration = wj.at("duration").get<double>();
    wp.hold = wj.at("hold").get<double>();
    c.trajectory.waypoints.push_back(std::move(wp));
  }

  const json& ct = j.at("controller");
  const std::string type = ct.at("type").get<std::string>();
  if (type == "none") {
    c.controller.type = ControllerType::kNone;
  } else if (type == "control1") {
    c.controller.type = ControllerType::kControlOne;
  } else if (type == "control2") {
    c.controller.type = ControllerType::kControlTwo;
  } else {
    throw std::invalid_argument("config: unknown controller type " + type);
  }
  c.controller.variant = ct.at("variant").get<std::string>();
  c.controller.gains.kp = vec_from_json(ct.at("kp"), "controller kp");
  c.controller.gains.kd = vec_from_json(ct.at("kd"), "controller kd");

  const json& ob = j.at("observer");
  c.observer.gain = vec_from_json(ob.at("gain"), "observer gain");
  c.observer.friction_scale = ob.at("friction_scale").get<double>();

  const json& cu = j.at("curves");
  c.curves.friction_velocity_max = cu.at("friction_velocity_max").get<double>();
  c.curves.friction_samples = cu.at("friction_samples").get<int>();
  c.curves.loop_amplitude_deg = cu.at("loop_amplitude_deg").get<double>();
  c.curves.loop_step_deg = cu.at("loop_step_deg").get<double>();

  const json& lo = j.at("locus");
  c.locus.kp_min = lo.at("kp_min").get<double>();
  c.locus.kp_max = lo.at("kp_max").get<double>();
  c.locus.kp_count = lo.at("kp_count").get<int>();
  c.locus.link_inertia = lo.at("link_inertia").get<double>();

  c.validate();
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path.string());
  }
  json file = json::parse(in);
  // A manifest wraps the configuration under "config".
  if (file.contains("config")) file = file.at("config");
  json merged = to_json(default_config());
  merged.merge_patch(file);
  return from_json(merged);
}

}  // namespace flexjoint
