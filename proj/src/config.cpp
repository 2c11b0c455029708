#include "satrise/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace satrise {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

// A scalar broadcasts to all six components.
Vec6 get_vec6(const json& j, const std::string& path) {
  if (j.is_number()) return Vec6::Constant(get_number(j, path));
  if (!j.is_array() || j.size() != 6) fail(path, "expected a number or an array of 6 numbers");
  Vec6 v;
  for (int i = 0; i < 6; ++i) v(i) = get_number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return v;
}

// Accepts a 3x3 nested array or the 3 diagonal entries.
Mat3 get_mat3(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a 3-vector diagonal or a 3x3 array");
  if (j.size() == 3 && j[0].is_number()) {
    Vec3 d;
    for (int i = 0; i < 3; ++i) d(i) = get_number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
    return d.asDiagonal();
  }
  if (j.size() != 3) fail(path, "expected a 3-vector diagonal or a 3x3 array");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.size() != 3) fail(rp, "expected 3 numbers");
    for (int c = 0; c < 3; ++c) m(r, c) = get_number(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

using Handler = std::function<void(const json&, const std::string&)>;

void visit_object(const json& j, const std::string& path, const std::map<std::string, Handler>& handlers) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string kp = path.empty() ? key : path + "." + key;
    const auto it = handlers.find(key);
    if (it == handlers.end()) fail(kp, "unknown key");
    it->second(value, kp);
  }
}

void parse_signal(const json& j, const std::string& path, SinusoidSignal& s) {
  visit_object(j, path, {
      {"offset", [&](const json& v, const std::string& p) { s.offset = get_vec6(v, p); }},
      {"amplitude", [&](const json& v, const std::string& p) { s.amplitude = get_vec6(v, p); }},
      {"frequency", [&](const json& v, const std::string& p) { s.frequency = get_vec6(v, p); }},
      {"phase", [&](const json& v, const std::string& p) { s.phase = get_vec6(v, p); }},
  });
}

json vec_json(const Vec6& v) { return json(std::vector<double>(v.data(), v.data() + 6)); }

json signal_json(const SinusoidSignal& s) {
  return {{"offset", vec_json(s.offset)},
          {"amplitude", vec_json(s.amplitude)},
          {"frequency", vec_json(s.frequency)},
          {"phase", vec_json(s.phase)}};
}

}  // namespace

SgnMode parse_sgn_mode(const std::string& text) {
  if (text == "hard") return SgnMode::hard();
  const std::string prefix = "smooth:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    std::size_t used = 0;
    double eps = 0.0;
    try {
      eps = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size() || !(eps > 0.0) || !std::isfinite(eps)) {
      throw ConfigError("sgn: smoothing width must be a positive number, got '" + num + "'");
    }
    return SgnMode::smooth(eps);
  }
  throw ConfigError("sgn: expected 'hard' or 'smooth:EPS', got '" + text + "'");
}

std::string to_string(const SgnMode& mode) {
  if (mode.kind == SgnMode::Kind::kHard) return "hard";
  std::ostringstream os;
  os.precision(17);
  os << "smooth:" << mode.eps;
  return os.str();
}

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<document>: ") + e.what());
  }

  RunConfig cfg;
  Scenario& sc = cfg.scenario;
  std::optional<Vec6> gamma1;

  auto number_into = [](double& dst) {
    return [&dst](const json& v, const std::string& p) { dst = get_number(v, p); };
  };
  auto vec_into = [](Vec6& dst) {
    return [&dst](const json& v, const std::string& p) { dst = get_vec6(v, p); };
  };

  visit_object(doc, "", {
      {"controller", [&](const json& v, const std::string& p) {
         if (!v.is_string()) fail(p, "expected a string");
         const auto kind = parse_controller_kind(v.get<std::string>());
         if (!kind) fail(p, "expected proposed, proposed-no-sgn or baseline");
         sc.controller = *kind;
       }},
      {"dt", number_into(sc.dt)},
      {"duration", number_into(sc.duration)},
      {"t_transient", number_into(sc.t_transient)},
      {"divergence_threshold", number_into(sc.divergence_threshold)},
      {"sgn", [&](const json& v, const std::string& p) {
         if (!v.is_string()) fail(p, "expected a string");
         sc.sgn = parse_sgn_mode(v.get<std::string>());
       }},
      {"seed", [&](const json& v, const std::string& p) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
           fail(p, "expected a non-negative integer");
         }
         sc.seed = v.get<std::uint64_t>();
       }},
      {"out_dir", [&](const json& v, const std::string& p) {
         if (!v.is_string()) fail(p, "expected a string");
         cfg.out_dir = v.get<std::string>();
       }},
      {"q0", vec_into(sc.q0)},
      {"qdot0", vec_into(sc.qdot0)},
      {"params", [&](const json& v, const std::string& p) {
         VehicleParams& vp = sc.params;
         visit_object(v, p, {
             {"m", number_into(vp.mass)},
             {"J", [&](const json& x, const std::string& q) { vp.inertia = get_mat3(x, q); }},
             {"L", number_into(vp.arm_length)},
             {"alpha_deg", [&](const json& x, const std::string& q) {
                vp.tilt = get_number(x, q) * std::numbers::pi / 180.0;
              }},
             {"k_f", number_into(vp.k_f)},
             {"g", number_into(vp.gravity)},
             {"u_max", vec_into(vp.u_max)},
             {"u_min", vec_into(vp.u_min)},
             {"rho", number_into(vp.rho)},
         });
       }},
      {"gains", [&](const json& v, const std::string& p) {
         ControllerGains& g = sc.gains;
         visit_object(v, p, {
             {"Lambda1", vec_into(g.lambda1)},
             {"Lambda2", vec_into(g.lambda2)},
             {"Lambda3", vec_into(g.lambda3)},
             {"Gamma1", [&](const json& x, const std::string& q) { gamma1 = get_vec6(x, q); }},
             {"Gamma2", vec_into(g.gamma2)},
             {"Theta", vec_into(g.theta)},
             {"eta", number_into(g.eta)},
             {"xi", number_into(g.xi)},
             {"zeta_Nd1", [&](const json& x, const std::string& q) { g.zeta_nd1 = get_vec6(x, q); }},
             {"zeta_Nd2", [&](const json& x, const std::string& q) { g.zeta_nd2 = get_vec6(x, q); }},
         });
       }},
      {"disturbance", [&](const json& v, const std::string& p) { parse_signal(v, p, sc.disturbance.signal); }},
      {"trajectory", [&](const json& v, const std::string& p) { parse_signal(v, p, sc.trajectory.signal); }},
  });

  if (!(sc.dt > 0.0)) fail("dt", "must be positive");
  if (!(sc.duration >= sc.dt)) fail("duration", "must be at least dt");
  // Γ1 is fixed by the controller (half thrust range, or the conservative
  // bound for the baseline); an explicit value must agree with the box.
  if (gamma1) {
    const Vec6 v_bar = input_shift(sc.params).v_bar;
    if ((*gamma1 - v_bar).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, v_bar.cwiseAbs().maxCoeff())) {
      fail("gains.Gamma1", "must equal (u_max - u_min) / 2");
    }
  }
  sc.gains.gamma1 = input_shift(sc.params).v_bar;
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string dump_run_config(const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const VehicleParams& vp = sc.params;
  const ControllerGains& g = sc.gains;
  json j;
  j["controller"] = std::string(to_string(sc.controller));
  j["dt"] = sc.dt;
  j["duration"] = sc.duration;
  j["t_transient"] = sc.t_transient;
  j["divergence_threshold"] = sc.divergence_threshold;
  j["sgn"] = to_string(sc.sgn);
  j["seed"] = sc.seed;
  j["out_dir"] = cfg.out_dir.string();
  j["q0"] = vec_json(sc.q0);
  j["qdot0"] = vec_json(sc.qdot0);
  json jm = json::array();
  for (int r = 0; r < 3; ++r) jm.push_back({vp.inertia(r, 0), vp.inertia(r, 1), vp.inertia(r, 2)});
  j["params"] = {{"m", vp.mass},         {"J", jm},
                 {"L", vp.arm_length},   {"alpha_deg", vp.tilt * 180.0 / std::numbers::pi},
                 {"k_f", vp.k_f},        {"g", vp.gravity},
                 {"u_max", vec_json(vp.u_max)}, {"u_min", vec_json(vp.u_min)},
                 {"rho", vp.rho}};
  j["gains"] = {{"Lambda1", vec_json(g.lambda1)}, {"Lambda2", vec_json(g.lambda2)},
                {"Lambda3", vec_json(g.lambda3)}, {"Gamma1", vec_json(g.gamma1)},
                {"Gamma2", vec_json(g.gamma2)},   {"Theta", vec_json(g.theta)},
                {"eta", g.eta},                   {"xi", g.xi}};
  if (g.zeta_nd1) j["gains"]["zeta_Nd1"] = vec_json(*g.zeta_nd1);
  if (g.zeta_nd2) j["gains"]["zeta_Nd2"] = vec_json(*g.zeta_nd2);
  j["disturbance"] = signal_json(sc.disturbance.signal);
  j["trajectory"] = signal_json(sc.trajectory.signal);
  return j.dump(2) + "\n";
}

}  // namespace satrise
