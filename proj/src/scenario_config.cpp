#include <attsync/errors.hpp>
#include <attsync/scenario_config.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace attsync {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N) fail(path, "expected an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::VectorXd dynamic_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Eigen::MatrixXd dynamic_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array()) fail(rp, "expected a row array");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) fail(rp, "rows must all have the same length");
  }
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = number(j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

Mat3d mat3(const json& j, const std::string& path) {
  const Eigen::MatrixXd m = dynamic_matrix(j, path);
  if (m.rows() != 3 || m.cols() != 3) fail(path, "expected a 3x3 matrix");
  return m;
}

Mat3d gain_matrix(const json& j, const std::string& path) {
  if (j.is_number()) return number(j, path) * Mat3d::Identity();
  return mat3(j, path);
}

GainSetd parse_gains(const json& j, const std::string& path, const GainSetd& base) {
  if (!j.is_object()) fail(path, "expected an object");
  GainSetd g = base;
  for (const auto& [key, value] : j.items()) {
    const std::string kp = path + "." + key;
    if (key == "lambda") {
      g.lambda = gain_matrix(value, kp);
    } else if (key == "k") {
      g.k = gain_matrix(value, kp);
    } else if (key == "gamma") {
      g.gamma = value.is_number() ? ThetaVecd::Constant(number(value, kp)) : fixed_vector<6>(value, kp);
    } else {
      fail(kp, "unknown key");
    }
  }
  try {
    g.validate();
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return g;
}

Mat3d parse_inertia(const json& j, const std::string& path) {
  Mat3d J;
  if (j.is_array() && !j.empty() && j[0].is_number()) {
    if (j.size() != 6) fail(path, "expected 6 values [J11, J12, J13, J22, J23, J33] or a 3x3 matrix");
    J = inertia_from_theta(fixed_vector<6>(j, path));
  } else {
    J = mat3(j, path);
  }
  try {
    InertiaParamsd check(J);
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  return J;
}

ReferenceTrajectory parse_reference(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = j.value("kind", std::string("constant"));
  auto vec = [&](const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing");
    return fixed_vector<3>(j.at(key), path + "." + key);
  };
  if (kind == "constant") return ReferenceTrajectory::constant(vec("sigma"));
  if (kind == "sinusoid") {
    return ReferenceTrajectory::sinusoid(vec("amplitude"), vec("frequency"), vec("phase"),
                                         vec("offset"));
  }
  fail(path + ".kind", "unknown reference kind '" + kind + "' (expected constant or sinusoid)");
}

json to_json(const Vec3d& v) { return json::array({v(0), v(1), v(2)}); }

json to_json_matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json to_json_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const GainSetd& g) {
  return {{"lambda", to_json_matrix(g.lambda)},
          {"k", to_json_matrix(g.k)},
          {"gamma", to_json_vector(g.gamma)}};
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("$", "expected a JSON object");
  static const char* const known[] = {"mode",       "dt",           "duration",       "seed",
                                      "shadow_switch", "random_bounds", "gains",        "spacecraft",
                                      "adjacency",  "leader_weights", "reference",    "output",
                                      "guard",      "coupling"};
  for (const auto& [key, value] : doc.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(key, "unknown key");
  }

  ScenarioConfig cfg;
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) fail("mode", "expected a string");
    try {
      cfg.mode = mode_from_string(doc["mode"].get<std::string>());
    } catch (const ConfigError& e) {
      fail("mode", e.what());
    }
  }
  if (doc.contains("dt")) cfg.dt = number(doc["dt"], "dt");
  if (doc.contains("duration")) cfg.duration = number(doc["duration"], "duration");
  if (!(cfg.dt > 0.0)) fail("dt", "must be positive");
  if (!(cfg.duration >= cfg.dt)) fail("duration", "must be at least dt");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("shadow_switch")) {
    if (!doc["shadow_switch"].is_boolean()) fail("shadow_switch", "expected true or false");
    cfg.shadow_switch = doc["shadow_switch"].get<bool>();
  }
  if (doc.contains("coupling")) {
    if (!doc["coupling"].is_string()) fail("coupling", "expected a string");
    try {
      cfg.coupling = coupling_from_string(doc["coupling"].get<std::string>());
    } catch (const ConfigError& e) {
      fail("coupling", e.what());
    }
  }
  if (doc.contains("random_bounds")) {
    const json& rb = doc["random_bounds"];
    if (!rb.is_object()) fail("random_bounds", "expected an object");
    if (rb.contains("sigma")) cfg.sigma_bound = number(rb["sigma"], "random_bounds.sigma");
    if (rb.contains("omega")) cfg.omega_bound = number(rb["omega"], "random_bounds.omega");
    if (cfg.sigma_bound < 0.0) fail("random_bounds.sigma", "must be nonnegative");
    if (cfg.omega_bound < 0.0) fail("random_bounds.omega", "must be nonnegative");
  }
  if (doc.contains("gains")) cfg.gains = parse_gains(doc["gains"], "gains", GainSetd{});

  if (!doc.contains("spacecraft")) fail("spacecraft", "missing");
  const json& craft = doc["spacecraft"];
  if (!craft.is_array() || craft.empty()) fail("spacecraft", "expected a nonempty array");
  for (std::size_t i = 0; i < craft.size(); ++i) {
    const std::string p = "spacecraft[" + std::to_string(i) + "]";
    const json& c = craft[i];
    if (!c.is_object()) fail(p, "expected an object");
    for (const auto& [key, value] : c.items()) {
      if (key != "inertia" && key != "initial" && key != "theta_hat0" && key != "gains") {
        fail(p + "." + key, "unknown key");
      }
    }
    SpacecraftConfig sc;
    if (!c.contains("inertia")) fail(p + ".inertia", "missing");
    sc.inertia = parse_inertia(c["inertia"], p + ".inertia");
    if (c.contains("initial")) {
      const json& init = c["initial"];
      if (init.is_string()) {
        if (init.get<std::string>() != "random") fail(p + ".initial", "expected \"random\" or an object");
      } else if (init.is_object()) {
        SpacecraftStated st;
        if (!init.contains("sigma")) fail(p + ".initial.sigma", "missing");
        if (!init.contains("omega")) fail(p + ".initial.omega", "missing");
        st.sigma = fixed_vector<3>(init["sigma"], p + ".initial.sigma");
        st.omega = fixed_vector<3>(init["omega"], p + ".initial.omega");
        sc.initial = st;
      } else {
        fail(p + ".initial", "expected \"random\" or an object");
      }
    }
    if (c.contains("theta_hat0")) sc.theta_hat0 = fixed_vector<6>(c["theta_hat0"], p + ".theta_hat0");
    if (c.contains("gains")) sc.gains = parse_gains(c["gains"], p + ".gains", cfg.gains);
    cfg.spacecraft.push_back(std::move(sc));
  }

  if (!doc.contains("adjacency")) fail("adjacency", "missing");
  cfg.adjacency = dynamic_matrix(doc["adjacency"], "adjacency");
  const auto n = static_cast<Eigen::Index>(cfg.spacecraft.size());
  if (cfg.adjacency.rows() != n || cfg.adjacency.cols() != n) {
    fail("adjacency", "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  if (doc.contains("leader_weights")) {
    cfg.leader_weights = dynamic_vector(doc["leader_weights"], "leader_weights");
    if (cfg.leader_weights->size() != n) {
      fail("leader_weights", "expected " + std::to_string(n) + " entries");
    }
  }
  try {
    CommTopology check(cfg.adjacency, cfg.leader_weights);
  } catch (const ValidationError& e) {
    fail("adjacency", e.what());
  }

  if (doc.contains("reference")) cfg.reference = parse_reference(doc["reference"], "reference");
  if (cfg.mode == Mode::tracking && !cfg.leader_weights) {
    fail("leader_weights", "required in tracking mode");
  }

  if (doc.contains("output")) {
    const json& out = doc["output"];
    if (!out.is_object()) fail("output", "expected an object");
    if (out.contains("decimate")) {
      if (!out["decimate"].is_number_integer() || out["decimate"].get<long long>() < 1) {
        fail("output.decimate", "expected a positive integer");
      }
      cfg.decimate = out["decimate"].get<int>();
    }
  }
  if (doc.contains("guard")) {
    const json& g = doc["guard"];
    if (!g.is_object()) fail("guard", "expected an object");
    if (g.contains("assert_converged")) {
      if (!g["assert_converged"].is_boolean()) fail("guard.assert_converged", "expected true or false");
      cfg.guard.assert_converged = g["assert_converged"].get<bool>();
    }
    if (g.contains("tolerance")) {
      cfg.guard.tolerance = number(g["tolerance"], "guard.tolerance");
      if (!(cfg.guard.tolerance > 0.0)) fail("guard.tolerance", "must be positive");
    }
  }
  return cfg;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is one past the offending character.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": malformed JSON (" + e.what() + ")");
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["mode"] = to_string(cfg.mode);
  doc["dt"] = cfg.dt;
  doc["duration"] = cfg.duration;
  doc["seed"] = cfg.seed;
  doc["shadow_switch"] = cfg.shadow_switch;
  doc["coupling"] = to_string(cfg.coupling);
  doc["random_bounds"] = {{"sigma", cfg.sigma_bound}, {"omega", cfg.omega_bound}};
  doc["gains"] = to_json(cfg.gains);
  json craft = json::array();
  for (const auto& sc : cfg.spacecraft) {
    json c;
    c["inertia"] = to_json_matrix(sc.inertia);
    if (sc.initial) {
      c["initial"] = {{"sigma", to_json(sc.initial->sigma)}, {"omega", to_json(sc.initial->omega)}};
    } else {
      c["initial"] = "random";
    }
    c["theta_hat0"] = to_json_vector(sc.theta_hat0);
    if (sc.gains) c["gains"] = to_json(*sc.gains);
    craft.push_back(std::move(c));
  }
  doc["spacecraft"] = std::move(craft);
  doc["adjacency"] = to_json_matrix(cfg.adjacency);
  if (cfg.leader_weights) doc["leader_weights"] = to_json_vector(*cfg.leader_weights);
  const ReferenceTrajectory& r = cfg.reference;
  if (r.kind() == ReferenceTrajectory::Kind::constant) {
    doc["reference"] = {{"kind", "constant"}, {"sigma", to_json(r.offset())}};
  } else {
    doc["reference"] = {{"kind", "sinusoid"},
                        {"amplitude", to_json(r.amplitude())},
                        {"frequency", to_json(r.frequency())},
                        {"phase", to_json(r.phase())},
                        {"offset", to_json(r.offset())}};
  }
  doc["output"] = {{"decimate", cfg.decimate}};
  doc["guard"] = {{"assert_converged", cfg.guard.assert_converged},
                  {"tolerance", cfg.guard.tolerance}};
  return doc;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  Scenario sc;
  const int n = static_cast<int>(cfg.spacecraft.size());
  const auto drawn = random_initial_states(cfg.seed, n, cfg.sigma_bound, cfg.omega_bound);
  for (int i = 0; i < n; ++i) {
    const SpacecraftConfig& c = cfg.spacecraft[i];
    SpacecraftSpec spec;
    try {
      spec.inertia = InertiaParamsd(c.inertia);
    } catch (const ValidationError& e) {
      fail("spacecraft[" + std::to_string(i) + "].inertia", e.what());
    }
    spec.initial = c.initial ? *c.initial : drawn[i];
    spec.theta_hat0 = c.theta_hat0;
    spec.gains = c.gains ? *c.gains : cfg.gains;
    sc.spacecraft.push_back(std::move(spec));
  }
  try {
    sc.topology = CommTopology(cfg.adjacency, cfg.leader_weights);
  } catch (const ValidationError& e) {
    fail("adjacency", e.what());
  }
  sc.mode = cfg.mode;
  sc.reference = cfg.reference;
  sc.dt = cfg.dt;
  sc.duration = cfg.duration;
  sc.seed = cfg.seed;
  sc.shadow_switch = cfg.shadow_switch;
  sc.coupling = cfg.coupling;
  sc.decimate = cfg.decimate;
  return sc;
}

std::vector<Mat3d> paper_inertias() {
  std::vector<Mat3d> out(6);
  out[0] << 1.0, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.9;
  out[1] << 1.5, 0.2, 0.3, 0.2, 0.9, 0.4, 0.3, 0.4, 2.0;
  out[2] << 0.8, 0.1, 0.2, 0.1, 0.7, 0.3, 0.2, 0.3, 1.1;
  out[3] << 1.2, 0.3, 0.7, 0.3, 0.9, 0.2, 0.7, 0.2, 1.4;
  out[4] << 0.9, 0.15, 0.3, 0.15, 1.2, 0.4, 0.3, 0.4, 1.2;
  out[5] << 1.1, 0.35, 0.45, 0.35, 1.0, 0.5, 0.45, 0.5, 1.3;
  return out;
}

Eigen::MatrixXd paper_adjacency() {
  Eigen::MatrixXd a(6, 6);
  a << 0, 0, 0, 1, 1, 1,
       1, 0, 0, 0, 0, 0,
       1, 1, 0, 0, 0, 0,
       1, 0, 0, 0, 0, 0,
       0, 0, 0, 1, 0, 0,
       0, 0, 0, 0, 1, 0;
  return a;
}

std::vector<std::string> preset_names() { return {"paper-leaderless", "paper-tracking"}; }

ScenarioConfig preset(const std::string& name, std::uint64_t seed) {
  if (name != "paper-leaderless" && name != "paper-tracking") {
    std::string list;
    for (const auto& p : preset_names()) list += (list.empty() ? "" : ", ") + p;
    throw ConfigError("unknown preset '" + name + "' (available: " + list + ")");
  }
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.gains = GainSetd::uniform(1.0, 3.0, 3.0);
  for (const Mat3d& J : paper_inertias()) {
    SpacecraftConfig sc;
    sc.inertia = J;
    cfg.spacecraft.push_back(sc);
  }
  cfg.adjacency = paper_adjacency();
  if (name == "paper-tracking") {
    cfg.mode = Mode::tracking;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(6);
    b(0) = 1.0;
    cfg.leader_weights = b;
    cfg.reference = ReferenceTrajectory::constant(Vec3d(0.1, 0.3, 0.5));
  } else {
    cfg.mode = Mode::leaderless;
    cfg.reference = ReferenceTrajectory::constant(Vec3d(0.1, 0.3, 0.5));
  }
  return cfg;
}

}  // namespace attsync
