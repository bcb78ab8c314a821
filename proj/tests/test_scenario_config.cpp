#include <attsync/errors.hpp>
#include <attsync/runner.hpp>
#include <attsync/scenario_config.hpp>
#include <attsync/trajectory_io.hpp>

#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace attsync;
using nlohmann::json;

namespace {

json minimal_doc() {
  return json::parse(R"({
    "mode": "tracking",
    "spacecraft": [
      {"inertia": [1, 0, 0, 1, 0, 1], "initial": {"sigma": [0.1, 0, 0], "omega": [0, 0, 0]}},
      {"inertia": [[2, 0.1, 0], [0.1, 1, 0], [0, 0, 1.5]]}
    ],
    "adjacency": [[0, 1], [1, 0]],
    "leader_weights": [1, 0],
    "reference": {"kind": "constant", "sigma": [0.1, 0.3, 0.5]}
  })");
}

std::string error_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Tracking preset started from the true parameters, with the neighbor-acceleration
// feedforward dropped so that short runs stay well posed under adaptation.
ScenarioConfig informed(std::uint64_t seed, double duration) {
  ScenarioConfig cfg = preset("paper-tracking", seed);
  for (auto& s : cfg.spacecraft) s.theta_hat0 = theta_from_inertia(s.inertia);
  cfg.coupling = AccelerationCoupling::omitted;
  cfg.duration = duration;
  return cfg;
}

}  // namespace

TEST_SUITE("scenario_config") {

TEST_CASE("presets carry the reference experiment") {
  CHECK(preset_names() == std::vector<std::string>{"paper-leaderless", "paper-tracking"});
  const auto cfg = preset("paper-leaderless");
  CHECK(cfg.mode == Mode::leaderless);
  REQUIRE(cfg.spacecraft.size() == 6);
  Mat3d j6;
  j6 << 1.1, 0.35, 0.45, 0.35, 1.0, 0.5, 0.45, 0.5, 1.3;
  CHECK(cfg.spacecraft[5].inertia == j6);
  for (const auto& s : cfg.spacecraft) {
    CHECK(s.theta_hat0 == ThetaVecd::Zero());
    CHECK_FALSE(s.initial.has_value());
  }
  CHECK(cfg.adjacency.row(0) == Eigen::RowVectorXd::Map(std::vector<double>{0, 0, 0, 1, 1, 1}.data(), 6));
  CHECK(cfg.gains.lambda == Mat3d::Identity());
  CHECK(cfg.gains.k == 3.0 * Mat3d::Identity());
  CHECK(cfg.gains.gamma == ThetaVecd::Constant(3.0));
  CHECK(cfg.sigma_bound == 0.5);
  CHECK(cfg.omega_bound == 0.5);
  CHECK(cfg.dt == 0.005);
  CHECK(cfg.duration == 40.0);
  CHECK_FALSE(cfg.leader_weights.has_value());

  const auto tracking = preset("paper-tracking", 9);
  CHECK(tracking.mode == Mode::tracking);
  CHECK(tracking.seed == 9);
  CHECK(*tracking.leader_weights == Eigen::VectorXd::Unit(6, 0));
  CHECK(tracking.reference.at(3.0).sigma == Vec3d(0.1, 0.3, 0.5));

  CHECK_THROWS_WITH_AS(preset("fig-9"), doctest::Contains("paper-leaderless, paper-tracking"), ConfigError);
}

TEST_CASE("serialization round trip") {
  for (const auto& name : preset_names()) {
    const json first = to_json(preset(name, 4));
    CHECK(to_json(parse_config(first)) == first);
  }
  ScenarioConfig cfg = parse_config(minimal_doc());
  cfg.reference = ReferenceTrajectory::sinusoid(Vec3d(0.1, 0, 0.2), Vec3d(1, 2, 3), Vec3d::Zero(), Vec3d(0, 0.1, 0));
  cfg.coupling = AccelerationCoupling::omitted;
  cfg.spacecraft[1].gains = GainSetd::uniform(2.0, 4.0, 0.5);
  const json doc = to_json(cfg);
  CHECK(to_json(parse_config_text(doc.dump())) == doc);
}

TEST_CASE("parsing a minimal document") {
  const auto cfg = parse_config(minimal_doc());
  CHECK(cfg.mode == Mode::tracking);
  CHECK(cfg.spacecraft[0].initial->sigma == Vec3d(0.1, 0, 0));
  CHECK_FALSE(cfg.spacecraft[1].initial.has_value());
  CHECK(cfg.spacecraft[1].inertia(0, 1) == 0.1);
  CHECK(cfg.coupling == AccelerationCoupling::lagged);
  CHECK(cfg.decimate == 10);

  const Scenario sc = build_scenario(cfg);
  CHECK(sc.spacecraft[0].initial.sigma == Vec3d(0.1, 0, 0));
  // The second craft draws from the seed.
  CHECK(sc.spacecraft[1].initial.sigma != Vec3d::Zero());
  CHECK(sc.topology.leader_weight(0) == 1.0);
}

TEST_CASE("gain shorthands") {
  json doc = minimal_doc();
  doc["gains"] = {{"lambda", 2.0}, {"k", json::array({json::array({3, 0, 0}), json::array({0, 4, 0}), json::array({0, 0, 5})})},
                  {"gamma", json::array({1, 2, 3, 4, 5, 6})}};
  const auto cfg = parse_config(doc);
  CHECK(cfg.gains.lambda == 2.0 * Mat3d::Identity());
  CHECK(cfg.gains.k == Vec3d(3, 4, 5).asDiagonal().toDenseMatrix());
  CHECK(cfg.gains.gamma(5) == 6.0);
}

TEST_CASE("errors name the offending field") {
  json doc = minimal_doc();
  doc["spacecraft"][1]["inertia"] = json::array({1, 2, 3});
  CHECK(error_of(doc).rfind("spacecraft[1].inertia:", 0) == 0);

  doc = minimal_doc();
  doc["spacecraft"][0]["inertia"] = json::array({1, 0, 0, -1, 0, 1});
  CHECK(error_of(doc).rfind("spacecraft[0].inertia:", 0) == 0);

  doc = minimal_doc();
  doc["colour"] = "blue";
  CHECK(error_of(doc) == "colour: unknown key");

  doc = minimal_doc();
  doc["spacecraft"][0]["mass"] = 3;
  CHECK(error_of(doc) == "spacecraft[0].mass: unknown key");

  doc = minimal_doc();
  doc["dt"] = -0.1;
  CHECK(error_of(doc).rfind("dt:", 0) == 0);

  doc = minimal_doc();
  doc["adjacency"] = json::array({json::array({0, 1, 0}), json::array({1, 0, 0})});
  CHECK(error_of(doc).rfind("adjacency:", 0) == 0);

  doc = minimal_doc();
  doc.erase("leader_weights");
  CHECK(error_of(doc) == "leader_weights: required in tracking mode");

  doc = minimal_doc();
  doc["coupling"] = "telepathic";
  CHECK(error_of(doc).rfind("coupling:", 0) == 0);

  doc = minimal_doc();
  doc["gains"] = {{"k", -1.0}};
  CHECK(error_of(doc).rfind("gains", 0) == 0);

  doc = minimal_doc();
  doc["output"] = {{"decimate", 0}};
  CHECK(error_of(doc) == "output.decimate: expected a positive integer");

  CHECK_THROWS_WITH_AS(parse_config_text("{\n  \"mode\": \"tracking\",\n  oops\n}"),
                       doctest::Contains("line 3, column 3"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("validity reports") {
  const auto ok = validate(preset("paper-leaderless"));
  CHECK(ok.ok());
  CHECK(ok.has_spanning_tree);
  CHECK(ok.leaderless_valid);
  CHECK_FALSE(ok.leader_rooted_valid.has_value());
  CHECK(ok.in_degrees == std::vector<int>{3, 1, 2, 1, 1, 1});

  auto isolated = preset("paper-leaderless");
  isolated.adjacency.row(0).setZero();
  const auto bad = validate(isolated);
  CHECK_FALSE(bad.ok());
  CHECK(bad.problems == std::vector<std::string>{"node 1 has no in-neighbor"});

  auto silent = preset("paper-tracking");
  silent.leader_weights->setZero();
  const auto r = validate(silent);
  CHECK_FALSE(r.ok());
  CHECK(r.leader_rooted_valid == false);
  CHECK(r.problems == std::vector<std::string>{"leader reaches no node"});

  const json j = to_json(r);
  CHECK(j["valid"] == false);
  CHECK(j["problems"][0] == "leader reaches no node");
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(40.0) == "40");
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(k % 20) - 10);
    const std::string s = format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
}

TEST_CASE("CSV layout") {
  const auto lead = trajectory_csv_header(Mode::leaderless, 2);
  CHECK(lead.size() == 1 + 2 * 15 + 2);
  CHECK(lead[0] == "t");
  CHECK(lead[1] == "sigma_1_x");
  CHECK(lead[4] == "omega_1_x");
  CHECK(lead[7] == "u_1_x");
  CHECK(lead[10] == "theta_hat_1_1");
  CHECK(lead[15] == "theta_hat_1_6");
  CHECK(lead[16] == "sigma_2_x");
  CHECK(lead[31] == "V");
  CHECK(lead[32] == "D");
  const auto track = trajectory_csv_header(Mode::tracking, 6);
  CHECK(track.size() == 1 + 6 * 15 + 3);
  CHECK(track.back() == "T");

  Scenario sc = build_scenario(informed(2, 0.5));
  sc.decimate = 10;
  const auto log = run(sc);
  std::ostringstream out;
  write_trajectory_csv(out, log);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("t,sigma_1_x,sigma_1_y,sigma_1_z,omega_1_x", 0) == 0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == static_cast<long>(track.size()) - 1);
  }
  CHECK(rows == log.records.size());
  CHECK(rows == 1 + 100 / 10);
}

TEST_CASE("run to directory writes reproducible outputs") {
  const auto base = std::filesystem::temp_directory_path() / "attsync_test_run";
  std::filesystem::remove_all(base);
  const auto cfg = informed(7, 1.0);
  const auto a = run_to_directory(cfg, base / "a");
  const auto b = run_to_directory(cfg, base / "b");
  for (const char* f : {"trajectory.csv", "summary.json", "config.json"}) {
    CHECK(std::filesystem::exists(base / "a" / f));
  }
  CHECK(slurp(base / "a" / "trajectory.csv") == slurp(base / "b" / "trajectory.csv"));
  CHECK(a.steps == 200);
  CHECK(a.records == 21);

  const json summary = json::parse(slurp(base / "a" / "summary.json"));
  CHECK(summary["config"] == to_json(cfg));
  CHECK(summary["validity"]["valid"] == true);
  CHECK(summary["metrics"]["final_tracking_error"].get<double>() == a.metrics.final_tracking_error);
  CHECK(json::parse(slurp(base / "a" / "config.json")) == to_json(cfg));

  auto bad = cfg;
  bad.leader_weights->setZero();
  CHECK_THROWS_WITH_AS(run_to_directory(bad, base / "bad"), doctest::Contains("leader reaches no node"),
                       ConfigError);
  std::filesystem::remove_all(base);
}

TEST_CASE("convergence guard") {
  RunMetrics m;
  m.final_disagreement = 5e-3;
  m.final_velocity_disagreement = 2e-2;
  m.final_tracking_error = 1e-3;
  m.final_velocity_tracking_error = 1e-3;
  CHECK_FALSE(converged(m, Mode::leaderless, 1e-2));
  CHECK(converged(m, Mode::leaderless, 3e-2));
  CHECK(converged(m, Mode::tracking, 1e-2));
}

}
