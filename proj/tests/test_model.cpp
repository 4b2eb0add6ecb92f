#include "doctest.h"
#include "persimon/model.hpp"

using namespace persimon;

TEST_CASE("sensing probability decays linearly to the range") {
  CHECK(sensing_prob(10.0, 10.0, 3.0) == 1.0);
  CHECK(sensing_prob(10.0, 13.0, 3.0) == 0.0);
  CHECK(sensing_prob(10.0, 11.5, 3.0) == doctest::Approx(0.5));
  CHECK(sensing_prob(10.0, 20.0, 3.0) == 0.0);
}

TEST_CASE("sensing gradient is piecewise constant") {
  CHECK(sensing_grad(10.0, 8.0, 3.0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(sensing_grad(10.0, 11.0, 3.0, 0) == doctest::Approx(-1.0 / 3.0));
  CHECK(sensing_grad(10.0, 14.0, 3.0, 0) == 0.0);
  CHECK(sensing_grad(10.0, 13.0, 3.0, 0) == 0.0);
  SUBCASE("at the target the incoming side decides") {
    CHECK(sensing_grad(10.0, 10.0, 3.0, -1) == doctest::Approx(1.0 / 3.0));
    CHECK(sensing_grad(10.0, 10.0, 3.0, 1) == doctest::Approx(-1.0 / 3.0));
  }
}

TEST_CASE("sensing gradient matches a difference quotient away from kinks") {
  const double h = 1e-6;
  for (double s : {7.5, 8.9, 10.4, 12.2, 14.0, 5.0}) {
    const double fd = (sensing_prob(10.0, s + h, 3.0) - sensing_prob(10.0, s - h, 3.0)) / (2 * h);
    CHECK(sensing_grad(10.0, s, 3.0, 0) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("joint detection") {
  Eigen::VectorXd one(1);
  one << 0.6;
  CHECK(joint_detection(one) == doctest::Approx(0.6));
  Eigen::VectorXd two(2);
  two << 0.5, 0.5;
  CHECK(joint_detection(two) == doctest::Approx(0.75));
  Eigen::VectorXd none = Eigen::VectorXd::Zero(3);
  CHECK(joint_detection(none) == 0.0);
  SUBCASE("monotone and blind to zero entries") {
    Eigen::VectorXd a(3);
    a << 0.2, 0.0, 0.7;
    Eigen::VectorXd b(2);
    b << 0.2, 0.7;
    CHECK(joint_detection(a) == doctest::Approx(joint_detection(b)));
    a(0) = 0.3;
    CHECK(joint_detection(a) > joint_detection(b));
  }
}

TEST_CASE("uncertainty rate") {
  CHECK(uncertainty_rate(0.0, 0.4, 1.0, 5.0) == 0.0);
  CHECK(uncertainty_rate(2.0, 0.0, 1.0, 5.0) == doctest::Approx(1.0));
  CHECK(uncertainty_rate(0.0, 0.1, 1.0, 5.0) == doctest::Approx(0.5));
  CHECK(uncertainty_rate(1.0, 1.0, 1.0, 5.0) == doctest::Approx(-4.0));
  CHECK_THROWS_AS(uncertainty_rate(-0.1, 0.0, 1.0, 5.0), SimulationError);
}

namespace {
Scenario small_scenario() {
  Scenario sc;
  sc.length = 20;
  sc.horizon = 10;
  sc.comm_range = 6;
  sc.targets = {{10, 1, 5, 1}};
  sc.agents = {{5, 1, 3}};
  return sc;
}
}  // namespace

TEST_CASE("scenario validation names the offending field") {
  Scenario sc = small_scenario();
  CHECK_NOTHROW(validate(sc));

  auto message = [](const Scenario& s) {
    try {
      validate(s);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  Scenario bad = sc;
  bad.targets[0].decay = 0.5;
  CHECK(message(bad).find("targets[0].B") != std::string::npos);
  bad = sc;
  bad.targets[0].x = 25;
  CHECK(message(bad).find("targets[0].x") != std::string::npos);
  bad = sc;
  bad.agents[0].range = 0;
  CHECK(message(bad).find("agents[0].r") != std::string::npos);
  bad = sc;
  bad.comm_range = 5;
  CHECK(message(bad).find("r_c") != std::string::npos);
  bad = sc;
  bad.horizon = 0;
  CHECK(message(bad).find("mission.T") != std::string::npos);
  bad = sc;
  bad.targets[0].r0 = -1;
  CHECK(message(bad).find("R0") != std::string::npos);
}

TEST_CASE("information mode names round-trip") {
  for (InfoMode m : {InfoMode::Centralized, InfoMode::Almost, InfoMode::Local})
    CHECK(info_mode_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(info_mode_from_string("GLOBAL"), ValidationError);
}
