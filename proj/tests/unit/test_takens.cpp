#include "helpers.hpp"

#include "drivensys/random.hpp"
#include "drivensys/takens.hpp"
#include "drivensys/usp.hpp"

#include <doctest.h>

#include <cmath>

using namespace drivensys;
using testing::vec;

TEST_CASE("linear shift system for d = 1") {
  const auto sys = build_linear_shift_system(1);
  CHECK(sys.state_dim() == 3);
  const Matrix s = sys.shift_matrix();
  CHECK(s(1, 0) == 1);
  CHECK(s(2, 1) == 1);
  CHECK(s.sum() == 2);
  CHECK(sys.injection_vector() == vec({1, 0, 0}));
  CHECK(step(sys, scalar(0.7), Vector::Zero(3)) == vec({0.7, 0, 0}));
  CHECK(process(sys, InputWindow::from_scalars({0.7, -0.2}), Vector::Zero(3)) == vec({-0.2, 0.7, 0}));
}

TEST_CASE("the shift matrix is nilpotent of order 2d+1") {
  for (int d = 1; d <= 5; ++d) {
    const Matrix s = build_linear_shift_system(d).shift_matrix();
    Matrix p = Matrix::Identity(s.rows(), s.cols());
    for (int k = 0; k < 2 * d; ++k) p = p * s;
    CHECK_FALSE(p.isZero(0.0));
    CHECK((p * s).isZero(0.0));
  }
}

TEST_CASE("state box covers the padded observable range") {
  const auto sys = build_linear_shift_system(2, 0.0, 1.0);
  CHECK(sys.state_box().contains(Vector::Zero(5)));
  CHECK(sys.state_box().contains(Vector::Ones(5)));
  CHECK(sys.state_box().lower[0] == doctest::Approx(-0.01));
}

TEST_CASE("Henon map and its exact inverse") {
  const auto h = AutonomousMap::henon();
  const PlanePoint w = h(PlanePoint(0, 0));
  CHECK(w == PlanePoint(1, 0));
  CHECK(h.inverse(w) == PlanePoint(0, 0));
  CHECK(h.inverse(PlanePoint(0, 0)) == PlanePoint(0, -1));

  const DelayVector dv = delay_coordinates(h, x_coordinate(), w, 1);
  CHECK(dv.entries == std::vector<double>{0, 0, 1});
  CHECK(dv.as_state() == vec({1, 0, 0}));
}

TEST_CASE("delay coordinates of trivial observables and fixed points") {
  const auto h = AutonomousMap::henon();
  const Observable constant = [](const PlanePoint&) { return 0.25; };
  CHECK(delay_coordinates(h, constant, PlanePoint(0.3, 0.1), 3).entries == std::vector<double>(7, 0.25));

  // Fixed point of the logistic map: 3/4.
  const Orbit fixed(AutonomousMap::logistic(), PlanePoint(0.75, 0), 20);
  CHECK(delay_coordinates(fixed, 10, x_coordinate(), 2).entries == std::vector<double>(5, 0.75));
}

TEST_CASE("delay coordinates from history match the exact inverse") {
  const auto h = AutonomousMap::henon();
  const Orbit orbit(h, h.default_seed(), 100);
  const auto theta = default_observable(h);
  for (std::size_t n = 10; n < 100; n += 9) {
    const auto a = delay_coordinates(orbit, n, theta, 3);
    const auto b = delay_coordinates(h, theta, orbit[n], 3);
    for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i] == doctest::Approx(b.entries[i]).epsilon(1e-9));
  }
}

TEST_CASE("history and invertibility errors") {
  const auto lg = AutonomousMap::logistic();
  CHECK_THROWS_AS(delay_coordinates(lg, x_coordinate(), PlanePoint(0.2, 0), 1), InsufficientHistoryError);
  const Orbit orbit(lg, lg.default_seed(), 10);
  CHECK_THROWS_AS(delay_coordinates(orbit, 1, x_coordinate(), 1), InsufficientHistoryError);
  CHECK_THROWS_AS(delay_coordinates(orbit, 10, x_coordinate(), 1), InvalidArgument);
  CHECK_THROWS_AS(lg.inverse(PlanePoint(0.2, 0)), InvalidArgument);
  CHECK_THROWS_AS(AutonomousMap::from_name("lorenz"), InvalidArgument);
}

TEST_CASE("one shift step maps a delay vector to the next one") {
  const auto h = AutonomousMap::henon();
  const auto theta = default_observable(h);
  const Orbit orbit(h, h.default_seed(), 40);
  const auto sys = build_linear_shift_system(2);
  for (std::size_t n = 4; n + 1 < 40; ++n) {
    const Vector now = delay_coordinates(orbit, n, theta, 2).as_state();
    const Vector next = delay_coordinates(orbit, n + 1, theta, 2).as_state();
    CHECK(step(sys, scalar(theta(orbit[n + 1])), now) == next);
  }
}

TEST_CASE("delay realization within 2d+1 steps") {
  Rng rng(5);
  for (const auto* name : {"logistic", "henon"}) {
    const auto map = AutonomousMap::from_name(name);
    const auto theta = default_observable(map);
    const Orbit orbit(map, map.default_seed(), 120);
    const double lo = map.kind() == AutonomousMap::Kind::Logistic ? 0.0 : -1.0;
    for (int d = 1; d <= 3; ++d) {
      const auto sys = build_linear_shift_system(d, lo, 1.0);
      const auto bound = static_cast<std::size_t>(2 * d + 1);
      for (int t = 0; t < 5; ++t) {
        const std::size_t start = bound + static_cast<std::size_t>(7 * t);
        const auto tr = verify_delay_realization(sys, orbit, start, theta, uniform_in_box(sys.state_box(), rng));
        CHECK(tr.steps_to_match <= bound);
        CHECK(tr.match_error <= 1e-12);
      }
      // Every corner too.
      for (const auto& c : sys.state_box().corners()) {
        CHECK(verify_delay_realization(sys, orbit, 2 * d, theta, c).steps_to_match <= bound);
      }
    }
  }
}

TEST_CASE("realization edge cases") {
  const auto lg = AutonomousMap::logistic();
  const Orbit orbit(lg, lg.default_seed(), 50);
  const auto sys = build_linear_shift_system(1, 0.0, 1.0);
  const Vector exact = delay_coordinates(orbit, 10, x_coordinate(), 1).as_state();
  CHECK(verify_delay_realization(sys, orbit, 10, x_coordinate(), exact).steps_to_match == 0);
  const auto from_zero = verify_delay_realization(sys, orbit, 10, x_coordinate(), Vector::Zero(3));
  CHECK(from_zero.steps_to_match <= 3);
  CHECK(from_zero.match_error == 0.0);
  CHECK_THROWS_AS(verify_delay_realization(sys, orbit, 47, x_coordinate(), exact), InsufficientHistoryError);
  CHECK_THROWS_AS(verify_delay_realization(SystemSpec::half_product(), orbit, 10, x_coordinate(), scalar(0)),
                  InvalidArgument);
}

TEST_CASE("the linear shift system is certified with zero final diameter") {
  for (int d = 1; d <= 2; ++d) {
    const auto sys = build_linear_shift_system(d);
    EnsembleSpec spec;
    spec.size = 8;
    spec.length = 20;
    CertifyOptions o;
    o.depth_max = 20;
    const auto base = sample_state_space(sys, 3);
    const auto ensemble = make_ensemble(sys, spec);
    const auto v = certify_usp(sys, ensemble, base, o);
    CHECK(v.status == UspStatus::CertifiedContractive);
    for (const auto& out : v.outcomes) CHECK(out.final_diameter == 0.0);
    UapOptions uo;
    uo.depth_max = 20;
    const auto t = uap_rate(sys, ensemble, {1e-3, 1e-9}, base, uo);
    for (auto j : t.depths) CHECK(j <= static_cast<std::size_t>(2 * d + 1));
  }
}
