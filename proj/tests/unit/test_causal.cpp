#include "helpers.hpp"

#include "drivensys/causal.hpp"
#include "drivensys/random.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

using namespace drivensys;
using testing::vec;

TEST_CASE("h on the shipped examples") {
  const auto hp = SystemSpec::half_product();
  const auto hp_base = sample_state_space(hp, 101);
  CHECK(h_value(hp, InputWindow::constant(scalar(0), 40), hp_base)[0] == 0.0);
  Rng rng(1);
  CHECK(std::abs(h_value(hp, testing::random_window(hp, 40, rng), hp_base)[0]) <= std::ldexp(1.0, -40));

  const auto rs = SystemSpec::rational_saturating();
  CHECK_THROWS_AS(h_value(rs, InputWindow::constant(scalar(2), 50), sample_state_space(rs, 201)),
                  NotSingletonError);

  const auto ls = SystemSpec::linear_shift(1);
  const auto h = h_value(ls, InputWindow::from_scalars({0.9, 0.1, -0.3, 0.5}), sample_state_space(ls, 3));
  CHECK(h == vec({0.5, -0.3, 0.1}));
}

TEST_CASE("not-singleton errors carry the diameter") {
  const auto rs = SystemSpec::rational_saturating();
  try {
    h_value(rs, InputWindow::constant(scalar(2), 50), sample_state_space(rs, 201));
    FAIL("expected an error");
  } catch (const NotSingletonError& e) {
    CHECK(e.diameter() == doctest::Approx(2.0).epsilon(1e-2));
  }
}

TEST_CASE("semi-conjugacy residuals") {
  const auto ls = SystemSpec::linear_shift(1);
  const auto ls_base = sample_state_space(ls, 3);
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto w = testing::random_window(ls, 8, rng);
    CHECK(semiconjugacy_residual(ls, w, uniform_in_box(ls.input_box(), rng), ls_base) == 0.0);
  }

  const auto hp = SystemSpec::half_product();
  const auto hp_base = sample_state_space(hp, 101);
  CausalOptions o;
  o.depth_max = 30;
  for (int t = 0; t < 10; ++t) {
    const auto w = testing::random_window(hp, 30, rng);
    CHECK(semiconjugacy_residual(hp, w, uniform_in_box(hp.input_box(), rng), hp_base, o) <= std::ldexp(1.0, -29));
  }

  const auto esn = testing::contracting_esn(3, 2);
  const auto esn_base = sample_state_space(esn, 11);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto w = testing::random_window(esn, 40, rng);
    worst = std::max(worst, semiconjugacy_residual(esn, w, uniform_in_box(esn.input_box(), rng), esn_base));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("causal commutativity equals the newest-coordinate residual") {
  const auto ls = SystemSpec::linear_shift(1);
  Rng rng(4);
  const auto s = causal_commutativity_residual(ls, testing::random_window(ls, 10, rng), scalar(0.3), 3,
                                               sample_state_space(ls, 3));
  CHECK(s.residual_causal == 0.0);
  CHECK(s.h_values.size() == 3);
  CHECK(s.singleton_certified == std::vector<bool>(3, true));

  const auto esn = testing::contracting_esn(7, 3);
  const auto base = sample_state_space(esn, 5);
  for (int t = 0; t < 10; ++t) {
    const auto w = testing::random_window(esn, 40, rng);
    const Vector v = uniform_in_box(esn.input_box(), rng);
    const auto sample = causal_commutativity_residual(esn, w, v, 5, base);
    CHECK(sample.residual_causal == sample.residual_semiconj);
    CHECK(sample.residual_causal <= 1e-6);
    CHECK(sample.residual_semiconj == semiconjugacy_residual(esn, w, v, base));
    CHECK(shift_consistency_residual(esn, sample) <= residual_budget(1e-6));
  }
  CHECK_THROWS_AS(causal_commutativity_residual(esn, testing::random_window(esn, 3, rng), Vector::Zero(1), 5, base),
                  InvalidArgument);
}

TEST_CASE("solution segments") {
  const auto lg = AutonomousMap::logistic();
  const Orbit orbit(lg, lg.default_seed(), 60);
  std::vector<Vector> record;
  for (std::size_t n = 0; n < orbit.size(); ++n) record.push_back(scalar(orbit[n].x()));
  const auto ls = SystemSpec::linear_shift(1, 0.0, 1.0);
  const auto seg = solution_segment(ls, record, 3, 10, 40, sample_state_space(ls, 3));
  REQUIRE(seg.states.size() == 31);
  for (std::size_t r = 10; r <= 40; ++r) {
    // x_r holds the observations up to time r-1.
    CHECK(seg.states[r - 10] == delay_coordinates(orbit, r - 1, x_coordinate(), 1).as_state());
  }
  CHECK(seg.max_step_residual() == 0.0);

  const auto hp = SystemSpec::half_product();
  const auto zeros = solution_segment(hp, std::vector<Vector>(80, scalar(0)), 40, 40, 80, sample_state_space(hp, 11));
  for (const auto& x : zeros.states) CHECK(x[0] == 0.0);

  CHECK_THROWS_AS(solution_segment(hp, record, 40, 39, 50, sample_state_space(hp, 11)), InsufficientHistoryError);
  CHECK_THROWS_AS(solution_segment(hp, record, 40, 40, 61, sample_state_space(hp, 11)), InsufficientHistoryError);
}

TEST_CASE("sliding-window h matches a washed-out trajectory") {
  const auto esn = testing::contracting_esn(10, 2, 0.99);
  Rng rng(10);
  const auto w = testing::random_window(esn, 1420, rng);
  CausalOptions o;
  o.depth_max = 1400;
  const auto seg = solution_segment(esn, w.values(), 1400, 1400, 1420, sample_state_space(esn, 3), o);
  const Trajectory t = simulate(esn, Vector::Zero(2), w.values());
  for (std::size_t r = 1400; r <= 1420; ++r) CHECK(distance(seg.states[r - 1400], t.states[r]) <= 1e-6);
  CHECK(seg.max_step_residual() <= residual_budget(1e-6));
}

TEST_CASE("injectivity probe") {
  const auto ls = SystemSpec::linear_shift(1);
  const auto base = sample_state_space(ls, 3);
  const auto a = InputWindow::from_scalars({0.1, 0.2, 0.3, 0.25, 0.5});
  const auto b = InputWindow::from_scalars({0.1, 0.2, 0.3, 0.5, 0.5});
  auto rep = injectivity_probe(ls, {{a, b}}, 3, base);
  CHECK(rep.min_separation == 0.25);
  rep = injectivity_probe(ls, {{a, a}}, 3, base);
  CHECK(rep.min_separation == 0.0);

  const auto esn = SystemSpec::tanh_esn(Matrix::Identity(1, 1), Matrix::Identity(1, 1), 0.5, Box::cube(1, -1, 1));
  Rng rng(50);
  std::vector<std::pair<InputWindow, InputWindow>> pairs;
  std::uniform_int_distribution<std::size_t> lag(1, 5);
  for (int p = 0; p < 50; ++p) {
    const auto w = testing::random_window(esn, 40, rng);
    auto values = w.values();
    const std::size_t i = values.size() - lag(rng);
    values[i][0] = values[i][0] > 0 ? values[i][0] - 0.5 : values[i][0] + 0.5;
    pairs.emplace_back(w, InputWindow(values));
  }
  CHECK(injectivity_probe(esn, pairs, 6, sample_state_space(esn, 11)).min_separation > 0.0);

  const auto hp = SystemSpec::half_product();
  CHECK_THROWS_AS(injectivity_probe(hp, {{a, a}}, 1, sample_state_space(hp, 3)), InvalidArgument);
  const auto c = InputWindow::from_scalars({0.0, 0.2, 0.3, 0.5, 0.4});
  CHECK_THROWS_AS(injectivity_probe(ls, {{a, c}}, 3, base), InvalidArgument);
  CHECK(to_json(rep)["min_separation"] == 0.0);
}

TEST_CASE("two-delay embedding") {
  const auto ls = SystemSpec::linear_shift(1, 0.0, 1.0);
  const auto lg = AutonomousMap::logistic();
  const auto emb = h2_embed(ls, lg, x_coordinate(), lg.default_seed(), 50, 5, sample_state_space(ls, 3));
  CHECK(emb.pairs.size() == 50);
  CHECK(emb.lag_residual == 0.0);
  for (std::size_t n = 0; n + 1 < emb.pairs.size(); ++n) CHECK(emb.pairs[n].second == emb.pairs[n + 1].first);

  const auto fixed = h2_embed(ls, lg, x_coordinate(), PlanePoint(0.75, 0), 10, 5, sample_state_space(ls, 3));
  for (const auto& p : fixed.pairs) {
    CHECK(p.first == fixed.pairs.front().first);
    CHECK(p.second == fixed.pairs.front().second);
  }

  const auto esn = testing::contracting_esn(13, 2);
  const auto h = AutonomousMap::henon();
  const auto henon = h2_embed(esn, h, default_observable(h), h.default_seed(), 500, 40, sample_state_space(esn, 5));
  CHECK(henon.pairs.size() == 500);
  CHECK(min_pair_separation(henon) > 1e-6);

  const auto narrow = SystemSpec::tanh_esn(Matrix::Identity(1, 1), Matrix::Identity(1, 1), 0.5, Box::cube(1, -0.5, 0.5));
  CHECK_THROWS_AS(h2_embed(narrow, lg, x_coordinate(), lg.default_seed(), 10, 5, sample_state_space(narrow, 3)),
                  DomainError);
}

TEST_CASE("fading memory of the contracting ESN") {
  const auto esn = testing::contracting_esn(17, 2);
  const auto base = sample_state_space(esn, 5);
  Rng rng(17);
  const double diam = esn.state_box().diameter();
  for (std::size_t m : {5, 10, 20}) {
    for (int t = 0; t < 10; ++t) {
      const auto w = testing::random_window(esn, 80, rng);
      auto values = w.values();
      // Perturb everything older than the m most recent inputs.
      for (std::size_t i = 0; i + m < values.size(); ++i) values[i] = uniform_in_box(esn.input_box(), rng);
      const double change = distance(h_value(esn, w, base), h_value(esn, InputWindow(values), base));
      CHECK(change <= diam * std::pow(0.5, static_cast<double>(m)));
    }
  }
}

TEST_CASE("CSV exports") {
  const auto hp = SystemSpec::half_product();
  const auto seg = solution_segment(hp, std::vector<Vector>(12, scalar(0)), 10, 10, 12, sample_state_space(hp, 3));
  std::ostringstream os;
  write_segment_csv(os, seg);
  CHECK(os.str() == "index[steps],x0[state],step_residual[state]\n10,0,0\n11,0,0\n12,0,\n");
}
