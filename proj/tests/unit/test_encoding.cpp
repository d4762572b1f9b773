#include "helpers.hpp"

#include "drivensys/encoding.hpp"
#include "drivensys/random.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

using namespace drivensys;

namespace {

PointCloudSet reference_interval() { return grid_cloud(Box::cube(1, -1, 1), {801}); }

}  // namespace

TEST_CASE("half product with constant-1 input halves the interval each step") {
  const auto hp = SystemSpec::half_product();
  const auto base = sample_state_space(hp, 101);
  const auto r = encoding_approx(hp, InputWindow::constant(scalar(1), 10), base, 1e-2);
  REQUIRE(r.diameters.size() == 10);
  for (std::size_t k = 1; k <= 10; ++k) {
    CHECK(r.depths[k - 1] == k);
    CHECK(std::abs(r.diameters[k - 1] - std::ldexp(1.0, -static_cast<int>(k))) <= 1e-12);
  }
  CHECK(r.verdict == EncodingVerdict::Singleton);
  REQUIRE(r.representative);
  CHECK(std::abs((*r.representative)[0]) <= 1e-2);
  CHECK((*r.representative)[0] == doctest::Approx(std::ldexp(1.0, -11)).epsilon(1e-12));
}

TEST_CASE("rational saturating constant-2 encoding fills [-1, 1]") {
  const auto rs = SystemSpec::rational_saturating();
  const auto base = sample_state_space(rs, 801);
  EncodingOptions o;
  o.keep_sets = true;
  const auto r = encoding_approx(rs, InputWindow::constant(scalar(2), 50), base, 1e-6, o);
  CHECK(hausdorff_distance(r.final_set(), reference_interval()) <= 5e-3);
  CHECK(r.verdict == EncodingVerdict::NotContracting);
  CHECK_FALSE(r.representative);
  CHECK_FALSE(r.refinement_saturated);

  SUBCASE("the converged set is invariant under one more step") {
    const auto next = evolve_set(rs, InputWindow::constant(scalar(2), 1), r.final_set());
    CHECK(hausdorff_distance(next, r.final_set()) <= 2 * base.grid()->min_spacing());
  }
  SUBCASE("pullback attraction: distance to the final set does not grow") {
    double prev = INFINITY;
    for (const auto& s : r.sets) {
      const double d = hausdorff_semidistance(s, r.final_set());
      CHECK(d <= prev + base.grid()->min_spacing());
      prev = d;
    }
  }
}

TEST_CASE("contracting ESN diameters obey the Lipschitz bound") {
  const auto esn = testing::contracting_esn(12, 2);
  Rng rng(12);
  const auto w = testing::random_window(esn, 40, rng);
  const auto base = sample_state_space(esn, 11);
  const auto r = encoding_approx(esn, w, base);
  const double diam_x = esn.state_box().diameter();
  for (std::size_t k = 1; k <= 40; ++k) {
    CHECK(r.diameters[k - 1] <= diam_x * std::pow(0.5, static_cast<double>(k)) + 1e-15);
  }
  CHECK(r.verdict == EncodingVerdict::Singleton);
}

TEST_CASE("encodings are nested up to grid spacing on all shipped systems") {
  Rng rng(31);
  for (const auto& sys : testing::shipped_systems()) {
    const std::size_t per_axis = sys.state_dim() == 1 ? 201 : 5;
    const auto base = sample_state_space(sys, per_axis);
    const double spacing = base.grid()->min_spacing();
    for (int t = 0; t < 3; ++t) {
      const auto w = t == 0 ? InputWindow::constant(sys.input_box().upper, 30)
                            : testing::random_window(sys, 30, rng);
      const auto r = encoding_approx(sys, w, base);
      for (std::size_t k = 0; k + 1 < r.sets.size(); ++k) {
        CHECK(hausdorff_semidistance(r.sets[k + 1], r.sets[k]) <= 2 * spacing);
      }
    }
  }
}

TEST_CASE("refinement only adds true image points") {
  const auto rs = SystemSpec::rational_saturating();
  const auto base = sample_state_space(rs, 101);
  const auto w = InputWindow::constant(scalar(2), 20);
  EncodingOptions plain;
  plain.refine = false;
  const auto coarse = image_at_depth(rs, w, 20, base, plain).set;
  const auto fine = image_at_depth(rs, w, 20, base).set;
  CHECK(coarse.points() == evolve_set(rs, w, base).points());
  CHECK(hausdorff_semidistance(coarse, fine) == 0.0);
  CHECK(fine.size() > coarse.size());
  // Without refinement the repelling fixed point 0 leaves a gap.
  CHECK(hausdorff_distance(coarse, reference_interval()) > 0.1);
  // g_2 pulls 2 down to 1 + 1/(2^20 - 1) after 20 steps.
  for (const auto& p : fine.points()) CHECK(std::abs(p[0]) <= 1.0 + std::ldexp(1.0, -19));
}

TEST_CASE("refinement budget exhaustion is reported") {
  const auto rs = SystemSpec::rational_saturating();
  EncodingOptions o;
  o.max_points = 200;
  const auto img = image_at_depth(rs, InputWindow::constant(scalar(2), 30), 30, sample_state_space(rs, 101), o);
  CHECK(img.saturated);
}

TEST_CASE("verdict helpers") {
  std::vector<double> flat(12, 2.0);
  CHECK(tail_non_shrinking(flat));
  CHECK(classify_diameters(flat, 1e-6) == EncodingVerdict::NotContracting);
  std::vector<double> halving;
  for (int k = 1; k <= 12; ++k) halving.push_back(std::ldexp(1.0, -k));
  CHECK_FALSE(tail_non_shrinking(halving));
  CHECK(classify_diameters(halving, 1e-6) == EncodingVerdict::Inconclusive);
  CHECK(classify_diameters(halving, 1e-3) == EncodingVerdict::Singleton);
  CHECK_FALSE(tail_non_shrinking({1.0, 1.0}));
  CHECK(to_string(EncodingVerdict::NotContracting) == "not-contracting");
}

TEST_CASE("approximate reachable sets") {
  const auto hp = SystemSpec::half_product();
  const auto zero = approx_reachable_set(hp, {InputWindow::constant(scalar(0), 5)}, sample_state_space(hp, 11));
  REQUIRE(zero.size() == 1);
  CHECK(zero.points()[0][0] == 0.0);

  const auto ls = SystemSpec::linear_shift(1, -0.5, 0.25);
  Rng rng(6);
  std::vector<InputWindow> ws;
  for (int i = 0; i < 10; ++i) {
    std::vector<Vector> v;
    std::uniform_real_distribution<double> obs(-0.5, 0.25);
    for (int k = 0; k < 5; ++k) v.push_back(scalar(obs(rng)));
    ws.emplace_back(std::move(v));
  }
  const auto reach = approx_reachable_set(ls, ws, sample_state_space(ls, 3));
  for (const auto& p : reach.points()) {
    CHECK(p.minCoeff() >= -0.5);
    CHECK(p.maxCoeff() <= 0.25);
  }

  const auto rs = SystemSpec::rational_saturating();
  const auto base = sample_state_space(rs, 801);
  const auto both = approx_reachable_set(
      rs, {InputWindow::constant(scalar(0), 50), InputWindow::constant(scalar(2), 50)}, base);
  CHECK(hausdorff_distance(both, reference_interval()) <= 5e-3);
}

TEST_CASE("encoding exports") {
  const auto hp = SystemSpec::half_product();
  const auto r = encoding_approx(hp, InputWindow::constant(scalar(1), 3), sample_state_space(hp, 5), 0.2);
  std::ostringstream os;
  write_encoding_csv(os, r);
  CHECK(os.str() ==
        "depth[steps],diameter[state],verdict\n"
        "1,0.5,inconclusive\n"
        "2,0.25,inconclusive\n"
        "3,0.125,singleton\n");
  const auto j = to_json(r);
  CHECK(j["verdict"] == "singleton");
  CHECK(j["diameters"].size() == 3);
}
