#include "helpers.hpp"

#include "drivensys/girst.hpp"
#include "drivensys/random.hpp"
#include "drivensys/usp.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

using namespace drivensys;

namespace {

const std::vector<std::size_t> kNs{5, 10, 15, 20, 25, 30, 35, 40, 45};

}  // namespace

TEST_CASE("splice windows") {
  const auto base = InputWindow::constant(scalar(2), 10);
  const auto source = InputWindow::constant(scalar(0), 10);
  CHECK(splice_window(base, source, 4) == InputWindow::from_scalars({0, 0, 0, 0, 0, 0, 2, 2, 2, 2}));
  CHECK(splice_window(base, source, 10) == base);
  CHECK(splice_window(base, source, 0) == source);
  CHECK(splice_window(base, InputWindow::from_scalars({1}), 4) == InputWindow::from_scalars({1, 2, 2, 2, 2}));
  CHECK_THROWS_AS(splice_window(base, source, 11), InvalidArgument);
  CHECK_THROWS_AS(splice_window(base, InputWindow{}, 3), InvalidArgument);

  Rng rng(3);
  const auto hp = SystemSpec::half_product();
  const auto b = testing::random_window(hp, 30, rng);
  const auto s = testing::random_window(hp, 30, rng);
  for (std::size_t n = 0; n <= 30; ++n) {
    const auto w = splice_window(b, s, n);
    CHECK(w.size() == 30);
    CHECK(w.suffix(n) == b.suffix(n));
  }
}

TEST_CASE("rational saturating is bounded away from its constant-2 encoding") {
  const auto rs = SystemSpec::rational_saturating();
  const auto rep = girst_probe(rs, InputWindow::constant(scalar(2), 50), InputWindow::constant(scalar(0), 50),
                               kNs, sample_state_space(rs, 801), 1e-4);
  CHECK(rep.trend == GirstTrend::BoundedAway);
  for (const auto& row : rep.rows) {
    CHECK(row.distance == doctest::Approx(1.0).epsilon(5e-3));
    // The splices collapse to {0}, which lies inside the limit set.
    CHECK(row.semi_spliced_to_base == 0.0);
  }

  SUBCASE("the verdict persists on a four times finer grid") {
    const auto fine = girst_probe(rs, InputWindow::constant(scalar(2), 50), InputWindow::constant(scalar(0), 50),
                                  kNs, sample_state_space(rs, 3201), 1e-4);
    CHECK(fine.trend == GirstTrend::BoundedAway);
  }
}

TEST_CASE("contracting ESNs converge under splicing") {
  Rng rng(20);
  for (int t = 0; t < 20; ++t) {
    const auto esn = testing::contracting_esn(100 + static_cast<std::uint64_t>(t), 2);
    const auto base = testing::random_window(esn, 50, rng);
    const auto source = testing::random_window(esn, 50, rng);
    const auto rep = girst_probe(esn, base, source, kNs, sample_state_space(esn, 5), 1e-4);
    CHECK(rep.trend == GirstTrend::Converging);
    for (const auto& row : rep.rows) {
      CHECK(row.distance <= esn.state_box().diameter() * std::pow(0.5, static_cast<double>(row.n)) + 1e-15);
    }
  }
}

TEST_CASE("identical base and source give zero distances") {
  const auto hp = SystemSpec::half_product();
  const auto w = InputWindow::constant(scalar(1), 20);
  const auto rep = girst_probe(hp, w, w, {2, 4, 6, 8, 10}, sample_state_space(hp, 11), 1e-3);
  for (const auto& row : rep.rows) CHECK(row.distance == 0.0);
  CHECK(rep.trend == GirstTrend::Converging);
}

TEST_CASE("trend classification rules") {
  const auto rows = [](std::vector<double> d) {
    std::vector<GirstRow> out;
    for (std::size_t i = 0; i < d.size(); ++i) out.push_back({i + 1, d[i], 0, 0});
    return out;
  };
  CHECK(classify_girst(rows({1, 0.1, 0.01, 0.001}), 1e-2, 0.01) == GirstTrend::Inconclusive);
  CHECK(classify_girst(rows({1, 0.5, 0.1, 0.01, 0.001}), 1e-2, 0.01) == GirstTrend::Converging);
  CHECK(classify_girst(rows({1, 0.5, 0.001, 0.01, 0.001}), 1e-2, 0.01) == GirstTrend::Inconclusive);
  CHECK(classify_girst(rows({1, 1, 1, 1, 1}), 1e-2, 0.01) == GirstTrend::BoundedAway);
  CHECK(classify_girst(rows({1, 1, 1, 1, 1}), 1e-2, 0.5) == GirstTrend::Inconclusive);
}

TEST_CASE("girst exports") {
  const auto hp = SystemSpec::half_product();
  const auto rep = girst_probe(hp, InputWindow::constant(scalar(1), 10), InputWindow::constant(scalar(0), 10),
                               {1, 2, 3, 4, 5}, sample_state_space(hp, 3), 1e-1);
  std::ostringstream os;
  write_girst_csv(os, rep);
  CHECK(os.str().rfind("n[steps],distance[state],semi_spliced_to_base[state],semi_base_to_spliced[state]\n", 0) == 0);
  const auto j = to_json(rep);
  CHECK(j["rows"].size() == 5);
  CHECK(j["trend"] == std::string(to_string(rep.trend)));
}
