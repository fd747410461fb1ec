#include <cmath>
#include <vector>

#include <doctest.h>

#include "ideaforge/dedup/dedup.hpp"
#include "ideaforge/errors.hpp"
#include "ideaforge/util/rng.hpp"

using namespace ideaforge;

namespace {

std::vector<std::vector<double>> random_unit_vectors(size_t n, size_t dim,
                                                     std::uint64_t seed) {
  util::RandomStream rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.uniform() * 2.0 - 1.0;
    out.push_back(dedup::l2_normalize(std::move(v)));
  }
  return out;
}

// Independent reimplementation of the streaming rule, used as an oracle.
std::vector<bool> brute_force_kept(
    const std::vector<std::vector<double>>& vectors, double threshold,
    bool compare_all_prior) {
  std::vector<bool> kept(vectors.size(), true);
  for (size_t i = 0; i < vectors.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (!compare_all_prior && !kept[j]) continue;
      if (dedup::cosine_similarity(vectors[i], vectors[j]) > threshold) {
        kept[i] = false;
        break;
      }
    }
  }
  return kept;
}

}  // namespace

TEST_CASE("cosine similarity") {
  CHECK(dedup::cosine_similarity({1, 2, 3}, {4, 5, 6}) ==
        doctest::Approx(0.9746318462).epsilon(1e-9));
  CHECK(dedup::cosine_similarity({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(dedup::cosine_similarity({2, 0}, {5, 0}) == doctest::Approx(1.0));
  CHECK(dedup::cosine_similarity({1, 0}, {-3, 0}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(dedup::cosine_similarity({1, 2}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(dedup::cosine_similarity({0, 0}, {1, 0}), Error);
  CHECK_THROWS_AS(dedup::cosine_similarity({}, {}), Error);
}

TEST_CASE("l2 normalize") {
  auto v = dedup::l2_normalize({3, 4});
  CHECK(v[0] == doctest::Approx(0.6));
  CHECK(v[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(dedup::l2_normalize({0, 0, 0}), Error);
}

TEST_CASE("drop rule is strictly above the threshold") {
  // sim(a, b) == 0.8 exactly; 0.8 > 0.8 is false so b survives.
  std::vector<std::vector<double>> vectors = {{1, 0}, {0.8, 0.6}, {1, 0}};
  dedup::DedupConfig config;
  config.threshold = 0.8;
  auto report = dedup::deduplicate(vectors, config);
  CHECK(report.decisions[1].kept);
  CHECK(report.decisions[1].max_similarity == doctest::Approx(0.8));
  // An exact duplicate (sim 1.0) is dropped.
  CHECK_FALSE(report.decisions[2].kept);
  CHECK(report.decisions[2].duplicate_of == 0);
  CHECK(report.kept == std::vector<size_t>{0, 1});
  CHECK(report.kept_count == 2);
  CHECK(report.total == 3);
}

TEST_CASE("duplicate_of points at the first among tied best matches") {
  std::vector<std::vector<double>> vectors = {{1, 0}, {1, 0}, {1, 0}};
  dedup::DedupConfig config;
  auto report = dedup::deduplicate(vectors, config);
  CHECK_FALSE(report.decisions[1].kept);
  CHECK(report.decisions[1].duplicate_of == 0);
  CHECK_FALSE(report.decisions[2].kept);
  CHECK(report.decisions[2].duplicate_of == 0);
}

TEST_CASE("first item has nothing to compare against") {
  auto report = dedup::deduplicate({{1.0, 0.0}}, {});
  CHECK(report.decisions[0].kept);
  CHECK(report.decisions[0].max_similarity == doctest::Approx(-1.0));
  CHECK_FALSE(report.decisions[0].duplicate_of.has_value());
}

TEST_CASE("compare_all_prior widens the comparison set") {
  // v1 is a near-duplicate of v0; v2 is near v1 but not near v0.
  double phi = std::acos(0.96);
  std::vector<std::vector<double>> vectors = {
      {1.0, 0.0},
      {std::cos(phi), std::sin(phi)},
      {std::cos(2 * phi), std::sin(2 * phi)}};
  dedup::DedupConfig config;
  config.threshold = 0.95;

  config.compare_all_prior = true;
  auto strict = dedup::deduplicate(vectors, config);
  CHECK(strict.kept == std::vector<size_t>{0});
  CHECK(strict.decisions[2].duplicate_of == 1);

  config.compare_all_prior = false;
  auto lenient = dedup::deduplicate(vectors, config);
  // cos(2*phi) = 2*0.96^2 - 1 = 0.8432 < 0.95, so v2 survives.
  CHECK(lenient.kept == std::vector<size_t>{0, 2});
}

TEST_CASE("duplication curve buckets and partial tail") {
  // 5 items, bucket 2: kept pattern K K D K K -> buckets [2/2, 1/2, 1/1].
  std::vector<std::vector<double>> vectors = {
      {1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}, {0.6, 0.64, 0.48}};
  dedup::DedupConfig config;
  config.threshold = 0.9;
  auto report = dedup::deduplicate(vectors, config);
  REQUIRE(report.kept == std::vector<size_t>{0, 1, 3, 4});

  auto curve = dedup::duplication_curve(report, 2);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].start == 0);
  CHECK(curve[0].kept == 2);
  CHECK(curve[0].kept_pct == doctest::Approx(100.0));
  CHECK_FALSE(curve[0].partial);
  CHECK(curve[1].kept == 1);
  CHECK(curve[1].kept_pct == doctest::Approx(50.0));
  CHECK(curve[1].cumulative_kept == 3);
  CHECK(curve[2].size == 1);
  CHECK(curve[2].partial);
  CHECK(curve[2].cumulative_kept == 4);

  CHECK_THROWS_AS(dedup::duplication_curve(report, 0), Error);
}

TEST_CASE("streaming dedup matches the brute-force oracle") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    // Low dimension forces plenty of above-threshold collisions.
    auto vectors = random_unit_vectors(200, 3, seed);
    for (bool all_prior : {true, false}) {
      dedup::DedupConfig config;
      config.threshold = 0.8;
      config.compare_all_prior = all_prior;
      auto report = dedup::deduplicate(vectors, config);
      auto oracle = brute_force_kept(vectors, 0.8, all_prior);
      for (size_t i = 0; i < vectors.size(); ++i) {
        CAPTURE(seed);
        CAPTURE(all_prior);
        CAPTURE(i);
        CHECK(report.decisions[i].kept == oracle[i]);
      }
    }
  }
}

TEST_CASE("report and curve serialize") {
  auto vectors = random_unit_vectors(10, 4, 3);
  auto report = dedup::deduplicate(vectors, {});
  auto doc = dedup::report_to_json(report);
  CHECK(doc["total"] == 10);
  CHECK(doc["decisions"].size() == 10);
  auto curve = dedup::curve_to_json(dedup::duplication_curve(report, 4));
  CHECK(curve.size() == 3);
  CHECK(curve[2]["partial"] == true);
}
