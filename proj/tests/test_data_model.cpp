// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "trontrain/data_model.hpp"
#include "trontrain/error.hpp"
#include "trontrain/rng.hpp"

using namespace tt;

namespace {

Dataset inputs(std::initializer_list<RealVector> xs) {
  Dataset d;
  for (const auto& x : xs) d.push_back({x, 0.0});
  return d;
}

Dataset random_dataset(Rng& rng, std::size_t n, std::size_t count) {
  Dataset d;
  for (std::size_t i = 0; i < count; ++i) {
    RealVector x(n);
    for (auto& v : x) v = uniform(rng, -2.0, 2.0);
    d.push_back({x, standard_normal(rng)});
  }
  return d;
}

}  // namespace

TEST_CASE("empirical_covariance examples") {
  CHECK(empirical_covariance(inputs({{1.0, 0.0}, {0.0, 1.0}})) == RealMatrix{{0.5, 0.0}, {0.0, 0.5}});
  CHECK(empirical_covariance(inputs({{1.0, 1.0}})) == RealMatrix{{1.0, 1.0}, {1.0, 1.0}});
  CHECK(empirical_covariance(inputs({{1.0, 0.0}, {-1.0, 0.0}})) == RealMatrix{{1.0, 0.0}, {0.0, 0.0}});
}

TEST_CASE("radius examples") {
  CHECK(radius(inputs({{1.0, 0.0}, {0.0, 1.0}})) == doctest::Approx(1.0));
  CHECK(radius(inputs({{3.0, 4.0}})) == doctest::Approx(5.0));
  CHECK(radius(inputs({{0.0, 0.0}})) == 0.0);
}

TEST_CASE("symmetrize examples") {
  const Dataset two = symmetrize(Dataset({{RealVector{1.0}, 0.0}}));
  REQUIRE(two.size() == 2);
  CHECK(two[0].x == RealVector{1.0});
  CHECK(two[1].x == RealVector{-1.0});
  CHECK(two[1].y == 0.0);

  const Dataset added = symmetrize(Dataset({{RealVector{1.0, 2.0}, 5.0}}));
  REQUIRE(added.size() == 2);
  CHECK(added[0].y == 5.0);
  CHECK(added[1].x == RealVector{-1.0, -2.0});
  CHECK(added[1].y == 0.0);

  const Dataset copy = symmetrize(Dataset({{RealVector{1.0, 2.0}, 5.0}}), LabelRule::copy());
  CHECK(copy[1].y == 5.0);

  const Dataset mapped = symmetrize(Dataset({{RealVector{1.0, 2.0}, 5.0}}),
                                    LabelRule::map([](const LabeledSample& s) { return -s.y; }));
  CHECK(mapped[1].y == -5.0);
}

TEST_CASE("symmetrize is idempotent on symmetric input") {
  const Dataset d({{RealVector{1.0, 0.0}, 1.0}, {RealVector{-1.0, 0.0}, 2.0}, {RealVector{0.0, 0.0}, 3.0}});
  CHECK(is_symmetric(d));
  const Dataset s = symmetrize(d, LabelRule::copy());
  CHECK(s.size() == d.size());
}

TEST_CASE("multiset parity: duplicates need matching mirrors") {
  const Dataset d({{RealVector{1.0}, 0.0}, {RealVector{1.0}, 0.0}, {RealVector{-1.0}, 0.0}});
  CHECK_FALSE(is_symmetric(d));
  const Dataset s = symmetrize(d);
  CHECK(s.size() == 4);
  CHECK(is_symmetric(s));
}

TEST_CASE("symmetrize properties on random data") {
  Rng rng = make_rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset d = random_dataset(rng, 1 + trial % 4, 5 + trial);
    const Dataset s = symmetrize(d);
    CHECK(is_symmetric(s));
    for (const auto& a : s.samples()) {
      bool found = false;
      for (const auto& b : s.samples()) found = found || b.x == -a.x;
      CHECK(found);
    }
    CHECK(radius(s) == radius(d));
    // Covariance: mirrored outer products coincide, so the 1/S average over
    // the doubled set is unchanged.
    CHECK(max_abs_diff(empirical_covariance(s), empirical_covariance(d)) < 1e-12);
  }
}

TEST_CASE("dataset guards") {
  Dataset d;
  d.push_back({RealVector{1.0, 2.0}, 0.0});
  CHECK_THROWS_AS(d.push_back({RealVector{1.0}, 0.0}), Error);
  CHECK_THROWS_AS(empirical_covariance(Dataset()), Error);
}

TEST_CASE("CSV round trip is exact") {
  Rng rng = make_rng(22);
  const Dataset d = random_dataset(rng, 3, 17);
  std::stringstream ss;
  write_dataset_csv(d, ss);
  CHECK(ss.str().rfind("x0,x1,x2,y\n", 0) == 0);
  const Dataset back = read_dataset_csv(ss);
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back[i].x == d[i].x);
    CHECK(back[i].y == d[i].y);
  }

  const auto path = std::filesystem::temp_directory_path() / "trontrain_test_roundtrip.csv";
  save_dataset_csv(d, path.string());
  const Dataset file_back = load_dataset_csv(path.string());
  CHECK(file_back.size() == d.size());
  std::filesystem::remove(path);
}

TEST_CASE("CSV parse errors") {
  std::stringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS_AS(read_dataset_csv(bad_header), Error);
  std::stringstream ragged("x0,x1,y\n1,2,3\n1,2\n");
  CHECK_THROWS_AS(read_dataset_csv(ragged), Error);
  CHECK_THROWS_AS(load_dataset_csv("/nonexistent/path.csv"), Error);
}

TEST_CASE("format_real is round-trip safe") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456789.123456789}) {
    CHECK(std::stod(format_real(v)) == v);
  }
}
