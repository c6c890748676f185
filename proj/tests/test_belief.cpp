#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ipp/belief_map.hpp"

using namespace ipp;

TEST_CASE("entropy extremes and symmetry") {
  CHECK(entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy(0.0) == 0.0);
  CHECK(entropy(1.0) == 0.0);
  CHECK(entropy(0.9) == doctest::Approx(0.4689955935892811).epsilon(1e-12));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng);
    CHECK(entropy(p) == doctest::Approx(entropy(1.0 - p)).epsilon(1e-12));
    CHECK(entropy(p) >= 0.0);
    CHECK(entropy(p) <= 1.0 + 1e-12);
  }
}

TEST_CASE("entropy domain errors") {
  CHECK_THROWS_AS(entropy(-0.01), std::domain_error);
  CHECK_THROWS_AS(entropy(1.01), std::domain_error);
  CHECK_THROWS_AS(entropy(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("belief map indexing is a bijection") {
  BeliefMap map({10.0, -20.0}, 30.0, 7, 11);
  CHECK(map.size() == 77);
  for (int row = 0; row < map.n_rows(); ++row) {
    for (int col = 0; col < map.n_cols(); ++col) {
      const CellIndex idx = map.cell_index(row, col);
      CHECK(map.row_of(idx) == row);
      CHECK(map.col_of(idx) == col);
      CHECK(map.cell_at(map.cell_center(idx)) == idx);
    }
  }
  CHECK(map.cell_at({9.9, 0.0}) == kInvalidCell);
  CHECK(map.cell_at({10.0 + 11 * 30.0 + 0.1, 0.0}) == kInvalidCell);
}

TEST_CASE("belief map validation") {
  CHECK_THROWS_AS(BeliefMap({0, 0}, 0.0, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(BeliefMap({0, 0}, 30.0, 0, 4), std::invalid_argument);
  BeliefMap map({0, 0}, 30.0, 2, 2);
  CHECK_THROWS_AS(map.set_prob(0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(map.set_priority(0, -1.0), std::invalid_argument);
}

TEST_CASE("total entropy") {
  BeliefMap map({0, 0}, 10.0, 2, 2);
  CHECK(map.total_entropy() == doctest::Approx(4.0).epsilon(1e-12));

  map.set_prob(0, 0.0);
  map.set_prob(1, 1.0);
  map.set_prob(2, 1.0);
  map.set_prob(3, 0.0);
  CHECK(map.total_entropy() == 0.0);

  BeliefMap two({0, 0}, 10.0, 1, 2);
  two.set_prob(0, 0.5);
  two.set_prob(1, 0.9);
  CHECK(two.total_entropy() == doctest::Approx(1.4689955935892811).epsilon(1e-12));
}

TEST_CASE("belief map io round trip is lossless") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BeliefMap map({1.25, -3.75}, 12.5, 9, 13);
  for (CellIndex i = 0; i < map.size(); ++i) {
    map.set_prob(i, u(rng));
    map.set_priority(i, 2.0 * u(rng));
  }
  std::stringstream ss;
  map.save(ss);
  const BeliefMap loaded = BeliefMap::load(ss);
  REQUIRE(loaded.size() == map.size());
  CHECK(loaded.cell_size() == map.cell_size());
  CHECK(loaded.origin().x == map.origin().x);
  for (CellIndex i = 0; i < map.size(); ++i) {
    CHECK(std::abs(loaded.prob(i) - map.prob(i)) <= 1e-9);
    CHECK(std::abs(loaded.priority(i) - map.priority(i)) <= 1e-9);
  }

  // Uniform priorities are omitted from the file and restored as 1.
  BeliefMap plain({0, 0}, 5.0, 2, 3, 0.25);
  std::stringstream ss2;
  plain.save(ss2);
  const BeliefMap loaded2 = BeliefMap::load(ss2);
  CHECK(loaded2.priority(0) == 1.0);
  CHECK(loaded2.prob(4) == 0.25);
}
