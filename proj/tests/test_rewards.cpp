#include <doctest.h>

#include <random>
#include <stdexcept>

#include "ipp/rewards.hpp"

using namespace ipp;

TEST_CASE("decay function") {
  const DecayFunction none = DecayFunction::none();
  CHECK(decay_value(none, 0.0) == 1.0);
  CHECK(decay_value(none, 1e6) == 1.0);

  const DecayFunction d = DecayFunction::make(0.2, -0.004);
  CHECK(d.switch_time() == doctest::Approx(200.0));
  CHECK(decay_value(d, 0.0) == doctest::Approx(1.0));
  CHECK(decay_value(d, 100.0) == doctest::Approx(0.6));
  CHECK(decay_value(d, 200.0) == doctest::Approx(0.2));
  CHECK(decay_value(d, 500.0) == doctest::Approx(0.2));

  // Non-increasing.
  double prev = 1.0;
  for (double t = 0.0; t <= 400.0; t += 7.3) {
    const double v = decay_value(d, t);
    CHECK(v <= prev + 1e-12);
    CHECK(v >= 0.2 - 1e-12);
    prev = v;
  }

  CHECK_THROWS_AS(DecayFunction::make(1.5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(DecayFunction::make(0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(DecayFunction::make(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(decay_value(d, -1.0), std::invalid_argument);
}

TEST_CASE("optimistic cell reward closed forms") {
  const SensorModel m = SensorModel::default_table();

  const CellReward a = optimistic_cell_reward(0.5, 100.0, m);
  CHECK(a.reward == doctest::Approx(0.5310044064107189).epsilon(1e-12));
  CHECK(a.p_after == doctest::Approx(0.9).epsilon(1e-12));

  const CellReward b = optimistic_cell_reward(0.2, 700.0, m);  // beyond max range
  CHECK(b.reward == 0.0);
  CHECK(b.p_after == doctest::Approx(0.2));

  // p just below 0.5 assumes a negative measurement.
  const CellReward c = optimistic_cell_reward(0.49, 100.0, m);
  CHECK(c.p_after == doctest::Approx(0.09645669291338581).epsilon(1e-12));

  // Settled cells yield nothing.
  CHECK(optimistic_cell_reward(0.0, 100.0, m).reward == 0.0);
  CHECK(optimistic_cell_reward(1.0, 100.0, m).reward == 0.0);
  CHECK(optimistic_cell_reward(1.0, 100.0, m).p_after == 1.0);
}

TEST_CASE("repeated optimistic observations have diminishing returns") {
  const SensorModel m = SensorModel::default_table();
  double p = 0.5;
  double prev_reward = 1e9;
  for (int k = 0; k < 8; ++k) {
    const CellReward r = optimistic_cell_reward(p, 100.0, m);
    if (r.reward == 0.0) break;  // reached the storage clamp
    CHECK(r.reward < prev_reward);
    prev_reward = r.reward;
    p = r.p_after;
  }
  // First two steps from 0.5 under (0.9, 0.9).
  const CellReward first = optimistic_cell_reward(0.5, 100.0, m);
  const CellReward second = optimistic_cell_reward(first.p_after, 100.0, m);
  CHECK(first.reward == doctest::Approx(0.5310044064107189).epsilon(1e-12));
  CHECK(second.reward == doctest::Approx(0.3739783479182047).epsilon(1e-12));
  CHECK(second.reward < first.reward);
}

TEST_CASE("optimistic reward is never negative") {
  const SensorModel m = SensorModel::default_table();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  std::uniform_real_distribution<double> ur(0.0, 700.0);
  for (int i = 0; i < 5000; ++i) {
    const CellReward r = optimistic_cell_reward(up(rng), ur(rng), m);
    CHECK(r.reward >= 0.0);
  }
}

TEST_CASE("weighted cell reward") {
  const SensorModel m = SensorModel::default_table();
  const DecayFunction none = DecayFunction::none();
  const double base = optimistic_cell_reward(0.5, 100.0, m).reward;

  CHECK(weighted_cell_reward(0.5, 100.0, m, 1.0, 0.0, none) == doctest::Approx(base));
  CHECK(weighted_cell_reward(0.5, 100.0, m, 0.0, 0.0, none) == 0.0);
  CHECK(weighted_cell_reward(0.7, 100.0, m, 0.0, 0.0, none) == 0.0);

  // priority 2 at the decay floor 0.5 equals the unweighted reward.
  const DecayFunction half = DecayFunction::make(0.5, -0.01);
  CHECK(weighted_cell_reward(0.5, 100.0, m, 2.0, half.switch_time() + 10.0, half) ==
        doctest::Approx(base).epsilon(1e-12));

  CHECK_THROWS_AS(weighted_cell_reward(0.5, 100.0, m, -1.0, 0.0, none),
                  std::invalid_argument);
}

TEST_CASE("score_footprint on a fresh map") {
  const SensorModel m = SensorModel::default_table();
  BeliefMap map({0, 0}, 10.0, 4, 4);
  const RewardContext ctx{&map, &m, DecayFunction::none(), 25.0};

  // Empty footprint.
  const NodeScore empty = score_footprint(
      Footprint{}, [&](CellIndex c) { return map.prob(c); }, ctx, 0.0);
  CHECK(empty.info_gain == 0.0);
  CHECK(empty.delta.empty());

  // Single fresh cell at full detector rates.
  Footprint fp;
  fp.cells.push_back({5, 100.0});
  const NodeScore one = score_footprint(
      fp, [&](CellIndex c) { return map.prob(c); }, ctx, 0.0);
  CHECK(one.info_gain == doctest::Approx(0.5310044064107189).epsilon(1e-12));
  CHECK(one.delta.at(5) == doctest::Approx(0.9));
}

TEST_CASE("chained scores equal the entropy-difference closed form") {
  const SensorModel m = SensorModel::default_table();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> up(0.05, 0.95);
  std::uniform_real_distribution<double> ur(20.0, 550.0);
  std::uniform_int_distribution<CellIndex> uc(0, 99);

  for (int rep = 0; rep < 20; ++rep) {
    BeliefMap map({0, 0}, 10.0, 10, 10);
    for (CellIndex i = 0; i < map.size(); ++i) map.set_prob(i, up(rng));
    const RewardContext ctx{&map, &m, DecayFunction::none(), 25.0};

    // Chain of nodes, each with a random footprint; belief resolves
    // through previous deltas.
    std::vector<DeltaMap> chain;
    auto belief_of = [&](CellIndex c) {
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const auto f = it->find(c);
        if (f != it->end()) return f->second;
      }
      return map.prob(c);
    };

    double total = 0.0;
    for (int node = 0; node < 6; ++node) {
      Footprint fp;
      std::vector<bool> used(100, false);
      for (int k = 0; k < 15; ++k) {
        const CellIndex c = uc(rng);
        if (used[static_cast<std::size_t>(c)]) continue;
        used[static_cast<std::size_t>(c)] = true;
        fp.cells.push_back({c, ur(rng)});
      }
      NodeScore s = score_footprint(fp, belief_of, ctx, 0.0);
      total += s.info_gain;
      chain.push_back(std::move(s.delta));
    }

    // Closed form: sum over cells of initial minus final entropy.
    double expect = 0.0;
    for (CellIndex c = 0; c < map.size(); ++c) {
      expect += entropy(map.prob(c)) - entropy(belief_of(c));
    }
    CHECK(total == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("scaling priorities scales the gain linearly") {
  const SensorModel m = SensorModel::default_table();
  BeliefMap map({0, 0}, 10.0, 5, 5);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> up(0.1, 0.9);
  for (CellIndex i = 0; i < map.size(); ++i) map.set_prob(i, up(rng));

  Footprint fp;
  for (CellIndex i = 0; i < 10; ++i) fp.cells.push_back({i, 150.0});

  const RewardContext ctx{&map, &m, DecayFunction::none(), 25.0};
  const double base = score_footprint(
                          fp, [&](CellIndex c) { return map.prob(c); }, ctx, 0.0)
                          .info_gain;

  BeliefMap scaled = map;
  for (CellIndex i = 0; i < scaled.size(); ++i) scaled.set_priority(i, 3.0);
  const RewardContext ctx3{&scaled, &m, DecayFunction::none(), 25.0};
  const double tripled = score_footprint(
                             fp, [&](CellIndex c) { return scaled.prob(c); }, ctx3, 0.0)
                             .info_gain;
  CHECK(tripled == doctest::Approx(3.0 * base).epsilon(1e-12));
}
