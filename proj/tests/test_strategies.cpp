#include <doctest.h>

#include "commaware/strategies.hpp"
#include "oracles.hpp"

using namespace commaware;

namespace {

BeliefState with_counts(Strategy s, Belief b, long ones, long total) {
  BeliefState st(s, b);
  st.obs_count_1 = ones;
  st.obs_count_total = total;
  return st;
}

}  // namespace

TEST_CASE("estimates are cumulative feature fractions") {
  BeliefState s(Strategy::DC, 0);
  CHECK(s.rho1() == 0.5);
  CHECK_FALSE(s.has_estimate());
  observe_feature_update(s, 1);
  CHECK(s.rho1() == 1.0);
  observe_feature_update(s, 1);
  observe_feature_update(s, 0);
  CHECK(s.rho1() == doctest::Approx(2.0 / 3.0));
  CHECK(s.rho0() == doctest::Approx(1.0 / 3.0));
  CHECK(s.own_estimate() == doctest::Approx(1.0 / 3.0));
  s.belief = 1;
  CHECK(s.payload().estimate == doctest::Approx(2.0 / 3.0));
  CHECK(s.payload().belief == 1);
}

TEST_CASE("estimate concentrates under random sampling") {
  // Binomial sd at n = 1000, p = 0.65 is 0.0151; +-0.05 is 3.3 sd, so at
  // least 99% of runs must land inside.
  Rng rng(17);
  std::vector<int> grid(4096, 0);
  for (int k = 0; k < 2663; ++k) grid[k] = 1;
  std::shuffle(grid.begin(), grid.end(), rng);
  int inside = 0;
  const int runs = 400;
  for (int r = 0; r < runs; ++r) {
    BeliefState s(Strategy::DC, 1);
    for (int k = 0; k < 1000; ++k) observe_feature_update(s, grid[uniform_index(rng, grid.size())]);
    inside += (s.rho1() >= 0.6 && s.rho1() <= 0.7) ? 1 : 0;
  }
  CHECK(inside >= static_cast<int>(0.99 * runs));
}

TEST_CASE("receive_payload buffering and MFDM contact window") {
  BeliefState dc(Strategy::DC, 1);
  receive_payload(dc, {0, 0.8}, 3, 10);
  REQUIRE(dc.buffer.size() == 1);
  CHECK(dc.buffer[0].belief == 0);
  CHECK(dc.buffer[0].estimate == 0.8);
  CHECK(dc.concentration == 0.5);

  BeliefState m(Strategy::MFDM, 0);
  receive_payload(m, {1, 0.0}, 7, 100);
  CHECK(m.concentration == doctest::Approx(0.55).epsilon(1e-15));
  receive_payload(m, {1, 0.0}, 7, 110);
  CHECK(m.concentration == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(m.buffer.size() == 2);
  receive_payload(m, {0, 0.0}, 8, 111);
  CHECK(m.concentration == doctest::Approx(0.495));
  // 180 steps after the last contact (t = 110) the sender counts again.
  receive_payload(m, {1, 0.0}, 7, 289);
  CHECK(m.concentration == doctest::Approx(0.495));
  receive_payload(m, {1, 0.0}, 7, 469);
  CHECK(m.concentration == doctest::Approx(0.9 * 0.495 + 0.1));
}

TEST_CASE("concentration stays in [0,1] for any belief sequence") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    BeliefState m(Strategy::MFDM, 0);
    for (int k = 0; k < 400; ++k) {
      receive_payload(m, {bernoulli(rng, 0.5) ? 1 : 0, 0.0}, static_cast<AgentId>(k), k);
      CHECK(m.concentration >= 0.0);
      CHECK(m.concentration <= 1.0);
    }
  }
}

TEST_CASE("DC update") {
  Rng rng(1);
  SUBCASE("adopts a strictly better estimate") {
    auto s = with_counts(Strategy::DC, 1, 6, 10);  // rho_b = 0.6
    s.buffer = {{0, 0.7}};
    dc_update(s, rng);
    CHECK(s.belief == 0);
    CHECK(s.buffer.empty());
  }
  SUBCASE("keeps a better own estimate") {
    auto s = with_counts(Strategy::DC, 1, 7, 10);
    s.buffer = {{0, 0.6}};
    dc_update(s, rng);
    CHECK(s.belief == 1);
  }
  SUBCASE("equal estimates do not flip") {
    auto s = with_counts(Strategy::DC, 1, 7, 10);
    s.buffer = {{0, 0.7}};
    dc_update(s, rng);
    CHECK(s.belief == 1);
  }
  SUBCASE("empty buffer is a no-op") {
    auto s = with_counts(Strategy::DC, 0, 7, 10);
    dc_update(s, rng);
    CHECK(s.belief == 0);
    CHECK(s.buffer.empty());
  }
  SUBCASE("draw is uniform over the buffer") {
    int flips = 0;
    const int trials = 20000;
    for (int k = 0; k < trials; ++k) {
      auto s = with_counts(Strategy::DC, 1, 5, 10);
      s.buffer = {{0, 0.9}, {0, 0.1}, {0, 0.2}, {0, 0.3}};
      dc_update(s, rng);
      flips += s.belief == 0 ? 1 : 0;
    }
    CHECK(std::abs(static_cast<double>(flips) / trials - 0.25) < 0.015);
  }
}

TEST_CASE("DC never flips when no buffered estimate beats its own") {
  Rng gen(31), rng(32);
  for (int trial = 0; trial < 10000; ++trial) {
    const long total = 1 + static_cast<long>(uniform_index(gen, 200));
    const long ones = static_cast<long>(uniform_index(gen, static_cast<std::size_t>(total + 1)));
    const Belief b = bernoulli(gen, 0.5) ? 1 : 0;
    auto s = with_counts(Strategy::DC, b, ones, total);
    const double own = s.own_estimate();
    const std::size_t len = 1 + uniform_index(gen, 12);
    for (std::size_t k = 0; k < len; ++k) s.buffer.push_back({bernoulli(gen, 0.5) ? 1 : 0, own * uniform01(gen)});
    if (bernoulli(gen, 0.3)) s.buffer.push_back({1 - b, own});
    dc_update(s, rng);
    REQUIRE(s.belief == b);
  }
}

TEST_CASE("majority rule examples") {
  BeliefState s(Strategy::DMMD, 0);
  s.buffer = {{1, 0}, {1, 0}, {0, 0}};
  dmmd_update(s);
  CHECK(s.belief == 1);
  CHECK(s.buffer.empty());

  s.belief = 1;
  s.buffer = {{0, 0}, {0, 0}};
  dmmd_update(s);
  CHECK(s.belief == 0);

  s.belief = 0;
  dmmd_update(s);
  CHECK(s.belief == 0);

  BeliefState m(Strategy::MFDM, 0);
  m.buffer = {{1, 0}, {1, 0}, {1, 0}};
  mfdm_update(m);
  CHECK(m.belief == 1);
}

TEST_CASE("majority updates match exhaustive enumeration up to length 8") {
  for (int len = 0; len <= 8; ++len)
    for (int bits = 0; bits < (1 << len); ++bits)
      for (Belief own : {0, 1}) {
        std::vector<int> raw;
        std::vector<ReceivedBelief> buf;
        for (int k = 0; k < len; ++k) {
          raw.push_back((bits >> k) & 1);
          buf.push_back({raw.back(), 0.0});
        }
        const int want = oracle::majority_count(raw, own);
        BeliefState d(Strategy::DMMD, own);
        d.buffer = buf;
        dmmd_update(d);
        BeliefState m(Strategy::MFDM, own);
        m.buffer = buf;
        mfdm_update(m);
        REQUIRE(d.belief == want);
        REQUIRE(m.belief == want);
        REQUIRE(majority(buf, own) == want);
      }
}

TEST_CASE("locked MFDM agents never change") {
  BeliefState m(Strategy::MFDM, 1);
  m.locked = 1;
  m.buffer = {{0, 0}, {0, 0}, {0, 0}};
  mfdm_update(m);
  CHECK(m.belief == 1);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    m.buffer = {{0, 0}, {0, 0}};
    m.concentration = 0.5;
    concentration_lock_check(m);
    belief_update(m, rng);
    CHECK(m.belief == 1);
    CHECK(*m.locked == 1);
    CHECK(m.buffer.empty());
  }
}

TEST_CASE("modulation") {
  auto dc = with_counts(Strategy::DC, 0, 1, 10);
  CHECK(modulation(dc) == 1.0);
  CHECK(modulation(BeliefState(Strategy::DC, 1)) == 1.0);
  CHECK(modulation(with_counts(Strategy::DMMD, 1, 65, 100)) == doctest::Approx(0.65));
  CHECK(modulation(with_counts(Strategy::DMMD, 0, 65, 100)) == doctest::Approx(0.35));
  CHECK(modulation(with_counts(Strategy::MFDM, 0, 3, 10)) == doctest::Approx(0.7));
  CHECK(modulation(with_counts(Strategy::MFDM, 1, 3, 10)) == doctest::Approx(0.7));
  CHECK(modulation(BeliefState(Strategy::DMMD, 1)) == 0.5);
  CHECK(modulation(BeliefState(Strategy::MFDM, 0)) == 0.5);

  Rng gen(3);
  for (int k = 0; k < 1000; ++k) {
    const long total = 1 + static_cast<long>(uniform_index(gen, 50));
    const long ones = static_cast<long>(uniform_index(gen, static_cast<std::size_t>(total + 1)));
    for (Strategy s : {Strategy::DC, Strategy::DMMD, Strategy::MFDM}) {
      const double g = modulation(with_counts(s, bernoulli(gen, 0.5) ? 1 : 0, ones, total));
      CHECK(g >= 0.0);
      CHECK(g <= 1.0);
    }
  }
}

TEST_CASE("concentration lock-in") {
  SUBCASE("30 steps in the upper band lock the belief") {
    BeliefState m(Strategy::MFDM, 1);
    m.concentration = 0.95;
    for (int k = 0; k < 29; ++k) concentration_lock_check(m);
    CHECK_FALSE(m.locked.has_value());
    concentration_lock_check(m);
    REQUIRE(m.locked.has_value());
    CHECK(*m.locked == 1);
  }
  SUBCASE("leaving the band resets the counter") {
    BeliefState m(Strategy::MFDM, 0);
    m.concentration = 0.05;
    for (int k = 0; k < 20; ++k) concentration_lock_check(m);
    CHECK(m.steps_in_band == 20);
    m.concentration = 0.89;
    concentration_lock_check(m);
    CHECK(m.steps_in_band == 0);
  }
  SUBCASE("boundaries count as in band") {
    BeliefState m(Strategy::MFDM, 0);
    m.concentration = 0.1;
    concentration_lock_check(m);
    m.concentration = 0.9;
    concentration_lock_check(m);
    CHECK(m.steps_in_band == 2);
  }
  SUBCASE("oscillation through the middle never locks") {
    // Trace oracle: 0.05 for 29 steps, then one step at 0.5, repeated.
    BeliefState m(Strategy::MFDM, 0);
    int expect_counter = 0;
    for (int k = 0; k < 3000; ++k) {
      const bool mid = k % 30 == 29;
      m.concentration = mid ? 0.5 : (k / 30 % 2 ? 0.95 : 0.05);
      expect_counter = mid ? 0 : expect_counter + 1;
      concentration_lock_check(m);
      REQUIRE(m.steps_in_band == expect_counter);
      REQUIRE_FALSE(m.locked.has_value());
    }
  }
  SUBCASE("other strategies are untouched") {
    BeliefState d(Strategy::DMMD, 1);
    d.concentration = 0.95;
    for (int k = 0; k < 50; ++k) concentration_lock_check(d);
    CHECK_FALSE(d.locked.has_value());
  }
}

TEST_CASE("buffer handling across the dissemination cycle") {
  BeliefState dc(Strategy::DC, 0);
  dc.buffer = {{1, 0.9}};
  on_enter_dissemination(dc);
  CHECK(dc.buffer.size() == 1);

  BeliefState dm(Strategy::DMMD, 0);
  dm.buffer = {{1, 0.9}};
  on_enter_dissemination(dm);
  CHECK(dm.buffer.empty());

  Rng rng(1);
  BeliefState mf(Strategy::MFDM, 0);
  mf.buffer = {{1, 0}, {1, 0}};
  belief_update(mf, rng);
  CHECK(mf.belief == 1);
  CHECK(mf.buffer.empty());
}

TEST_CASE("strategy names") {
  CHECK(parse_strategy("MFDM") == Strategy::MFDM);
  CHECK(to_string(Strategy::DMMD) == "DMMD");
  CHECK_THROWS_AS(parse_strategy("dc"), std::invalid_argument);
}
