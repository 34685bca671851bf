#include <catch2/catch_amalgamated.hpp>

#include "switchlab/kernel.hpp"
#include "switchlab/oracle.hpp"
#include "switchlab/stopped_law.hpp"
#include "test_support.hpp"

using namespace switchlab;
using test_support::delta;
using test_support::worked_barrier;

TEST_CASE("worked fixture at T=1: half mass at each neighbour, stopped at 1") {
  const auto law = stopped_law<Rational, 1>(delta(0), worked_barrier(), Horizon::finite(1));
  CHECK(law.exit_law.at(Point<1>{-1}) == Rational(1, 2));
  CHECK(law.exit_law.at(Point<1>{1}) == Rational(1, 2));
  CHECK(law.exit_law.support_size() == 2);
  CHECK(law.joint.at({1, Point<1>{-1}}) == Rational(1, 2));
  CHECK(law.joint.at({1, Point<1>{1}}) == Rational(1, 2));
  CHECK(law.residual == Rational(0));
}

TEST_CASE("empty barrier stops immediately") {
  const auto b = Barrier<1>::make(BarrierKind::Root, {});
  const auto law = stopped_law<Rational, 1>(delta(0), b, Horizon::finite(5));
  CHECK(law.exit_law == delta(0));
  CHECK(law.joint.at({0, Point<1>{0}}) == Rational(1));
}

TEST_CASE("gambler's ruin: continue forever on {-1,0,1}") {
  typename Barrier<1>::EntryMap e;
  for (std::int64_t m = -1; m <= 1; ++m) e.emplace(Point<1>{m}, ExtTime::plus_inf());
  const auto b = Barrier<1>::make(BarrierKind::Root, std::move(e));
  const auto law = stopped_law<Rational, 1>(delta(0), b, Horizon::infinite());
  CHECK(law.exit_law.at(Point<1>{-2}) == Rational(1, 2));
  CHECK(law.exit_law.at(Point<1>{2}) == Rational(1, 2));
  CHECK(law.residual == Rational(0));
  // all solver-attributed mass sits in the reserved bucket
  CHECK(law.joint.at({kInfTailBucket, Point<1>{2}}) == Rational(1, 2));
}

TEST_CASE("infinite horizon rejects unbounded continuation") {
  const auto unbounded = reflect(worked_barrier(), 3);  // Rost-kind with finite default
  CHECK_THROWS_AS((stopped_law<Rational, 1>(delta(0), unbounded, Horizon::infinite())),
                  UnboundedProblemError);
}

TEST_CASE("expectation over the exit law") {
  const auto law = stopped_law<Rational, 1>(delta(0), worked_barrier(), Horizon::finite(1));
  CHECK(expectation(law, [](const Point<1>&) { return Rational(1); }) == Rational(1));
  CHECK(expectation(law, [](const Point<1>& m) { return Rational(std::abs(m[0])); }) == Rational(1));
  CHECK(expectation(law, [](const Point<1>& m) { return Rational(m[0]); }) == Rational(0));

  std::map<Point<1>, Rational> partial{{Point<1>{1}, Rational(5)}};
  CHECK_THROWS_AS((expectation(law, partial)), MissingValueError);
}

TEST_CASE("brute-force equivalence with exhaustive path enumeration") {
  SplitMix64 rng(314159);
  for (int rep = 0; rep < 25; ++rep) {
    const std::int64_t T = test_support::pick(rng, 0, 10);
    const auto b = test_support::random_root_barrier<1>(rng, 5, 8);
    const auto lam = test_support::random_measure<1>(rng, 4, 4);
    const auto dp = stopped_law<Rational, 1>(lam, b, Horizon::finite(T));
    const auto oracle_joint = oracle::capped_joint_law(lam, b, T);
    REQUIRE(dp.joint.size() == oracle_joint.size());
    for (const auto& [key, w] : oracle_joint) {
      CHECK(dp.joint.at(key) == w);
    }
  }
}

TEST_CASE("brute-force equivalence for Rost barriers") {
  SplitMix64 rng(2718);
  for (int rep = 0; rep < 20; ++rep) {
    const std::int64_t T = test_support::pick(rng, 0, 9);
    const auto b = test_support::random_rost_barrier<1>(rng, 4, 6);
    const auto lam = test_support::random_measure<1>(rng, 3, 3);
    const auto dp = stopped_law<Rational, 1>(lam, b, Horizon::finite(T));
    for (const auto& [key, w] : oracle::capped_joint_law(lam, b, T)) {
      CHECK(dp.joint.at(key) == w);
    }
  }
}

TEST_CASE("infinite-horizon law matches enumeration plus the ruin formula") {
  SplitMix64 rng(99991);
  for (int rep = 0; rep < 25; ++rep) {
    const auto b = rep % 2 == 0 ? test_support::random_root_barrier<1>(rng, 4, 7)
                                : test_support::random_rost_barrier<1>(rng, 4, 7);
    const auto lam = test_support::random_measure<1>(rng, 3, 3);
    const auto dp = stopped_law<Rational, 1>(lam, b, Horizon::infinite());
    const auto by_paths = oracle::unbounded_exit_law_1d(lam, b);
    CHECK(dp.exit_law == by_paths);
    CHECK(dp.residual == Rational(0));
  }
}

TEST_CASE("structural invariants of the joint decomposition") {
  SplitMix64 rng(12345);
  for (int rep = 0; rep < 20; ++rep) {
    const std::int64_t T = test_support::pick(rng, 1, 10);
    const auto b = test_support::random_root_barrier<1>(rng, 5, 8);
    const auto lam = test_support::random_measure<1>(rng, 4, 4);
    const auto law = stopped_law<Rational, 1>(lam, b, Horizon::finite(T));

    CHECK(law.joint_mass() == Rational(1));
    CHECK(law.marginal_sites() == law.exit_law);

    // stopped mass before T sits outside the continuation set, and only at
    // sites adjacent to somewhere alive one step earlier
    for (const auto& [key, w] : law.joint) {
      const auto& [t, m] = key;
      if (t == T) continue;
      CHECK_FALSE(b.is_continuation(t, m));
      if (t >= 1) {
        bool adjacent_alive = false;
        for (const auto& [key2, w2] : law.joint) {
          const auto& [t2, m2] = key2;
          if (t2 >= t && l1_norm(m2 - m) <= 1 + std::abs(t2 - t)) adjacent_alive = true;
        }
        CHECK(adjacent_alive);
      }
    }
  }
}

TEST_CASE("mean preservation and potential monotonicity in T") {
  SplitMix64 rng(777);
  for (int rep = 0; rep < 15; ++rep) {
    const auto b = test_support::random_root_barrier<1>(rng, 5, 6);
    const auto lam = test_support::random_measure<1>(rng, 4, 4);
    Rational prev_u;
    const std::int64_t y = test_support::pick(rng, -6, 6);
    for (std::int64_t T = 0; T <= 8; ++T) {
      const auto law = stopped_law<Rational, 1>(lam, b, Horizon::finite(T));
      CHECK(law.exit_law.mean()[0] == lam.mean()[0]);
      const Rational u = u_potential(law.exit_law, y);
      if (T > 0) CHECK(u <= prev_u);
      prev_u = u;
    }
    const auto inf_law = stopped_law<Rational, 1>(lam, b, Horizon::infinite());
    CHECK(inf_law.exit_law.mean()[0] == lam.mean()[0]);
  }
}

TEST_CASE("exit laws dominate the start law in convex order") {
  SplitMix64 rng(31337);
  for (int rep = 0; rep < 15; ++rep) {
    const auto root = test_support::random_root_barrier<1>(rng, 4, 6);
    const auto rost = test_support::random_rost_barrier<1>(rng, 4, 6);
    const auto lam = test_support::random_measure<1>(rng, 3, 3);
    const std::int64_t T = test_support::pick(rng, 0, 8);
    CHECK(convex_order(lam, stopped_law<Rational, 1>(lam, root, Horizon::finite(T)).exit_law));
    CHECK(convex_order(lam, stopped_law<Rational, 1>(lam, root, Horizon::infinite()).exit_law));
    CHECK(convex_order(lam, stopped_law<Rational, 1>(lam, rost, Horizon::finite(T)).exit_law));
    CHECK(convex_order(lam, stopped_law<Rational, 1>(lam, rost, Horizon::infinite()).exit_law));
  }
}

TEST_CASE("reversed-time queries of the reflected set reproduce the Rost stop") {
  // rho_Rost = inf{t : (T-t, Y_t) outside reflect(rost, T)}
  SplitMix64 rng(50505);
  for (int rep = 0; rep < 15; ++rep) {
    const std::int64_t T = test_support::pick(rng, 0, 8);
    const auto rost = test_support::random_rost_barrier<1>(rng, 4, 6);
    const auto refl = reflect_rost(rost, T);
    const auto lam = test_support::random_measure<1>(rng, 3, 3);
    const auto direct = stopped_law<Rational, 1>(lam, rost, Horizon::finite(T));
    const auto via_reflect = stopped_law_pred(
        lam, [&](std::int64_t t, const Point<1>& m) { return !refl.is_continuation(T - t, m); }, T);
    CHECK(direct.exit_law == via_reflect.exit_law);
    CHECK(direct.joint == via_reflect.joint);
  }
}

TEST_CASE("d=2 exit law: symmetric cross fixture") {
  typename Barrier<2>::EntryMap e;
  e.emplace(Point<2>{0, 0}, ExtTime::plus_inf());
  const auto b = Barrier<2>::make(BarrierKind::Root, std::move(e));
  const auto law = stopped_law<Rational, 2>(point_mass<Rational, 2>(Point<2>{0, 0}), b, Horizon::infinite());
  CHECK(law.exit_law.support_size() == 4);
  for (const auto& [p, w] : law.exit_law.atoms()) CHECK(w == Rational(1, 4));
}
