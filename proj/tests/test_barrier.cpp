#include <catch2/catch_amalgamated.hpp>

#include "switchlab/barrier.hpp"
#include "switchlab/montecarlo.hpp"
#include "test_support.hpp"

using namespace switchlab;

namespace {

Barrier<1> rost_single(std::int64_t site, std::int64_t l) {
  typename Barrier<1>::EntryMap e;
  e.emplace(Point<1>{site}, ExtTime(l));
  return Barrier<1>::make(BarrierKind::Rost, std::move(e));
}

}  // namespace

TEST_CASE("root continuation semantics") {
  const auto b = test_support::worked_barrier();
  CHECK(b.is_continuation(5, Point<1>{0}));          // r = inf
  CHECK_FALSE(b.is_continuation(1, Point<1>{1}));    // 1 < 1 fails
  CHECK(b.is_continuation(0, Point<1>{1}));
  CHECK(b.is_continuation(-3, Point<1>{-1}));        // -3 < 1
  CHECK_FALSE(b.is_continuation(0, Point<1>{4}));    // unlisted: r = 0
  CHECK(b.is_continuation(-1, Point<1>{4}));         // negative times compare numerically
}

TEST_CASE("empty root barrier stops everything at t=0") {
  const auto b = Barrier<1>::make(BarrierKind::Root, {});
  for (std::int64_t m = -3; m <= 3; ++m) {
    CHECK_FALSE(b.is_continuation(0, Point<1>{m}));
  }
}

TEST_CASE("rost continuation semantics") {
  const auto b = rost_single(0, 0);
  CHECK(b.is_continuation(0, Point<1>{0}));
  CHECK(b.is_continuation(7, Point<1>{0}));
  CHECK_FALSE(b.is_continuation(0, Point<1>{1}));  // default l = inf
  CHECK_FALSE(b.is_continuation(-2, Point<1>{0})); // -2 < 0 = l
}

TEST_CASE("reflection of a Rost barrier reproduces the expected Root image") {
  // Rost {0:0}, T=1: continuation at site 0 at all times <= 1
  const auto r1 = reflect_rost(rost_single(0, 0), 1);
  CHECK(r1.kind() == BarrierKind::Root);
  CHECK(r1.is_continuation(1, Point<1>{0}));
  CHECK(r1.is_continuation(0, Point<1>{0}));
  CHECK(r1.is_continuation(-5, Point<1>{0}));
  CHECK_FALSE(r1.is_continuation(2, Point<1>{0}));
  // unlisted sites were never continuation in the Rost set; the image must
  // stay empty even at negative times
  CHECK_FALSE(r1.is_continuation(-1, Point<1>{3}));

  // Rost {0:2}, T=3: continuation at site 0 exactly at times <= 1
  const auto r2 = reflect_rost(rost_single(0, 2), 3);
  CHECK(r2.is_continuation(1, Point<1>{0}));
  CHECK(r2.is_continuation(0, Point<1>{0}));
  CHECK_FALSE(r2.is_continuation(2, Point<1>{0}));
}

TEST_CASE("reflect requires a Rost barrier") {
  CHECK_THROWS_AS(reflect_rost(test_support::worked_barrier(), 2), WrongKindError);
}

TEST_CASE("reflect is an involution on the continuation set") {
  SplitMix64 rng(4311);
  for (int rep = 0; rep < 30; ++rep) {
    const std::int64_t T = test_support::pick(rng, 0, 9);
    const auto b = rep % 2 == 0 ? test_support::random_rost_barrier<1>(rng, 4, 6)
                                : test_support::random_root_barrier<1>(rng, 4, 6);
    const auto rr = reflect(reflect(b, T), T);
    CHECK(rr.kind() == b.kind());
    for (int q = 0; q < 60; ++q) {
      const std::int64_t t = test_support::pick(rng, -12, 12);
      const Point<1> m{test_support::pick(rng, -6, 6)};
      CHECK(rr.is_continuation(t, m) == b.is_continuation(t, m));
    }
  }
}

TEST_CASE("reflect maps the continuation set pointwise") {
  SplitMix64 rng(555);
  for (int rep = 0; rep < 30; ++rep) {
    const std::int64_t T = test_support::pick(rng, 0, 9);
    const auto b = test_support::random_rost_barrier<1>(rng, 4, 6);
    const auto img = reflect(b, T);
    for (int q = 0; q < 60; ++q) {
      const std::int64_t t = test_support::pick(rng, -12, 12);
      const Point<1> m{test_support::pick(rng, -6, 6)};
      CHECK(b.is_continuation(t, m) == img.is_continuation(T - t, m));
    }
  }
}

TEST_CASE("per-site continuation times form down-sets (Root) and up-sets (Rost)") {
  SplitMix64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const auto root = test_support::random_root_barrier<1>(rng, 4, 8);
    const auto rost = test_support::random_rost_barrier<1>(rng, 4, 8);
    for (int q = 0; q < 50; ++q) {
      const std::int64_t t = test_support::pick(rng, -10, 14);
      const Point<1> m{test_support::pick(rng, -6, 6)};
      if (root.is_continuation(t, m)) CHECK(root.is_continuation(t - 1, m));
      if (rost.is_continuation(t, m)) CHECK(rost.is_continuation(t + 1, m));
    }
  }
}

TEST_CASE("eventual continuation region") {
  const auto worked = test_support::worked_barrier();
  const auto region = worked.eventual_continuation();
  REQUIRE(region.size() == 1);
  CHECK(region[0] == Point<1>{0});

  // reflecting a Root barrier yields a Rost set whose late-time continuation
  // region is cofinite: not usable for infinite-horizon runs
  const auto r = reflect(worked, 3);
  CHECK(r.kind() == BarrierKind::Rost);
  CHECK_THROWS_AS(r.eventual_continuation(), UnboundedProblemError);
}
