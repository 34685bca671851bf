#include <catch2/catch_amalgamated.hpp>

#include "switchlab/kernel.hpp"
#include "switchlab/measure.hpp"
#include "test_support.hpp"

using namespace switchlab;
using test_support::delta;

TEST_CASE("make_measure basics") {
  const auto d0 = make_measure<Rational, 1>({{Point<1>{0}, Rational(1)}});
  CHECK(d0.support_size() == 1);
  CHECK(d0.at(Point<1>{0}) == Rational(1));

  const auto half = make_measure<Rational, 1>({{Point<1>{-1}, Rational(1, 2)}, {Point<1>{1}, Rational(1, 2)}});
  CHECK(half.support_size() == 2);
  CHECK(half.mean()[0] == Rational(0));

  // duplicates merge by summation
  const auto merged = make_measure<Rational, 1>({{Point<1>{0}, Rational(1, 2)}, {Point<1>{0}, Rational(1, 2)}});
  CHECK(merged == d0);
}

TEST_CASE("make_measure rejects bad input") {
  CHECK_THROWS_AS((make_measure<Rational, 1>({})), EmptySupportError);
  CHECK_THROWS_AS((make_measure<Rational, 1>({{Point<1>{0}, Rational(-1, 2)}, {Point<1>{1}, Rational(3, 2)}})),
                  NegativeWeightError);
  CHECK_THROWS_AS((make_measure<Rational, 1>({{Point<1>{0}, Rational(1, 2)}})), MassNotOneError);
  // approx mode: deviation beyond eps
  CHECK_THROWS_AS((make_measure<double, 1>({{Point<1>{0}, 0.9}}, 1e-9)), MassNotOneError);
  CHECK_NOTHROW((make_measure<double, 1>({{Point<1>{0}, 1.0 + 1e-12}}, 1e-9)));
}

TEST_CASE("potential against the canonical d=1 kernel") {
  const auto k = kernel_canonical_1d<Rational, 1>();
  CHECK(potential(delta(0), Point<1>{3}, k) == Rational(-3));
  const auto half = make_measure<Rational, 1>({{Point<1>{-1}, Rational(1, 2)}, {Point<1>{1}, Rational(1, 2)}});
  CHECK(potential(half, Point<1>{0}, k) == Rational(-1));

  // direct summation oracle: -(1/4*|1+2| + 3/4*|1-2|) = -3/2
  const auto m = make_measure<Rational, 1>({{Point<1>{-2}, Rational(1, 4)}, {Point<1>{2}, Rational(3, 4)}});
  const Rational by_hand = -(Rational(1, 4) * Rational(3) + Rational(3, 4) * Rational(1));
  CHECK(by_hand == Rational(-3, 2));
  CHECK(potential(m, Point<1>{1}, k) == by_hand);
}

TEST_CASE("potential rejects points outside the kernel box") {
  const auto k = kernel_synthetic<1>(3);
  CHECK_THROWS_AS(potential(delta(0), Point<1>{5}, k), OutOfKernelBoxError);
}

TEST_CASE("convex order examples") {
  const auto d0 = delta(0);
  const auto half = make_measure<Rational, 1>({{Point<1>{-1}, Rational(1, 2)}, {Point<1>{1}, Rational(1, 2)}});
  CHECK(convex_order(d0, half));
  CHECK_FALSE(convex_order(d0, delta(1)));  // means differ
  CHECK_FALSE(convex_order(half, d0));      // reversed order
}

TEST_CASE("potential is concave with equality off the support") {
  SplitMix64 rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    const auto m = test_support::random_measure<1>(rng, 5, 6);
    for (std::int64_t y = -9; y <= 9; ++y) {
      const Rational lhs = Rational(2) * u_potential(m, y);
      const Rational rhs = u_potential(m, y - 1) + u_potential(m, y + 1);
      CHECK(lhs >= rhs);
      if (m.at(Point<1>{y}) == Rational(0)) {
        CHECK(lhs == rhs);
      } else {
        CHECK(lhs > rhs);
      }
    }
  }
}

TEST_CASE("potential is linear in the measure") {
  SplitMix64 rng(77);
  const auto k = kernel_canonical_1d<Rational, 1>();
  for (int rep = 0; rep < 25; ++rep) {
    const auto m1 = test_support::random_measure<1>(rng, 4, 5);
    const auto m2 = test_support::random_measure<1>(rng, 4, 5);
    const Rational alpha(test_support::pick(rng, 0, 7), 7);
    typename LatticeMeasure<Rational, 1>::AtomMap mix;
    for (const auto& [p, w] : m1.atoms()) mix[p] += alpha * w;
    for (const auto& [p, w] : m2.atoms()) mix[p] += (Rational(1) - alpha) * w;
    const auto m = LatticeMeasure<Rational, 1>::unchecked(std::move(mix));
    const Point<1> y{test_support::pick(rng, -8, 8)};
    CHECK(potential(m, y, k) == alpha * potential(m1, y, k) + (Rational(1) - alpha) * potential(m2, y, k));
  }
}

namespace {

// one mean-preserving spread: move a random atom's mass half to each neighbour
LatticeMeasure<Rational, 1> spread_once(const LatticeMeasure<Rational, 1>& m, SplitMix64& rng) {
  auto atoms = m.atoms();
  auto it = atoms.begin();
  std::advance(it, test_support::pick(rng, 0, static_cast<std::int64_t>(atoms.size()) - 1));
  const auto [site, w] = *it;
  atoms.erase(it);
  atoms[Point<1>{site[0] - 1}] += w / Rational(2);
  atoms[Point<1>{site[0] + 1}] += w / Rational(2);
  return LatticeMeasure<Rational, 1>::unchecked(std::move(atoms));
}

}  // namespace

TEST_CASE("convex order is transitive along mean-preserving spread chains") {
  SplitMix64 rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = test_support::random_measure<1>(rng, 3, 3);
    auto b = a;
    for (int i = 0; i < 2; ++i) b = spread_once(b, rng);
    auto c = b;
    for (int i = 0; i < 2; ++i) c = spread_once(c, rng);
    REQUIRE(convex_order(a, b));
    REQUIRE(convex_order(b, c));
    CHECK(convex_order(a, c));
  }
}
