#pragma once

// Shared deterministic fixture generators for the test and acceptance suites.

#include <cstdint>
#include <utility>
#include <vector>

#include "switchlab/barrier.hpp"
#include "switchlab/measure.hpp"
#include "switchlab/montecarlo.hpp"
#include "switchlab/optimal_stopping.hpp"

namespace test_support {

using switchlab::Barrier;
using switchlab::BarrierKind;
using switchlab::ExtTime;
using switchlab::LatticeMeasure;
using switchlab::Point;
using switchlab::Rational;
using switchlab::SplitMix64;
using switchlab::StoppingRule;

inline std::int64_t pick(SplitMix64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint32_t>(hi - lo + 1)));
}

/// Random exact measure with at most max_atoms atoms on [-radius, radius],
/// integer weights normalized by their exact sum.
template <int D>
LatticeMeasure<Rational, D> random_measure(SplitMix64& rng, int max_atoms, std::int64_t radius) {
  const int n = static_cast<int>(pick(rng, 1, max_atoms));
  std::vector<std::pair<Point<D>, Rational>> atoms;
  std::int64_t total = 0;
  std::vector<std::pair<Point<D>, std::int64_t>> raw;
  for (int i = 0; i < n; ++i) {
    Point<D> p{};
    for (int d = 0; d < D; ++d) p[d] = pick(rng, -radius, radius);
    const std::int64_t w = pick(rng, 1, 9);
    raw.emplace_back(p, w);
    total += w;
  }
  for (const auto& [p, w] : raw) atoms.emplace_back(p, Rational(w, total));
  return switchlab::make_measure<Rational, D>(atoms);
}

/// Random bounded Root barrier: sites within [-radius, radius]^D, each listed
/// with probability ~1/2; finite entries <= max_entry, plus occasional
/// continue-forever sites when allow_inf is set.
template <int D>
Barrier<D> random_root_barrier(SplitMix64& rng, std::int64_t radius, std::int64_t max_entry,
                               bool allow_inf = true) {
  typename Barrier<D>::EntryMap entries;
  std::vector<Point<D>> box;
  Point<D> q{};
  auto rec = [&](auto&& self, int dim) -> void {
    if (dim == D) {
      box.push_back(q);
      return;
    }
    for (std::int64_t v = -radius; v <= radius; ++v) {
      q[dim] = v;
      self(self, dim + 1);
    }
  };
  rec(rec, 0);
  for (const auto& p : box) {
    const std::int64_t roll = pick(rng, 0, 9);
    if (roll < 5) continue;  // unlisted: r = 0
    if (allow_inf && roll == 9) {
      entries.emplace(p, ExtTime::plus_inf());
    } else {
      entries.emplace(p, ExtTime(pick(rng, 1, max_entry)));
    }
  }
  return Barrier<D>::make(BarrierKind::Root, std::move(entries));
}

/// Random bounded Rost barrier: a handful of sites with finite l; the origin
/// area gets l = 0 with good probability so walks actually run.
template <int D>
Barrier<D> random_rost_barrier(SplitMix64& rng, std::int64_t radius, std::int64_t max_entry) {
  typename Barrier<D>::EntryMap entries;
  std::vector<Point<D>> box;
  Point<D> q{};
  auto rec = [&](auto&& self, int dim) -> void {
    if (dim == D) {
      box.push_back(q);
      return;
    }
    for (std::int64_t v = -radius; v <= radius; ++v) {
      q[dim] = v;
      self(self, dim + 1);
    }
  };
  rec(rec, 0);
  for (const auto& p : box) {
    const std::int64_t roll = pick(rng, 0, 9);
    if (roll < 4) continue;  // unlisted: l = +inf
    const std::int64_t near = switchlab::sup_norm(p);
    const std::int64_t l = near <= 1 && roll >= 7 ? 0 : pick(rng, 0, max_entry);
    entries.emplace(p, ExtTime(l));
  }
  return Barrier<D>::make(BarrierKind::Rost, std::move(entries));
}

/// Random Markov stopping rule on [0,T) x [-radius, radius]^D with stop
/// probability ~density/10 per cell.
template <int D>
StoppingRule<D> random_rule(SplitMix64& rng, std::int64_t T, std::int64_t radius, int density = 3) {
  typename StoppingRule<D>::StopSet s;
  std::vector<Point<D>> box;
  Point<D> q{};
  auto rec = [&](auto&& self, int dim) -> void {
    if (dim == D) {
      box.push_back(q);
      return;
    }
    for (std::int64_t v = -radius; v <= radius; ++v) {
      q[dim] = v;
      self(self, dim + 1);
    }
  };
  rec(rec, 0);
  for (std::int64_t t = 0; t < T; ++t) {
    for (const auto& p : box) {
      if (pick(rng, 0, 9) < density) s.insert({t, p});
    }
  }
  return StoppingRule<D>::from_set(std::move(s));
}

/// The worked d=1 fixture used throughout: continue at 0 forever, at +-1
/// before time 1, stop elsewhere.
inline Barrier<1> worked_barrier() {
  typename Barrier<1>::EntryMap e;
  e.emplace(Point<1>{0}, ExtTime::plus_inf());
  e.emplace(Point<1>{-1}, ExtTime(1));
  e.emplace(Point<1>{1}, ExtTime(1));
  return Barrier<1>::make(BarrierKind::Root, std::move(e));
}

inline LatticeMeasure<Rational, 1> delta(std::int64_t x) {
  return switchlab::point_mass<Rational, 1>(Point<1>{x});
}

}  // namespace test_support
