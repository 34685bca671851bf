#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "switchlab/barrier.hpp"
#include "switchlab/errors.hpp"
#include "switchlab/lattice.hpp"
#include "switchlab/linear_solve.hpp"
#include "switchlab/measure.hpp"

namespace switchlab {

/// Reserved joint-law time bucket for mass attributed by the infinite-horizon
/// absorption solver (exported as "inf").
inline constexpr std::int64_t kInfTailBucket = -1;

/// Law of the walk stopped at a barrier: the exit-site marginal plus the joint
/// (stopping time, site) decomposition. For finite horizon T the bucket t = T
/// holds all mass alive at the horizon (stopped there or censored).
template <class S, int D>
struct StoppedLaw {
  LatticeMeasure<S, D> exit_law = LatticeMeasure<S, D>::unchecked({});
  std::map<std::pair<std::int64_t, Point<D>>, S> joint;
  Horizon horizon = Horizon::finite(0);
  S residual{};  // 1 - total joint mass; exactly 0 in exact mode

  S joint_mass() const {
    S m(0);
    for (const auto& [k, w] : joint) m += w;
    return m;
  }

  /// Marginal over sites, which must reproduce exit_law.
  LatticeMeasure<S, D> marginal_sites() const {
    typename LatticeMeasure<S, D>::AtomMap m;
    for (const auto& [k, w] : joint) m[k.second] += w;
    return LatticeMeasure<S, D>::unchecked(std::move(m));
  }
};

namespace detail {

template <class S, int D>
using MassMap = std::map<Point<D>, S>;

template <class S, int D>
MassMap<S, D> diffuse(const MassMap<S, D>& alive) {
  MassMap<S, D> next;
  const S step = scalar_traits<S>::ratio(1, 2 * D);
  for (const auto& [p, w] : alive) {
    const S share = w * step;
    for_each_neighbor(p, [&](const Point<D>& q) { next[q] += share; });
  }
  return next;
}

/// Exact absorption of `alive` mass by the complement of `region`: returns the
/// absorbed-mass distribution over the boundary sites. Solves the occupation
/// system (I - Q^T) x = alive on the region, then pushes one step out.
template <class S, int D>
MassMap<S, D> absorb_out_of_region(const MassMap<S, D>& alive, const std::vector<Point<D>>& region) {
  MassMap<S, D> absorbed;
  if (alive.empty()) return absorbed;
  std::map<Point<D>, std::size_t> id;
  for (const auto& p : region) id.emplace(p, id.size());
  const std::size_t n = region.size();
  const S step = scalar_traits<S>::ratio(1, 2 * D);

  std::vector<std::vector<S>> mat(n, std::vector<S>(n, S(0)));
  std::vector<S> rhs(n, S(0));
  for (std::size_t j = 0; j < n; ++j) {
    mat[j][j] = S(1);
    // column of Q^T at j: transitions into region[j] from region neighbours
    for_each_neighbor(region[j], [&](const Point<D>& q) {
      auto it = id.find(q);
      if (it != id.end()) mat[j][it->second] -= step;
    });
    auto it = alive.find(region[j]);
    if (it != alive.end()) rhs[j] = it->second;
  }
  const std::vector<S> occupation = solve_dense(std::move(mat), std::move(rhs));
  for (std::size_t j = 0; j < n; ++j) {
    if (occupation[j] == S(0)) continue;
    const S share = occupation[j] * step;
    for_each_neighbor(region[j], [&](const Point<D>& q) {
      if (!id.count(q)) absorbed[q] += share;
    });
  }
  return absorbed;
}

}  // namespace detail

/// Finite-horizon stopped law for an arbitrary stop predicate stops(t, m)
/// (forced stop at t = T). Stop-first ordering: mass at (t,m) with stops(t,m)
/// freezes before the survivors diffuse to t+1, so time-0 stopping is
/// included.
template <class S, int D, class StopPred>
StoppedLaw<S, D> stopped_law_pred(const LatticeMeasure<S, D>& lambda, StopPred&& stops, std::int64_t T) {
  if (T < 0) throw Error("stopped_law: negative horizon");
  StoppedLaw<S, D> out;
  out.horizon = Horizon::finite(T);
  detail::MassMap<S, D> alive = lambda.atoms();
  typename LatticeMeasure<S, D>::AtomMap exit;
  for (std::int64_t t = 0; t < T; ++t) {
    detail::MassMap<S, D> survivors;
    for (const auto& [p, w] : alive) {
      if (stops(t, p)) {
        out.joint[{t, p}] += w;
        exit[p] += w;
      } else {
        survivors.emplace(p, w);
      }
    }
    alive = detail::diffuse<S, D>(survivors);
  }
  for (const auto& [p, w] : alive) {  // horizon bucket: stopped at T or censored
    out.joint[{T, p}] += w;
    exit[p] += w;
  }
  out.exit_law = LatticeMeasure<S, D>::unchecked(std::move(exit));
  out.residual = S(1) - out.joint_mass();
  return out;
}

/// Law of the walk started at lambda and stopped at the barrier, at finite
/// horizon T or at the exact infinite-horizon exit. The infinite-horizon run
/// iterates the DP until the continuation region is constant in time, then
/// attributes the remaining alive mass by an exact linear absorption solve
/// (recorded in the reserved "inf" joint bucket).
template <class S, int D>
StoppedLaw<S, D> stopped_law(const LatticeMeasure<S, D>& lambda, const Barrier<D>& b, Horizon horizon) {
  auto stops = [&b](std::int64_t t, const Point<D>& m) { return !b.is_continuation(t, m); };
  if (horizon.is_finite()) return stopped_law_pred(lambda, stops, horizon.T());

  const std::vector<Point<D>> region = b.eventual_continuation();  // throws if unbounded
  StoppedLaw<S, D> out;
  out.horizon = Horizon::infinite();
  const std::int64_t t_star = b.max_finite_entry() + 1;

  detail::MassMap<S, D> alive = lambda.atoms();
  typename LatticeMeasure<S, D>::AtomMap exit;
  for (std::int64_t t = 0; t <= t_star; ++t) {
    detail::MassMap<S, D> survivors;
    for (const auto& [p, w] : alive) {
      if (stops(t, p)) {
        out.joint[{t, p}] += w;
        exit[p] += w;
      } else {
        survivors.emplace(p, w);
      }
    }
    if (t == t_star) {
      alive = std::move(survivors);
      break;
    }
    alive = detail::diffuse<S, D>(survivors);
  }
  for (const auto& [p, w] : detail::absorb_out_of_region<S, D>(alive, region)) {
    out.joint[{kInfTailBucket, p}] += w;
    exit[p] += w;
  }
  out.exit_law = LatticeMeasure<S, D>::unchecked(std::move(exit));
  out.residual = S(1) - out.joint_mass();
  return out;
}

/// E[f(X_stop)] over the exit-site marginal; the map overload raises
/// MissingValue when the support is not covered.
template <class S, int D, class F>
S expectation(const StoppedLaw<S, D>& law, F&& f) {
  S acc(0);
  for (const auto& [p, w] : law.exit_law.atoms()) acc += f(p) * w;
  return acc;
}

template <class S, int D>
S expectation(const StoppedLaw<S, D>& law, const std::map<PointArg<D>, S>& f) {
  S acc(0);
  for (const auto& [p, w] : law.exit_law.atoms()) {
    auto it = f.find(p);
    if (it == f.end()) throw MissingValueError("expectation: f undefined at " + point_str(p));
    acc += it->second * w;
  }
  return acc;
}

}  // namespace switchlab
