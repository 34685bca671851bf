#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "switchlab/barrier.hpp"
#include "switchlab/errors.hpp"
#include "switchlab/lattice.hpp"
#include "switchlab/measure.hpp"
#include "switchlab/stopped_law.hpp"

namespace switchlab {

/// Payoff of a finite-horizon stopping problem: g if stopping before T,
/// h at the horizon. Values must cover the ball reachable from the start.
template <class S, int D>
struct PayoffSpec {
  std::map<Point<D>, S> interior;  // g
  std::map<Point<D>, S> terminal;  // h
  std::int64_t T = 0;

  const S& g(const Point<D>& p) const { return lookup(interior, p, "g"); }
  const S& h(const Point<D>& p) const { return lookup(terminal, p, "h"); }

 private:
  static const S& lookup(const std::map<Point<D>, S>& m, const Point<D>& p, const char* which) {
    auto it = m.find(p);
    if (it == m.end())
      throw MissingPayoffValueError(std::string("payoff ") + which + " undefined at " + point_str(p));
    return it->second;
  }
};

/// Markov stopping rule: stops at a set of (t, site) pairs, with the forced
/// stop at the horizon applied by the evaluators. Backed by a predicate so
/// barrier-induced rules need not enumerate sites.
template <int D>
class StoppingRule {
 public:
  using StopSet = std::set<std::pair<std::int64_t, Point<D>>>;

  static StoppingRule from_set(StopSet s) {
    StoppingRule r;
    r.pred_ = [s = std::move(s)](std::int64_t t, const Point<D>& m) { return s.count({t, m}) > 0; };
    return r;
  }
  static StoppingRule from_predicate(std::function<bool(std::int64_t, const Point<D>&)> pred) {
    StoppingRule r;
    r.pred_ = std::move(pred);
    return r;
  }
  static StoppingRule stop_everywhere() {
    return from_predicate([](std::int64_t, const Point<D>&) { return true; });
  }
  static StoppingRule never_stop_early() {
    return from_predicate([](std::int64_t, const Point<D>&) { return false; });
  }

  bool stops(std::int64_t t, const Point<D>& m) const { return pred_(t, m); }

 private:
  std::function<bool(std::int64_t, const Point<D>&)> pred_;
};

/// tau* of the switching argument: stop at (t,m), 0 <= t <= T, when (T-t, m)
/// is outside the continuation set of the barrier.
template <int D>
StoppingRule<D> rule_from_barrier(const Barrier<D>& b, std::int64_t T) {
  return StoppingRule<D>::from_predicate(
      [b, T](std::int64_t t, const Point<D>& m) { return !b.is_continuation(T - t, m); });
}

/// Value table of the backward induction plus the stop-first stopping region.
template <class S, int D>
struct ValueFunction {
  std::int64_t T = 0;
  std::map<std::pair<std::int64_t, Point<D>>, S> values;
  std::set<std::pair<std::int64_t, Point<D>>> stop_region;

  const S& at(std::int64_t t, const Point<D>& p) const {
    auto it = values.find({t, p});
    if (it == values.end()) throw Error("value function: no entry at t=" + std::to_string(t) + " " + point_str(p));
    return it->second;
  }
  bool stops(std::int64_t t, const Point<D>& p) const { return stop_region.count({t, p}) > 0; }
};

/// Backward induction for sup_{tau <= T} E[g(Y_tau) 1_{tau<T} + h(Y_tau) 1_{tau=T}]
/// from the given start. Returns the value table over the reachable cone and
/// the optimal value V(0, start).
template <class S, int D>
std::pair<ValueFunction<S, D>, S> solve(const PayoffSpec<S, D>& p, const PointArg<D>& start) {
  ValueFunction<S, D> vf;
  vf.T = p.T;
  const S step = scalar_traits<S>::ratio(1, 2 * D);

  // sites with |m - start|_1 <= t, built once per level
  std::vector<Point<D>> level;
  auto collect_level = [&](std::int64_t t) {
    level.clear();
    const std::int64_t R = t;
    Point<D> q;
    std::function<void(int, std::int64_t)> rec = [&](int dim, std::int64_t budget) {
      if (dim == D) {
        level.push_back(q);
        return;
      }
      for (std::int64_t v = -budget; v <= budget; ++v) {
        q[dim] = start[dim] + v;
        rec(dim + 1, budget - std::abs(v));
      }
    };
    rec(0, R);
  };

  std::map<Point<D>, S> next_vals;
  for (std::int64_t t = p.T; t >= 0; --t) {
    collect_level(t);
    std::map<Point<D>, S> vals;
    for (const Point<D>& m : level) {
      if (t == p.T) {
        vals.emplace(m, p.h(m));
        vf.stop_region.insert({t, m});
      } else {
        S cont(0);
        for_each_neighbor(m, [&](const Point<D>& q2) { cont += next_vals.at(q2); });
        cont *= step;
        const S& gm = p.g(m);
        if (gm >= cont) {  // stop-first tie-break
          vals.emplace(m, gm);
          vf.stop_region.insert({t, m});
        } else {
          vals.emplace(m, cont);
        }
      }
    }
    for (const auto& [m, v] : vals) vf.values.emplace(std::make_pair(t, m), v);
    next_vals = std::move(vals);
  }
  S value = vf.at(0, start);
  return {std::move(vf), std::move(value)};
}

/// Exact expected payoff of a prescribed (not necessarily optimal) rule,
/// by forward DP of the alive mass.
template <class S, int D>
S evaluate_rule(const PayoffSpec<S, D>& p, const StoppingRule<D>& rule, const PointArg<D>& start) {
  const auto law = stopped_law_pred(point_mass<S, D>(start),
                                    [&rule](std::int64_t t, const Point<D>& m) { return rule.stops(t, m); },
                                    p.T);
  S acc(0);
  for (const auto& [key, w] : law.joint) {
    const auto& [t, m] = key;
    acc += (t < p.T ? p.g(m) : p.h(m)) * w;
  }
  return acc;
}

}  // namespace switchlab
