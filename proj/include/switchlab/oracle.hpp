#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "switchlab/barrier.hpp"
#include "switchlab/errors.hpp"
#include "switchlab/kernel.hpp"
#include "switchlab/lattice.hpp"
#include "switchlab/measure.hpp"
#include "switchlab/optimal_stopping.hpp"

namespace switchlab::oracle {

// Brute-force oracles. Everything here is computed by exhaustive enumeration
// of equiprobable step sequences (plus the classical gambler's-ruin formula
// for infinite-horizon tails in d=1), independently of the DP pipeline, so
// the two routes can be compared exactly.

namespace detail {

inline void check_budget(int d, std::int64_t steps) {
  double paths = 1;
  for (std::int64_t i = 0; i < steps; ++i) paths *= 2 * d;
  if (paths > 2e7) throw ResourceLimitError("oracle: too many paths to enumerate");
}

/// Visits every (2d)^steps step sequence: visit(positions, weight) where
/// positions[t] is the site after t steps.
template <class S, int D, class Visit>
void for_each_path(const PointArg<D>& start, std::int64_t steps, Visit&& visit) {
  check_budget(D, steps);
  std::vector<int> dirs(steps, 0);
  std::vector<Point<D>> pos(steps + 1);
  pos[0] = start;
  S w(1);
  for (std::int64_t t = 0; t < steps; ++t) w *= scalar_traits<S>::ratio(1, 2 * D);
  auto apply = [&](std::int64_t t) {
    Point<D> p = pos[t];
    const int axis = dirs[t] / 2;
    p[axis] += (dirs[t] % 2 == 0) ? 1 : -1;
    pos[t + 1] = p;
  };
  while (true) {
    for (std::int64_t t = 0; t < steps; ++t) apply(t);
    visit(pos, w);
    std::int64_t i = steps - 1;
    while (i >= 0 && dirs[i] == 2 * D - 1) dirs[i--] = 0;
    if (i < 0) break;
    ++dirs[i];
  }
}

}  // namespace detail

/// Joint law of (rho ^ T, X_{rho ^ T}) by full path enumeration.
template <class S, int D>
std::map<std::pair<std::int64_t, Point<D>>, S> capped_joint_law(const LatticeMeasure<S, D>& lambda,
                                                                const Barrier<D>& b, std::int64_t T) {
  std::map<std::pair<std::int64_t, Point<D>>, S> joint;
  for (const auto& [start, mass] : lambda.atoms()) {
    detail::for_each_path<S, D>(start, T, [&](const std::vector<Point<D>>& pos, const S& w) {
      std::int64_t tau = T;
      for (std::int64_t t = 0; t < T; ++t) {
        if (!b.is_continuation(t, pos[t])) {
          tau = t;
          break;
        }
      }
      joint[{tau, pos[tau]}] += mass * w;
    });
  }
  return joint;
}

template <class S, int D>
LatticeMeasure<S, D> capped_exit_law(const LatticeMeasure<S, D>& lambda, const Barrier<D>& b,
                                     std::int64_t T) {
  typename LatticeMeasure<S, D>::AtomMap m;
  for (const auto& [k, w] : capped_joint_law(lambda, b, T)) m[k.second] += w;
  return LatticeMeasure<S, D>::unchecked(std::move(m));
}

/// Infinite-horizon exit law in d=1: enumerate until the continuation region
/// is constant in time, then close the tail with the gambler's-ruin formula
/// on each maximal interval of the eventual continuation region.
template <class S>
LatticeMeasure<S, 1> unbounded_exit_law_1d(const LatticeMeasure<S, 1>& lambda, const Barrier<1>& b) {
  const std::vector<Point<1>> region = b.eventual_continuation();
  const std::int64_t t_star = b.max_finite_entry() + 1;
  if (t_star > 22) throw ResourceLimitError("oracle: entry times too large to enumerate");

  typename LatticeMeasure<S, 1>::AtomMap exit;
  std::map<std::int64_t, S> alive;  // on the eventual region at time t_star
  for (const auto& [start, mass] : lambda.atoms()) {
    detail::for_each_path<S, 1>(start, t_star, [&](const std::vector<Point<1>>& pos, const S& w) {
      for (std::int64_t t = 0; t <= t_star; ++t) {
        if (!b.is_continuation(t, pos[t])) {
          exit[pos[t]] += mass * w;
          return;
        }
      }
      alive[pos[t_star][0]] += mass * w;
    });
  }

  // Maximal intervals of the eventual continuation region; sites in `region`
  // are sorted already (lexicographic order of Point<1>).
  std::size_t i = 0;
  while (i < region.size()) {
    std::size_t j = i;
    while (j + 1 < region.size() && region[j + 1][0] == region[j][0] + 1) ++j;
    const std::int64_t a = region[i][0], c = region[j][0];  // interval [a, c]
    const S span = scalar_traits<S>::from_int(c - a + 2);
    for (std::int64_t e = a; e <= c; ++e) {
      auto it = alive.find(e);
      if (it == alive.end() || it->second == S(0)) continue;
      const S p_left = scalar_traits<S>::from_int(c + 1 - e) / span;
      exit[Point<1>{a - 1}] += it->second * p_left;
      exit[Point<1>{c + 1}] += it->second * (S(1) - p_left);
      alive.erase(it);
    }
    i = j + 1;
  }
  for (const auto& [e, w] : alive) {
    if (!(w == S(0))) throw Error("oracle: alive mass off the eventual continuation region");
  }
  return LatticeMeasure<S, 1>::unchecked(std::move(exit));
}

/// E[a(X_{T-s} - Y_s)] for independent free walks, by double enumeration.
template <class S, int D>
S core_value(const PointArg<D>& x, const PointArg<D>& y, std::int64_t T, std::int64_t s,
             const KernelTable<S, D>& k) {
  S acc(0);
  detail::for_each_path<S, D>(x, T - s, [&](const std::vector<Point<D>>& px, const S& wx) {
    detail::for_each_path<S, D>(y, s, [&](const std::vector<Point<D>>& py, const S& wy) {
      acc += wx * wy * k.at(px[T - s] - py[s]);
    });
  });
  return acc;
}

/// E[g(Y_tau) 1_{tau<T} + h(Y_tau) 1_{tau=T}] for a Markov rule, enumerated.
template <class S, int D, class G, class H>
S rule_value(const PointArg<D>& y, std::int64_t T, const StoppingRule<D>& rule, G&& g, H&& h) {
  S acc(0);
  detail::for_each_path<S, D>(y, T, [&](const std::vector<Point<D>>& pos, const S& w) {
    std::int64_t tau = T;
    for (std::int64_t t = 0; t < T; ++t) {
      if (rule.stops(t, pos[t])) {
        tau = t;
        break;
      }
    }
    acc += w * (tau < T ? g(pos[tau]) : h(pos[tau]));
  });
  return acc;
}

/// Both sides of the Root identity in d=1, entirely by enumeration:
/// LHS = A.mu_T(y), RHS = tau* value with payoff (A.mu_Root, A.lambda).
template <class S>
std::pair<S, S> root_identity_sides(const LatticeMeasure<S, 1>& lambda, const Barrier<1>& b,
                                    const Point<1>& y, std::int64_t T, const KernelTable<S, 1>& k) {
  const auto mu_T = capped_exit_law(lambda, b, T);
  const auto mu_inf = unbounded_exit_law_1d(lambda, b);
  const S lhs = potential(mu_T, y, k);
  const auto tau_star = rule_from_barrier(b, T);
  const S rhs = rule_value<S, 1>(y, T, tau_star,
                                 [&](const Point<1>& m) { return potential(mu_inf, m, k); },
                                 [&](const Point<1>& m) { return potential(lambda, m, k); });
  return {lhs, rhs};
}

/// Both sides of the symmetry inequality in d=1 for tau = rho_Rost and a given
/// sigma; tau is evaluated on the Rost barrier directly (no reflection).
template <class S>
std::pair<S, S> symmetry_sides(const Point<1>& x, const Point<1>& y, std::int64_t T,
                               const Barrier<1>& rost, const StoppingRule<1>& sigma,
                               const KernelTable<S, 1>& k) {
  if (rost.kind() != BarrierKind::Rost) throw WrongKindError("oracle: Rost barrier expected");
  const auto delta_y = point_mass<S, 1>(y);
  const auto law_inf = unbounded_exit_law_1d(delta_y, rost);
  const auto law_T = capped_exit_law(delta_y, rost, T);
  const S lhs = -potential(law_inf, x, k) + potential(law_T, x, k);

  const auto nu = [&] {
    typename LatticeMeasure<S, 1>::AtomMap m;
    detail::for_each_path<S, 1>(x, T, [&](const std::vector<Point<1>>& pos, const S& w) {
      std::int64_t tau = T;
      for (std::int64_t t = 0; t < T; ++t) {
        if (sigma.stops(t, pos[t])) {
          tau = t;
          break;
        }
      }
      m[pos[tau]] += w;
    });
    return LatticeMeasure<S, 1>::unchecked(std::move(m));
  }();
  S rhs(0);
  for (const auto& [m, w] : nu.atoms()) rhs += w * (-potential(law_inf, m, k) - k.at(m - y));
  return {lhs, rhs};
}

/// Exhaustive scan of every adapted (path-dependent) Y-stopping rule on the
/// binary path tree of depth T, checking that the interpolating function
/// F_tau is non-decreasing for each. The X-side factors come from enumerated
/// capped laws. Returns the number of rules scanned and the worst violation
/// max(F(s-1) - F(s)) over all rules and stages (0 if none).
///
/// The rule count satisfies N(T) = N(T-1)^2 + 1, so this is feasible for
/// T <= 5 (458330 rules); larger T throws ResourceLimit.
template <class S>
std::pair<std::uint64_t, S> scan_adapted_rules(const LatticeMeasure<S, 1>& lambda, const Barrier<1>& b,
                                               const Point<1>& y, std::int64_t T,
                                               const KernelTable<S, 1>& k) {
  if (T > 5) throw ResourceLimitError("oracle: adapted-rule enumeration limited to T <= 5");
  if (b.kind() != BarrierKind::Root) throw WrongKindError("oracle: Root barrier expected");

  // phi(u, pos) = E[a(X_{rho ^ (T-u)} - pos)], X-side by enumeration.
  std::vector<std::map<std::int64_t, S>> phi(T + 1);
  std::vector<LatticeMeasure<S, 1>> nu;
  for (std::int64_t H = 0; H <= T; ++H) nu.push_back(capped_exit_law(lambda, b, H));
  auto phi_at = [&](std::int64_t u, std::int64_t pos) -> const S& {
    auto [it, fresh] = phi[u].try_emplace(pos);
    if (fresh) it->second = -potential(nu[T - u], Point<1>{pos}, k);
    return it->second;
  };

  // Per-subtree contribution vectors (entries s = t..T meaningful): the value
  // added to F(s) per unit of probability arriving alive at (t, pos).
  using Vec = std::vector<S>;
  auto stop_vec = [&](std::int64_t t, std::int64_t pos) {
    Vec v(T + 1, S(0));
    for (std::int64_t s = t; s <= T; ++s) v[s] = phi_at(t, pos);
    return v;
  };
  const S half = scalar_traits<S>::ratio(1, 2);
  auto combine = [&](std::int64_t t, std::int64_t pos, const Vec& left, const Vec& right) {
    Vec v(T + 1, S(0));
    v[t] = phi_at(t, pos);
    for (std::int64_t s = t + 1; s <= T; ++s) v[s] = half * (left[s] + right[s]);
    return v;
  };

  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Vec>> memo;
  auto vecs = [&](auto&& self, std::int64_t t, std::int64_t pos) -> const std::vector<Vec>& {
    auto found = memo.find({t, pos});
    if (found != memo.end()) return found->second;
    std::vector<Vec> out;
    if (t == T) {
      out.push_back(stop_vec(T, pos));
    } else {
      out.push_back(stop_vec(t, pos));
      const auto& L = self(self, t + 1, pos - 1);
      const auto& R = self(self, t + 1, pos + 1);
      for (const auto& l : L) {
        for (const auto& r : R) out.push_back(combine(t, pos, l, r));
      }
    }
    return memo.emplace(std::make_pair(t, pos), std::move(out)).first->second;
  };

  S worst(0);
  std::uint64_t count = 0;
  auto check = [&](const Vec& f) {
    ++count;
    for (std::int64_t s = 1; s <= T; ++s) {
      const S viol = f[s - 1] - f[s];
      if (worst < viol) worst = viol;
    }
  };
  if (T == 0) {
    check(stop_vec(0, y[0]));
    return {count, worst};
  }
  check(stop_vec(0, y[0]));  // rule that stops immediately
  const auto& L = vecs(vecs, 1, y[0] - 1);
  const auto& R = vecs(vecs, 1, y[0] + 1);
  for (const auto& l : L) {
    for (const auto& r : R) check(combine(0, y[0], l, r));
  }
  return {count, worst};
}

}  // namespace switchlab::oracle
