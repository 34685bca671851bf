#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "switchlab/barrier.hpp"
#include "switchlab/errors.hpp"
#include "switchlab/identities.hpp"
#include "switchlab/measure.hpp"
#include "switchlab/optimal_stopping.hpp"
#include "switchlab/stopped_law.hpp"

namespace switchlab {

/// One component of a continuum measure on R: a point mass or a uniform
/// density slab, with rational data so discretization stays exact.
struct ContinuumComponent {
  enum class Kind { PointMass, Uniform };
  Kind kind = Kind::PointMass;
  Rational weight;      // component mass
  Rational position;    // point mass location
  Rational lo, hi;      // uniform support
};

/// Start and target measures for the scaling study, given as finite mixtures.
struct ContinuumSpec {
  std::vector<ContinuumComponent> lambda;
  std::vector<ContinuumComponent> mu;
};

inline Rational continuum_mass(const std::vector<ContinuumComponent>& cs) {
  Rational m(0);
  for (const auto& c : cs) m += c.weight;
  return m;
}

inline Rational continuum_mean(const std::vector<ContinuumComponent>& cs) {
  Rational m(0);
  for (const auto& c : cs) {
    m += c.weight * (c.kind == ContinuumComponent::Kind::PointMass ? c.position
                                                                   : (c.lo + c.hi) / Rational(2));
  }
  return m;
}

namespace detail {

inline std::int64_t integer_sqrt(std::int64_t n) {
  std::int64_t r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline std::int64_t floor_rational(const Rational& q) {
  // floor via string-free arithmetic: binary search is overkill; use double
  // guess corrected exactly.
  std::int64_t g = static_cast<std::int64_t>(std::floor(q.to_double()));
  while (Rational(g + 1) <= q) ++g;
  while (Rational(g) > q) --g;
  return g;
}

/// Splits mass w with barycenter xi (grid units) between floor(xi) and
/// floor(xi)+1, preserving mass and mean exactly.
inline void two_point_split(std::map<Point<1>, Rational>& atoms, const Rational& xi, const Rational& w) {
  const std::int64_t k = floor_rational(xi);
  const Rational theta = xi - Rational(k);
  if (!((w * (Rational(1) - theta)).is_zero())) atoms[Point<1>{k}] += w * (Rational(1) - theta);
  if (!theta.is_zero()) atoms[Point<1>{k + 1}] += w * theta;
}

}  // namespace detail

/// Projects the continuum measure onto the grid (1/sqrt(N)) Z, represented by
/// integer site indices. Point masses and per-cell slices of uniform
/// densities are split between the two nearest grid points so that total mass
/// and barycenter are preserved exactly. Requires sqrt(N) integer so grid
/// coordinates of rational positions stay rational.
inline LatticeMeasure<Rational, 1> discretize_measure(const std::vector<ContinuumComponent>& spec,
                                                      std::int64_t N) {
  const std::int64_t m = detail::integer_sqrt(N);
  if (m * m != N) throw Error("discretize_measure: N must be a perfect square");
  if (spec.empty()) throw EmptySupportError("discretize_measure: empty spec");
  const Rational scale(m);

  std::map<Point<1>, Rational> atoms;
  for (const auto& c : spec) {
    if (c.weight < Rational(0)) throw NegativeWeightError("discretize_measure: negative component weight");
    if (c.weight.is_zero()) continue;
    if (c.kind == ContinuumComponent::Kind::PointMass) {
      detail::two_point_split(atoms, c.position * scale, c.weight);
    } else {
      const Rational a = c.lo * scale, b = c.hi * scale;
      if (!(a < b)) throw Error("discretize_measure: empty uniform support");
      const Rational len = b - a;
      // slice between consecutive integers; each slice is uniform, so its
      // barycenter is its midpoint
      for (std::int64_t j = detail::floor_rational(a);; ++j) {
        const Rational s_lo = std::max(a, Rational(j));
        const Rational s_hi = std::min(b, Rational(j + 1));
        if (!(s_lo < s_hi)) {
          if (Rational(j) >= b) break;
          continue;
        }
        const Rational mass = c.weight * (s_hi - s_lo) / len;
        detail::two_point_split(atoms, (s_lo + s_hi) / Rational(2), mass);
        if (s_hi == b) break;
      }
    }
  }
  std::vector<std::pair<Point<1>, Rational>> list(atoms.begin(), atoms.end());
  return make_measure<Rational, 1>(list);
}

/// Builds the Root barrier embedding muN into the walk started at lambdaN by
/// the discrete obstacle iteration
///   u_0 = U_lambda,  u_{t+1}(x) = max(U_mu(x), (u_t(x-1)+u_t(x+1))/2),
/// with entry time r(x) = first t where u_t hits the obstacle (+inf if never
/// within the window). The construction is accepted only if the exact
/// embedding check passes: the infinite-horizon exit law must equal muN.
inline Barrier<1> construct_root_barrier(const LatticeMeasure<Rational, 1>& lambdaN,
                                         const LatticeMeasure<Rational, 1>& muN) {
  if (!convex_order(lambdaN, muN))
    throw ConvexOrderLostError("construct_root_barrier: inputs not in convex order");

  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& [p, w] : muN.atoms()) {
    lo = std::min(lo, p[0]);
    hi = std::max(hi, p[0]);
  }
  // Outside [lo, hi] the potentials agree (equal means), so r = 0 there.
  const std::int64_t width = hi - lo + 1;
  std::vector<Rational> obstacle(width), u(width);
  for (std::int64_t x = lo; x <= hi; ++x) {
    obstacle[x - lo] = u_potential(muN, x);
    u[x - lo] = u_potential(lambdaN, x);
  }

  typename Barrier<1>::EntryMap entries;
  std::vector<bool> pinned(width, false);
  std::int64_t remaining = 0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    if (u[x - lo] == obstacle[x - lo]) {
      pinned[x - lo] = true;  // r = 0, the default
    } else {
      ++remaining;
    }
  }

  std::int64_t window = std::max<std::int64_t>(64, 8 * width * width);
  Rational gap(0);
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::vector<Rational> cur = u;
    std::vector<bool> hit = pinned;
    typename Barrier<1>::EntryMap trial = entries;
    std::int64_t open = remaining;
    for (std::int64_t t = 1; t <= window && open > 0; ++t) {
      std::vector<Rational> next = cur;
      for (std::int64_t x = lo; x <= hi; ++x) {
        const std::int64_t i = x - lo;
        if (hit[i]) continue;
        // exterior neighbours are pinned at U_mu (= U_lambda there)
        const Rational left = (x == lo) ? u_potential(muN, x - 1) : cur[i - 1];
        const Rational right = (x == hi) ? u_potential(muN, x + 1) : cur[i + 1];
        Rational cand = (left + right) / Rational(2);
        if (cand <= obstacle[i]) {
          next[i] = obstacle[i];
          hit[i] = true;
          trial.emplace(Point<1>{x}, ExtTime(t));
          --open;
        } else {
          next[i] = cand;
        }
      }
      cur.swap(next);
    }
    for (std::int64_t x = lo; x <= hi; ++x) {
      if (!hit[x - lo]) trial.emplace(Point<1>{x}, ExtTime::plus_inf());
    }
    auto barrier = Barrier<1>::make(BarrierKind::Root, trial);
    const auto embedded = stopped_law<Rational, 1>(lambdaN, barrier, Horizon::infinite()).exit_law;
    if (embedded == muN) return barrier;
    gap = Rational(0);
    for (std::int64_t x = lo - 1; x <= hi + 1; ++x) {
      const Rational d = (u_potential(embedded, x) - u_potential(muN, x)).abs();
      if (gap < d) gap = d;
    }
    window *= 4;
  }
  throw EmbeddingMismatchError("construct_root_barrier: embedding check failed; max potential gap " +
                               gap.str());
}

/// One refinement row of the scaling table: both sides of the rescaled
/// identity, their residual (exactly zero), and the step from the previous
/// refinement.
struct ScalingRow {
  std::int64_t N = 0;
  Rational value_lhs;   // rescaled U_{mu^N_T}(x)
  Rational value_rhs;   // rescaled optimal-stopping value
  Rational residual;    // lhs - rhs
  Rational delta;       // value_lhs - previous row's value_lhs
  bool embedding_ok = false;
};

/// Runs the full pipeline per refinement N: discretize, build the Root
/// barrier (embedding-gated), evaluate both sides of the identity at horizon
/// N*T, undo the spatial scaling by 1/sqrt(N).
inline std::vector<ScalingRow> convergence_table(const ContinuumSpec& spec, const Rational& T,
                                                 const Rational& x, const std::vector<std::int64_t>& Ns) {
  std::vector<ScalingRow> rows;
  const auto k1 = kernel_canonical_1d<Rational, 1>();
  for (std::size_t idx = 0; idx < Ns.size(); ++idx) {
    const std::int64_t N = Ns[idx];
    const std::int64_t m = detail::integer_sqrt(N);
    if (m * m != N) throw Error("convergence_table: N must be a perfect square");
    const Rational steps_q = T * Rational(N);
    if (!steps_q.fits_int64()) throw Error("convergence_table: N*T must be an integer");
    const std::int64_t steps = detail::floor_rational(steps_q);
    const Rational x_grid_q = x * Rational(m);
    if (!x_grid_q.fits_int64()) throw Error("convergence_table: x*sqrt(N) must be an integer");
    const Point<1> x_grid{detail::floor_rational(x_grid_q)};

    const auto lambdaN = discretize_measure(spec.lambda, N);
    const auto muN = discretize_measure(spec.mu, N);
    const auto barrier = construct_root_barrier(lambdaN, muN);

    const auto mu_T = stopped_law<Rational, 1>(lambdaN, barrier, Horizon::finite(steps)).exit_law;
    const Rational lhs_grid = u_potential(mu_T, x_grid[0]);

    PayoffSpec<Rational, 1> payoff;
    payoff.T = steps;
    for (std::int64_t v = -steps; v <= steps; ++v) {
      const std::int64_t site = x_grid[0] + v;
      payoff.interior.emplace(Point<1>{site}, u_potential(muN, site));
      payoff.terminal.emplace(Point<1>{site}, u_potential(lambdaN, site));
    }
    const Rational rhs_grid = solve(payoff, x_grid).second;

    ScalingRow row;
    row.N = N;
    row.embedding_ok = true;  // construct_root_barrier gates on it
    row.value_lhs = lhs_grid / Rational(m);
    row.value_rhs = rhs_grid / Rational(m);
    row.residual = row.value_lhs - row.value_rhs;
    row.delta = rows.empty() ? Rational(0) : row.value_lhs - rows.back().value_lhs;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// |delta| non-increasing across the last two refinements.
inline bool cauchy_trend_ok(const std::vector<ScalingRow>& rows) {
  if (rows.size() < 3) return true;
  const Rational last = rows[rows.size() - 1].delta.abs();
  const Rational prev = rows[rows.size() - 2].delta.abs();
  return last <= prev;
}

}  // namespace switchlab
