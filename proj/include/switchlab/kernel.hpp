#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "switchlab/errors.hpp"
#include "switchlab/lattice.hpp"
#include "switchlab/linear_solve.hpp"
#include "switchlab/report.hpp"
#include "switchlab/scalar.hpp"

namespace switchlab {

enum class KernelFlavor { CanonicalD1, CanonicalApprox, SyntheticExact };

inline const char* flavor_name(KernelFlavor f) {
  switch (f) {
    case KernelFlavor::CanonicalD1: return "canonical-d1";
    case KernelFlavor::CanonicalApprox: return "canonical-approx";
    case KernelFlavor::SyntheticExact: return "synthetic-exact";
  }
  return "?";
}

namespace detail {

/// Dense value storage on the sup-norm box |z|_inf <= R.
template <int D>
struct BoxIndex {
  std::int64_t R = 0;

  std::size_t size() const {
    std::size_t s = 1;
    for (int i = 0; i < D; ++i) s *= static_cast<std::size_t>(2 * R + 1);
    return s;
  }
  bool contains(const Point<D>& p) const { return sup_norm(p) <= R; }
  std::size_t index(const Point<D>& p) const {
    std::size_t idx = 0;
    for (int i = 0; i < D; ++i) idx = idx * static_cast<std::size_t>(2 * R + 1) + static_cast<std::size_t>(p[i] + R);
    return idx;
  }
  Point<D> point(std::size_t idx) const {
    Point<D> p{};
    for (int i = D - 1; i >= 0; --i) {
      p[i] = static_cast<std::int64_t>(idx % static_cast<std::size_t>(2 * R + 1)) - R;
      idx /= static_cast<std::size_t>(2 * R + 1);
    }
    return p;
  }
};

/// Orbit representative under the lattice symmetry group: coordinatewise
/// absolute values, sorted descending.
template <std::size_t N>
inline std::array<std::int64_t, N> symmetry_rep(std::array<std::int64_t, N> p) {
  for (std::size_t i = 0; i < N; ++i) p[i] = std::abs(p[i]);
  std::sort(p.begin(), p.end(), std::greater<>());
  return p;
}

}  // namespace detail

/// Function a(.) on a box around the origin satisfying the discrete Laplace
/// identity a(z) = -1_{z=0} + (1/2d) sum over neighbours, either exactly
/// (SyntheticExact, CanonicalD1) or within a reported tolerance
/// (CanonicalApprox). Immutable after construction.
template <class S, int D>
class KernelTable {
 public:
  KernelFlavor flavor() const { return flavor_; }
  std::int64_t radius() const { return box_.R; }
  std::int64_t valid_radius() const { return valid_radius_; }
  /// Max per-entry error estimate (CanonicalApprox only; 0 for exact flavors).
  double max_error_estimate() const { return max_error_; }

  S at(const Point<D>& z) const {
    if constexpr (D == 1) {
      if (flavor_ == KernelFlavor::CanonicalD1) {
        if (std::abs(z[0]) > valid_radius_) throw OutOfKernelBoxError("kernel: |z| exceeds validity radius");
        return scalar_traits<S>::from_int(std::abs(z[0]));
      }
    }
    if (!box_.contains(z)) throw OutOfKernelBoxError("kernel: point outside box, z=" + point_str(z));
    return values_[box_.index(z)];
  }

  /// Same table with every value shifted by c. A constant shift is again an
  /// exact solution of the Laplace identity on the same box.
  KernelTable shifted(const S& c) const {
    KernelTable k(*this);
    for (auto& v : k.values_) v += c;
    return k;
  }

  template <class S2, int D2>
  friend KernelTable<S2, D2> kernel_canonical_1d(std::int64_t);
  template <int D2>
  friend KernelTable<double, D2> kernel_canonical_approx(std::int64_t, std::int64_t, double);
  template <int D2>
  friend KernelTable<Rational, D2> kernel_synthetic(std::int64_t, std::int64_t);

 private:
  KernelTable() = default;
  KernelFlavor flavor_ = KernelFlavor::SyntheticExact;
  detail::BoxIndex<D> box_;
  std::int64_t valid_radius_ = 0;
  double max_error_ = 0.0;
  std::vector<S> values_;
};

/// d=1 canonical kernel a(z) = |z|, exact; values computed on demand so the
/// box is as large as requested.
template <class S = Rational, int D = 1>
KernelTable<S, D> kernel_canonical_1d(std::int64_t radius = (std::int64_t{1} << 40)) {
  static_assert(D == 1, "canonical exact kernel exists in d=1 only");
  KernelTable<S, 1> k;
  k.flavor_ = KernelFlavor::CanonicalD1;
  k.box_.R = 0;  // no storage
  k.valid_radius_ = radius;
  return k;
}

/// Partial Green's function G_n(z) = sum_{t=0..n} P(Z_t = z | Z_0 = 0),
/// exact forward dynamic program over the box of radius n.
template <class S, int D>
S greens_partial(const Point<D>& z, std::int64_t n) {
  if (n < 0) throw Error("greens_partial: negative horizon");
  detail::BoxIndex<D> box{n};
  std::vector<S> cur(box.size(), S(0)), next;
  cur[box.index(origin<D>())] = S(1);
  S acc(0);
  const S step = scalar_traits<S>::ratio(1, 2 * D);
  const std::size_t zi = box.contains(z) ? box.index(z) : box.size();
  for (std::int64_t t = 0;; ++t) {
    if (zi < box.size()) acc += cur[zi];
    if (t == n) break;
    next.assign(box.size(), S(0));
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (cur[i] == S(0)) continue;
      const S share = cur[i] * step;
      for_each_neighbor(box.point(i), [&](const Point<D>& q) {
        if (box.contains(q)) next[box.index(q)] += share;
      });
    }
    cur.swap(next);
  }
  return acc;
}

/// Canonical kernel for d >= 2: floating approximation of
/// lim_n G_n(0) - G_n(z) by forward DP plus Richardson-style extrapolation on
/// the n_max and n_max/2 partial sums (parity-smoothed). The per-entry error
/// estimate is the magnitude of the last extrapolation correction.
template <int D>
KernelTable<double, D> kernel_canonical_approx(std::int64_t R, std::int64_t n_max, double tol) {
  static_assert(D >= 2 && D <= 3, "approx canonical kernel: d in {2,3}");
  if (n_max < 8) throw Error("kernel_canonical_approx: n_max too small");
  const std::int64_t half = n_max / 2;

  // Truncation radius: five standard deviations of the n_max-step walk plus
  // the report box. Leaked mass is far below the extrapolation error.
  const std::int64_t L = R + static_cast<std::int64_t>(5.0 * std::sqrt(static_cast<double>(n_max))) + 2;
  detail::BoxIndex<D> walk{L};
  detail::BoxIndex<D> rep{R};
  std::vector<double> cur(walk.size(), 0.0), next(walk.size());
  cur[walk.index(origin<D>())] = 1.0;

  // Accumulated occupation G_t(z) for |z|_inf <= R; snapshots of the parity-
  // smoothed difference D_t(z) = G(0)-G(z) at t in {half, n_max}.
  std::vector<double> occ(rep.size(), 0.0);
  std::vector<double> diff_prev(rep.size(), 0.0);
  std::vector<double> s_half(rep.size(), 0.0), s_full(rep.size(), 0.0);

  auto record_diff = [&](std::vector<double>& out) {
    const double g0 = occ[rep.index(origin<D>())];
    for (std::size_t i = 0; i < rep.size(); ++i) out[i] = g0 - occ[i];
  };

  const double step = 1.0 / static_cast<double>(2 * D);
  for (std::int64_t t = 0; t <= n_max + 1; ++t) {
    for (std::size_t i = 0; i < rep.size(); ++i) {
      const Point<D> p = rep.point(i);
      occ[i] += cur[walk.index(p)];
    }
    if (t == half) record_diff(diff_prev);
    if (t == half + 1) {  // parity smoothing: average consecutive differences
      std::vector<double> d(rep.size());
      record_diff(d);
      for (std::size_t i = 0; i < rep.size(); ++i) s_half[i] = 0.5 * (diff_prev[i] + d[i]);
    }
    if (t == n_max) record_diff(diff_prev);
    if (t == n_max + 1) {
      std::vector<double> d(rep.size());
      record_diff(d);
      for (std::size_t i = 0; i < rep.size(); ++i) s_full[i] = 0.5 * (diff_prev[i] + d[i]);
      break;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (cur[i] == 0.0) continue;
      const double share = cur[i] * step;
      for_each_neighbor(walk.point(i), [&](const Point<D>& q) {
        if (walk.contains(q)) next[walk.index(q)] += share;
      });
    }
    cur.swap(next);
  }

  // Tail of the smoothed difference decays like n^{-1} (d=2) resp. n^{-3/2}
  // (d=3, local CLT); eliminate the leading term from the two checkpoints.
  const double p = (D == 2) ? 1.0 : 1.5;
  const double w = std::pow(2.0, p) / (std::pow(2.0, p) - 1.0);
  KernelTable<double, D> k;
  k.flavor_ = KernelFlavor::CanonicalApprox;
  k.box_.R = R;
  k.valid_radius_ = R;
  k.values_.assign(rep.size(), 0.0);
  std::vector<double> err(rep.size(), 0.0);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const double corr = (s_full[i] - s_half[i]) * (w - 1.0);
    k.values_[i] = s_full[i] + corr;
    err[i] = std::abs(corr);
  }
  // Exact lattice symmetry: average over each orbit.
  std::vector<double> orbit_sum(rep.size(), 0.0), orbit_err(rep.size(), 0.0);
  std::vector<int> orbit_count(rep.size(), 0);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const std::size_t j = rep.index(detail::symmetry_rep(rep.point(i)));
    orbit_sum[j] += k.values_[i];
    orbit_err[j] = std::max(orbit_err[j], err[i]);
    orbit_count[j] += 1;
  }
  double max_err = 0.0;
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const std::size_t j = rep.index(detail::symmetry_rep(rep.point(i)));
    k.values_[i] = orbit_sum[j] / orbit_count[j];
    max_err = std::max(max_err, orbit_err[j]);
  }
  k.values_[rep.index(origin<D>())] = 0.0;
  k.max_error_ = max_err;
  if (max_err > tol)
    throw NonConvergenceError("kernel_canonical_approx: error estimate " + std::to_string(max_err) +
                              " exceeds tolerance " + std::to_string(tol));
  return k;
}

/// Exact synthetic kernel: the unique solution of the Laplace identity at all
/// |z|_inf < R with zero boundary values on |z|_inf = R, solved in rational
/// arithmetic on symmetry-orbit representatives.
template <int D>
KernelTable<Rational, D> kernel_synthetic(std::int64_t R, std::int64_t R_valid = -1) {
  if (R_valid < 0) R_valid = R - 1;
  if (!(R > R_valid && R_valid >= 1)) throw Error("kernel_synthetic: need R > R_valid >= 1");

  // Representatives of interior orbits: sorted nonnegative coordinates.
  std::vector<Point<D>> reps;
  detail::BoxIndex<D> interior{R - 1};
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const Point<D> p = interior.point(i);
    if (p == detail::symmetry_rep(p)) reps.push_back(p);
  }
  std::sort(reps.begin(), reps.end());
  auto rep_id = [&](const Point<D>& p) {
    const Point<D> r = detail::symmetry_rep(p);
    return static_cast<std::size_t>(std::lower_bound(reps.begin(), reps.end(), r) - reps.begin());
  };

  const std::size_t n = reps.size();
  std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> rhs(n, Rational(0));
  const Rational step = Rational(1, 2 * D);
  for (std::size_t i = 0; i < n; ++i) {
    mat[i][i] += Rational(1);
    for_each_neighbor(reps[i], [&](const Point<D>& q) {
      if (sup_norm(q) <= R - 1) mat[i][rep_id(q)] -= step;
      // neighbours on |z|_inf = R carry value 0
    });
    if (reps[i] == origin<D>()) rhs[i] = Rational(-1);
  }
  const std::vector<Rational> sol = solve_dense(std::move(mat), std::move(rhs));

  KernelTable<Rational, D> k;
  k.flavor_ = KernelFlavor::SyntheticExact;
  k.box_.R = R;
  k.valid_radius_ = R_valid;
  k.values_.assign(k.box_.size(), Rational(0));
  for (std::size_t i = 0; i < k.box_.size(); ++i) {
    const Point<D> p = k.box_.point(i);
    if (sup_norm(p) <= R - 1) k.values_[i] = sol[rep_id(p)];
  }
  return k;
}

/// Checks the compensator identity
///   E[a(Z_n) | Z_0 = w] = a(w) + sum_{l=0}^{n-1} P(Z_l = 0 | Z_0 = w)
/// by forward DP. Exact equality is demanded for exact-flavor kernels; pass a
/// tolerance for CanonicalApprox.
template <class S, int D>
IdentityReport<S> verify_compensator(const KernelTable<S, D>& k, const PointArg<D>& w, std::int64_t n,
                                     S tolerance = S(0)) {
  if (n < 0) throw Error("verify_compensator: negative n");
  if (sup_norm(w) + n > k.valid_radius())
    throw OutOfKernelBoxError("verify_compensator: walk can leave the kernel validity box");

  detail::BoxIndex<D> box{sup_norm(w) + n};
  std::vector<S> cur(box.size(), S(0)), next;
  cur[box.index(w)] = S(1);
  S occupation(0);
  const S step = scalar_traits<S>::ratio(1, 2 * D);
  for (std::int64_t t = 0; t < n; ++t) {
    occupation += cur[box.index(origin<D>())];
    next.assign(box.size(), S(0));
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (cur[i] == S(0)) continue;
      const S share = cur[i] * step;
      for_each_neighbor(box.point(i), [&](const Point<D>& q) { next[box.index(q)] += share; });
    }
    cur.swap(next);
  }
  S lhs(0);
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (!(cur[i] == S(0))) lhs += cur[i] * k.at(box.point(i));
  }

  IdentityReport<S> rep;
  rep.identity = "compensator";
  rep.kernel_flavor = flavor_name(k.flavor());
  rep.horizon = "n=" + std::to_string(n);
  rep.fixture = "w=" + point_str(w);
  rep.lhs = {lhs};
  rep.rhs = {k.at(w) + occupation};
  rep.tolerance = tolerance;
  rep.finalize();
  return rep;
}

}  // namespace switchlab
