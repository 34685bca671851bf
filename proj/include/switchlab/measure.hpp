#pragma once

#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

#include "switchlab/errors.hpp"
#include "switchlab/kernel.hpp"
#include "switchlab/lattice.hpp"
#include "switchlab/scalar.hpp"

namespace switchlab {

/// Finite-support probability measure on Z^d. Weights are strictly positive
/// after construction (zero-weight atoms are dropped); total mass is verified
/// to be one, never rescaled.
template <class S, int D>
class LatticeMeasure {
 public:
  using AtomMap = std::map<Point<D>, S>;

  const AtomMap& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }

  S at(const Point<D>& p) const {
    auto it = atoms_.find(p);
    return it == atoms_.end() ? S(0) : it->second;
  }

  S total_mass() const {
    S m(0);
    for (const auto& [p, w] : atoms_) m += w;
    return m;
  }

  /// Coordinatewise barycenter (mass is one by the class invariant).
  std::array<S, D> mean() const {
    std::array<S, D> mu;
    mu.fill(S(0));
    for (const auto& [p, w] : atoms_) {
      for (int i = 0; i < D; ++i) mu[i] += w * scalar_traits<S>::from_int(p[i]);
    }
    return mu;
  }

  std::int64_t support_radius() const {
    std::int64_t r = 0;
    for (const auto& [p, w] : atoms_) r = std::max(r, sup_norm(p));
    return r;
  }

  friend bool operator==(const LatticeMeasure& a, const LatticeMeasure& b) { return a.atoms_ == b.atoms_; }

  /// Internal builder for laws whose normalization is guaranteed by exact
  /// construction elsewhere (drops zero weights, no verification).
  static LatticeMeasure unchecked(AtomMap atoms) {
    LatticeMeasure m;
    for (auto& [p, w] : atoms) {
      if (!(w == S(0))) m.atoms_.emplace(p, std::move(w));
    }
    return m;
  }

 private:
  LatticeMeasure() = default;
  AtomMap atoms_;
};

/// Builds a verified measure from (point, weight) pairs. Duplicate points are
/// merged by summation; the unit-mass requirement is checked (exactly in
/// exact mode, within eps otherwise) and violations throw rather than being
/// repaired silently.
template <class S, int D>
LatticeMeasure<S, D> make_measure(const std::vector<std::pair<Point<D>, S>>& atoms, S eps = S(0)) {
  if (atoms.empty()) throw EmptySupportError("make_measure: no atoms");
  typename LatticeMeasure<S, D>::AtomMap merged;
  for (const auto& [p, w] : atoms) {
    if (w < S(0)) throw NegativeWeightError("make_measure: negative weight at " + point_str(p));
    merged[p] += w;
  }
  S mass(0);
  for (const auto& [p, w] : merged) mass += w;
  if (scalar_traits<S>::abs(mass - S(1)) > eps)
    throw MassNotOneError("make_measure: total mass " + scalar_traits<S>::to_string(mass));
  auto m = LatticeMeasure<S, D>::unchecked(std::move(merged));
  if (m.support_size() == 0) throw EmptySupportError("make_measure: support is empty");
  return m;
}

template <class S, int D>
LatticeMeasure<S, D> point_mass(const Point<D>& p) {
  return make_measure<S, D>({{p, S(1)}});
}

/// Potential of m at y against the kernel: -sum_x a(y-x) m({x}). With the d=1
/// canonical kernel this is U_m(y).
template <class S, int D>
S potential(const LatticeMeasure<S, D>& m, const PointArg<D>& y, const KernelTable<S, D>& k) {
  S acc(0);
  for (const auto& [x, w] : m.atoms()) {
    const Point<D> z = y - x;
    if (sup_norm(z) > k.valid_radius())
      throw OutOfKernelBoxError("potential: y-x outside kernel validity box, z=" + point_str(z));
    acc += k.at(z) * w;
  }
  return -acc;
}

/// U_m(y) = -E|y - X| for d=1, no kernel table needed.
template <class S>
S u_potential(const LatticeMeasure<S, 1>& m, std::int64_t y) {
  S acc(0);
  for (const auto& [x, w] : m.atoms()) acc += scalar_traits<S>::from_int(std::abs(y - x[0])) * w;
  return -acc;
}

/// Convex order test for d=1: equal means and U_lambda >= U_mu pointwise.
/// Both potentials are piecewise linear with kinks only at atoms, so checking
/// at the union of supports plus one sentinel beyond each extreme suffices.
template <class S>
bool convex_order(const LatticeMeasure<S, 1>& lam, const LatticeMeasure<S, 1>& mu) {
  if (!(lam.mean()[0] == mu.mean()[0])) return false;
  std::vector<std::int64_t> sites;
  for (const auto& [p, w] : lam.atoms()) sites.push_back(p[0]);
  for (const auto& [p, w] : mu.atoms()) sites.push_back(p[0]);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  const std::int64_t lo = sites.front(), hi = sites.back();
  sites.push_back(lo - 1);
  sites.push_back(hi + 1);
  for (std::int64_t y : sites) {
    if (u_potential(lam, y) < u_potential(mu, y)) return false;
  }
  return true;
}

}  // namespace switchlab
