#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "switchlab/errors.hpp"
#include "switchlab/lattice.hpp"

namespace switchlab {

enum class BarrierKind { Root, Rost };

/// Root or Rost space-time stopping region, encoded by per-site entry times.
///
/// Root: continuation set D = {(t,m) : t < r(m)}, unlisted sites default to
/// r = 0 (stopped from time 0 on). Rost: continuation D = {(t,m) : t >= l(m)},
/// unlisted sites default to l = +inf (always stopped). The down-set (Root) /
/// up-set (Rost) monotonicity in t is structural in this encoding.
///
/// Reflection in time produces barriers whose unlisted-site default differs
/// from the construction defaults (e.g. -inf for the Root-kind image of a Rost
/// set), so the default is an explicit field.
template <int D>
class Barrier {
 public:
  using EntryMap = std::map<Point<D>, ExtTime>;

  BarrierKind kind() const { return kind_; }
  const EntryMap& entries() const { return entries_; }
  ExtTime default_entry() const { return default_; }

  ExtTime entry(const Point<D>& m) const {
    auto it = entries_.find(m);
    return it == entries_.end() ? default_ : it->second;
  }

  /// Membership of (t,m) in the continuation set; t may be negative (such
  /// queries arise from time reflection).
  bool is_continuation(std::int64_t t, const Point<D>& m) const {
    const ExtTime e = entry(m);
    return kind_ == BarrierKind::Root ? (t < e) : (t >= e);
  }

  /// Largest finite entry time listed (0 if none). For t beyond this value
  /// the continuation region is constant in t.
  std::int64_t max_finite_entry() const {
    std::int64_t m = 0;
    for (const auto& [p, e] : entries_) {
      if (e.finite()) m = std::max(m, e.value());
    }
    return m;
  }

  /// The time-constant continuation region reached after max_finite_entry():
  /// {r = +inf} for Root, {l < +inf} for Rost. Unbounded (cofinite) regions
  /// throw; they arise only for reflected barriers with a non-default tail.
  std::vector<Point<D>> eventual_continuation() const {
    const bool default_continues =
        kind_ == BarrierKind::Root ? default_.is_plus_inf() : !default_.is_plus_inf();
    if (default_continues)
      throw UnboundedProblemError("barrier: eventual continuation region is not finite");
    std::vector<Point<D>> region;
    for (const auto& [p, e] : entries_) {
      if (kind_ == BarrierKind::Root ? e.is_plus_inf() : !e.is_plus_inf()) region.push_back(p);
    }
    return region;
  }

  static Barrier make(BarrierKind kind, EntryMap entries) {
    return Barrier(kind, std::move(entries),
                   kind == BarrierKind::Root ? ExtTime(0) : ExtTime::plus_inf());
  }

  static Barrier make_with_default(BarrierKind kind, EntryMap entries, ExtTime default_entry) {
    return Barrier(kind, std::move(entries), default_entry);
  }

 private:
  Barrier(BarrierKind kind, EntryMap entries, ExtTime dflt)
      : kind_(kind), entries_(std::move(entries)), default_(dflt) {}
  BarrierKind kind_;
  EntryMap entries_;
  ExtTime default_;
};

template <int D>
Barrier<D> make_barrier(BarrierKind kind, typename Barrier<D>::EntryMap entries) {
  return Barrier<D>::make(kind, std::move(entries));
}

/// Time reflection t -> T - t of the continuation set, exchanging Root and
/// Rost kinds. For a Rost set this yields the Root-type object of the
/// switching argument: (t,m) is in the image iff (T-t,m) was in the original,
/// and hitting times of the image reproduce rho_Rost = inf{t : (T-t,Y_t) not
/// in D}. Applying reflect twice with the same T is the identity on sets.
template <int D>
Barrier<D> reflect(const Barrier<D>& b, std::int64_t T) {
  // Continuation {t < r} maps to {s >= T-r+1} and {t >= l} to {s < T-l+1}.
  auto flip = [T](ExtTime e) {
    if (e.is_plus_inf()) return ExtTime::minus_inf();
    if (e.is_minus_inf()) return ExtTime::plus_inf();
    return ExtTime(T - e.value() + 1);
  };
  typename Barrier<D>::EntryMap entries;
  for (const auto& [p, e] : b.entries()) entries.emplace(p, flip(e));
  const BarrierKind out = b.kind() == BarrierKind::Rost ? BarrierKind::Root : BarrierKind::Rost;
  return Barrier<D>::make_with_default(out, std::move(entries), flip(b.default_entry()));
}

/// reflect with the Rost precondition of the public operation; the Root->Rost
/// direction is exposed via reflect() directly and used for round-trip tests.
template <int D>
Barrier<D> reflect_rost(const Barrier<D>& b, std::int64_t T) {
  if (b.kind() != BarrierKind::Rost)
    throw WrongKindError("reflect: expected a Rost barrier");
  return reflect(b, T);
}

}  // namespace switchlab
