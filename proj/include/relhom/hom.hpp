#pragma once

// Hom groups between cyclic decompositions, in explicit coordinates.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "relhom/module.hpp"
#include "relhom/smith.hpp"

namespace relhom {

/// Hom(M, N) as a Z/m-module: one cyclic coordinate of order gcd(d_i, d_j)
/// per factor pair, generated by x -> (d_i / gcd) x.
class HomSpace {
 public:
  HomSpace() = default;

  HomSpace(ZmModule source, ZmModule target)
      : source_(std::move(source)), target_(std::move(target)) {
    require_same_modulus(source_, target_, "HomSpace");
    struct Slot {
      Integer order;
      std::size_t row, col;
    };
    std::vector<Slot> slots;
    for (std::size_t i = 0; i < target_.rank(); ++i)
      for (std::size_t j = 0; j < source_.rank(); ++j) {
        Integer g = gcd(target_.order(i), source_.order(j));
        if (g > 1) slots.push_back({g, i, j});
      }
    std::stable_sort(slots.begin(), slots.end(),
                     [](const Slot& a, const Slot& b) { return a.order > b.order; });
    IntVector orders;
    for (const auto& s : slots) {
      orders.push_back(s.order);
      cells_.emplace_back(s.row, s.col);
      steps_.push_back(hom_step(target_.order(s.row), source_.order(s.col)));
    }
    module_ = ZmModule(source_.modulus(), std::move(orders));
  }

  const ZmModule& source() const { return source_; }
  const ZmModule& target() const { return target_; }
  /// The Hom group itself, as a module in canonical form.
  const ZmModule& module() const { return module_; }
  std::size_t dimension() const { return cells_.size(); }

  ModuleMorphism to_morphism(const IntVector& coords) const {
    if (coords.size() != cells_.size()) throw DimensionMismatch("HomSpace: coordinate length");
    IntMatrix e(target_.rank(), source_.rank());
    for (std::size_t k = 0; k < cells_.size(); ++k)
      e(cells_[k].first, cells_[k].second) = coords[k] * steps_[k];
    return ModuleMorphism(source_, target_, std::move(e));
  }

  IntVector to_coords(const ModuleMorphism& f) const {
    if (f.source() != source_ || f.target() != target_)
      throw DimensionMismatch("HomSpace: morphism " + f.source().to_string() + " -> " +
                              f.target().to_string() + " is not in Hom(" +
                              source_.to_string() + ", " + target_.to_string() + ")");
    IntVector c(cells_.size());
    for (std::size_t k = 0; k < cells_.size(); ++k)
      c[k] = mod_floor(f(cells_[k].first, cells_[k].second) / steps_[k], module_.order(k));
    return c;
  }

  ModuleMorphism basis_element(std::size_t k) const {
    IntVector c(cells_.size());
    c[k] = 1;
    return to_morphism(c);
  }

  std::vector<ModuleMorphism> basis() const {
    std::vector<ModuleMorphism> b;
    for (std::size_t k = 0; k < cells_.size(); ++k) b.push_back(basis_element(k));
    return b;
  }

 private:
  ZmModule source_, target_, module_;
  std::vector<std::pair<std::size_t, std::size_t>> cells_;
  IntVector steps_;
};

/// Hom(M, N) as an abelian group together with a generating list of morphisms.
struct HomGroup {
  AbGroup group;
  std::vector<ModuleMorphism> basis;
};

inline HomGroup hom_group(const ZmModule& m, const ZmModule& n) {
  HomSpace h(m, n);
  return {h.module().group(), h.basis()};
}

/// Matrix of an additive map Hom(A, B) -> Hom(C, D) given on morphisms.
inline ModuleMorphism hom_linear_map(const HomSpace& from, const HomSpace& to,
                                     const std::function<ModuleMorphism(const ModuleMorphism&)>& fn) {
  IntMatrix e(to.dimension(), from.dimension());
  for (std::size_t k = 0; k < from.dimension(); ++k) {
    IntVector c = to.to_coords(fn(from.basis_element(k)));
    for (std::size_t i = 0; i < c.size(); ++i) e(i, k) = c[i];
  }
  return ModuleMorphism(from.module(), to.module(), std::move(e));
}

/// Some x in A.source with A x = b, or nothing.
inline std::optional<IntVector> solve_in(const ModuleMorphism& a, const IntVector& b) {
  return solve_linear_mod(a.entries(), b, a.target().orders(), &a.source().orders());
}

/// Some φ in Hom(from) with fn(φ) = target, where fn is additive.
inline std::optional<ModuleMorphism> solve_hom(
    const HomSpace& from, const HomSpace& to,
    const std::function<ModuleMorphism(const ModuleMorphism&)>& fn, const ModuleMorphism& target) {
  auto x = solve_in(hom_linear_map(from, to, fn), to.to_coords(target));
  if (!x) return std::nullopt;
  return from.to_morphism(*x);
}

}  // namespace relhom
