#pragma once

// Finitely generated Z/m-modules in cyclic form and the morphisms between them.

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "relhom/ab_group.hpp"
#include "relhom/errors.hpp"
#include "relhom/int_matrix.hpp"

namespace relhom {

/// Z_{d_1} ⊕ ... ⊕ Z_{d_k} over Z/m with every d_i | m, 1 < d_i, sorted descending.
class ZmModule {
 public:
  ZmModule() : modulus_(2) {}

  ZmModule(Integer modulus, IntVector orders) : modulus_(std::move(modulus)) {
    if (modulus_ < 2) throw InvariantViolation("modulus must be at least 2");
    for (auto& d : orders) {
      if (d < 1 || !divides(d, modulus_))
        throw InvariantViolation("cyclic order " + d.get_str() + " does not divide modulus " +
                                 modulus_.get_str());
      if (d > 1) orders_.push_back(std::move(d));
    }
    std::stable_sort(orders_.begin(), orders_.end(), std::greater<>());
  }

  static ZmModule zero(const Integer& m) { return ZmModule(m, {}); }
  static ZmModule cyclic(const Integer& m, const Integer& d) { return ZmModule(m, {d}); }
  static ZmModule free(const Integer& m, std::size_t rank) {
    return ZmModule(m, IntVector(rank, m));
  }

  const Integer& modulus() const { return modulus_; }
  const IntVector& orders() const { return orders_; }
  const Integer& order(std::size_t i) const { return orders_[i]; }
  std::size_t rank() const { return orders_.size(); }
  bool is_zero() const { return orders_.empty(); }

  Integer cardinality() const {
    Integer n = 1;
    for (const auto& d : orders_) n *= d;
    return n;
  }

  AbGroup group() const { return AbGroup::from_cyclic_orders(orders_); }

  /// Coordinatewise reduction of an element.
  IntVector reduce(IntVector x) const {
    if (x.size() != rank()) throw DimensionMismatch("element length does not match module rank");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_floor(x[i], orders_[i]);
    return x;
  }

  bool operator==(const ZmModule& o) const {
    return modulus_ == o.modulus_ && orders_ == o.orders_;
  }
  bool operator!=(const ZmModule& o) const { return !(*this == o); }

  /// Literal form, e.g. "Z4+Z2+Z2@4"; the zero module prints as "0@4".
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (i) s += "+";
      s += "Z" + orders_[i].get_str();
    }
    if (s.empty()) s = "0";
    return s + "@" + modulus_.get_str();
  }

 private:
  Integer modulus_;
  IntVector orders_;
};

inline void require_same_modulus(const ZmModule& a, const ZmModule& b, const char* where) {
  if (a.modulus() != b.modulus())
    throw ModulusMismatch(std::string(where) + ": modules over Z/" + a.modulus().get_str() +
                          " and Z/" + b.modulus().get_str());
}

/// Smallest multiplier g with x -> g x well defined from Z_source to Z_target.
inline Integer hom_step(const Integer& target_order, const Integer& source_order) {
  return target_order / gcd(target_order, source_order);
}

/// Matrix (rows = target factors, columns = source factors) with entry a_ij
/// reduced into Z_{d_i} and divisible by d_i / gcd(d_i, d_j).
class ModuleMorphism {
 public:
  ModuleMorphism() = default;

  ModuleMorphism(ZmModule source, ZmModule target, IntMatrix entries)
      : source_(std::move(source)), target_(std::move(target)), entries_(std::move(entries)) {
    require_same_modulus(source_, target_, "ModuleMorphism");
    if (entries_.rows() != target_.rank() || entries_.cols() != source_.rank())
      throw DimensionMismatch("morphism matrix is " + std::to_string(entries_.rows()) + "x" +
                              std::to_string(entries_.cols()) + ", expected " +
                              std::to_string(target_.rank()) + "x" +
                              std::to_string(source_.rank()));
    for (std::size_t i = 0; i < entries_.rows(); ++i)
      for (std::size_t j = 0; j < entries_.cols(); ++j) {
        Integer& a = entries_(i, j);
        a = mod_floor(a, target_.order(i));
        if (!divides(hom_step(target_.order(i), source_.order(j)), a))
          throw InvariantViolation("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") = " + a.get_str() + " is not a well-defined map Z" +
                                   source_.order(j).get_str() + " -> Z" +
                                   target_.order(i).get_str());
      }
  }

  static ModuleMorphism zero(const ZmModule& source, const ZmModule& target) {
    return ModuleMorphism(source, target, IntMatrix(target.rank(), source.rank()));
  }
  static ModuleMorphism identity(const ZmModule& m) {
    return ModuleMorphism(m, m, IntMatrix::identity(m.rank()));
  }

  const ZmModule& source() const { return source_; }
  const ZmModule& target() const { return target_; }
  const IntMatrix& entries() const { return entries_; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

  bool is_zero() const { return entries_.is_zero(); }

  IntVector apply(const IntVector& x) const { return target_.reduce(entries_ * x); }

  bool operator==(const ModuleMorphism& o) const {
    return source_ == o.source_ && target_ == o.target_ && entries_ == o.entries_;
  }
  bool operator!=(const ModuleMorphism& o) const { return !(*this == o); }

  ModuleMorphism operator+(const ModuleMorphism& o) const {
    require_parallel(o);
    return ModuleMorphism(source_, target_, entries_ + o.entries_);
  }
  ModuleMorphism operator-(const ModuleMorphism& o) const {
    require_parallel(o);
    return ModuleMorphism(source_, target_, entries_ - o.entries_);
  }
  ModuleMorphism operator-() const { return ModuleMorphism(source_, target_, -entries_); }
  ModuleMorphism scaled(const Integer& s) const {
    return ModuleMorphism(source_, target_, entries_.scaled(s));
  }

 private:
  void require_parallel(const ModuleMorphism& o) const {
    if (source_ != o.source_ || target_ != o.target_)
      throw DimensionMismatch("morphisms are not parallel");
  }

  ZmModule source_;
  ZmModule target_;
  IntMatrix entries_;
};

/// g ∘ f
inline ModuleMorphism compose(const ModuleMorphism& g, const ModuleMorphism& f) {
  if (g.source() != f.target())
    throw DimensionMismatch("compose: " + g.source().to_string() + " vs " +
                            f.target().to_string());
  return ModuleMorphism(f.source(), g.target(), g.entries() * f.entries());
}

inline ModuleMorphism operator*(const ModuleMorphism& g, const ModuleMorphism& f) {
  return compose(g, f);
}

/// Direct sum of a list of modules, re-sorted into canonical form, with the
/// position of every summand factor inside the total.
class SumLayout {
 public:
  SumLayout() = default;

  SumLayout(const Integer& modulus, const std::vector<ZmModule>& parts) : parts_(parts) {
    struct Slot {
      Integer order;
      std::size_t part, factor;
    };
    std::vector<Slot> slots;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      if (parts[p].modulus() != modulus) throw ModulusMismatch("SumLayout: mixed moduli");
      for (std::size_t f = 0; f < parts[p].rank(); ++f) slots.push_back({parts[p].order(f), p, f});
    }
    std::stable_sort(slots.begin(), slots.end(),
                     [](const Slot& a, const Slot& b) { return a.order > b.order; });
    positions_.resize(parts.size());
    for (std::size_t p = 0; p < parts.size(); ++p) positions_[p].resize(parts[p].rank());
    IntVector orders;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      positions_[slots[k].part][slots[k].factor] = k;
      orders.push_back(slots[k].order);
    }
    total_ = ZmModule(modulus, std::move(orders));
  }

  const ZmModule& total() const { return total_; }
  std::size_t size() const { return parts_.size(); }
  const ZmModule& part(std::size_t p) const { return parts_[p]; }
  std::size_t position(std::size_t p, std::size_t factor) const { return positions_[p][factor]; }

  ModuleMorphism injection(std::size_t p) const {
    IntMatrix e(total_.rank(), parts_[p].rank());
    for (std::size_t f = 0; f < parts_[p].rank(); ++f) e(positions_[p][f], f) = 1;
    return ModuleMorphism(parts_[p], total_, std::move(e));
  }

  ModuleMorphism projection(std::size_t p) const {
    IntMatrix e(parts_[p].rank(), total_.rank());
    for (std::size_t f = 0; f < parts_[p].rank(); ++f) e(f, positions_[p][f]) = 1;
    return ModuleMorphism(total_, parts_[p], std::move(e));
  }

  /// Places a part-local element into total coordinates.
  IntVector embed(std::size_t p, const IntVector& local) const {
    IntVector x(total_.rank());
    for (std::size_t f = 0; f < local.size(); ++f) x[positions_[p][f]] = local[f];
    return x;
  }

  IntVector extract(std::size_t p, const IntVector& total_coords) const {
    IntVector x(parts_[p].rank());
    for (std::size_t f = 0; f < x.size(); ++f) x[f] = total_coords[positions_[p][f]];
    return x;
  }

 private:
  std::vector<ZmModule> parts_;
  std::vector<std::vector<std::size_t>> positions_;
  ZmModule total_;
};

/// Block morphism ⊕ source parts -> ⊕ target parts from blocks[t][s]: source_s -> target_t.
/// Empty (default-constructed) blocks stand for zero.
inline ModuleMorphism block_morphism(const SumLayout& source, const SumLayout& target,
                                     const std::vector<std::vector<ModuleMorphism>>& blocks) {
  IntMatrix e(target.total().rank(), source.total().rank());
  for (std::size_t t = 0; t < target.size(); ++t)
    for (std::size_t s = 0; s < source.size(); ++s) {
      const ModuleMorphism& b = blocks[t][s];
      if (b.entries().rows() == 0 || b.entries().cols() == 0) continue;
      if (b.source() != source.part(s) || b.target() != target.part(t))
        throw DimensionMismatch("block_morphism: block shape");
      for (std::size_t i = 0; i < b.entries().rows(); ++i)
        for (std::size_t j = 0; j < b.entries().cols(); ++j)
          e(target.position(t, i), source.position(s, j)) = b(i, j);
    }
  return ModuleMorphism(source.total(), target.total(), std::move(e));
}

}  // namespace relhom
