#pragma once

// Kernels, cokernels, sums and decomposition in Mod-Z/m.

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "relhom/hom.hpp"
#include "relhom/module.hpp"
#include "relhom/smith.hpp"

namespace relhom {

struct KernelResult {
  ZmModule module;
  ModuleMorphism inclusion;
};

struct CokernelResult {
  ZmModule module;
  ModuleMorphism projection;
  /// section.column(i) is an element of the target mapping to generator i.
  std::vector<IntVector> section;
};

/// Canonical cyclic decomposition of the subgroup of `ambient` generated by
/// `generators`; the returned inclusion sends generator i to a cyclic generator.
inline KernelResult subgroup(const ZmModule& ambient, const std::vector<IntVector>& generators) {
  const Integer& m = ambient.modulus();
  const std::size_t n = ambient.rank(), r = generators.size();
  if (r == 0) {
    ZmModule z = ZmModule::zero(m);
    return {z, ModuleMorphism::zero(z, ambient)};
  }
  // Integer relations among the generators: kernel of [G | diag(d)].
  IntMatrix g(n, r + n);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i) g(i, j) = generators[j][i];
  for (std::size_t i = 0; i < n; ++i) g(i, r + i) = ambient.order(i);
  IntMatrix ker = integer_kernel(g);
  IntMatrix rel(ker.cols(), r);
  for (std::size_t k = 0; k < ker.cols(); ++k)
    for (std::size_t j = 0; j < r; ++j) rel(k, j) = ker(j, k);
  // Z^r / rowspace(rel) = ⊕ Z/s_i, generated by the rows of V.
  SnfResult snf = detail::smith(rel, detail::kTrackRightInv);
  if (snf.rank != r) throw InvariantViolation("subgroup: relation lattice is not of full rank");
  IntVector orders;
  std::vector<IntVector> cols;
  for (std::size_t i = r; i-- > 0;) {
    const Integer& s = snf.S(i, i);
    if (s == 1) continue;
    IntVector w(n);
    for (std::size_t j = 0; j < r; ++j)
      if (snf.V(i, j) != 0)
        for (std::size_t t = 0; t < n; ++t) w[t] += snf.V(i, j) * generators[j][t];
    orders.push_back(s);
    cols.push_back(ambient.reduce(std::move(w)));
  }
  ZmModule sub(m, orders);
  return {sub, ModuleMorphism(sub, ambient, IntMatrix::from_columns(cols, n))};
}

inline KernelResult kernel(const ModuleMorphism& f) {
  auto gens = kernel_mod(f.entries(), f.source().orders(), f.target().orders());
  return subgroup(f.source(), gens);
}

inline KernelResult image(const ModuleMorphism& f) {
  std::vector<IntVector> gens;
  for (std::size_t j = 0; j < f.source().rank(); ++j) gens.push_back(f.entries().column(j));
  return subgroup(f.target(), gens);
}

/// Quotient of `ambient` by the subgroup generated by `relations`.
inline CokernelResult quotient(const ZmModule& ambient, const std::vector<IntVector>& relations) {
  const std::size_t n = ambient.rank(), r = relations.size();
  IntMatrix p(n, r + n);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < n; ++i) p(i, j) = relations[j][i];
  for (std::size_t i = 0; i < n; ++i) p(i, r + i) = ambient.order(i);
  SnfResult snf = detail::smith(p, detail::kTrackLeft | detail::kTrackLeftInv);
  IntVector orders;
  std::vector<IntVector> proj_rows, section;
  for (std::size_t i = n; i-- > 0;) {
    const Integer& s = snf.S(i, i);
    if (s == 1) continue;
    IntVector row = snf.U_inv.row(i);
    for (auto& v : row) v = mod_floor(v, s);
    proj_rows.push_back(std::move(row));
    orders.push_back(s);
    section.push_back(ambient.reduce(snf.U.column(i)));
  }
  ZmModule q(ambient.modulus(), orders);
  return {q, ModuleMorphism(ambient, q, IntMatrix::from_rows(proj_rows, n)), std::move(section)};
}

inline CokernelResult cokernel(const ModuleMorphism& f) {
  std::vector<IntVector> rels;
  for (std::size_t j = 0; j < f.source().rank(); ++j) rels.push_back(f.entries().column(j));
  return quotient(f.target(), rels);
}

inline Integer image_order(const ModuleMorphism& f) {
  return f.target().cardinality() / cokernel(f).module.cardinality();
}

inline bool is_mono(const ModuleMorphism& f) {
  return image_order(f) == f.source().cardinality();
}
inline bool is_epi(const ModuleMorphism& f) {
  return image_order(f) == f.target().cardinality();
}
inline bool is_iso(const ModuleMorphism& f) {
  return f.source().cardinality() == f.target().cardinality() && is_epi(f);
}

/// For a mono `incl` and h with image inside im(incl), the unique h' with incl ∘ h' = h.
inline ModuleMorphism factor_through_mono(const ModuleMorphism& incl, const ModuleMorphism& h) {
  if (incl.target() != h.target()) throw DimensionMismatch("factor_through_mono: targets differ");
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < h.source().rank(); ++j) {
    auto y = solve_in(incl, h.entries().column(j));
    if (!y) throw NoPreimage("factor_through_mono: image not contained in the subobject");
    cols.push_back(std::move(*y));
  }
  return ModuleMorphism(h.source(), incl.source(),
                        IntMatrix::from_columns(cols, incl.source().rank()));
}

struct DirectSum {
  SumLayout layout;
  const ZmModule& module() const { return layout.total(); }
  ModuleMorphism injection(std::size_t i) const { return layout.injection(i); }
  ModuleMorphism projection(std::size_t i) const { return layout.projection(i); }
};

inline DirectSum direct_sum(const Integer& modulus, const std::vector<ZmModule>& parts) {
  return DirectSum{SumLayout(modulus, parts)};
}

inline DirectSum direct_sum(const std::vector<ZmModule>& parts) {
  if (parts.empty()) throw InvariantViolation("direct_sum: modulus needed for the empty sum");
  return direct_sum(parts.front().modulus(), parts);
}

/// Module presented over Z/m by the columns of `presentation` as relations on rows() generators.
inline ZmModule decompose(const IntMatrix& presentation, const Integer& modulus) {
  ZmModule ambient = ZmModule::free(modulus, presentation.rows());
  std::vector<IntVector> rels;
  for (std::size_t j = 0; j < presentation.cols(); ++j) rels.push_back(presentation.column(j));
  return quotient(ambient, rels).module;
}

/// M ∈ add(gens): every indecomposable (prime-power cyclic) summand of M is a
/// summand of some generator. Krull–Schmidt makes this exact over Z/m.
inline bool is_in_add(const ZmModule& m, const std::vector<ZmModule>& gens) {
  std::set<Integer> available;
  for (const auto& g : gens) {
    require_same_modulus(m, g, "is_in_add");
    for (const auto& q : elementary_divisors(g.orders())) available.insert(q);
  }
  for (const auto& q : elementary_divisors(m.orders()))
    if (!available.count(q)) return false;
  return true;
}

}  // namespace relhom
