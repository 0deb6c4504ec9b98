#pragma once

// Finite-support cochain complexes over Z/m, chain maps, homotopies,
// shifts, cones and Hom complexes.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relhom/hom.hpp"
#include "relhom/module.hpp"
#include "relhom/module_ops.hpp"

namespace relhom {

/// (-1)^n for any integer n.
inline int sign_of(int n) { return (n & 1) ? -1 : 1; }

/// X^lo -> X^{lo+1} -> ... -> X^hi with δ^{n+1} δ^n = 0. Components outside
/// [lo, hi] are zero; an empty complex has hi < lo.
class Complex {
 public:
  Complex() : modulus_(2) {}
  explicit Complex(Integer modulus) : modulus_(std::move(modulus)) {}

  /// diffs[i] is δ^{lo+i}: components[i] -> components[i+1].
  Complex(Integer modulus, int lo, std::vector<ZmModule> components,
          std::vector<ModuleMorphism> diffs)
      : modulus_(std::move(modulus)), lo_(lo), comps_(std::move(components)) {
    if (comps_.empty()) {
      lo_ = 0;
      if (!diffs.empty()) throw DimensionMismatch("Complex: differentials without components");
      return;
    }
    for (const auto& c : comps_)
      if (c.modulus() != modulus_) throw ModulusMismatch("Complex: component modulus");
    if (diffs.size() + 1 != comps_.size())
      throw DimensionMismatch("Complex: need one differential between consecutive components");
    diffs_ = std::move(diffs);
    for (std::size_t i = 0; i < diffs_.size(); ++i)
      if (diffs_[i].source() != comps_[i] || diffs_[i].target() != comps_[i + 1])
        throw DimensionMismatch("Complex: differential " + std::to_string(lo_ + int(i)) +
                                " has the wrong shape");
    for (std::size_t i = 0; i + 1 < diffs_.size(); ++i)
      if (!compose(diffs_[i + 1], diffs_[i]).is_zero())
        throw InvariantViolation("Complex: d^" + std::to_string(lo_ + int(i) + 1) + " d^" +
                                 std::to_string(lo_ + int(i)) + " != 0");
  }

  /// Builds from sparse degree maps; missing components are zero and missing
  /// differentials are zero maps.
  static Complex from_maps(const Integer& modulus, const std::map<int, ZmModule>& components,
                           const std::map<int, ModuleMorphism>& diffs) {
    if (components.empty()) {
      for (const auto& [n, d] : diffs)
        if (!d.is_zero()) throw DimensionMismatch("Complex: differential without components");
      return Complex(modulus);
    }
    int lo = components.begin()->first, hi = components.rbegin()->first;
    std::vector<ZmModule> comps;
    for (int n = lo; n <= hi; ++n) {
      auto it = components.find(n);
      comps.push_back(it == components.end() ? ZmModule::zero(modulus) : it->second);
    }
    std::vector<ModuleMorphism> ds;
    for (int n = lo; n < hi; ++n) {
      auto it = diffs.find(n);
      ds.push_back(it == diffs.end()
                       ? ModuleMorphism::zero(comps[n - lo], comps[n + 1 - lo])
                       : it->second);
    }
    for (const auto& [n, d] : diffs)
      if ((n < lo || n >= hi) && !d.is_zero())
        throw DimensionMismatch("Complex: differential outside the support");
    return Complex(modulus, lo, std::move(comps), std::move(ds));
  }

  const Integer& modulus() const { return modulus_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + int(comps_.size()) - 1; }
  bool empty() const { return comps_.empty(); }
  bool in_support(int n) const { return n >= lo_ && n <= hi(); }

  bool is_zero() const {
    for (const auto& c : comps_)
      if (!c.is_zero()) return false;
    return true;
  }

  ZmModule at(int n) const {
    return in_support(n) ? comps_[n - lo_] : ZmModule::zero(modulus_);
  }

  /// δ^n: X^n -> X^{n+1}.
  ModuleMorphism d(int n) const {
    if (n >= lo_ && n < hi()) return diffs_[n - lo_];
    return ModuleMorphism::zero(at(n), at(n + 1));
  }

  /// Same complex restricted to its smallest support containing all nonzero components.
  Complex trimmed() const {
    int a = lo_, b = hi();
    while (a <= b && at(a).is_zero()) ++a;
    while (b >= a && at(b).is_zero()) --b;
    return window(a, b);
  }

  /// Brutal truncation to degrees [a, b].
  Complex window(int a, int b) const {
    if (b < a) return Complex(modulus_);
    std::vector<ZmModule> comps;
    std::vector<ModuleMorphism> ds;
    for (int n = a; n <= b; ++n) comps.push_back(at(n));
    for (int n = a; n < b; ++n) ds.push_back(d(n));
    return Complex(modulus_, a, std::move(comps), std::move(ds));
  }

  bool operator==(const Complex& o) const {
    if (modulus_ != o.modulus_) return false;
    int a = std::min(lo_, o.lo_), b = std::max(hi(), o.hi());
    if (empty()) a = o.lo_, b = o.hi();
    if (o.empty()) a = lo_, b = hi();
    for (int n = a; n <= b; ++n)
      if (at(n) != o.at(n) || d(n) != o.d(n)) return false;
    return true;
  }
  bool operator!=(const Complex& o) const { return !(*this == o); }

  std::string to_string() const {
    if (empty()) return "0";
    std::string s;
    for (int n = lo_; n <= hi(); ++n) {
      if (n > lo_) s += " -> ";
      s += "[" + std::to_string(n) + "] " + at(n).to_string();
    }
    return s;
  }

 private:
  Integer modulus_;
  int lo_ = 0;
  std::vector<ZmModule> comps_;
  std::vector<ModuleMorphism> diffs_;
};

/// Degree range covering the supports of both complexes (hi < lo if both empty).
inline std::pair<int, int> joint_support(const Complex& a, const Complex& b) {
  if (a.empty() && b.empty()) return {0, -1};
  if (a.empty()) return {b.lo(), b.hi()};
  if (b.empty()) return {a.lo(), a.hi()};
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

inline Complex stalk(const ZmModule& m, int degree = 0) {
  return Complex(m.modulus(), degree, {m}, {});
}

/// X[n]^k = X^{n+k} with differential (-1)^n δ^{n+k}.
inline Complex shift(const Complex& x, int n) {
  if (x.empty()) return x;
  std::vector<ZmModule> comps;
  std::vector<ModuleMorphism> ds;
  for (int k = x.lo(); k <= x.hi(); ++k) comps.push_back(x.at(k));
  for (int k = x.lo(); k < x.hi(); ++k)
    ds.push_back(sign_of(n) == 1 ? x.d(k) : -x.d(k));
  return Complex(x.modulus(), x.lo() - n, std::move(comps), std::move(ds));
}

/// Degree-zero morphism of complexes, δ_Y f^n = f^{n+1} δ_X.
class ChainMap {
 public:
  ChainMap() = default;

  ChainMap(Complex source, Complex target, const std::map<int, ModuleMorphism>& components)
      : source_(std::move(source)), target_(std::move(target)) {
    if (source_.modulus() != target_.modulus()) throw ModulusMismatch("ChainMap: moduli differ");
    auto [a, b] = joint_support(source_, target_);
    lo_ = a;
    for (int n = a; n <= b; ++n) {
      auto it = components.find(n);
      if (it == components.end()) {
        comps_.push_back(ModuleMorphism::zero(source_.at(n), target_.at(n)));
        continue;
      }
      if (it->second.source() != source_.at(n) || it->second.target() != target_.at(n))
        throw DimensionMismatch("ChainMap: component " + std::to_string(n) + " has the wrong shape");
      comps_.push_back(it->second);
    }
    for (const auto& [n, f] : components)
      if ((n < a || n > b) && !f.is_zero())
        throw DimensionMismatch("ChainMap: component outside the supports");
    for (int n = a - 1; n <= b; ++n)
      if (compose(target_.d(n), at(n)) != compose(at(n + 1), source_.d(n)))
        throw InvariantViolation("ChainMap: square at degree " + std::to_string(n) +
                                 " does not commute");
  }

  static ChainMap zero(const Complex& x, const Complex& y) { return ChainMap(x, y, {}); }

  static ChainMap identity(const Complex& x) {
    std::map<int, ModuleMorphism> c;
    for (int n = x.lo(); n <= x.hi(); ++n) c.emplace(n, ModuleMorphism::identity(x.at(n)));
    return ChainMap(x, x, c);
  }

  const Complex& source() const { return source_; }
  const Complex& target() const { return target_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + int(comps_.size()) - 1; }

  ModuleMorphism at(int n) const {
    if (n >= lo_ && n <= hi()) return comps_[n - lo_];
    return ModuleMorphism::zero(source_.at(n), target_.at(n));
  }

  std::map<int, ModuleMorphism> components() const {
    std::map<int, ModuleMorphism> c;
    for (int n = lo(); n <= hi(); ++n) c.emplace(n, comps_[n - lo_]);
    return c;
  }

  bool is_zero() const {
    for (const auto& f : comps_)
      if (!f.is_zero()) return false;
    return true;
  }

  bool operator==(const ChainMap& o) const {
    if (source_ != o.source_ || target_ != o.target_) return false;
    for (int n = std::min(lo(), o.lo()); n <= std::max(hi(), o.hi()); ++n)
      if (at(n) != o.at(n)) return false;
    return true;
  }
  bool operator!=(const ChainMap& o) const { return !(*this == o); }

  ChainMap operator+(const ChainMap& o) const { return combine(o, 1); }
  ChainMap operator-(const ChainMap& o) const { return combine(o, -1); }
  ChainMap operator-() const {
    std::map<int, ModuleMorphism> c;
    for (int n = lo(); n <= hi(); ++n) c.emplace(n, -comps_[n - lo_]);
    return ChainMap(source_, target_, c);
  }

 private:
  ChainMap combine(const ChainMap& o, int s) const {
    if (source_ != o.source_ || target_ != o.target_)
      throw DimensionMismatch("ChainMap: maps are not parallel");
    std::map<int, ModuleMorphism> c;
    for (int n = lo(); n <= hi(); ++n)
      c.emplace(n, s == 1 ? at(n) + o.at(n) : at(n) - o.at(n));
    return ChainMap(source_, target_, c);
  }

  Complex source_, target_;
  int lo_ = 0;
  std::vector<ModuleMorphism> comps_;
};

/// g ∘ f
inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
  if (g.source() != f.target()) throw DimensionMismatch("compose: chain maps do not compose");
  std::map<int, ModuleMorphism> c;
  auto [a, b] = joint_support(f.source(), g.target());
  for (int n = a; n <= b; ++n) c.emplace(n, compose(g.at(n), f.at(n)));
  return ChainMap(f.source(), g.target(), c);
}

inline ChainMap operator*(const ChainMap& g, const ChainMap& f) { return compose(g, f); }

/// f[n]: X[n] -> Y[n], componentwise f^{n+k} with no sign.
inline ChainMap shift(const ChainMap& f, int n) {
  std::map<int, ModuleMorphism> c;
  for (int k = f.lo(); k <= f.hi(); ++k) c.emplace(k - n, f.at(k));
  return ChainMap(shift(f.source(), n), shift(f.target(), n), c);
}

/// s^n: X^n -> Y^{n-1}.
struct Homotopy {
  Complex source, target;
  std::map<int, ModuleMorphism> components;

  ModuleMorphism at(int n) const {
    auto it = components.find(n);
    if (it != components.end()) return it->second;
    return ModuleMorphism::zero(source.at(n), target.at(n - 1));
  }

  /// f^n - g^n = δ_Y^{n-1} s^n + s^{n+1} δ_X^n in every degree.
  bool witnesses(const ChainMap& f, const ChainMap& g) const {
    auto [a, b] = joint_support(source, target);
    for (int n = a; n <= b; ++n) {
      ModuleMorphism lhs = f.at(n) - g.at(n);
      ModuleMorphism rhs = compose(target.d(n - 1), at(n)) + compose(at(n + 1), source.d(n));
      if (lhs != rhs) return false;
    }
    return true;
  }
};

/// Mapping cone of f: A -> B with cone^k = A^{k+1} ⊕ B^k and differential
/// [[-δ_A^{k+1}, 0], [f^{k+1}, δ_B^k]], plus the triangle maps B -> cone -> A[1].
struct Cone {
  Complex complex;
  std::map<int, SumLayout> layouts;  // parts {A^{k+1}, B^k}
  ChainMap inclusion;                // B -> cone(f)
  ChainMap projection;               // cone(f) -> A[1]

  const SumLayout& layout(int k) const { return layouts.at(k); }
};

inline Cone cone(const ChainMap& f) {
  const Complex& a = f.source();
  const Complex& b = f.target();
  const Integer& m = a.modulus();
  Cone c;
  Complex a1 = shift(a, 1);
  auto [lo, hi] = joint_support(a1, b);
  std::vector<ZmModule> comps;
  std::vector<ModuleMorphism> ds;
  for (int k = lo; k <= hi; ++k) {
    c.layouts.emplace(k, SumLayout(m, {a.at(k + 1), b.at(k)}));
    comps.push_back(c.layouts.at(k).total());
  }
  for (int k = lo; k < hi; ++k) {
    const SumLayout& src = c.layouts.at(k);
    const SumLayout& tgt = c.layouts.at(k + 1);
    std::vector<std::vector<ModuleMorphism>> blocks(2, std::vector<ModuleMorphism>(2));
    blocks[0][0] = -a.d(k + 1);
    blocks[1][0] = f.at(k + 1);
    blocks[1][1] = b.d(k);
    ds.push_back(block_morphism(src, tgt, blocks));
  }
  c.complex = lo <= hi ? Complex(m, lo, std::move(comps), std::move(ds)) : Complex(m);
  std::map<int, ModuleMorphism> incl, proj;
  for (int k = lo; k <= hi; ++k) {
    incl.emplace(k, c.layouts.at(k).injection(1));
    proj.emplace(k, c.layouts.at(k).projection(0));
  }
  c.inclusion = ChainMap(b, c.complex, incl);
  c.projection = ChainMap(c.complex, a1, proj);
  return c;
}

/// Direct sum of complexes with the canonical injections and projections.
struct ComplexSum {
  Complex complex;
  std::map<int, SumLayout> layouts;
  std::vector<ChainMap> injections, projections;
};

inline ComplexSum complex_sum(const Integer& modulus, const std::vector<Complex>& parts) {
  ComplexSum s;
  int lo = 0, hi = -1;
  bool any = false;
  for (const auto& p : parts) {
    if (p.modulus() != modulus) throw ModulusMismatch("direct_sum: complex modulus");
    if (p.empty()) continue;
    lo = any ? std::min(lo, p.lo()) : p.lo();
    hi = any ? std::max(hi, p.hi()) : p.hi();
    any = true;
  }
  std::vector<ZmModule> comps;
  std::vector<ModuleMorphism> ds;
  for (int k = lo; k <= hi; ++k) {
    std::vector<ZmModule> at;
    for (const auto& p : parts) at.push_back(p.at(k));
    s.layouts.emplace(k, SumLayout(modulus, at));
    comps.push_back(s.layouts.at(k).total());
  }
  for (int k = lo; k < hi; ++k) {
    std::vector<std::vector<ModuleMorphism>> blocks(parts.size(),
                                                    std::vector<ModuleMorphism>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) blocks[i][i] = parts[i].d(k);
    ds.push_back(block_morphism(s.layouts.at(k), s.layouts.at(k + 1), blocks));
  }
  s.complex = any ? Complex(modulus, lo, std::move(comps), std::move(ds)) : Complex(modulus);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::map<int, ModuleMorphism> inj, pr;
    for (int k = lo; k <= hi; ++k) {
      inj.emplace(k, s.layouts.at(k).injection(i));
      pr.emplace(k, s.layouts.at(k).projection(i));
    }
    s.injections.emplace_back(parts[i], s.complex, inj);
    s.projections.emplace_back(s.complex, parts[i], pr);
  }
  return s;
}

/// Kernel and cycle/boundary data of a complex at one degree, with explicit
/// representatives for the classes.
struct HomologyData {
  KernelResult cycles;     // Z^n ⊂ C^n
  CokernelResult classes;  // H^n = Z^n / B^n

  const ZmModule& module() const { return classes.module; }
  AbGroup group() const { return classes.module.group(); }

  /// Class of a cycle given in C^n coordinates.
  IntVector class_of(const IntVector& cycle) const {
    auto z = solve_in(cycles.inclusion, cycle);
    if (!z) throw InvariantViolation("class_of: element is not a cycle");
    return classes.projection.apply(*z);
  }

  /// A cycle in C^n representing the class with the given coordinates.
  IntVector representative(const IntVector& cls) const {
    IntVector z(cycles.module.rank());
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t t = 0; t < z.size(); ++t) z[t] += cls[i] * classes.section[i][t];
    return cycles.inclusion.apply(cycles.module.reduce(std::move(z)));
  }

  IntVector generator(std::size_t i) const {
    IntVector e(module().rank());
    e[i] = 1;
    return representative(e);
  }
};

inline HomologyData homology_data(const Complex& c, int n) {
  HomologyData h;
  h.cycles = kernel(c.d(n));
  ModuleMorphism boundary = factor_through_mono(h.cycles.inclusion, c.d(n - 1));
  h.classes = cokernel(boundary);
  return h;
}

inline AbGroup homology(const Complex& c, int n) { return homology_data(c, n).group(); }

/// Acyclic in every degree, or only in degrees strictly above `above` when given.
inline bool is_acyclic(const Complex& c, std::optional<int> above = std::nullopt) {
  int from = above ? std::max(c.lo(), *above + 1) : c.lo();
  for (int n = from; n <= c.hi(); ++n)
    if (!homology(c, n).is_trivial()) return false;
  return true;
}

/// Map H^n(C) -> H^n(D) induced by a degree-n component f: C^n -> D^n that
/// sends cycles to cycles and boundaries to boundaries.
inline ModuleMorphism homology_map(const HomologyData& from, const HomologyData& to,
                                   const ModuleMorphism& f) {
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < from.module().rank(); ++i)
    cols.push_back(to.class_of(f.apply(from.generator(i))));
  return ModuleMorphism(from.module(), to.module(),
                        IntMatrix::from_columns(cols, to.module().rank()));
}

/// Hom(X, Y) with Hom^n = ∏_k Hom(X^k, Y^{k+n}) and
/// δ^n(f)_k = δ_Y f^k - (-1)^n f^{k+1} δ_X^k.
class HomComplex {
 public:
  struct Degree {
    std::vector<int> ks;  // source degrees of the blocks
    std::vector<HomSpace> spaces;
    SumLayout layout;
  };

  HomComplex(Complex x, Complex y) : x_(std::move(x)), y_(std::move(y)) {
    require_same(x_, y_);
    const Integer& m = x_.modulus();
    if (x_.empty() || y_.empty()) {
      complex_ = Complex(m);
      return;
    }
    lo_ = y_.lo() - x_.hi();
    int hi = y_.hi() - x_.lo();
    for (int n = lo_; n <= hi; ++n) {
      Degree deg;
      std::vector<ZmModule> parts;
      for (int k = x_.lo(); k <= x_.hi(); ++k) {
        if (!y_.in_support(k + n)) continue;
        deg.ks.push_back(k);
        deg.spaces.emplace_back(x_.at(k), y_.at(k + n));
        parts.push_back(deg.spaces.back().module());
      }
      deg.layout = SumLayout(m, parts);
      degrees_.push_back(std::move(deg));
    }
    std::vector<ZmModule> comps;
    std::vector<ModuleMorphism> ds;
    for (int n = lo_; n <= hi; ++n) comps.push_back(degree(n).layout.total());
    for (int n = lo_; n < hi; ++n) ds.push_back(build_differential(n));
    complex_ = Complex(m, lo_, std::move(comps), std::move(ds));
  }

  const Complex& source() const { return x_; }
  const Complex& target() const { return y_; }
  const Complex& complex() const { return complex_; }
  bool in_support(int n) const { return complex_.in_support(n); }
  const Degree& degree(int n) const { return degrees_.at(n - lo_); }

  /// Coordinates in Hom^n of the family k -> fam(k): X^k -> Y^{k+n}.
  IntVector coords(int n, const std::function<ModuleMorphism(int)>& fam) const {
    if (!in_support(n)) return {};
    const Degree& deg = degree(n);
    IntVector x(deg.layout.total().rank());
    for (std::size_t b = 0; b < deg.ks.size(); ++b) {
      IntVector local = deg.spaces[b].to_coords(fam(deg.ks[b]));
      for (std::size_t f = 0; f < local.size(); ++f) x[deg.layout.position(b, f)] = local[f];
    }
    return x;
  }

  IntVector coords(const ChainMap& f) const {
    return coords(0, [&](int k) { return f.at(k); });
  }

  /// Component X^k -> Y^{k+n} of the element with the given coordinates.
  ModuleMorphism component(int n, const IntVector& c, int k) const {
    if (in_support(n)) {
      const Degree& deg = degree(n);
      for (std::size_t b = 0; b < deg.ks.size(); ++b)
        if (deg.ks[b] == k) return deg.spaces[b].to_morphism(deg.layout.extract(b, c));
    }
    return ModuleMorphism::zero(x_.at(k), y_.at(k + n));
  }

  std::map<int, ModuleMorphism> family(int n, const IntVector& c) const {
    std::map<int, ModuleMorphism> fam;
    if (!in_support(n)) return fam;
    for (int k : degree(n).ks) fam.emplace(k, component(n, c, k));
    return fam;
  }

  /// The degree-zero cycle with the given coordinates as a chain map X -> Y.
  ChainMap chain_map(const IntVector& c) const { return ChainMap(x_, y_, family(0, c)); }

 private:
  static void require_same(const Complex& x, const Complex& y) {
    if (x.modulus() != y.modulus()) throw ModulusMismatch("hom_complex: moduli differ");
  }

  ModuleMorphism build_differential(int n) const {
    const Degree& src = degree(n);
    const Degree& tgt = degree(n + 1);
    std::vector<std::vector<ModuleMorphism>> blocks(tgt.ks.size(),
                                                    std::vector<ModuleMorphism>(src.ks.size()));
    const int s = -sign_of(n);
    for (std::size_t t = 0; t < tgt.ks.size(); ++t) {
      const int k = tgt.ks[t];
      for (std::size_t b = 0; b < src.ks.size(); ++b) {
        if (src.ks[b] == k) {
          ModuleMorphism dy = y_.d(k + n);
          blocks[t][b] = hom_linear_map(src.spaces[b], tgt.spaces[t],
                                        [&](const ModuleMorphism& f) { return compose(dy, f); });
        } else if (src.ks[b] == k + 1) {
          ModuleMorphism dx = x_.d(k);
          blocks[t][b] = hom_linear_map(src.spaces[b], tgt.spaces[t], [&](const ModuleMorphism& f) {
            return compose(f, dx).scaled(s);
          });
        }
      }
    }
    return block_morphism(src.layout, tgt.layout, blocks);
  }

  Complex x_, y_;
  int lo_ = 0;
  std::vector<Degree> degrees_;
  Complex complex_;
};

inline HomComplex hom_complex(const Complex& x, const Complex& y) { return HomComplex(x, y); }

/// Hom_K(X, Y[n]) = H^n(Hom(X, Y)).
inline AbGroup hom_k(const Complex& x, const Complex& y, int n) {
  return homology(hom_complex(x, y).complex(), n);
}

/// Chain map Hom(X, Y) -> Hom(X', Y'), h -> post ∘ h ∘ pre, for pre: X' -> X, post: Y -> Y'.
inline ChainMap hom_map(const HomComplex& from, const HomComplex& to, const ChainMap& pre,
                        const ChainMap& post) {
  std::map<int, ModuleMorphism> comps;
  const Complex& a = from.complex();
  const Complex& b = to.complex();
  auto [lo, hi] = joint_support(a, b);
  for (int n = lo; n <= hi; ++n) {
    if (!from.in_support(n) || !to.in_support(n)) continue;
    std::vector<IntVector> cols;
    const ZmModule& src = a.at(n);
    for (std::size_t i = 0; i < src.rank(); ++i) {
      IntVector e(src.rank());
      e[i] = 1;
      cols.push_back(to.coords(n, [&](int k) {
        return compose(post.at(k + n), compose(from.component(n, e, k), pre.at(k)));
      }));
    }
    comps.emplace(n, ModuleMorphism(src, b.at(n), IntMatrix::from_columns(cols, b.at(n).rank())));
  }
  return ChainMap(a, b, comps);
}

/// Some s with f = δ s + s δ, found as one linear system δ^{-1}(s) = f in Hom(X, Y).
inline std::optional<Homotopy> null_homotopy(const ChainMap& f) {
  HomComplex h(f.source(), f.target());
  Homotopy s{f.source(), f.target(), {}};
  if (f.is_zero()) return s;
  if (!h.in_support(-1)) return std::nullopt;
  auto x = solve_in(h.complex().d(-1), h.coords(f));
  if (!x) return std::nullopt;
  s.components = h.family(-1, *x);
  return s;
}

inline bool is_null_homotopic(const ChainMap& f) { return null_homotopy(f).has_value(); }

inline bool homotopic(const ChainMap& f, const ChainMap& g) { return is_null_homotopic(f - g); }

/// H^n(f) bijective for all n, checked as acyclicity of cone(f). With `above`,
/// only cone degrees above it are checked, for truncated resolutions.
inline bool is_quasi_iso(const ChainMap& f, std::optional<int> above = std::nullopt) {
  return is_acyclic(cone(f).complex, above);
}

struct KernelComplex {
  Complex complex;
  ChainMap inclusion;
};

/// Degreewise kernel of a chain map, as a subcomplex of its source.
inline KernelComplex kernel_complex(const ChainMap& g) {
  const Complex& m = g.source();
  KernelComplex k;
  if (m.empty()) {
    k.complex = Complex(m.modulus());
    k.inclusion = ChainMap::zero(k.complex, m);
    return k;
  }
  std::vector<KernelResult> ks;
  for (int n = m.lo(); n <= m.hi(); ++n) ks.push_back(kernel(g.at(n)));
  std::vector<ZmModule> comps;
  std::vector<ModuleMorphism> ds;
  for (const auto& r : ks) comps.push_back(r.module);
  for (int n = m.lo(); n < m.hi(); ++n) {
    const auto& here = ks[n - m.lo()];
    const auto& next = ks[n + 1 - m.lo()];
    ds.push_back(factor_through_mono(next.inclusion, compose(m.d(n), here.inclusion)));
  }
  k.complex = Complex(m.modulus(), m.lo(), std::move(comps), std::move(ds));
  std::map<int, ModuleMorphism> incl;
  for (int n = m.lo(); n <= m.hi(); ++n) incl.emplace(n, ks[n - m.lo()].inclusion);
  k.inclusion = ChainMap(k.complex, m, incl);
  return k;
}

}  // namespace relhom
