#pragma once

#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <optional>
#include <string>
#include <vector>

#include "relhom/complex.hpp"
#include "relhom/relative.hpp"

namespace relhom {

/// Homology at the middle of U -u-> V -v-> W.
inline AbGroup middle_homology(const ModuleMorphism& u, const ModuleMorphism& v) {
  KernelResult z = kernel(v);
  return cokernel(factor_through_mono(z.inclusion, u)).module.group();
}

/// H^n(Hom(P, N)) computed degreewise as
/// ker(Hom(P^{-n}, N) -> Hom(P^{-n-1}, N)) / im(Hom(P^{-n+1}, N) -> Hom(P^{-n}, N)).
inline AbGroup ext_from_resolution(const Complex& p, const ZmModule& n_mod, int n) {
  HomSpace above(p.at(-n + 1), n_mod), here(p.at(-n), n_mod), below(p.at(-n - 1), n_mod);
  ModuleMorphism d_in = p.d(-n), d_out = p.d(-n - 1);
  auto u = hom_linear_map(above, here, [&](const ModuleMorphism& h) { return compose(h, d_in); });
  auto v = hom_linear_map(here, below, [&](const ModuleMorphism& h) { return compose(h, d_out); });
  return middle_homology(u, v);
}

inline bool same_subcategory(const SubcatDescriptor& a, const SubcatDescriptor& b) {
  return a.modulus == b.modulus && a.subset_of(b) && b.subset_of(a);
}

/// Ext^n_X(M, N) = H^n(Hom(X, N)) for a proper X-resolution of depth n + 2.
inline AbGroup relative_ext(const ZmModule& m, const ZmModule& n_mod, int n,
                            const SubcatDescriptor& x,
                            Precovering policy = Precovering::stop_in_add) {
  if (n < 0) throw InvariantViolation("relative_ext: degree must be non-negative");
  require_same_modulus(m, n_mod, "relative_ext");
  auto r = proper_resolution(m, x, n + 2, policy);
  return ext_from_resolution(r.complex, n_mod, n);
}

enum class ExtFlavor { relative, classical, tate };

inline std::string flavor_name(ExtFlavor f) {
  switch (f) {
    case ExtFlavor::relative: return "relative";
    case ExtFlavor::classical: return "classical";
    case ExtFlavor::tate: return "tate";
  }
  return "?";
}

struct ExtTable {
  ExtFlavor flavor = ExtFlavor::relative;
  std::string subcategory;
  std::map<int, AbGroup> entries;
  int depth_used = 0;
};

/// Ext^n_X(M, N) for n = 0..range from a single resolution of depth range + 2,
/// or of the given depth when larger.
inline ExtTable ext_table(const ZmModule& m, const ZmModule& n_mod, const SubcatDescriptor& x,
                          int range, Precovering policy = Precovering::stop_in_add,
                          std::optional<int> depth = std::nullopt) {
  if (range < 0) throw InvariantViolation("ext_table: range must be non-negative");
  if (depth && *depth < range + 2)
    throw WindowTooSmall("ext_table: depth " + std::to_string(*depth) + " is below range + 2");
  require_same_modulus(m, n_mod, "ext_table");
  ExtTable t;
  t.flavor = same_subcategory(x, SubcatDescriptor::PROJ(m.modulus())) ? ExtFlavor::classical
                                                                       : ExtFlavor::relative;
  t.subcategory = x.name;
  t.depth_used = depth.value_or(range + 2);
  auto r = proper_resolution(m, x, t.depth_used, policy);
  for (int n = 0; n <= range; ++n) t.entries.emplace(n, ext_from_resolution(r.complex, n_mod, n));
  return t;
}

// ---------------------------------------------------------------------------
// Tate cohomology

/// Window [-window, window] of a complete PROJ-resolution T -ν-> W -> M.
struct TateResolution {
  ZmModule module;
  int window = 0;
  Complex T;
  /// One period of differentials starting at degree 0.
  int period = 1;
  std::vector<ModuleMorphism> period_maps;
  ModuleMorphism augmentation;  // T^0 -> M
  ProperResolution W;
  ChainMap nu;
  /// ν^i is bijective for every i in [-window, bijective_through].
  int bijective_through = 0;

  /// Exactness and Hom(G, -), Hom(-, G) exactness at interior window degrees.
  bool totally_acyclic(const SubcatDescriptor& x) const {
    for (int k = -window + 1; k < window; ++k)
      if (!homology(T, k).is_trivial()) return false;
    for (const auto& g : x.generators) {
      Complex hg = hom_complex(stalk(g), T).complex();
      Complex gh = hom_complex(T, stalk(g)).complex();
      for (int k = -window + 1; k < window; ++k)
        if (!homology(hg, k).is_trivial() || !homology(gh, k).is_trivial()) return false;
    }
    return true;
  }
};

namespace detail {

/// ν + δh for a homotopy h: T^k -> W^{k-1} chosen degree by degree from the bottom so
/// that ν^lo, ..., ν^hi are isomorphisms where possible. A factor that is projective at
/// some primes makes the strand partly contractible, and there lift_through is free to
/// return a ν that is only a homotopy equivalence. h vanishes above hi, so π ν is kept
/// when hi = 0. Stops at the first degree it cannot fix.
inline ChainMap straighten(const ChainMap& nu, int lo, int hi) {
  const Complex &t = nu.source(), &w = nu.target();
  std::map<int, ModuleMorphism> h;
  auto hom = [&](int k) {
    auto it = h.find(k);
    return it != h.end() ? it->second : ModuleMorphism::zero(t.at(k), w.at(k - 1));
  };
  // At the bottom of the window nothing below constrains ν, so any e: T^lo -> ker d_W may be added.
  KernelResult cycles = kernel(w.d(lo));
  ModuleMorphism bottom = ModuleMorphism::zero(t.at(lo), w.at(lo));
  auto corrected = [&](int k) {
    ModuleMorphism c = nu.at(k) + compose(w.d(k - 1), hom(k)) + compose(hom(k + 1), t.d(k));
    return k == lo ? c + bottom : c;
  };
  std::mt19937_64 rng(0x5eed);
  auto random_map = [&](const ZmModule& from, const ZmModule& to) {
    HomSpace space(from, to);
    IntVector c(space.module().rank());
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = static_cast<unsigned long>(rng() % space.module().order(i).get_ui());
    return space.to_morphism(c);
  };
  auto random_hom = [&](int k) { return random_map(t.at(k), w.at(k - 1)); };
  for (int k = lo; k <= hi; ++k) {
    if (is_iso(corrected(k))) continue;
    bool fixed = false;
    ModuleMorphism keep_lower = hom(k), keep_upper = hom(k + 1);
    for (int attempt = 0; attempt < 256 && !fixed; ++attempt) {
      if (k == lo && attempt % 2 == 1)
        bottom = compose(cycles.inclusion, random_map(t.at(lo), cycles.module));
      if (k + 1 <= hi) h[k + 1] = random_hom(k + 1);
      if (k > lo && (attempt % 2 == 1 || k + 1 > hi)) h[k] = random_hom(k);
      fixed = is_iso(corrected(k)) && (k == lo || is_iso(corrected(k - 1)));
    }
    if (!fixed) {
      if (k == lo) bottom = ModuleMorphism::zero(t.at(lo), w.at(lo));
      h[k] = keep_lower;
      h[k + 1] = keep_upper;
      break;
    }
  }
  std::map<int, ModuleMorphism> out;
  for (int k = t.lo(); k <= t.hi(); ++k) out.emplace(k, corrected(k));
  return ChainMap(t, w, out);
}

/// Smallest even s with K_s ≅ K_{s+2} and rank K_s = rank K_{s+1} among the syzygies
/// of the PROJ-resolution; from there on the resolution repeats with period two.
inline std::pair<int, ZmModule> stable_syzygy(const ZmModule& m, const SubcatDescriptor& proj) {
  std::vector<ZmModule> k{m};
  for (int s = 0; s <= 2 * int(m.rank()) + 8; s += 2) {
    while (int(k.size()) < s + 3) k.push_back(kernel(x_precover(k.back(), proj).map).module);
    if (k[s].orders() == k[s + 2].orders() && k[s].rank() == k[s + 1].rank()) return {s, k[s]};
  }
  throw InvariantViolation("complete_resolution: syzygies of " + m.to_string() + " do not repeat");
}

/// ... -> Z_m -×d-> Z_m -×(m/d)-> Z_m -> ... on [lo, hi], one strand per factor Z_d of k,
/// with ×d leaving odd degrees so that the part in degrees <= 0 resolves k.
inline Complex strands(const ZmModule& k, int lo, int hi) {
  const Integer& mod = k.modulus();
  ZmModule free = ZmModule::free(mod, k.rank());
  std::vector<ZmModule> comps(hi - lo + 1, free);
  std::vector<ModuleMorphism> ds;
  for (int i = lo; i < hi; ++i) {
    IntVector diag;
    for (const auto& d : k.orders()) diag.push_back((i & 1) ? d : Integer(mod / d));
    ds.emplace_back(free, free, IntMatrix::diagonal(diag));
  }
  return Complex(mod, lo, std::move(comps), std::move(ds));
}

}  // namespace detail

/// The strands come from the first stable syzygy K_s rather than from M itself, since
/// projective pieces can merge in the syzygies (Z6 ⊕ Z4 over Z/12 has syzygy Z6). When M
/// has no such pieces s = 0 and the strands are those of M's cyclic factors. The window
/// is widened to s when s is larger.
inline TateResolution complete_resolution(const ZmModule& m, const SubcatDescriptor& w,
                                          int window) {
  const Integer& mod = m.modulus();
  SubcatDescriptor proj = SubcatDescriptor::PROJ(mod);
  if (!same_subcategory(w, proj))
    throw UnsupportedSubcategory("complete_resolution: only PROJ is supported, got " + w.name);
  if (window < 1) throw WindowTooSmall("complete_resolution: window must be at least 1");
  TateResolution tr;
  tr.module = m;

  // A projective M has a finite proper resolution and a zero complete resolution.
  auto [s, stable] = proj.contains(m) ? std::pair<int, ZmModule>{0, ZmModule::zero(mod)}
                                      : detail::stable_syzygy(m, proj);
  for (const auto& d : stable.orders())
    if (d == mod) throw InvariantViolation("complete_resolution: free factor in a stable syzygy");
  const int depth = std::max(window, s);
  tr.window = depth;
  tr.T = detail::strands(stable, -depth, depth);
  tr.period = 1;
  for (const auto& d : stable.orders())
    if (d * d != mod) tr.period = 2;
  for (int k = 0; k < tr.period; ++k) tr.period_maps.push_back(tr.T.d(k));
  tr.W = proper_resolution(m, proj, depth);
  const Complex& wc = tr.W.complex;

  if (stable.rank() == 0) {
    tr.nu = ChainMap::zero(tr.T, wc);
    tr.augmentation = ModuleMorphism::zero(tr.T.at(0), m);
    tr.bijective_through = -depth - 1;
    for (int k = -depth; k <= depth && is_iso(tr.nu.at(k)); ++k) tr.bijective_through = k;
    return tr;
  }
  // Below -s: compare the strands with the resolution of K_s, which is W shifted by s.
  ProperResolution tail = proper_resolution(stable, proj, depth - s);
  Complex low = detail::strands(stable, -(depth - s), 0);
  ModuleMorphism onto(low.at(0), stable, IntMatrix::identity(stable.rank()));
  ChainMap low_nu = lift_through(tail.augmentation_map(), ChainMap(low, stalk(stable), {{0, onto}}),
                                 proj, tail.acyclic_above());
  std::map<int, ModuleMorphism> nu;
  for (int k = -depth; k <= -s; ++k) {
    if (tail.complex.at(k + s) != wc.at(k))
      throw InvariantViolation("complete_resolution: syzygy resolution does not match W");
    nu.emplace(k, low_nu.at(k + s));
  }
  // Above -s: ν^{k+1} d_T = d_W ν^k always has a solution because free Z/m-modules are injective.
  for (int k = -s; k < 0; ++k) {
    HomSpace unknowns(tr.T.at(k + 1), wc.at(k + 1)), values(tr.T.at(k), wc.at(k + 1));
    auto next = solve_hom(unknowns, values,
                          [&](const ModuleMorphism& x) { return compose(x, tr.T.d(k)); },
                          compose(wc.d(k), nu.at(k)));
    if (!next) throw InvariantViolation("complete_resolution: ν does not extend upward");
    nu.emplace(k + 1, *next);
  }
  tr.nu = detail::straighten(ChainMap(tr.T, wc, nu), -depth, 0);
  for (int k = -depth; k < depth; ++k)
    if (compose(wc.d(k), tr.nu.at(k)) != compose(tr.nu.at(k + 1), tr.T.d(k)))
      throw InvariantViolation("complete_resolution: ν is not a chain map");
  tr.augmentation = compose(tr.W.augmentation, tr.nu.at(0));
  tr.bijective_through = -depth - 1;
  for (int k = -depth; k <= depth && is_iso(tr.nu.at(k)); ++k) tr.bijective_through = k;

  for (int k = -depth; k <= depth; ++k)
    if (!proj.contains(tr.T.at(k)))
      throw InvariantViolation("complete_resolution: component outside add(PROJ)");
  if (!tr.totally_acyclic(proj))
    throw InvariantViolation("complete_resolution: strand is not totally acyclic on the window");
  if (tr.bijective_through < -depth)
    throw InvariantViolation("complete_resolution: ν is not bijective at the window bottom");
  return tr;
}

/// Êxt^n(M, N) = H^n(Hom(T, N)) on a window of margin at least |n| + 2.
inline AbGroup tate_ext_complete(const ZmModule& m, const ZmModule& n_mod, int n, int window) {
  require_same_modulus(m, n_mod, "tate_ext_complete");
  if (window < std::abs(n) + 2)
    throw WindowTooSmall("tate_ext_complete: window " + std::to_string(window) +
                         " is below |n| + 2 = " + std::to_string(std::abs(n) + 2));
  auto tr = complete_resolution(m, SubcatDescriptor::PROJ(m.modulus()), window);
  return hom_k(tr.T, stalk(n_mod), n);
}

/// W -f-> X lifting id_M between a proper W-resolution and a finite proper
/// X-resolution, with the cone carrying Tate cohomology.
struct LiangYang {
  ProperResolution w, x;
  XPd pd;
  ChainMap f;
  Cone cone;
};

inline LiangYang liang_yang(const ZmModule& m, const SubcatDescriptor& x,
                            const SubcatDescriptor& w, int depth) {
  if (!w.subset_of(x))
    throw InvariantViolation("liang_yang: add(" + w.name + ") is not inside add(" + x.name + ")");
  LiangYang ly;
  ly.pd = x_pd(m, x, depth);
  if (!ly.pd.finite())
    throw PdExceedsBudget(x.name + "-pd of " + m.to_string() + " is " + ly.pd.to_string());
  ly.w = proper_resolution(m, w, depth);
  ly.x = proper_resolution(m, x, depth);
  ly.f = lift_through(ly.x.augmentation_map(), ly.w.augmentation_map(), x, ly.x.acyclic_above());
  ly.cone = cone(ly.f);
  return ly;
}

/// Êxt^n_W(M, N) = H^{n+1}(Hom(cone(f), N)) for n >= 1.
inline AbGroup tate_ext_cone(const ZmModule& m, const ZmModule& n_mod, int n,
                             const SubcatDescriptor& x, const SubcatDescriptor& w, int depth) {
  require_same_modulus(m, n_mod, "tate_ext_cone");
  if (n < 1) throw InvariantViolation("tate_ext_cone: only defined for n >= 1");
  if (depth < n + 3)
    throw WindowTooSmall("tate_ext_cone: depth " + std::to_string(depth) + " is below n + 3");
  auto ly = liang_yang(m, x, w, depth);
  return hom_k(ly.cone.complex, stalk(n_mod), n + 1);
}

// ---------------------------------------------------------------------------
// Exact sequences

struct SequenceNode {
  std::string label;
  ZmModule module;
};

/// Exactness at a node: out ∘ in = 0 and |im in| = |ker out|.
struct NodeCertificate {
  std::size_t node = 0;
  bool composite_zero = false;
  Integer image_order, kernel_order;

  bool exact() const { return composite_zero && image_order == kernel_order; }
};

inline NodeCertificate certify_node(std::size_t node, const ModuleMorphism& in,
                                    const ModuleMorphism& out) {
  return {node, compose(out, in).is_zero(), image_order(in), kernel(out).module.cardinality()};
}

struct ExactSequence {
  std::vector<SequenceNode> nodes;
  std::vector<ModuleMorphism> maps;  // maps[i]: nodes[i] -> nodes[i + 1]
  std::vector<NodeCertificate> certificates;

  void certify() {
    certificates.clear();
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i)
      certificates.push_back(certify_node(i, maps[i - 1], maps[i]));
  }

  bool exact() const {
    for (const auto& c : certificates)
      if (!c.exact()) return false;
    return true;
  }

  /// Nodes [from, to) with the maps between them, certificates recomputed.
  ExactSequence slice(std::size_t from, std::size_t to) const {
    ExactSequence s;
    s.nodes.assign(nodes.begin() + from, nodes.begin() + to);
    s.maps.assign(maps.begin() + from, maps.begin() + to - 1);
    s.certify();
    return s;
  }
};

/// Connecting map H^n(C) -> H^{n+1}(A) of 0 -> A -i-> B -p-> C -> 0 by the snake construction.
inline ModuleMorphism connecting_map(const ChainMap& i, const ChainMap& p, const HomologyData& hc,
                                     const HomologyData& ha_next, int n) {
  const Complex& b = i.target();
  std::vector<IntVector> cols;
  for (std::size_t k = 0; k < hc.module().rank(); ++k) {
    auto lift = solve_in(p.at(n), hc.generator(k));
    if (!lift) throw InvariantViolation("connecting_map: p is not onto in degree " + std::to_string(n));
    auto a = solve_in(i.at(n + 1), b.d(n).apply(*lift));
    if (!a) throw InvariantViolation("connecting_map: boundary does not come from A");
    cols.push_back(ha_next.class_of(*a));
  }
  return ModuleMorphism(hc.module(), ha_next.module(),
                        IntMatrix::from_columns(cols, ha_next.module().rank()));
}

inline void require_short_exact(const ChainMap& i, const ChainMap& p) {
  if (i.target() != p.source()) throw DimensionMismatch("short exact sequence: maps do not compose");
  auto [lo, hi] = joint_support(i.source(), p.target());
  lo = std::min(lo, p.source().lo());
  hi = std::max(hi, p.source().hi());
  for (int k = lo; k <= hi; ++k) {
    const ModuleMorphism ik = i.at(k), pk = p.at(k);
    if (!is_mono(ik) || !is_epi(pk) || !compose(pk, ik).is_zero() ||
        ik.target().cardinality() != ik.source().cardinality() * pk.target().cardinality())
      throw InvariantViolation("short exact sequence fails in degree " + std::to_string(k));
  }
}

/// H^{lo-1}(C) -> H^lo(A) -> H^lo(B) -> H^lo(C) -> ... -> H^hi(C) -> H^{hi+1}(A)
/// for a degreewise short exact sequence 0 -> A -i-> B -p-> C -> 0.
inline ExactSequence long_exact_sequence(
    const ChainMap& i, const ChainMap& p, int lo, int hi,
    const std::function<std::string(char, int)>& label) {
  require_short_exact(i, p);
  const Complex &a = i.source(), &b = i.target(), &c = p.target();
  std::map<int, HomologyData> ha, hb, hc;
  for (int n = lo - 1; n <= hi + 1; ++n) {
    ha.emplace(n, homology_data(a, n));
    hb.emplace(n, homology_data(b, n));
    hc.emplace(n, homology_data(c, n));
  }
  ExactSequence s;
  s.nodes.push_back({label('C', lo - 1), hc.at(lo - 1).module()});
  s.maps.push_back(connecting_map(i, p, hc.at(lo - 1), ha.at(lo), lo - 1));
  for (int n = lo; n <= hi; ++n) {
    s.nodes.push_back({label('A', n), ha.at(n).module()});
    s.maps.push_back(homology_map(ha.at(n), hb.at(n), i.at(n)));
    s.nodes.push_back({label('B', n), hb.at(n).module()});
    s.maps.push_back(homology_map(hb.at(n), hc.at(n), p.at(n)));
    s.nodes.push_back({label('C', n), hc.at(n).module()});
    s.maps.push_back(connecting_map(i, p, hc.at(n), ha.at(n + 1), n));
  }
  s.nodes.push_back({label('A', hi + 1), ha.at(hi + 1).module()});
  s.certify();
  return s;
}

/// 0 -> N -f-> N' -g-> N'' -> 0.
struct ShortExactSequence {
  ModuleMorphism f, g;

  const ZmModule& left() const { return f.source(); }
  const ZmModule& middle() const { return f.target(); }
  const ZmModule& right() const { return g.target(); }

  Complex as_complex() const {
    return Complex(f.source().modulus(), -1, {left(), middle(), right()}, {f, g});
  }
};

/// Exact with Hom(G, -) exact for every generator; NotXAcyclicInput otherwise.
inline void require_x_acyclic(const ShortExactSequence& s, const SubcatDescriptor& x) {
  if (s.f.target() != s.g.source())
    throw DimensionMismatch("short exact sequence: maps do not compose");
  if (!compose(s.g, s.f).is_zero() || !is_acyclic(s.as_complex()) ||
      !is_x_acyclic(s.as_complex(), x))
    throw NotXAcyclicInput("input sequence is not " + x.name + "-acyclic");
}

inline ChainMap stalk_map(const ModuleMorphism& f) {
  return ChainMap(stalk(f.source()), stalk(f.target()), {{0, f}});
}

inline std::string ext_label(const std::string& a, const std::string& b, int n) {
  return "Ext^" + std::to_string(n) + "(" + a + "," + b + ")";
}

/// Hom(P, -) applied to an X-acyclic sequence, P a proper X-resolution of M.
inline ExactSequence les_covariant(const ZmModule& m, const ShortExactSequence& s,
                                   const SubcatDescriptor& x, int range) {
  require_x_acyclic(s, x);
  auto r = proper_resolution(m, x, range + 2);
  HomComplex ha(r.complex, stalk(s.left())), hb(r.complex, stalk(s.middle())),
      hc(r.complex, stalk(s.right()));
  ChainMap id = ChainMap::identity(r.complex);
  ChainMap i = hom_map(ha, hb, id, stalk_map(s.f));
  ChainMap p = hom_map(hb, hc, id, stalk_map(s.g));
  return long_exact_sequence(i, p, 0, range, [](char w, int n) {
    return ext_label("M", w == 'A' ? "N" : w == 'B' ? "N'" : "N''", n);
  });
}

inline Precover precover_by(const ZmModule& k, const SubcatDescriptor& x, Precovering policy) {
  if (policy == Precovering::stop_in_add && x.contains(k)) return identity_precover(k, x);
  return x_precover(k, x);
}

/// Proper resolutions of N, N', N'' with the middle one degreewise P ⊕ P''.
struct Horseshoe {
  Complex left, mid, right;
  ChainMap incl, proj;  // left -> mid -> right
  ModuleMorphism aug_left, aug_mid, aug_right;
};

inline Horseshoe horseshoe(const ShortExactSequence& s, const SubcatDescriptor& x, int depth,
                           Precovering policy = Precovering::stop_in_add) {
  const Integer& mod = s.f.source().modulus();
  ModuleMorphism f = s.f, g = s.g;
  KernelResult k{s.left(), ModuleMorphism::identity(s.left())};
  KernelResult km{s.middle(), ModuleMorphism::identity(s.middle())};
  KernelResult kr{s.right(), ModuleMorphism::identity(s.right())};
  std::map<int, ZmModule> cl, cm, cr;
  std::map<int, ModuleMorphism> dl, dm, dr, in, pr;
  Horseshoe h;
  for (int j = 0; j <= depth; ++j) {
    Precover e = precover_by(k.module, x, policy), er = precover_by(kr.module, x, policy);
    HomSpace into_mid(er.cover, km.module), into_right(er.cover, kr.module);
    auto lambda = solve_hom(into_mid, into_right,
                            [&](const ModuleMorphism& t) { return compose(g, t); }, er.map);
    if (!lambda) throw NotXAcyclicInput("horseshoe: precover does not lift to the middle term");
    SumLayout layout(mod, {e.cover, er.cover});
    SumLayout target(mod, {km.module});
    ModuleMorphism em =
        block_morphism(layout, target, {{compose(f, e.map), *lambda}});
    cl.emplace(-j, e.cover);
    cm.emplace(-j, layout.total());
    cr.emplace(-j, er.cover);
    in.emplace(-j, layout.injection(0));
    pr.emplace(-j, layout.projection(1));
    if (j == 0) {
      h.aug_left = e.map;
      h.aug_mid = em;
      h.aug_right = er.map;
    } else {
      dl.emplace(-j, compose(k.inclusion, e.map));
      dm.emplace(-j, compose(km.inclusion, em));
      dr.emplace(-j, compose(kr.inclusion, er.map));
    }
    KernelResult nk = kernel(e.map), nm = kernel(em), nr = kernel(er.map);
    f = factor_through_mono(nm.inclusion, compose(layout.injection(0), nk.inclusion));
    g = factor_through_mono(nr.inclusion, compose(layout.projection(1), nm.inclusion));
    k = nk;
    km = nm;
    kr = nr;
  }
  h.left = Complex::from_maps(mod, cl, dl);
  h.mid = Complex::from_maps(mod, cm, dm);
  h.right = Complex::from_maps(mod, cr, dr);
  h.incl = ChainMap(h.left, h.mid, in);
  h.proj = ChainMap(h.mid, h.right, pr);
  return h;
}

/// Hom(-, M) applied to horseshoe resolutions of an X-acyclic sequence.
inline ExactSequence les_contravariant(const ShortExactSequence& s, const ZmModule& m,
                                       const SubcatDescriptor& x, int range) {
  require_x_acyclic(s, x);
  Horseshoe h = horseshoe(s, x, range + 2);
  HomComplex ha(h.right, stalk(m)), hb(h.mid, stalk(m)), hc(h.left, stalk(m));
  ChainMap id = ChainMap::identity(stalk(m));
  ChainMap i = hom_map(ha, hb, h.proj, id);
  ChainMap p = hom_map(hb, hc, h.incl, id);
  return long_exact_sequence(i, p, 0, range, [](char w, int n) {
    return ext_label(w == 'A' ? "N''" : w == 'B' ? "N'" : "N", "M", n);
  });
}

/// Lift of f: M -> M' to P -> P' by descending lifts through the resolution.
inline ChainMap comparison_lift(const ModuleMorphism& f, const ProperResolution& p,
                                const ProperResolution& q, const SubcatDescriptor& x) {
  ChainMap alpha = compose(stalk_map(f), p.augmentation_map());
  return lift_through(q.augmentation_map(), alpha, x, q.acyclic_above());
}

/// Lift of f: M -> M' found as one linear system over Hom^0(P, P'):
/// δ^0 F = 0 and aug' ∘ F^0 = f ∘ aug.
inline ChainMap comparison_lift_global(const ModuleMorphism& f, const ProperResolution& p,
                                       const ProperResolution& q) {
  HomComplex h(p.complex, q.complex);
  const ModuleMorphism d0 = h.complex().d(0);
  HomSpace aug_space(p.complex.at(0), q.module);
  const ZmModule& unknowns = h.complex().at(0);
  std::size_t r1 = d0.target().rank(), r2 = aug_space.dimension(), c = unknowns.rank();
  IntMatrix a(r1 + r2, c);
  IntVector b(r1 + r2), moduli;
  for (const auto& o : d0.target().orders()) moduli.push_back(o);
  for (const auto& o : aug_space.module().orders()) moduli.push_back(o);
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t t = 0; t < r1; ++t) a(t, j) = d0(t, j);
    IntVector e(c);
    e[j] = 1;
    IntVector col = aug_space.to_coords(compose(q.augmentation, h.component(0, e, 0)));
    for (std::size_t t = 0; t < r2; ++t) a(r1 + t, j) = col[t];
  }
  IntVector rhs = aug_space.to_coords(compose(f, p.augmentation));
  for (std::size_t t = 0; t < r2; ++t) b[r1 + t] = rhs[t];
  auto sol = solve_linear_mod(a, b, moduli, &unknowns.orders());
  if (!sol) throw NoPreimage("comparison_lift_global: no chain map lifts f");
  return ChainMap(p.complex, q.complex, h.family(0, *sol));
}

/// Ext^n(f, N): Ext^n(M', N) -> Ext^n(M, N), checked against a second, independent lift.
inline ModuleMorphism ext_induced_map(const ModuleMorphism& f, const ZmModule& n_mod, int n,
                                      const SubcatDescriptor& x) {
  auto p = proper_resolution(f.source(), x, n + 2);
  auto q = proper_resolution(f.target(), x, n + 2);
  HomComplex from(q.complex, stalk(n_mod)), to(p.complex, stalk(n_mod));
  HomologyData hf = homology_data(from.complex(), n), ht = homology_data(to.complex(), n);
  ChainMap id = ChainMap::identity(stalk(n_mod));
  auto induced = [&](const ChainMap& lift) {
    return homology_map(hf, ht, hom_map(from, to, lift, id).at(n));
  };
  ModuleMorphism first = induced(comparison_lift(f, p, q, x));
  ModuleMorphism second = induced(comparison_lift_global(f, p, q));
  if (first != second)
    throw InvariantViolation("ext_induced_map: two lifts induce different maps in degree " +
                             std::to_string(n));
  return first;
}

/// The Avramov–Martsinkovsky sequence
/// 0 -> Ext^1_X -> Ext^1_W -> Êxt^1_W -> Ext^2_X -> ... with its boundary checks.
struct AmSequence {
  ExactSequence sequence;
  int d = 0;  // X-pd(M)
  int range = 0;
  bool cone_h1_vanishes = false;
  bool ext_vanishes_above_d = false;
  std::optional<bool> tate_agrees;  // set when W is PROJ

  bool certified() const {
    return sequence.exact() && cone_h1_vanishes && ext_vanishes_above_d &&
           tate_agrees.value_or(true);
  }
};

inline AmSequence am_sequence(const ZmModule& m, const ZmModule& n_mod, const SubcatDescriptor& x,
                              const SubcatDescriptor& w, int depth) {
  require_same_modulus(m, n_mod, "am_sequence");
  auto ly = liang_yang(m, x, w, depth);
  AmSequence am;
  am.d = *ly.pd.value;
  if (depth < am.d + 3)
    throw WindowTooSmall("am_sequence: depth must be at least X-pd + 3");
  am.range = depth - 2;
  // 0 -> Hom(W[1], N) -> Hom(cone, N) -> Hom(X, N) -> 0
  HomComplex ha(shift(ly.w.complex, 1), stalk(n_mod)), hb(ly.cone.complex, stalk(n_mod)),
      hc(ly.x.complex, stalk(n_mod));
  ChainMap id = ChainMap::identity(stalk(n_mod));
  ChainMap i = hom_map(ha, hb, ly.cone.projection, id);
  ChainMap p = hom_map(hb, hc, ly.cone.inclusion, id);
  ExactSequence full = long_exact_sequence(i, p, 1, am.range + 1, [](char which, int n) {
    if (which == 'A') return "Ext^" + std::to_string(n - 1) + "_W(M,N)";
    if (which == 'C') return "Ext^" + std::to_string(n) + "_X(M,N)";
    if (n == 1) return std::string("H^1(Hom(cone(f),N))");
    return "Êxt^" + std::to_string(n - 1) + "_W(M,N)";
  });
  // From H^1(Hom(cone, N)), which must vanish, to Ext^{range+1}_X.
  am.sequence = full.slice(2, full.nodes.size() - 1);
  am.cone_h1_vanishes = am.sequence.nodes.front().module.is_zero();
  am.ext_vanishes_above_d = homology(hc.complex(), am.d + 1).is_trivial();
  if (same_subcategory(w, SubcatDescriptor::PROJ(m.modulus()))) {
    bool agree = true;
    for (int n = 1; n < am.range && agree; ++n)
      agree = homology(hb.complex(), n + 1) == tate_ext_complete(m, n_mod, n, n + 2);
    am.tate_agrees = agree;
  }
  return am;
}

}  // namespace relhom
