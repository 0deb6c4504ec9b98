#pragma once

// Subcategories X = add(generators) of Mod-Z/m, X-acyclicity, precovers,
// proper resolutions, and the lifting / resolution / splitting constructions
// for complexes.

#include <optional>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "relhom/complex.hpp"
#include "relhom/hom.hpp"
#include "relhom/module_ops.hpp"
#include "relhom/smith.hpp"

namespace relhom {

/// add(generators) over Z/m.
struct SubcatDescriptor {
  Integer modulus;
  std::vector<ZmModule> generators;
  std::string name;
  /// Custom lists carry this flag: the caller vouches that add(generators) is
  /// closed under extensions and has an injective cogenerator.
  bool hypotheses_asserted_by_user = false;

  SubcatDescriptor() = default;
  SubcatDescriptor(Integer m, std::vector<ZmModule> gens, std::string label,
                   bool asserted = true)
      : modulus(std::move(m)), generators(std::move(gens)), name(std::move(label)),
        hypotheses_asserted_by_user(asserted) {
    if (generators.empty()) throw InvariantViolation("subcategory needs at least one generator");
    for (const auto& g : generators)
      if (g.modulus() != modulus) throw ModulusMismatch("subcategory generator modulus");
  }

  /// Projective modules: add(Z/m).
  static SubcatDescriptor PROJ(const Integer& m) {
    return SubcatDescriptor(m, {ZmModule::free(m, 1)}, "PROJ", false);
  }

  /// Gorenstein projectives; every module over the self-injective ring Z/m.
  static SubcatDescriptor GP(const Integer& m) {
    std::vector<ZmModule> gens;
    for (Integer d = m; d >= 2; --d)
      if (divides(d, m)) gens.push_back(ZmModule::cyclic(m, d));
    return SubcatDescriptor(m, std::move(gens), "GP", false);
  }

  bool contains(const ZmModule& x) const { return is_in_add(x, generators); }

  /// add(this) ⊆ add(other).
  bool subset_of(const SubcatDescriptor& other) const {
    for (const auto& g : generators)
      if (!other.contains(g)) return false;
    return true;
  }
};

/// Hom(G, S) acyclic for every generator G, in all degrees or only above `above`.
inline bool is_x_acyclic(const Complex& s, const SubcatDescriptor& x,
                         std::optional<int> above = std::nullopt) {
  for (const auto& g : x.generators)
    if (!is_acyclic(hom_complex(stalk(g, 0), s).complex(), above)) return false;
  return true;
}

inline bool is_x_quasi_iso(const ChainMap& f, const SubcatDescriptor& x,
                           std::optional<int> above = std::nullopt) {
  return is_x_acyclic(cone(f).complex, x, above);
}

/// Hom(G, f) surjective for every generator G; when it is, `lifts` (if given)
/// receives for each generator a preimage of every Hom(G, target) basis element.
inline bool hom_surjective(const ModuleMorphism& f, const SubcatDescriptor& x,
                           std::vector<std::vector<ModuleMorphism>>* lifts = nullptr) {
  if (lifts) lifts->clear();
  for (const auto& g : x.generators) {
    HomSpace from(g, f.source()), to(g, f.target());
    std::vector<ModuleMorphism> row;
    for (std::size_t k = 0; k < to.dimension(); ++k) {
      auto pre = solve_hom(from, to, [&](const ModuleMorphism& h) { return compose(f, h); },
                           to.basis_element(k));
      if (!pre) return false;
      row.push_back(*pre);
    }
    if (lifts) lifts->push_back(std::move(row));
  }
  return true;
}

/// e: cover -> M with Hom(G, e) onto for every generator G.
struct Precover {
  ZmModule cover;
  ModuleMorphism map;
  /// lifts[i][k]: G_i -> cover with map ∘ lifts[i][k] = k-th basis map G_i -> M.
  std::vector<std::vector<ModuleMorphism>> lifts;

  bool verify(const SubcatDescriptor& x) const {
    if (lifts.size() != x.generators.size()) return false;
    for (std::size_t i = 0; i < x.generators.size(); ++i) {
      HomSpace h(x.generators[i], map.target());
      if (lifts[i].size() != h.dimension()) return false;
      for (std::size_t k = 0; k < h.dimension(); ++k)
        if (compose(map, lifts[i][k]) != h.basis_element(k)) return false;
    }
    return true;
  }
};

/// Canonical precover: one copy of G for every basis map G -> M, evaluated.
inline Precover x_precover(const ZmModule& m, const SubcatDescriptor& x) {
  std::vector<ZmModule> parts;
  std::vector<ModuleMorphism> evals;
  std::vector<std::vector<std::size_t>> slot(x.generators.size());
  for (std::size_t i = 0; i < x.generators.size(); ++i) {
    require_same_modulus(m, x.generators[i], "x_precover");
    HomSpace h(x.generators[i], m);
    for (std::size_t k = 0; k < h.dimension(); ++k) {
      slot[i].push_back(parts.size());
      parts.push_back(x.generators[i]);
      evals.push_back(h.basis_element(k));
    }
  }
  SumLayout layout(m.modulus(), parts);
  SumLayout target(m.modulus(), {m});
  std::vector<std::vector<ModuleMorphism>> blocks(1, evals);
  Precover p{layout.total(), block_morphism(layout, target, blocks), {}};
  for (std::size_t i = 0; i < x.generators.size(); ++i) {
    p.lifts.emplace_back();
    for (std::size_t s : slot[i]) p.lifts.back().push_back(layout.injection(s));
  }
  return p;
}

/// The identity is a precover of any M already in add(X).
inline Precover identity_precover(const ZmModule& m, const SubcatDescriptor& x) {
  Precover p{m, ModuleMorphism::identity(m), {}};
  for (const auto& g : x.generators) p.lifts.push_back(HomSpace(g, m).basis());
  return p;
}

enum class Precovering {
  /// Canonical precover at every step.
  canonical,
  /// Canonical precover until the module to cover lies in add(X), then the
  /// identity: the resolution stops at length X-pd.
  stop_in_add,
};

/// X^{-depth} -> ... -> X^0 -> M with Hom(G, -)-exact augmented sequence.
struct ProperResolution {
  ZmModule module;
  Complex complex;  // support [-depth, 0]
  ModuleMorphism augmentation;
  int depth = 0;
  /// Set when some syzygy was covered by the identity: the resolution is
  /// complete and exact in every degree.
  bool finite = false;
  /// syzygies[k] = K_k with K_0 = M; K_k -> X^{-k+1} for k >= 1.
  std::vector<KernelResult> syzygies;
  /// precovers[k]: X^{-k} -> K_k; its lifts are the properness certificates.
  std::vector<Precover> precovers;

  /// The resolution as a chain map onto the stalk complex M.
  ChainMap augmentation_map() const {
    return ChainMap(complex, stalk(module, 0), {{0, augmentation}});
  }

  /// Degrees above which Ker(augmentation) is X-acyclic (nullopt: all degrees).
  std::optional<int> acyclic_above() const {
    if (finite) return std::nullopt;
    return -depth;
  }

  /// X^{-depth} -> ... -> X^0 -> M with M in degree 1.
  Complex augmented() const {
    std::vector<ZmModule> comps;
    std::vector<ModuleMorphism> ds;
    for (int k = -depth; k <= 0; ++k) comps.push_back(complex.at(k));
    comps.push_back(module);
    for (int k = -depth; k < 0; ++k) ds.push_back(complex.d(k));
    ds.push_back(augmentation);
    return Complex(module.modulus(), -depth, std::move(comps), std::move(ds));
  }

  /// Re-checks every precover certificate.
  bool verify_certificates(const SubcatDescriptor& x) const {
    for (const auto& p : precovers)
      if (!p.verify(x)) return false;
    return true;
  }
};

inline ProperResolution proper_resolution(const ZmModule& m, const SubcatDescriptor& x, int depth,
                                          Precovering policy = Precovering::stop_in_add,
                                          std::stop_token stop = {}) {
  if (depth < 0) throw InvariantViolation("proper_resolution: depth must be non-negative");
  require_same_modulus(m, x.generators.front(), "proper_resolution");
  const Integer& mod = m.modulus();
  ProperResolution r;
  r.module = m;
  r.depth = depth;
  r.syzygies.push_back({m, ModuleMorphism::identity(m)});
  std::vector<ZmModule> comps;
  std::vector<ModuleMorphism> covers;  // X^{-k} -> K_k
  for (int k = 0; k <= depth; ++k) {
    if (stop.stop_requested()) throw Cancelled("proper_resolution cancelled at degree " +
                                               std::to_string(-k));
    const ZmModule& kk = r.syzygies[k].module;
    if (kk.is_zero()) {
      r.finite = true;
      break;
    }
    bool in_add = policy == Precovering::stop_in_add && x.contains(kk);
    Precover p = in_add ? identity_precover(kk, x) : x_precover(kk, x);
    comps.push_back(p.cover);
    covers.push_back(p.map);
    r.precovers.push_back(p);
    if (in_add) {
      r.finite = true;
      break;
    }
    if (k < depth) r.syzygies.push_back(kernel(p.map));
  }
  // X^{-k-1} -> X^{-k} is incl(K_{k+1}) ∘ e_{k+1}.
  std::map<int, ZmModule> cm;
  std::map<int, ModuleMorphism> dm;
  for (int k = 0; k <= depth; ++k)
    cm.emplace(-k, k < int(comps.size()) ? comps[k] : ZmModule::zero(mod));
  for (int k = 0; k + 1 < int(comps.size()); ++k)
    dm.emplace(-k - 1, compose(r.syzygies[k + 1].inclusion, covers[k + 1]));
  r.complex = Complex::from_maps(mod, cm, dm);
  r.augmentation = covers.empty() ? ModuleMorphism::zero(r.complex.at(0), m) : covers[0];
  return r;
}

/// X-pd(M): exact value when some syzygy (canonical precovers) lies in add(X)
/// within max_depth steps, else only the lower bound max_depth.
struct XPd {
  std::optional<int> value;
  int lower_bound = 0;

  bool finite() const { return value.has_value(); }
  std::string to_string() const {
    return value ? std::to_string(*value) : "AtLeast(" + std::to_string(lower_bound) + ")";
  }
};

inline XPd x_pd(const ZmModule& m, const SubcatDescriptor& x, int max_depth,
                std::stop_token stop = {}) {
  ZmModule k = m;
  for (int n = 0; n <= max_depth; ++n) {
    if (stop.stop_requested()) throw Cancelled("x_pd cancelled");
    if (x.contains(k)) return {n, n};
    if (n < max_depth) k = kernel(x_precover(k, x).map).module;
  }
  return {std::nullopt, max_depth};
}

/// Lifts alpha: D -> N through a degreewise surjective g: M -> N whose kernel is
/// X-acyclic above `acyclic_above` and with Hom(G, g^i) onto: the descending
/// construction β^i = incl μ^i + γ^i with g γ^i = α^i and
/// δ_M incl μ^i = β^{i+1} δ_D^i - δ_M γ^i.
inline ChainMap lift_through(const ChainMap& g, const ChainMap& alpha, const SubcatDescriptor& x,
                             std::optional<int> acyclic_above = std::nullopt) {
  const Complex& d = alpha.source();
  const Complex& m = g.source();
  if (alpha.target() != g.target()) throw DimensionMismatch("lift_through: alpha and g disagree");
  if (d.empty()) return ChainMap::zero(d, m);
  for (int k = d.lo(); k <= d.hi(); ++k)
    if (!x.contains(d.at(k)))
      throw InvariantViolation("lift_through: source component " + std::to_string(k) +
                               " is not in add(" + x.name + ")");
  if (acyclic_above && d.lo() < *acyclic_above)
    throw WindowTooSmall("lift_through: source reaches degree " + std::to_string(d.lo()) +
                         " but the kernel is only known to be acyclic above " +
                         std::to_string(*acyclic_above));
  std::map<int, ModuleMorphism> beta;
  ModuleMorphism above = ModuleMorphism::zero(d.at(d.hi() + 1), m.at(d.hi() + 1));
  for (int i = d.hi(); i >= d.lo(); --i) {
    HomSpace dm(d.at(i), m.at(i)), dn(d.at(i), g.target().at(i));
    ModuleMorphism gi = g.at(i);
    auto gamma = solve_hom(dm, dn, [&](const ModuleMorphism& h) { return compose(gi, h); },
                           alpha.at(i));
    if (!gamma)
      throw NoPreimage("lift_through: alpha^" + std::to_string(i) + " does not lift along g");
    ModuleMorphism target = compose(above, d.d(i)) - compose(m.d(i), *gamma);
    KernelResult ker = kernel(gi);
    HomSpace dk(d.at(i), ker.module), dnext(d.at(i), m.at(i + 1));
    ModuleMorphism step = compose(m.d(i), ker.inclusion);
    auto mu = solve_hom(dk, dnext, [&](const ModuleMorphism& h) { return compose(step, h); },
                        target);
    if (!mu) {
      if (acyclic_above && i <= *acyclic_above)
        throw WindowTooSmall("lift_through: no correction term at degree " + std::to_string(i));
      throw NoPreimage("lift_through: no correction term at degree " + std::to_string(i) +
                       " (kernel not X-acyclic or sequence not Hom-exact)");
    }
    ModuleMorphism b = compose(ker.inclusion, *mu) + *gamma;
    beta.emplace(i, b);
    above = b;
  }
  ChainMap result(d, m, beta);
  if (compose(g, result) != alpha) throw InvariantViolation("lift_through: g ∘ β != α");
  return result;
}

/// 0 -> K -> D -> T -> 0 with D componentwise in add(X), K X-acyclic above the
/// window bottom and the sequence Hom(G, -)-exact, plus the checks made on it.
struct ComplexResolution {
  Complex T, D, K;
  ChainMap lambda;  // K -> D
  ChainMap alpha;   // D -> T
  int window_bottom = 0;
  int stages = 0;
  bool components_in_add = false;
  bool kernel_x_acyclic = false;
  bool hom_exact = false;
  bool density = false;  // cone(alpha) X-acyclic above the window bottom

  bool ok() const { return components_in_add && kernel_x_acyclic && hom_exact && density; }
};

namespace detail {

inline ChainMap shift_chain_map_between(const ChainMap& f, int n, const Complex& src,
                                        const Complex& tgt) {
  std::map<int, ModuleMorphism> c;
  for (int k = f.lo(); k <= f.hi(); ++k) c.emplace(k - n, f.at(k));
  return ChainMap(src, tgt, c);
}

}  // namespace detail

/// X-resolution of a bounded complex T: resolve each T^{-n} (top degree moved to 0),
/// lift σ through the previous stage and take the mapping cone. The window is
/// `depth` degrees below the bottom of T.
inline ComplexResolution resolve_complex(const Complex& t_in, const SubcatDescriptor& x, int depth,
                                         Precovering policy = Precovering::stop_in_add,
                                         std::stop_token stop = {}) {
  if (depth < 0) throw InvariantViolation("resolve_complex: depth must be non-negative");
  const Integer& mod = t_in.modulus();
  if (mod != x.modulus) throw ModulusMismatch("resolve_complex: complex and subcategory moduli");
  Complex tt = t_in.trimmed();
  ComplexResolution out;
  if (tt.empty()) {
    out.T = t_in;
    out.D = out.K = Complex(mod);
    out.lambda = ChainMap::zero(out.K, out.D);
    out.alpha = ChainMap::zero(out.D, out.T);
    out.components_in_add = out.kernel_x_acyclic = out.hom_exact = out.density = true;
    return out;
  }
  for (int k = tt.lo(); k <= tt.hi(); ++k)
    if (!x_pd(tt.at(k), x, depth).finite())
      throw PdExceedsBudget("resolve_complex: component in degree " + std::to_string(k) + " (" +
                            tt.at(k).to_string() + ") has " + x.name + "-pd beyond " +
                            std::to_string(depth));
  const int top = tt.hi();
  const Complex t = shift(tt, top);  // now supported in [-N, 0]
  const int n_max = -t.lo();
  const int bottom = -n_max - depth;

  // Step 1.
  auto res0 = proper_resolution(t.at(0), x, n_max + depth, policy, stop);
  Complex d_prev = res0.complex;
  Complex t_prev = t.window(0, 0);
  ChainMap alpha_prev(d_prev, t_prev, {{0, res0.augmentation}});

  // Step 2.
  for (int n = 1; n <= n_max; ++n) {
    if (stop.stop_requested()) throw Cancelled("resolve_complex cancelled at stage " +
                                               std::to_string(n));
    Complex t_n = t.window(-n, 0);
    auto res = proper_resolution(t.at(-n), x, n_max - n + depth, policy, stop);
    Complex xs = shift(res.complex, n - 1);
    // σ ∘ β[n-1]: X[n-1] -> T(n-1), nonzero only in degree -n+1.
    ChainMap target_map(xs, t_prev, {{-n + 1, compose(t.d(-n), res.augmentation)}});
    ChainMap psi = lift_through(alpha_prev, target_map, x, bottom);
    Cone c = cone(psi);
    std::map<int, ModuleMorphism> a;
    for (int k = c.complex.lo(); k <= c.complex.hi(); ++k) {
      if (k < -n) continue;
      SumLayout tgt(mod, {t_n.at(k)});
      std::vector<std::vector<ModuleMorphism>> blocks(1, std::vector<ModuleMorphism>(2));
      if (k == -n) blocks[0][0] = res.augmentation;
      if (k > -n) blocks[0][1] = alpha_prev.at(k);
      a.emplace(k, block_morphism(c.layout(k), tgt, blocks));
    }
    d_prev = c.complex;
    t_prev = t_n;
    alpha_prev = ChainMap(d_prev, t_prev, a);
    out.stages = n;
  }

  // Step 3 is the identity for bounded T: D(N) already agrees with every
  // earlier stage in the degrees those stages fix.
  KernelComplex kc = kernel_complex(alpha_prev);
  Complex d_out = shift(d_prev, -top);
  Complex k_out = shift(kc.complex, -top);
  out.T = t_in;
  out.D = d_out;
  out.K = k_out;
  out.alpha = detail::shift_chain_map_between(alpha_prev, -top, d_out, t_in);
  out.lambda = detail::shift_chain_map_between(kc.inclusion, -top, k_out, d_out);
  out.window_bottom = bottom + top;

  out.components_in_add = true;
  for (int k = d_out.lo(); k <= d_out.hi(); ++k)
    if (!x.contains(d_out.at(k))) out.components_in_add = false;
  out.kernel_x_acyclic = is_x_acyclic(k_out, x, out.window_bottom);
  out.hom_exact = true;
  for (int k = d_out.lo(); k <= d_out.hi() && out.hom_exact; ++k)
    out.hom_exact = hom_surjective(out.alpha.at(k), x);
  out.density = is_x_quasi_iso(out.alpha, x, out.window_bottom);
  return out;
}

/// For an X-quasi-isomorphism f: S -> D with D componentwise in
/// add(X), some g: D -> S with f g homotopic to id_D. Solved as one system in
/// (g, h) ∈ Hom^0(D, S) × Hom^{-1}(D, D): δ g = 0 and f g - δ h = id_D.
inline ChainMap split_x_quasi_iso(const ChainMap& f, const SubcatDescriptor& x,
                                  std::optional<int> above = std::nullopt) {
  const Complex& s = f.source();
  const Complex& d = f.target();
  for (int k = d.lo(); k <= d.hi(); ++k)
    if (!x.contains(d.at(k)))
      throw InvariantViolation("split_x_quasi_iso: target component " + std::to_string(k) +
                               " is not in add(" + x.name + ")");
  if (!is_x_quasi_iso(f, x, above))
    throw NotXQuasiIso("split_x_quasi_iso: cone is not " + x.name + "-acyclic");
  HomComplex ds(d, s), dd(d, d);
  if (!dd.in_support(0)) return ChainMap::zero(d, s);
  const ZmModule zero = ZmModule::zero(d.modulus());
  ZmModule g_space = ds.in_support(0) ? ds.complex().at(0) : zero;
  ZmModule h_space = dd.in_support(-1) ? dd.complex().at(-1) : zero;
  ZmModule cyc_space = ds.in_support(1) ? ds.complex().at(1) : zero;
  ZmModule id_space = dd.complex().at(0);
  const std::size_t ng = g_space.rank(), nh = h_space.rank();
  const std::size_t rc = cyc_space.rank(), ri = id_space.rank();
  IntMatrix a(rc + ri, ng + nh);
  ModuleMorphism dg = ds.complex().d(0);
  ModuleMorphism post = hom_map(ds, dd, ChainMap::identity(d), f).at(0);
  ModuleMorphism dh = dd.complex().d(-1);
  for (std::size_t i = 0; i < rc; ++i)
    for (std::size_t j = 0; j < ng; ++j) a(i, j) = dg(i, j);
  for (std::size_t i = 0; i < ri; ++i) {
    for (std::size_t j = 0; j < ng; ++j) a(rc + i, j) = post(i, j);
    for (std::size_t j = 0; j < nh; ++j) a(rc + i, ng + j) = -dh(i, j);
  }
  IntVector b(rc + ri), moduli;
  IntVector id = dd.coords(ChainMap::identity(d));
  for (std::size_t i = 0; i < ri; ++i) b[rc + i] = id[i];
  for (const auto& q : cyc_space.orders()) moduli.push_back(q);
  for (const auto& q : id_space.orders()) moduli.push_back(q);
  IntVector unknowns = g_space.orders();
  unknowns.insert(unknowns.end(), h_space.orders().begin(), h_space.orders().end());
  auto sol = solve_linear_mod(a, b, moduli, &unknowns);
  if (!sol) {
    if (above) throw WindowTooSmall("split_x_quasi_iso: no splitting within the window");
    throw InvariantViolation("split_x_quasi_iso: X-quasi-isomorphism without a splitting");
  }
  IntVector gc(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(ng));
  return ds.chain_map(gc);
}

/// Right fraction D <=s= roof -f-> S.
struct Fraction {
  Complex roof;
  ChainMap s;  // roof -> D, an X-quasi-isomorphism
  ChainMap f;  // roof -> S
};

/// f/s = (f g)/Id_D with g from split_x_quasi_iso(s).
inline ChainMap reduce_fraction(const Fraction& fr, const SubcatDescriptor& x,
                                std::optional<int> above = std::nullopt) {
  if (fr.s.source() != fr.roof || fr.f.source() != fr.roof)
    throw DimensionMismatch("reduce_fraction: fraction legs do not share the roof");
  ChainMap g = split_x_quasi_iso(fr.s, x, above);
  return compose(fr.f, g);
}

}  // namespace relhom
