#pragma once

// Seeded generators for modules, morphisms and complexes at desk scale.

#include <cstdint>
#include <random>
#include <vector>

#include "relhom/cohomology.hpp"
#include "relhom/complex.hpp"
#include "relhom/hom.hpp"
#include "relhom/module.hpp"
#include "relhom/module_ops.hpp"
#include "relhom/relative.hpp"

namespace relhom {

using Rng = std::mt19937_64;

inline std::vector<Integer> divisors_above_one(const Integer& m) {
  std::vector<Integer> out;
  for (Integer d = 2; d <= m; ++d)
    if (divides(d, m)) out.push_back(d);
  return out;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Module with between min_rank and max_rank cyclic factors of order dividing m.
inline ZmModule random_module(Rng& rng, const Integer& m, std::size_t max_rank,
                              std::size_t min_rank = 0) {
  auto ds = divisors_above_one(m);
  std::size_t rank = min_rank + uniform_index(rng, max_rank - min_rank + 1);
  IntVector orders;
  for (std::size_t i = 0; i < rank; ++i) orders.push_back(ds[uniform_index(rng, ds.size())]);
  return ZmModule(m, orders);
}

inline IntVector random_element(Rng& rng, const ZmModule& m) {
  IntVector x(m.rank());
  for (std::size_t i = 0; i < m.rank(); ++i) {
    unsigned long bound = m.order(i).get_ui();
    x[i] = static_cast<unsigned long>(uniform_index(rng, bound));
  }
  return x;
}

inline ModuleMorphism random_morphism(Rng& rng, const ZmModule& source, const ZmModule& target) {
  HomSpace h(source, target);
  return h.to_morphism(random_element(rng, h.module()));
}

/// Random complex in degrees [lo, lo + width - 1]; each differential is a
/// random map out of the cokernel of the previous one, so d∘d = 0 by construction.
inline Complex random_complex(Rng& rng, const Integer& m, int lo, int width, std::size_t max_rank) {
  if (width <= 0) return Complex(m);
  std::vector<ZmModule> comps{random_module(rng, m, max_rank)};
  std::vector<ModuleMorphism> ds;
  for (int i = 1; i < width; ++i) {
    ZmModule next = random_module(rng, m, max_rank);
    CokernelResult c = ds.empty() ? cokernel(ModuleMorphism::zero(ZmModule::zero(m), comps.back()))
                                  : cokernel(ds.back());
    ds.push_back(compose(random_morphism(rng, c.module, next), c.projection));
    comps.push_back(next);
  }
  return Complex(m, lo, std::move(comps), std::move(ds));
}

/// Random chain map X -> Y: a random combination of generators of the degree-0
/// cycles of Hom(X, Y).
inline ChainMap random_chain_map(Rng& rng, const Complex& x, const Complex& y) {
  HomComplex h(x, y);
  if (!h.in_support(0)) return ChainMap::zero(x, y);
  KernelResult z = kernel(h.complex().d(0));
  IntVector c = z.inclusion.apply(random_element(rng, z.module));
  return h.chain_map(c);
}

struct RandomFraction {
  Fraction fraction;
  Complex d;
};

/// D <=s= D ⊕ E -f-> S with E contractible and s = (id_D, φ): s is an
/// X-quasi-isomorphism for every X because its cone is contractible.
inline RandomFraction random_fraction(Rng& rng, const Integer& m) {
  Complex d = random_complex(rng, m, -1, 1 + int(uniform_index(rng, 3)), 2);
  Complex z = random_complex(rng, m, -1, 1 + int(uniform_index(rng, 2)), 2);
  Complex e = cone(ChainMap::identity(z)).complex;
  ComplexSum y = complex_sum(m, {d, e});
  ChainMap phi = random_chain_map(rng, e, d);
  ChainMap s = y.projections[0] + compose(phi, y.projections[1]);
  Complex target = random_complex(rng, m, -1, 1 + int(uniform_index(rng, 3)), 2);
  ChainMap f = random_chain_map(rng, y.complex, target);
  return {Fraction{y.complex, s, f}, d};
}

inline ModuleMorphism inverse_iso(const ModuleMorphism& f) {
  HomSpace h(f.target(), f.source()), e(f.target(), f.target());
  auto g = solve_hom(h, e, [&](const ModuleMorphism& t) { return compose(f, t); },
                     ModuleMorphism::identity(f.target()));
  if (!g) throw InvariantViolation("inverse_iso: not invertible");
  return *g;
}

inline ModuleMorphism random_automorphism(Rng& rng, const ZmModule& a) {
  for (;;) {
    ModuleMorphism f = random_morphism(rng, a, a);
    if (is_iso(f)) return f;
  }
}

/// N -> N ⊕ N'' -> N'' twisted by a random automorphism of the middle term.
inline ShortExactSequence random_split_ses(Rng& rng, const Integer& m, std::size_t max_rank = 2) {
  ZmModule a = random_module(rng, m, max_rank), c = random_module(rng, m, max_rank);
  DirectSum s = direct_sum(m, {a, c});
  ModuleMorphism t = random_automorphism(rng, s.module());
  return {compose(t, s.injection(0)), compose(s.projection(1), inverse_iso(t))};
}

/// Ker h -> B -> Im h for a random h: B -> Q.
inline ShortExactSequence random_ses(Rng& rng, const Integer& m, std::size_t max_rank = 2) {
  ZmModule b = random_module(rng, m, max_rank), q = random_module(rng, m, max_rank);
  ModuleMorphism h = random_morphism(rng, b, q);
  KernelResult k = kernel(h), im = image(h);
  return {k.inclusion, factor_through_mono(im.inclusion, h)};
}

}  // namespace relhom
