#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relhom/module_ops.hpp"
#include "relhom/random.hpp"

using namespace relhom;

namespace {

ZmModule mod(long m, std::initializer_list<long> orders) {
  IntVector o;
  for (long d : orders) o.emplace_back(d);
  return ZmModule(m, o);
}

ModuleMorphism times(long m, long d_src, long d_tgt, long a) {
  return ModuleMorphism(mod(m, {d_src}), mod(m, {d_tgt}), IntMatrix{{a}});
}

std::set<oracle::Elem> set_kernel(const ModuleMorphism& f) {
  std::set<oracle::Elem> k;
  auto to = oracle::orders_of(f.target());
  for (const auto& x : oracle::elements(f.source()))
    if (oracle::is_zero(oracle::apply(f.entries(), to, x))) k.insert(x);
  return k;
}

std::set<oracle::Elem> set_image(const ModuleMorphism& f) {
  std::set<oracle::Elem> im;
  auto to = oracle::orders_of(f.target());
  for (const auto& x : oracle::elements(f.source())) im.insert(oracle::apply(f.entries(), to, x));
  return im;
}

}  // namespace

TEST(ZmModule, CanonicalForm) {
  ZmModule m = mod(4, {2, 4, 1, 2});
  EXPECT_EQ(m.orders(), (IntVector{4, 2, 2}));
  EXPECT_EQ(m.cardinality(), 16);
  EXPECT_EQ(m.to_string(), "Z4+Z2+Z2@4");
  EXPECT_THROW(mod(4, {3}), InvariantViolation);
  EXPECT_THROW(ZmModule(1, {}), InvariantViolation);
}

TEST(ModuleMorphism, RejectsIllDefinedEntries) {
  // x -> x from Z2 to Z4 is not well defined; x -> 2x is.
  EXPECT_THROW(times(4, 2, 4, 1), InvariantViolation);
  EXPECT_NO_THROW(times(4, 2, 4, 2));
  EXPECT_THROW(ModuleMorphism(mod(4, {4}), mod(8, {4}), IntMatrix{{1}}), ModulusMismatch);
}

TEST(HomGroup, Examples) {
  auto h = hom_group(mod(4, {2}), mod(4, {2}));
  EXPECT_EQ(h.group.invariant_factors(), (IntVector{2}));
  ASSERT_EQ(h.basis.size(), 1u);
  EXPECT_EQ(h.basis[0], ModuleMorphism::identity(mod(4, {2})));
  EXPECT_EQ(oracle::count_homs(mod(4, {2}), mod(4, {2})), 2);

  EXPECT_EQ(hom_group(mod(4, {4}), mod(4, {2})).group.invariant_factors(), (IntVector{2}));

  auto z = hom_group(ZmModule::zero(4), mod(4, {4, 2}));
  EXPECT_TRUE(z.group.is_trivial());
  EXPECT_TRUE(z.basis.empty());
  EXPECT_THROW(hom_group(mod(4, {2}), mod(8, {2})), ModulusMismatch);
}

TEST(HomGroup, ExhaustiveAgainstEnumeration) {
  for (long m : {2, 3, 4, 5, 6, 8, 9, 12, 16}) {
    auto mods = oracle::small_modules(m, 16);
    for (const auto& a : mods)
      for (const auto& b : mods) {
        AbGroup g = hom_group(a, b).group;
        for (long e = 1; e <= m; ++e)
          ASSERT_EQ(g.count_killed_by(e).get_si(), oracle::count_homs(a, b, e == m ? 0 : e))
              << a.to_string() << " -> " << b.to_string() << " e=" << e;
      }
  }
}

TEST(Kernel, Examples) {
  auto k = kernel(times(4, 4, 4, 2));
  EXPECT_EQ(k.module, mod(4, {2}));
  EXPECT_TRUE(compose(times(4, 4, 4, 2), k.inclusion).is_zero());

  EXPECT_TRUE(kernel(ModuleMorphism::identity(mod(4, {4, 2}))).module.is_zero());

  auto z = kernel(ModuleMorphism::zero(mod(4, {2}), mod(4, {4})));
  EXPECT_EQ(z.module, mod(4, {2}));
  EXPECT_EQ(z.inclusion, ModuleMorphism::identity(mod(4, {2})));
}

TEST(Cokernel, Examples) {
  EXPECT_EQ(cokernel(times(4, 4, 4, 2)).module, mod(4, {2}));
  EXPECT_TRUE(cokernel(ModuleMorphism::identity(mod(4, {4}))).module.is_zero());
  EXPECT_EQ(cokernel(ModuleMorphism::zero(mod(4, {4}), mod(4, {2}))).module, mod(4, {2}));
}

TEST(KernelCokernel, OrderEquationsOnRandomMorphisms) {
  Rng rng(2024);
  for (long m : {4, 8, 9, 12}) {
    for (int trial = 0; trial < 40; ++trial) {
      ZmModule a = random_module(rng, m, 3), b = random_module(rng, m, 3);
      ModuleMorphism f = random_morphism(rng, a, b);
      auto k = kernel(f);
      auto c = cokernel(f);
      Integer im = image_order(f);
      EXPECT_EQ(a.cardinality(), k.module.cardinality() * im);
      EXPECT_EQ(c.module.cardinality(), b.cardinality() / im);
      EXPECT_TRUE(compose(f, k.inclusion).is_zero());
      EXPECT_TRUE(compose(c.projection, f).is_zero());
      EXPECT_TRUE(is_mono(k.inclusion));
      EXPECT_TRUE(is_epi(c.projection));
      // The inclusion's image is the set-theoretic kernel.
      EXPECT_EQ(set_image(k.inclusion), set_kernel(f));
      EXPECT_EQ(k.module.group(), AbGroup::from_cyclic_orders(k.module.orders()));
    }
  }
}

TEST(DirectSum, Examples) {
  auto s = direct_sum({mod(4, {4, 2}), mod(4, {2})});
  EXPECT_EQ(s.module().orders(), (IntVector{4, 2, 2}));
  EXPECT_TRUE(direct_sum(Integer(4), {}).module().is_zero());
  EXPECT_EQ(direct_sum({mod(4, {2}), mod(4, {4})}).module().orders(), (IntVector{4, 2}));
  EXPECT_THROW(direct_sum({mod(4, {2}), mod(8, {2})}), ModulusMismatch);
}

TEST(DirectSum, BiproductIdentities) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ZmModule> parts;
    std::size_t n = 1 + uniform_index(rng, 3);
    for (std::size_t i = 0; i < n; ++i) parts.push_back(random_module(rng, 12, 2));
    auto s = direct_sum(Integer(12), parts);
    ModuleMorphism sum = ModuleMorphism::zero(s.module(), s.module());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto pi = compose(s.projection(i), s.injection(j));
        if (i == j)
          EXPECT_EQ(pi, ModuleMorphism::identity(parts[i]));
        else
          EXPECT_TRUE(pi.is_zero());
      }
      sum = sum + compose(s.injection(i), s.projection(i));
    }
    EXPECT_EQ(sum, ModuleMorphism::identity(s.module()));
  }
}

TEST(Decompose, Examples) {
  EXPECT_EQ(decompose(IntMatrix{{2}}, 4), mod(4, {2}));
  EXPECT_TRUE(decompose(IntMatrix{{1}}, 4).is_zero());
  EXPECT_EQ(decompose(IntMatrix{{0}}, 4), mod(4, {4}));
}

TEST(Decompose, IdempotentOnCanonicalPresentations) {
  for (long m : {4, 8, 9, 12})
    for (const auto& a : oracle::small_modules(m, 64)) {
      // Presentation of ⊕ Z_{d_i} over Z/m: relation d_i on generator i.
      IntMatrix p = IntMatrix::diagonal(a.orders());
      ZmModule d = decompose(p, m);
      EXPECT_EQ(d.group(), a.group()) << a.to_string();
      EXPECT_EQ(decompose(IntMatrix::diagonal(d.orders()), m), d);
    }
}

TEST(IsInAdd, Examples) {
  EXPECT_TRUE(is_in_add(mod(4, {2, 4}), {mod(4, {4, 2})}));
  EXPECT_FALSE(is_in_add(mod(4, {2}), {mod(4, {4})}));
  EXPECT_TRUE(is_in_add(ZmModule::zero(4), {mod(4, {4})}));
  // Z6 ≅ Z3 ⊕ Z2 as Z/6-modules.
  EXPECT_TRUE(is_in_add(mod(6, {6}), {mod(6, {3, 2})}));
  EXPECT_THROW(is_in_add(mod(4, {2}), {mod(8, {2})}), ModulusMismatch);
}

TEST(FactorThroughMono, RecoversFactorisation) {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    ZmModule a = random_module(rng, 8, 2), b = random_module(rng, 8, 3);
    ModuleMorphism f = random_morphism(rng, a, b);
    auto im = image(f);
    ModuleMorphism h = factor_through_mono(im.inclusion, f);
    EXPECT_EQ(compose(im.inclusion, h), f);
  }
}
