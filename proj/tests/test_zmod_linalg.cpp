#include <gtest/gtest.h>

#include <random>
#include <set>

#include "relhom/smith.hpp"

using namespace relhom;

namespace {

bool is_unimodular_pair(const IntMatrix& a, const IntMatrix& a_inv) {
  return a * a_inv == IntMatrix::identity(a.rows()) && a_inv * a == IntMatrix::identity(a.rows());
}

void expect_valid_snf(const IntMatrix& a) {
  SnfResult r = smith_normal_form(a);
  EXPECT_EQ(r.U * r.S * r.V, a);
  EXPECT_EQ(r.U_inv * a * r.V_inv, r.S);
  EXPECT_TRUE(is_unimodular_pair(r.U, r.U_inv));
  EXPECT_TRUE(is_unimodular_pair(r.V, r.V_inv));
  for (std::size_t i = 0; i < r.S.rows(); ++i)
    for (std::size_t j = 0; j < r.S.cols(); ++j)
      if (i != j) EXPECT_EQ(r.S(i, j), 0);
  IntVector d = r.diagonal();
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    EXPECT_GE(d[i], 0);
    EXPECT_TRUE(divides(d[i], d[i + 1])) << d[i] << " does not divide " << d[i + 1];
  }
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long bound) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

// Every x in Z_L^n with L the lcm of the row moduli.
bool brute_force_solvable(const IntMatrix& a, const IntVector& b, const IntVector& q) {
  Integer l = 1;
  for (const auto& v : q) l = lcm(l, v);
  const std::size_t n = a.cols();
  const long lim = l.get_si();
  std::vector<long> x(n, 0);
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < a.rows() && ok; ++i) {
      Integer s = 0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
      ok = divides(q[i], s - b[i]);
    }
    if (ok) return true;
    std::size_t k = 0;
    while (k < n && ++x[k] == lim) x[k++] = 0;
    if (k == n) return false;
  }
}

bool satisfies(const IntMatrix& a, const IntVector& x, const IntVector& b, const IntVector& q) {
  IntVector ax = a * x;
  for (std::size_t i = 0; i < ax.size(); ++i)
    if (!divides(q[i], ax[i] - b[i])) return false;
  return true;
}

// Calls fn on every matrix with entries in [0, bound_i) for row i.
template <class Fn>
void for_each_matrix(std::size_t rows, std::size_t cols, const IntVector& bounds, Fn fn) {
  IntMatrix m(rows, cols);
  for (;;) {
    fn(m);
    std::size_t k = 0;
    for (; k < rows * cols; ++k) {
      std::size_t i = k / cols, j = k % cols;
      if (++m(i, j) < bounds[i]) break;
      m(i, j) = 0;
    }
    if (k == rows * cols) return;
  }
}

}  // namespace

TEST(SmithNormalForm, DiagTwoThree) {
  IntMatrix a{{2, 0}, {0, 3}};
  SnfResult r = smith_normal_form(a);
  EXPECT_EQ(r.diagonal(), (IntVector{1, 6}));
  expect_valid_snf(a);
}

TEST(SmithNormalForm, ZeroOneByOne) {
  SnfResult r = smith_normal_form(IntMatrix{{0}});
  EXPECT_EQ(r.S, (IntMatrix{{0}}));
  EXPECT_EQ(r.U, (IntMatrix{{1}}));
  EXPECT_EQ(r.V, (IntMatrix{{1}}));
  EXPECT_EQ(r.rank, 0u);
}

TEST(SmithNormalForm, Identity) {
  SnfResult r = smith_normal_form(IntMatrix::identity(2));
  EXPECT_EQ(r.S, IntMatrix::identity(2));
}

TEST(SmithNormalForm, RandomMatricesSatisfyInvariants) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    expect_valid_snf(random_matrix(rng, r, c, 20));
  }
}

TEST(SmithNormalForm, TenByTenNeedsBigIntegers) {
  std::mt19937_64 rng(5);
  IntMatrix a = random_matrix(rng, 10, 10, 1000000);
  expect_valid_snf(a);
}

TEST(SolveLinearMod, Examples) {
  auto x = solve_linear_mod(IntMatrix{{2}}, {2}, {4});
  ASSERT_TRUE(x);
  EXPECT_TRUE(satisfies(IntMatrix{{2}}, *x, {2}, {4}));
  EXPECT_FALSE(solve_linear_mod(IntMatrix{{2}}, {1}, {4}));
  auto z = solve_linear_mod(IntMatrix{{1}}, {0}, {4});
  ASSERT_TRUE(z);
  EXPECT_TRUE(divides(4, (*z)[0]));
}

TEST(SolveLinearMod, DimensionMismatch) {
  EXPECT_THROW(solve_linear_mod(IntMatrix{{1, 2}}, {1, 2}, {4}), DimensionMismatch);
  EXPECT_THROW(solve_linear_mod(IntMatrix{{1, 2}}, {1}, {4, 4}), DimensionMismatch);
}

TEST(SolveLinearMod, ExhaustiveSingleRowUpToThreeUnknowns) {
  for (long q = 2; q <= 9; ++q)
    for (std::size_t n = 1; n <= 3; ++n)
      for_each_matrix(1, n, {q}, [&](const IntMatrix& a) {
        for (long b = 0; b < q; ++b) {
          auto x = solve_linear_mod(a, {b}, {q});
          bool expected = brute_force_solvable(a, {b}, {q});
          ASSERT_EQ(x.has_value(), expected) << a << " b=" << b << " q=" << q;
          if (x) ASSERT_TRUE(satisfies(a, *x, {b}, {q}));
        }
      });
}

TEST(SolveLinearMod, ExhaustiveTwoRowsMixedModuli) {
  for (long q1 = 2; q1 <= 4; ++q1)
    for (long q2 = 2; q2 <= 4; ++q2)
      for (std::size_t n = 1; n <= 2; ++n)
        for_each_matrix(2, n, {q1, q2}, [&](const IntMatrix& a) {
          for (long b1 = 0; b1 < q1; ++b1)
            for (long b2 = 0; b2 < q2; ++b2) {
              IntVector b{b1, b2}, q{q1, q2};
              auto x = solve_linear_mod(a, b, q);
              ASSERT_EQ(x.has_value(), brute_force_solvable(a, b, q)) << a;
              if (x) ASSERT_TRUE(satisfies(a, *x, b, q));
            }
        });
}

TEST(KernelMod, Examples) {
  auto k = kernel_mod(IntMatrix{{2}}, {4}, {4});
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (IntVector{2}));
  EXPECT_TRUE(kernel_mod(IntMatrix{{1}}, {4}, {4}).empty());
  auto all = kernel_mod(IntMatrix{{0}}, {2}, {4});
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], (IntVector{1}));
}

TEST(KernelMod, MatchesEnumeration) {
  // Source Z4 ⊕ Z2 ⊕ Z4, target Z4 ⊕ Z2; entries respect the Hom constraint.
  IntVector src{4, 2, 4}, tgt{4, 2};
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    IntMatrix a(2, 3);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        Integer step = tgt[i] / gcd(tgt[i], src[j]);
        a(i, j) = step * Integer(static_cast<long>(rng() % 4));
      }
    auto gens = kernel_mod(a, src, tgt);
    // Subgroup generated by gens, by closure.
    std::set<std::vector<long>> generated{{0, 0, 0}};
    bool grew = true;
    while (grew) {
      grew = false;
      auto snapshot = generated;
      for (const auto& x : snapshot)
        for (const auto& g : gens) {
          std::vector<long> y(3);
          for (std::size_t j = 0; j < 3; ++j)
            y[j] = mod_floor(Integer(x[j]) + g[j], src[j]).get_si();
          if (generated.insert(y).second) grew = true;
        }
    }
    std::set<std::vector<long>> brute;
    for (long x0 = 0; x0 < 4; ++x0)
      for (long x1 = 0; x1 < 2; ++x1)
        for (long x2 = 0; x2 < 4; ++x2)
          if (satisfies(a, {x0, x1, x2}, {0, 0}, tgt)) brute.insert({x0, x1, x2});
    EXPECT_EQ(generated, brute) << a;
  }
}
