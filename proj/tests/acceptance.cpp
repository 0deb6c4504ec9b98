// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iomanip>
#include <numeric>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "ext_oracle.hpp"
#include "oracles.hpp"
#include "relhom/relhom.hpp"

using namespace relhom;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

/// Counts checks and keeps the first failure.
struct Tally {
  long checks = 0, failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  void expect(bool ok, const std::function<std::string()>& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what();
  }
  Verdict verdict(const std::string& unit) const {
    std::ostringstream s;
    s << checks << " " << unit << ", " << failures << " failures";
    if (failures) s << "; first: " << first;
    return {failures == 0, s.str()};
  }
};

AbGroup from_orders(const std::vector<long>& orders) {
  IntVector o;
  for (long d : orders) o.emplace_back(d);
  return AbGroup::from_cyclic_orders(o);
}

Integer pick(Rng& rng, std::initializer_list<long> moduli) {
  return *(moduli.begin() + uniform_index(rng, moduli.size()));
}

Verdict example_3_10() {
  ZmModule z4 = ZmModule::cyclic(4, 4);
  AbGroup k = kernel(ModuleMorphism(z4, z4, IntMatrix{{2}})).module.group();
  XPd pd = x_pd(ZmModule::cyclic(4, 2), SubcatDescriptor::PROJ(4), 8);
  bool ok = k.invariant_factors() == IntVector{2} && !pd.finite() && pd.lower_bound == 8;
  return {ok, "kernel(×2 on Z4) = " + k.to_string() + ", x_pd(Z2, PROJ, 8) = " + pd.to_string()};
}

Verdict relative_ext_oracle() {
  Tally t;
  auto proj = SubcatDescriptor::PROJ(4);
  ZmModule z2 = ZmModule::cyclic(4, 2), z4 = ZmModule::cyclic(4, 4);
  for (int n = 0; n <= 5; ++n) {
    AbGroup g = relative_ext(z2, z2, n, proj);
    t.expect(g == AbGroup::from_invariant_factors({2}) && g == from_orders(oracle::ext(4, {2}, {2}, n)),
             [&] { return "Ext^" + std::to_string(n) + "(Z2,Z2) = " + g.to_string(); });
  }
  for (int n = 1; n <= 5; ++n) {
    AbGroup g = relative_ext(z2, z4, n, proj);
    t.expect(g.is_trivial() && g == from_orders(oracle::ext(4, {2}, {4}, n)),
             [&] { return "Ext^" + std::to_string(n) + "(Z2,Z4) = " + g.to_string(); });
  }
  return t.verdict("groups");
}

SubcatDescriptor random_subcat(Rng& rng, const Integer& m) {
  switch (uniform_index(rng, 3)) {
    case 0: return SubcatDescriptor::PROJ(m);
    case 1: return SubcatDescriptor::GP(m);
    default: {
      std::vector<ZmModule> gens{random_module(rng, m, 2, 1)};
      if (uniform_index(rng, 2)) gens.push_back(random_module(rng, m, 1, 1));
      return SubcatDescriptor(m, gens, "random");
    }
  }
}

Verdict hom_complex_route() {
  Tally t;
  Rng rng(2024);
  for (int i = 0; i < 50; ++i) {
    Integer m = pick(rng, {4, 8, 9});
    auto x = random_subcat(rng, m);
    ZmModule a = random_module(rng, m, 2), b = random_module(rng, m, 2);
    int n = int(uniform_index(rng, 4));
    AbGroup direct = relative_ext(a, b, n, x, Precovering::stop_in_add);
    auto r = proper_resolution(a, x, n + 2, Precovering::stop_in_add);
    AbGroup via_hom = hom_k(r.complex, stalk(b), n);
    t.expect(direct == via_hom, [&] {
      return "Ext^" + std::to_string(n) + "_" + x.name + "(" + a.to_string() + ", " +
             b.to_string() + "): " + direct.to_string() + " vs " + via_hom.to_string();
    });
  }
  return t.verdict("instances");
}

Verdict resolve_complex_postconditions() {
  Tally t;
  Rng rng(3039);
  for (int i = 0; i < 100; ++i) {
    Integer m = pick(rng, {4, 6, 8, 9, 12});
    Complex c = random_complex(rng, m, int(uniform_index(rng, 3)) - 1, 1 + int(uniform_index(rng, 3)), 2);
    auto r = resolve_complex(c, SubcatDescriptor::GP(m), 2);
    t.expect(r.components_in_add && r.kernel_x_acyclic && r.hom_exact,
             [&] { return "postconditions fail for " + c.to_string(); });
  }
  return t.verdict("complexes");
}

Verdict fraction_witnesses() {
  Tally t;
  Rng rng(3637);
  for (int i = 0; i < 50; ++i) {
    Integer m = pick(rng, {4, 6, 8, 9});
    auto x = SubcatDescriptor::GP(m);
    auto [fr, d] = random_fraction(rng, m);
    ChainMap g = split_x_quasi_iso(fr.s, x);
    ChainMap reduced = reduce_fraction(fr, x);
    ChainMap recovers = compose(reduced, fr.s) - fr.f;
    ChainMap splits = compose(fr.s, g) - ChainMap::identity(d);
    auto h1 = null_homotopy(recovers), h2 = null_homotopy(splits);
    t.expect(h1 && h1->witnesses(recovers, ChainMap::zero(recovers.source(), recovers.target())),
             "f g s not homotopic to f");
    t.expect(h2 && h2->witnesses(splits, ChainMap::zero(d, d)), "s g not homotopic to id");
  }
  return t.verdict("witnesses");
}

Verdict tate_routes() {
  Tally t;
  Rng rng(4242);
  for (int i = 0; i < 50; ++i) {
    Integer m = pick(rng, {4, 8, 9});
    ZmModule a = random_module(rng, m, 2), b = random_module(rng, m, 2);
    for (int n = 1; n <= 4; ++n) {
      AbGroup complete = tate_ext_complete(a, b, n, n + 2);
      AbGroup cone = tate_ext_cone(a, b, n, SubcatDescriptor::GP(m), SubcatDescriptor::PROJ(m), n + 3);
      t.expect(complete == cone, [&] {
        return "n=" + std::to_string(n) + " " + a.to_string() + ", " + b.to_string() + ": " +
               complete.to_string() + " vs " + cone.to_string();
      });
    }
  }
  return t.verdict("groups");
}

Verdict sequences() {
  Tally t;
  Rng rng(4546);
  for (int i = 0; i < 50; ++i) {
    Integer m = pick(rng, {4, 8, 9});
    auto gp = SubcatDescriptor::GP(m), proj = SubcatDescriptor::PROJ(m);
    ZmModule fixed = random_module(rng, m, 2);
    // Over GP only split sequences are Hom(GP, -)-exact; over PROJ every sequence is.
    auto split = random_split_ses(rng, m);
    auto any = random_ses(rng, m);
    t.expect(les_covariant(fixed, split, gp, 3).exact(), "covariant GP sequence not exact");
    t.expect(les_contravariant(split, fixed, gp, 3).exact(), "contravariant GP sequence not exact");
    t.expect(les_covariant(fixed, any, proj, 3).exact(), "covariant PROJ sequence not exact");
    t.expect(les_contravariant(any, fixed, proj, 3).exact(), "contravariant PROJ sequence not exact");
  }
  for (int i = 0; i < 50; ++i) {
    Integer m = pick(rng, {4, 8, 9});
    ZmModule a = random_module(rng, m, 2), b = random_module(rng, m, 2);
    auto am = am_sequence(a, b, SubcatDescriptor::GP(m), SubcatDescriptor::PROJ(m), 5);
    t.expect(am.sequence.exact(), [&] { return "AM not exact for " + a.to_string() + ", " + b.to_string(); });
    t.expect(am.cone_h1_vanishes, "H^1(Hom(cone(f), N)) != 0");
    t.expect(am.ext_vanishes_above_d, "Ext_X does not terminate at d");
    t.expect(am.certified(), "AM certificate fails");
  }
  return t.verdict("certificates");
}

bool solvable_by_enumeration(const IntMatrix& a, const IntVector& b, const std::vector<long>& q) {
  long l = 1;
  for (long v : q) l = std::lcm(l, v);
  std::vector<long> x(a.cols(), 0);
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < a.rows() && ok; ++i) {
      long s = 0;
      for (std::size_t j = 0; j < x.size(); ++j) s += a(i, j).get_si() * x[j];
      ok = oracle::reduce(s - b[i].get_si(), q[i]) == 0;
    }
    if (ok) return true;
    std::size_t k = 0;
    while (k < x.size() && ++x[k] == l) x[k++] = 0;
    if (k == x.size()) return false;
  }
}

Verdict brute_force_layer() {
  Tally t;
  std::vector<long> moduli;
  for (long m = 2; m <= 16; ++m) moduli.push_back(m);

  // homology: every complex of width <= 3 with |X| <= 16.
  for (long m : moduli)
    for (const auto& x : oracle::all_complexes(m, 16, 3)) {
      Complex c = oracle::to_complex(x);
      for (int n = -1; n <= 3; ++n)
        t.expect(oracle::group_profile(homology(c, n), m) == oracle::homology_profile(x, n),
                 [&] { return "homology of " + c.to_string(); });
    }

  // hom_group: every pair of modules with |A| |B| <= 16.
  for (long m : moduli) {
    auto mods = oracle::small_modules(m, 16);
    for (const auto& a : mods)
      for (const auto& b : mods) {
        if (a.cardinality() * b.cardinality() > 16) continue;
        AbGroup g = hom_group(a, b).group;
        for (long e = 1; e <= m; ++e)
          t.expect(g.count_killed_by(e).get_si() == oracle::count_homs(a, b, e == m ? 0 : e),
                   [&] { return "Hom(" + a.to_string() + ", " + b.to_string() + ")"; });
      }
  }

  // null_homotopy: every chain map between complexes with |X| |Y| <= 16.
  for (long m : moduli) {
    auto cs = oracle::all_complexes(m, 16, 2);
    for (const auto& x : cs)
      for (const auto& y : cs) {
        if (x.cardinality() * y.cardinality() > 16) continue;
        Complex cx = oracle::to_complex(x), cy = oracle::to_complex(y);
        std::set<oracle::Elem> bounds;
        for (const auto& s : oracle::all_families(x, y, -1))
          bounds.insert(oracle::flatten(oracle::homotopy_image(s, x, y, 0)));
        for (const auto& f : oracle::all_families(x, y, 0)) {
          if (!oracle::is_chain_map_to_shift(f, x, y, 0)) continue;
          std::map<int, ModuleMorphism> comps;
          for (int k = x.lo; k <= x.hi() && !x.comps.empty(); ++k)
            comps.emplace(k, ModuleMorphism(cx.at(k), cy.at(k),
                                            oracle::to_int_matrix(f[k - x.lo], y.at(k).size(), x.at(k).size())));
          ChainMap g(cx, cy, comps);
          auto s = null_homotopy(g);
          bool expected = bounds.count(oracle::flatten(f)) == 1;
          t.expect(s.has_value() == expected && (!s || s->witnesses(g, ChainMap::zero(cx, cy))),
                   [&] { return "null_homotopy " + cx.to_string() + " -> " + cy.to_string(); });
        }
      }
  }

  // solve_linear_mod: every system of one or two rows whose unknown space Z_L^n has L^n <= 16.
  for (long l = 2; l <= 16; ++l)
    for (std::size_t n = 1; n <= 4; ++n) {
      long space = 1;
      for (std::size_t j = 0; j < n; ++j) space *= l;
      if (space > 16) continue;
      std::vector<std::vector<long>> row_moduli;
      for (long q1 = 2; q1 <= l; ++q1) {
        if (l % q1) continue;
        if (q1 == l) row_moduli.push_back({q1});
        for (long q2 = 2; q2 <= l; ++q2)
          if (l % q2 == 0 && std::lcm(q1, q2) == l) row_moduli.push_back({q1, q2});
      }
      for (const auto& q : row_moduli) {
        std::vector<long> entry_bound;
        for (long qi : q)
          for (std::size_t j = 0; j < n; ++j) entry_bound.push_back(qi);
        std::vector<long> e(entry_bound.size(), 0);
        for (;;) {
          IntMatrix a(q.size(), n);
          for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = e[i * n + j];
          IntVector qs;
          for (long qi : q) qs.emplace_back(qi);
          std::vector<long> bv(q.size(), 0);
          for (;;) {
            IntVector b;
            for (long v : bv) b.emplace_back(v);
            auto x = solve_linear_mod(a, b, qs);
            bool ok = x.has_value() == solvable_by_enumeration(a, b, q);
            if (x)
              for (std::size_t i = 0; i < q.size() && ok; ++i) {
                Integer s = 0;
                for (std::size_t j = 0; j < n; ++j) s += a(i, j) * (*x)[j];
                ok = divides(qs[i], s - b[i]);
              }
            t.expect(ok, "solve_linear_mod disagrees with enumeration");
            std::size_t k = 0;
            while (k < bv.size() && ++bv[k] == q[k]) bv[k++] = 0;
            if (k == bv.size()) break;
          }
          std::size_t k = 0;
          while (k < e.size() && ++e[k] == entry_bound[k]) e[k++] = 0;
          if (k == e.size()) break;
        }
      }
    }
  return t.verdict("checks");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"1 Example 3.10 reproduction", example_3_10},
      {"2 Relative-Ext oracle", relative_ext_oracle},
      {"3 Hom-complex route consistency", hom_complex_route},
      {"4 resolve_complex postconditions (GP)", resolve_complex_postconditions},
      {"5 fraction reduction witnesses", fraction_witnesses},
      {"6 Tate route agreement", tate_routes},
      {"7 LES and AM certificates", sequences},
      {"8 brute-force equivalence layer", brute_force_layer},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << "  [" << name << "]  " << v.detail << "  ("
              << std::fixed << std::setprecision(2) << secs << " s)\n";
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
