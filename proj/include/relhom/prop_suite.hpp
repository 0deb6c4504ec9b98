#pragma once

// Seeded property runner over every module's invariants. Instance i of a run
// with seed s uses seed s + i, so `--seed s+i --budget 1` replays it.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relhom/cohomology.hpp"
#include "relhom/complex.hpp"
#include "relhom/random.hpp"
#include "relhom/relative.hpp"

namespace relhom {

struct PropConfig {
  std::uint64_t seed = 1;
  int budget = 10;
  /// Replaceable so a deliberately wrong shift can be fed to the suite.
  std::function<Complex(const Complex&, int)> shift = [](const Complex& x, int n) {
    return relhom::shift(x, n);
  };
};

struct PropResult {
  std::string name;
  int passed = 0, total = 0;
  std::optional<std::uint64_t> failing_seed;
  std::string counterexample;

  bool ok() const { return passed == total; }
};

struct PropReport {
  std::vector<PropResult> results;

  bool ok() const {
    for (const auto& r : results)
      if (!r.ok()) return false;
    return true;
  }

  const PropResult* find(const std::string& name) const {
    for (const auto& r : results)
      if (r.name == name) return &r;
    return nullptr;
  }

  std::string to_text() const {
    std::string s;
    for (const auto& r : results) {
      s += r.name + ": " + std::to_string(r.passed) + "/" + std::to_string(r.total) + " passed";
      if (r.failing_seed)
        s += "; first counterexample at seed " + std::to_string(*r.failing_seed) + ": " +
             r.counterexample;
      s += "\n";
    }
    return s;
  }
};

namespace props {

using Check = std::function<std::optional<std::string>(Rng&, const PropConfig&)>;

inline Integer pick_modulus(Rng& rng) {
  static const long moduli[] = {4, 8, 9, 6, 12};
  return moduli[uniform_index(rng, 5)];
}

inline std::vector<std::pair<std::string, Check>> all() {
  std::vector<std::pair<std::string, Check>> v;
  v.emplace_back("kernel-image-order", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    ZmModule a = random_module(rng, m, 3), b = random_module(rng, m, 3);
    ModuleMorphism f = random_morphism(rng, a, b);
    if (kernel(f).module.cardinality() * image_order(f) != a.cardinality())
      return "|ker| |im| != |source| for a map " + a.to_string() + " -> " + b.to_string();
    return std::nullopt;
  });
  v.emplace_back("hom-order", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    ZmModule a = random_module(rng, m, 3), b = random_module(rng, m, 3);
    Integer expect = 1;
    for (const auto& d : a.orders())
      for (const auto& e : b.orders()) expect *= gcd(d, e);
    if (hom_group(a, b).group.order() != expect)
      return "|Hom(" + a.to_string() + ", " + b.to_string() + ")| is not the product of gcds";
    return std::nullopt;
  });
  v.emplace_back("shift-inverse", [](Rng& rng, const PropConfig& cfg) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    Complex x = random_complex(rng, m, -1, 1 + int(uniform_index(rng, 3)), 2);
    for (int n = -2; n <= 2; ++n) {
      if (cfg.shift(cfg.shift(x, n), -n) != x)
        return "shift by " + std::to_string(n) + " then back changes " + x.to_string();
      for (int a = -2; a <= 2; ++a)
        if (cfg.shift(cfg.shift(x, n), a) != cfg.shift(x, n + a))
          return "shift by " + std::to_string(n) + " then " + std::to_string(a) +
                 " differs from one shift of " + x.to_string();
    }
    return std::nullopt;
  });
  v.emplace_back("homology-shift", [](Rng& rng, const PropConfig& cfg) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    Complex x = random_complex(rng, m, -1, 1 + int(uniform_index(rng, 3)), 2);
    int n = int(uniform_index(rng, 5)) - 2;
    Complex y = cfg.shift(x, n);
    for (int k = x.lo() - n - 1; k <= x.hi() - n + 1; ++k)
      if (homology(y, k) != homology(x, k + n)) return "H^k(X[n]) != H^{k+n}(X) for " + x.to_string();
    return std::nullopt;
  });
  v.emplace_back("cone-identity-contractible", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    Complex x = random_complex(rng, m, -1, 1 + int(uniform_index(rng, 3)), 2);
    Complex c = cone(ChainMap::identity(x)).complex;
    if (!is_null_homotopic(ChainMap::identity(c))) return "cone(id) not contractible for " + x.to_string();
    return std::nullopt;
  });
  v.emplace_back("homotopy-invariance", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    Complex x = random_complex(rng, m, -1, 2, 2), y = random_complex(rng, m, -1, 2, 2);
    ChainMap f = random_chain_map(rng, x, y);
    auto s = null_homotopy(f - f);
    if (!s || !s->witnesses(f, f)) return "f - f has no witnessed null homotopy";
    return std::nullopt;
  });
  v.emplace_back("proper-resolution", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    auto x = uniform_index(rng, 2) ? SubcatDescriptor::GP(m) : SubcatDescriptor::PROJ(m);
    ZmModule a = random_module(rng, m, 2);
    auto r = proper_resolution(a, x, 3);
    if (!r.verify_certificates(x)) return "precover certificate fails for " + a.to_string();
    if (!is_x_acyclic(r.augmented(), x, -3)) return "augmented resolution not X-acyclic: " + a.to_string();
    return std::nullopt;
  });
  v.emplace_back("resolve-complex", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    Complex t = random_complex(rng, m, -1, 1 + int(uniform_index(rng, 3)), 2);
    auto r = resolve_complex(t, SubcatDescriptor::GP(m), 2);
    if (!r.ok()) return "postconditions fail for " + t.to_string();
    return std::nullopt;
  });
  v.emplace_back("fraction-reduction", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    auto x = SubcatDescriptor::GP(m);
    auto [fr, d] = random_fraction(rng, m);
    ChainMap g = split_x_quasi_iso(fr.s, x);
    if (!is_null_homotopic(compose(reduce_fraction(fr, x), fr.s) - fr.f))
      return "reduced map does not recover f";
    if (!is_null_homotopic(compose(fr.s, g) - ChainMap::identity(d))) return "s g is not homotopic to id";
    return std::nullopt;
  });
  v.emplace_back("ext-dimension-shift", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    auto x = SubcatDescriptor::PROJ(m);
    ZmModule a = random_module(rng, m, 2), b = random_module(rng, m, 2);
    ZmModule syz = kernel(x_precover(a, x).map).module;
    for (int n = 2; n <= 3; ++n)
      if (relative_ext(a, b, n, x) != relative_ext(syz, b, n - 1, x))
        return "Ext^" + std::to_string(n) + "(" + a.to_string() + ", " + b.to_string() +
               ") differs from the syzygy shift";
    return std::nullopt;
  });
  v.emplace_back("tate-route-agreement", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    ZmModule a = random_module(rng, m, 2), b = random_module(rng, m, 2);
    for (int n = 1; n <= 2; ++n)
      if (tate_ext_complete(a, b, n, n + 2) !=
          tate_ext_cone(a, b, n, SubcatDescriptor::GP(m), SubcatDescriptor::PROJ(m), n + 3))
        return "routes disagree at n=" + std::to_string(n) + " for " + a.to_string() + ", " +
               b.to_string();
    return std::nullopt;
  });
  v.emplace_back("les-exactness", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    auto s = random_ses(rng, m);
    ZmModule a = random_module(rng, m, 2);
    auto x = SubcatDescriptor::PROJ(m);
    if (!les_covariant(a, s, x, 2).exact()) return "covariant sequence not exact";
    if (!les_contravariant(s, a, x, 2).exact()) return "contravariant sequence not exact";
    return std::nullopt;
  });
  v.emplace_back("am-sequence", [](Rng& rng, const PropConfig&) -> std::optional<std::string> {
    Integer m = pick_modulus(rng);
    ZmModule a = random_module(rng, m, 2), b = random_module(rng, m, 2);
    auto am = am_sequence(a, b, SubcatDescriptor::GP(m), SubcatDescriptor::PROJ(m), 4);
    if (!am.certified()) return "certificate fails for " + a.to_string() + ", " + b.to_string();
    return std::nullopt;
  });
  return v;
}

}  // namespace props

inline PropReport prop_suite(const PropConfig& cfg) {
  PropReport report;
  if (cfg.budget <= 0) return report;
  for (const auto& [name, check] : props::all()) {
    PropResult r;
    r.name = name;
    for (int i = 0; i < cfg.budget; ++i) {
      std::uint64_t seed = cfg.seed + std::uint64_t(i);
      Rng rng(seed);
      std::optional<std::string> failure;
      try {
        failure = check(rng, cfg);
      } catch (const std::exception& e) {
        failure = std::string("exception: ") + e.what();
      }
      ++r.total;
      if (!failure) {
        ++r.passed;
      } else if (!r.failing_seed) {
        r.failing_seed = seed;
        r.counterexample = *failure;
      }
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace relhom
