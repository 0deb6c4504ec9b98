#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "relhom/errors.hpp"
#include "relhom/int_matrix.hpp"

namespace relhom {

/// Prime factorisation by trial division; adequate for cyclic orders
/// dividing a desk-scale modulus.
inline std::vector<std::pair<Integer, unsigned>> factorize(Integer n) {
  std::vector<std::pair<Integer, unsigned>> out;
  if (n < 0) n = -n;
  for (Integer p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (divides(p, n)) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1u);
  return out;
}

/// Elementary divisors (prime powers) of the group with the given cyclic orders.
inline std::vector<Integer> elementary_divisors(const IntVector& cyclic_orders) {
  std::vector<Integer> out;
  for (const auto& d : cyclic_orders) {
    if (d == 0) throw InvariantViolation("elementary_divisors: infinite cyclic factor");
    for (const auto& [p, e] : factorize(d)) {
      Integer q = 1;
      for (unsigned k = 0; k < e; ++k) q *= p;
      out.push_back(q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Finite abelian group in invariant-factor form e_1 | e_2 | ... with e_i >= 2.
class AbGroup {
 public:
  AbGroup() = default;

  /// Builds the group isomorphic to the product of the given cyclic groups.
  static AbGroup from_cyclic_orders(const IntVector& orders) {
    std::map<Integer, std::vector<Integer>> by_prime;
    for (const auto& q : elementary_divisors(orders)) {
      Integer p = factorize(q).front().first;
      by_prime[p].push_back(q);
    }
    std::size_t len = 0;
    for (auto& [p, qs] : by_prime) {
      std::sort(qs.begin(), qs.end(), std::greater<>());
      len = std::max(len, qs.size());
    }
    // Largest invariant factor collects the largest power of every prime.
    IntVector factors(len, Integer(1));
    for (const auto& [p, qs] : by_prime)
      for (std::size_t k = 0; k < qs.size(); ++k) factors[len - 1 - k] *= qs[k];
    AbGroup g;
    g.factors_ = std::move(factors);
    return g;
  }

  static AbGroup from_invariant_factors(IntVector factors) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i] < 2) throw InvariantViolation("invariant factor < 2");
      if (i + 1 < factors.size() && !divides(factors[i], factors[i + 1]))
        throw InvariantViolation("invariant factors do not form a divisibility chain");
    }
    AbGroup g;
    g.factors_ = std::move(factors);
    return g;
  }

  const IntVector& invariant_factors() const { return factors_; }
  bool is_trivial() const { return factors_.empty(); }

  Integer order() const {
    Integer n = 1;
    for (const auto& e : factors_) n *= e;
    return n;
  }

  /// Number of elements x with e * x = 0; this profile over all e determines the group.
  Integer count_killed_by(const Integer& e) const {
    Integer n = 1;
    for (const auto& f : factors_) n *= gcd(f, e);
    return n;
  }

  bool operator==(const AbGroup& o) const { return factors_ == o.factors_; }
  bool operator!=(const AbGroup& o) const { return !(*this == o); }

  /// "Z2 ⊕ Z4", or "0" for the trivial group.
  std::string to_string() const {
    if (factors_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += " ⊕ ";
      s += "Z" + factors_[i].get_str();
    }
    return s;
  }

 private:
  IntVector factors_;
};

inline std::ostream& operator<<(std::ostream& os, const AbGroup& g) { return os << g.to_string(); }

}  // namespace relhom
