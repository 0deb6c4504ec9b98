#pragma once

// Textbook Ext over Z/m from the periodic resolution of each cyclic factor,
// in plain machine arithmetic.

#include <cstdlib>
#include <numeric>
#include <vector>

namespace oracle {

/// Order of ker(×a) / im(×b) on Z_e; it is cyclic.
inline long ker_mod_im(long a, long b, long e) { return std::gcd(a, e) * std::gcd(b, e) / e; }

/// Ext^n(Z_d, Z_e) over Z/m from Z_m <-×d- Z_m <-×(m/d)- Z_m <-×d- ...
inline long ext_cyclic(long m, long d, long e, int n) {
  if (n == 0) return std::gcd(d, e);
  if (d == m) return 1;
  return n % 2 == 1 ? ker_mod_im(m / d, d, e) : ker_mod_im(d, m / d, e);
}

/// Tate Êxt^n(Z_d, Z_e): the strand has ×d on odd degrees and ×(m/d) on even degrees,
/// so Hom^n has incoming scalar d^{-n} and outgoing scalar d^{-n-1}.
inline long tate_cyclic(long m, long d, long e, int n) {
  if (d == m) return 1;
  auto scalar = [&](int k) { return (k % 2 != 0) ? d : m / d; };
  return ker_mod_im(scalar(-n - 1), scalar(-n), e);
}

/// Cyclic orders (1 dropped) of the additive extension over both decompositions.
template <class F>
std::vector<long> additive(const std::vector<long>& ms, const std::vector<long>& ns, F cyclic) {
  std::vector<long> out;
  for (long d : ms)
    for (long e : ns) {
      long o = cyclic(d, e);
      if (o > 1) out.push_back(o);
    }
  return out;
}

inline std::vector<long> ext(long m, const std::vector<long>& ms, const std::vector<long>& ns,
                             int n) {
  return additive(ms, ns, [&](long d, long e) { return ext_cyclic(m, d, e, n); });
}

inline std::vector<long> tate(long m, const std::vector<long>& ms, const std::vector<long>& ns,
                              int n) {
  return additive(ms, ns, [&](long d, long e) { return tate_cyclic(m, d, e, n); });
}

}  // namespace oracle
