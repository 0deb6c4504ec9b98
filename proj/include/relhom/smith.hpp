#pragma once

// Exact normal forms and linear-system solving over Z and Z/m.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "relhom/errors.hpp"
#include "relhom/int_matrix.hpp"

namespace relhom {

/// A = U * S * V with U, V unimodular and S diagonal, S(i,i) | S(i+1,i+1).
/// U_inv and V_inv are kept alongside so that U_inv * A * V_inv = S.
struct SnfResult {
  IntMatrix U, S, V;
  IntMatrix U_inv, V_inv;
  std::size_t rank = 0;

  IntVector diagonal() const {
    IntVector d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

enum SnfTrack : unsigned {
  kTrackLeft = 1u,       // U_inv
  kTrackLeftInv = 2u,    // U
  kTrackRight = 4u,      // V_inv
  kTrackRightInv = 8u,   // V
  kTrackAll = 15u,
};

class SmithReducer {
 public:
  SmithReducer(const IntMatrix& a, unsigned track) : track_(track) {
    r_.S = a;
    const std::size_t m = a.rows(), n = a.cols();
    if (track & kTrackLeft) r_.U_inv = IntMatrix::identity(m);
    if (track & kTrackLeftInv) r_.U = IntMatrix::identity(m);
    if (track & kTrackRight) r_.V_inv = IntMatrix::identity(n);
    if (track & kTrackRightInv) r_.V = IntMatrix::identity(n);
  }

  SnfResult run() {
    IntMatrix& s = r_.S;
    const std::size_t m = s.rows(), n = s.cols();
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
      if (!move_min_to(t)) break;
      for (;;) {
        bool clean = true;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (s(i, t) == 0) continue;
          Integer q;
          mpz_tdiv_q(q.get_mpz_t(), s(i, t).get_mpz_t(), s(t, t).get_mpz_t());
          add_row(i, t, -q);
          if (s(i, t) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (s(t, j) == 0) continue;
          Integer q;
          mpz_tdiv_q(q.get_mpz_t(), s(t, j).get_mpz_t(), s(t, t).get_mpz_t());
          add_col(j, t, -q);
          if (s(t, j) != 0) clean = false;
        }
        if (!clean) {
          move_min_in_cross(t);
          continue;
        }
        // Pivot row and column are clear; enforce the divisibility chain.
        bool fixed = false;
        for (std::size_t i = t + 1; i < m && !fixed; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (!divides(s(t, t), s(i, j))) {
              add_row(t, i, 1);
              fixed = true;
              break;
            }
        if (!fixed) break;
      }
      if (s(t, t) < 0) negate_row(t);
    }
    r_.rank = t;
    return std::move(r_);
  }

 private:
  // Brings the smallest nonzero |entry| of the submatrix [t.., t..] to (t, t).
  bool move_min_to(std::size_t t) {
    const IntMatrix& s = r_.S;
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = t; i < s.rows(); ++i)
      for (std::size_t j = t; j < s.cols(); ++j) {
        if (s(i, j) == 0) continue;
        if (!found || cmpabs(s(i, j), s(bi, bj)) < 0) {
          bi = i;
          bj = j;
          found = true;
          if (abs(s(i, j)) == 1) goto done;
        }
      }
  done:
    if (!found) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  // After a reduction pass, the smallest remainder in row t / column t becomes the pivot.
  void move_min_in_cross(std::size_t t) {
    const IntMatrix& s = r_.S;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t + 1; i < s.rows(); ++i)
      if (s(i, t) != 0 && cmpabs(s(i, t), s(bi, bj)) < 0) {
        bi = i;
        bj = t;
      }
    for (std::size_t j = t + 1; j < s.cols(); ++j)
      if (s(t, j) != 0 && cmpabs(s(t, j), s(bi, bj)) < 0) {
        bi = t;
        bj = j;
      }
    swap_rows(t, bi);
    swap_cols(t, bj);
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    r_.S.swap_rows(a, b);
    if (track_ & kTrackLeft) r_.U_inv.swap_rows(a, b);
    if (track_ & kTrackLeftInv) r_.U.swap_cols(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    r_.S.swap_cols(a, b);
    if (track_ & kTrackRight) r_.V_inv.swap_cols(a, b);
    if (track_ & kTrackRightInv) r_.V.swap_rows(a, b);
  }
  // row[dst] += c * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& c) {
    r_.S.add_row_multiple(dst, src, c);
    if (track_ & kTrackLeft) r_.U_inv.add_row_multiple(dst, src, c);
    if (track_ & kTrackLeftInv) r_.U.add_col_multiple(src, dst, -c);
  }
  // col[dst] += c * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& c) {
    r_.S.add_col_multiple(dst, src, c);
    if (track_ & kTrackRight) r_.V_inv.add_col_multiple(dst, src, c);
    if (track_ & kTrackRightInv) r_.V.add_row_multiple(src, dst, -c);
  }
  void negate_row(std::size_t r) {
    r_.S.negate_row(r);
    if (track_ & kTrackLeft) r_.U_inv.negate_row(r);
    if (track_ & kTrackLeftInv) r_.U.negate_col(r);
  }

  unsigned track_;
  SnfResult r_;
};

inline SnfResult smith(const IntMatrix& a, unsigned track) {
  return SmithReducer(a, track).run();
}

}  // namespace detail

inline SnfResult smith_normal_form(const IntMatrix& a) {
  return detail::smith(a, detail::kTrackAll);
}

/// Basis of the integer kernel {x in Z^cols : A x = 0}, as the columns of the result.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  SnfResult r = detail::smith(a, detail::kTrackRight);
  const std::size_t n = a.cols();
  IntMatrix k(n, n - r.rank);
  for (std::size_t j = r.rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) k(i, j - r.rank) = r.V_inv(i, j);
  return k;
}

/// Some integer solution of A x = b, or nothing. Free coordinates in the
/// Smith basis are set to zero, which makes the answer deterministic.
inline std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.rows()) throw DimensionMismatch("solve_integer: rhs length");
  SnfResult r = detail::smith(a, detail::kTrackLeft | detail::kTrackRight);
  IntVector c = r.U_inv * b;
  IntVector y(a.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < r.rank) {
      const Integer& s = r.S(i, i);
      if (!divides(s, c[i])) return std::nullopt;
      y[i] = c[i] / s;
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return r.V_inv * y;
}

/// Solves A x = b with row i read modulo moduli[i] (0 = exact over Z).
/// `unknown_moduli`, when given, reduces the answer coordinatewise.
inline std::optional<IntVector> solve_linear_mod(const IntMatrix& a, const IntVector& b,
                                                 const IntVector& moduli,
                                                 const IntVector* unknown_moduli = nullptr) {
  if (b.size() != a.rows() || moduli.size() != a.rows())
    throw DimensionMismatch("solve_linear_mod: A, b and moduli disagree");
  if (unknown_moduli && unknown_moduli->size() != a.cols())
    throw DimensionMismatch("solve_linear_mod: unknown moduli length");
  const std::size_t n = a.cols();
  std::size_t extra = 0;
  for (const auto& q : moduli)
    if (q != 0) ++extra;
  IntMatrix lifted(a.rows(), n + extra);
  IntVector rhs(a.rows());
  std::size_t e = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) lifted(i, j) = mod_floor(a(i, j), moduli[i]);
    rhs[i] = mod_floor(b[i], moduli[i]);
    if (moduli[i] != 0) lifted(i, n + e++) = moduli[i];
  }
  auto z = solve_integer(lifted, rhs);
  if (!z) return std::nullopt;
  IntVector x(z->begin(), z->begin() + static_cast<std::ptrdiff_t>(n));
  if (unknown_moduli)
    for (std::size_t j = 0; j < n; ++j) x[j] = mod_floor(x[j], (*unknown_moduli)[j]);
  return x;
}

/// Row-style Hermite basis of the lattice spanned by the rows of `a`.
/// Returns the nonzero rows, upper triangular with positive pivots.
inline IntMatrix hermite_rows(IntMatrix a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (a(i, c) != 0 && (best == m || cmpabs(a(i, c), a(best, c)) < 0)) best = i;
      if (best == m) break;
      a.swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (a(i, c) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
        a.add_row_multiple(i, r, -q);
        if (a(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (a(r, c) == 0) continue;
    if (a(r, c) < 0) a.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
      a.add_row_multiple(i, r, -q);
    }
    ++r;
  }
  IntMatrix h(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = a(i, j);
  return h;
}

/// Generators of { x mod source_orders : A x == 0 mod target_orders }.
/// Vectors are reduced, nonzero, and at most source_orders.size() in number;
/// the zero kernel yields an empty list.
inline std::vector<IntVector> kernel_mod(const IntMatrix& a, const IntVector& source_orders,
                                         const IntVector& target_orders) {
  if (a.cols() != source_orders.size() || a.rows() != target_orders.size())
    throw DimensionMismatch("kernel_mod: matrix shape does not match order vectors");
  const std::size_t n = a.cols(), r = a.rows();
  std::size_t extra = 0;
  for (const auto& q : target_orders)
    if (q != 0) ++extra;
  IntMatrix lifted(r, n + extra);
  std::size_t e = 0;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) lifted(i, j) = mod_floor(a(i, j), target_orders[i]);
    if (target_orders[i] != 0) lifted(i, n + e++) = target_orders[i];
  }
  IntMatrix ker = integer_kernel(lifted);
  // Rows: projected kernel vectors plus the source relations.
  IntMatrix lattice(ker.cols() + n, n);
  for (std::size_t k = 0; k < ker.cols(); ++k)
    for (std::size_t j = 0; j < n; ++j) lattice(k, j) = ker(j, k);
  for (std::size_t j = 0; j < n; ++j) lattice(ker.cols() + j, j) = source_orders[j];
  IntMatrix h = hermite_rows(lattice);
  std::vector<IntVector> gens;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    IntVector v(n);
    bool nonzero = false;
    for (std::size_t j = 0; j < n; ++j) {
      v[j] = mod_floor(h(i, j), source_orders[j]);
      if (v[j] != 0) nonzero = true;
    }
    if (nonzero) gens.push_back(std::move(v));
  }
  return gens;
}

}  // namespace relhom
