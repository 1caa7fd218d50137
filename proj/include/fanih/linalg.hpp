#pragma once

#include <optional>
#include <vector>

#include "fanih/scalar.hpp"

namespace fanih {

// Dense matrix over FieldScalar, row major.
struct ExactMatrix {
  int rows{0};
  int cols{0};
  std::vector<FieldScalar> a;

  ExactMatrix() = default;
  ExactMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  FieldScalar& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const FieldScalar& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static ExactMatrix identity(int n) {
    ExactMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = FieldScalar(1);
    return m;
  }

  static ExactMatrix from_rows(const std::vector<std::vector<FieldScalar>>& rows_in) {
    int r = static_cast<int>(rows_in.size());
    int c = r == 0 ? 0 : static_cast<int>(rows_in[0].size());
    ExactMatrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = rows_in[i][j];
    return m;
  }

  static ExactMatrix from_columns(const std::vector<std::vector<FieldScalar>>& cols_in) {
    int c = static_cast<int>(cols_in.size());
    int r = c == 0 ? 0 : static_cast<int>(cols_in[0].size());
    ExactMatrix m(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) m.at(i, j) = cols_in[j][i];
    return m;
  }

  std::vector<FieldScalar> row(int i) const {
    return std::vector<FieldScalar>(a.begin() + static_cast<size_t>(i) * cols,
                                    a.begin() + static_cast<size_t>(i + 1) * cols);
  }

  std::vector<FieldScalar> column(int j) const {
    std::vector<FieldScalar> v(rows);
    for (int i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
  }

  friend ExactMatrix operator*(const ExactMatrix& x, const ExactMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix product shape mismatch");
    ExactMatrix m(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        if (x.at(i, k).is_zero()) continue;
        for (int j = 0; j < y.cols; ++j) m.at(i, j) += x.at(i, k) * y.at(k, j);
      }
    return m;
  }

  std::vector<FieldScalar> apply(const std::vector<FieldScalar>& v) const {
    if (static_cast<int>(v.size()) != cols) throw std::invalid_argument("apply shape mismatch");
    std::vector<FieldScalar> out(rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (!at(i, j).is_zero()) out[i] += at(i, j) * v[j];
    return out;
  }

  friend bool operator==(const ExactMatrix& x, const ExactMatrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

namespace detail {

// Multiply each row by the lcm of its component denominators so the
// fraction-free recurrence divides exactly. Rank and kernel are unchanged.
inline void scale_rows_integral(ExactMatrix& m) {
  for (int i = 0; i < m.rows; ++i) {
    BigInt l = 1;
    for (int j = 0; j < m.cols; ++j) {
      l = boost::multiprecision::lcm(l, m.at(i, j).a.den);
      l = boost::multiprecision::lcm(l, m.at(i, j).b.den);
    }
    if (l != 1) {
      FieldScalar f{Rational(l)};
      for (int j = 0; j < m.cols; ++j) m.at(i, j) *= f;
    }
  }
}

struct Echelon {
  ExactMatrix u;                 // row echelon form (fraction-free updates)
  std::vector<int> pivot_cols;   // increasing
  int swaps{0};
};

// Forward elimination, single-step fraction-free recurrence.
// Pivot rule is deterministic: scan columns left to right, take the first
// remaining row with a nonzero entry.
inline Echelon echelon_form(ExactMatrix m) {
  scale_rows_integral(m);
  Echelon e;
  e.pivot_cols.reserve(std::min(m.rows, m.cols));
  FieldScalar prev(1);
  int r = 0;
  for (int col = 0; col < m.cols && r < m.rows; ++col) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i) {
      if (!m.at(i, col).is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) {
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
      ++e.swaps;
    }
    for (int i = r + 1; i < m.rows; ++i) {
      FieldScalar factor = m.at(i, col);
      for (int j = col + 1; j < m.cols; ++j)
        m.at(i, j) = (m.at(r, col) * m.at(i, j) - factor * m.at(r, j)) / prev;
      m.at(i, col) = FieldScalar(0);
    }
    prev = m.at(r, col);
    e.pivot_cols.push_back(col);
    ++r;
  }
  e.u = std::move(m);
  return e;
}

}  // namespace detail

struct RankKernel {
  int rank{0};
  // Canonical kernel basis: one vector per free column, that free coordinate
  // set to 1, later free coordinates 0.
  std::vector<std::vector<FieldScalar>> kernel;
};

inline RankKernel rank_and_kernel(const ExactMatrix& m) {
  detail::Echelon e = detail::echelon_form(m);
  RankKernel rk;
  rk.rank = static_cast<int>(e.pivot_cols.size());
  std::vector<char> is_pivot(m.cols, 0);
  for (int c : e.pivot_cols) is_pivot[c] = 1;
  for (int f = 0; f < m.cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<FieldScalar> v(m.cols);
    v[f] = FieldScalar(1);
    for (int i = rk.rank - 1; i >= 0; --i) {
      int pc = e.pivot_cols[i];
      FieldScalar acc(0);
      for (int j = pc + 1; j <= f; ++j)
        if (!e.u.at(i, j).is_zero() && !v[j].is_zero()) acc += e.u.at(i, j) * v[j];
      v[pc] = -acc / e.u.at(i, pc);
    }
    rk.kernel.push_back(std::move(v));
  }
  return rk;
}

inline int rank_of(const ExactMatrix& m) {
  return static_cast<int>(detail::echelon_form(m).pivot_cols.size());
}

// Solves m x = rhs. Returns a particular solution with all free variables set
// to zero, or nullopt when the system is inconsistent.
inline std::optional<std::vector<FieldScalar>> solve_linear(
    const ExactMatrix& m, const std::vector<FieldScalar>& rhs) {
  if (static_cast<int>(rhs.size()) != m.rows) throw std::invalid_argument("rhs length mismatch");
  ExactMatrix aug(m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = rhs[i];
  }
  detail::Echelon e = detail::echelon_form(std::move(aug));
  std::vector<int> pivots;
  for (int c : e.pivot_cols) {
    if (c == m.cols) return std::nullopt;  // pivot in the rhs column
    pivots.push_back(c);
  }
  std::vector<FieldScalar> x(m.cols);
  for (int i = static_cast<int>(pivots.size()) - 1; i >= 0; --i) {
    int pc = pivots[i];
    FieldScalar acc = e.u.at(i, m.cols);
    for (int j = pc + 1; j < m.cols; ++j)
      if (!e.u.at(i, j).is_zero() && !x[j].is_zero()) acc -= e.u.at(i, j) * x[j];
    x[pc] = acc / e.u.at(i, pc);
  }
  return x;
}

// Sign of det(m) for square m: +1, -1, or 0. Row scaling keeps signs positive
// because the scale factors are positive integers.
inline int det_sign(const ExactMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("det_sign needs a square matrix");
  detail::Echelon e = detail::echelon_form(m);
  if (static_cast<int>(e.pivot_cols.size()) < m.rows) return 0;
  // In the fraction-free sweep the k-th pivot is the k-th leading principal
  // minor of the scaled, permuted matrix, so the last pivot is its det.
  // Row scalings are positive, so only the swap parity adjusts the sign.
  int s = (e.swaps % 2 == 0) ? 1 : -1;
  return s * e.u.at(m.rows - 1, m.rows - 1).sign();
}

// Exact feasibility of {z >= 0 : A z = b} by phase-one simplex with Bland's
// rule (smallest-index entering and leaving variable; always terminates).
// Returns a feasible point when one exists.
inline std::optional<std::vector<FieldScalar>> lp_feasible(const ExactMatrix& A,
                                                           std::vector<FieldScalar> b) {
  int mrows = A.rows, n = A.cols;
  ExactMatrix T(mrows, n + mrows + 1);
  for (int i = 0; i < mrows; ++i) {
    int flip = b[i].sign() < 0 ? -1 : 1;
    for (int j = 0; j < n; ++j) T.at(i, j) = flip < 0 ? -A.at(i, j) : A.at(i, j);
    T.at(i, n + i) = FieldScalar(1);
    T.at(i, n + mrows) = flip < 0 ? -b[i] : b[i];
  }
  std::vector<int> basis(mrows);
  for (int i = 0; i < mrows; ++i) basis[i] = n + i;
  // Objective: minimize the sum of artificial variables. Canonical reduced
  // costs: obj[j] = -sum_i T(i, j) over non-artificial identity part.
  std::vector<FieldScalar> obj(n + mrows);
  FieldScalar objval(0);
  for (int j = 0; j < n + mrows; ++j) {
    FieldScalar s(0);
    for (int i = 0; i < mrows; ++i) s += T.at(i, j);
    obj[j] = (j >= n ? FieldScalar(1) : FieldScalar(0)) - s;
  }
  for (int i = 0; i < mrows; ++i) objval -= T.at(i, n + mrows);

  while (true) {
    int enter = -1;
    for (int j = 0; j < n + mrows; ++j) {
      if (obj[j].sign() < 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    FieldScalar best_ratio(0);
    for (int i = 0; i < mrows; ++i) {
      if (T.at(i, enter).sign() <= 0) continue;
      FieldScalar ratio = T.at(i, n + mrows) / T.at(i, enter);
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw std::logic_error("phase-one objective unbounded");
    FieldScalar piv = T.at(leave, enter);
    for (int j = 0; j <= n + mrows; ++j) T.at(leave, j) /= piv;
    for (int i = 0; i < mrows; ++i) {
      if (i == leave || T.at(i, enter).is_zero()) continue;
      FieldScalar f = T.at(i, enter);
      for (int j = 0; j <= n + mrows; ++j) T.at(i, j) -= f * T.at(leave, j);
    }
    if (!obj[enter].is_zero()) {
      FieldScalar f = obj[enter];
      for (int j = 0; j < n + mrows; ++j) obj[j] -= f * T.at(leave, j);
      objval -= f * T.at(leave, n + mrows);
    }
    basis[leave] = enter;
  }
  if (!objval.is_zero()) return std::nullopt;
  std::vector<FieldScalar> z(n);
  for (int i = 0; i < mrows; ++i)
    if (basis[i] < n) z[basis[i]] = T.at(i, n + mrows);
  return z;
}

}  // namespace fanih
