#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "fanih/fan.hpp"

namespace fanih {

// Polynomial in t with even exponents only: coeff[q] multiplies t^{2q}.
// All the invariants of this module live in this ring.
struct PoincarePolynomial {
  std::vector<long long> coeff;

  PoincarePolynomial() = default;
  explicit PoincarePolynomial(std::vector<long long> c) : coeff(std::move(c)) { trim(); }

  void trim() {
    while (!coeff.empty() && coeff.back() == 0) coeff.pop_back();
  }

  int qdegree() const { return static_cast<int>(coeff.size()) - 1; }  // -1 for zero

  long long at(int q) const {
    return (q >= 0 && q < static_cast<int>(coeff.size())) ? coeff[q] : 0;
  }

  friend bool operator==(const PoincarePolynomial& x, const PoincarePolynomial& y) {
    return x.coeff == y.coeff;
  }
  friend bool operator!=(const PoincarePolynomial& x, const PoincarePolynomial& y) {
    return !(x == y);
  }

  friend PoincarePolynomial operator+(const PoincarePolynomial& x,
                                      const PoincarePolynomial& y) {
    std::vector<long long> c(std::max(x.coeff.size(), y.coeff.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) c[i] = x.at(static_cast<int>(i)) + y.at(static_cast<int>(i));
    return PoincarePolynomial(std::move(c));
  }

  friend PoincarePolynomial operator*(const PoincarePolynomial& x,
                                      const PoincarePolynomial& y) {
    if (x.coeff.empty() || y.coeff.empty()) return {};
    std::vector<long long> c(x.coeff.size() + y.coeff.size() - 1, 0);
    for (size_t i = 0; i < x.coeff.size(); ++i)
      for (size_t j = 0; j < y.coeff.size(); ++j) c[i + j] += x.coeff[i] * y.coeff[j];
    return PoincarePolynomial(std::move(c));
  }

  std::string str() const {
    if (coeff.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t q = 0; q < coeff.size(); ++q) {
      if (coeff[q] == 0) continue;
      long long v = coeff[q];
      if (!first) os << (v > 0 ? " + " : " - ");
      if (first && v < 0) os << "-";
      long long a = v < 0 ? -v : v;
      if (q == 0)
        os << a;
      else {
        if (a != 1) os << a << "*";
        os << "t^" << 2 * q;
      }
      first = false;
    }
    return os.str();
  }
};

inline PoincarePolynomial pp_one() { return PoincarePolynomial({1}); }

// (t^2 - 1)^m
inline PoincarePolynomial pow_t2_minus_1(int m) {
  if (m < 0) throw std::invalid_argument("negative exponent");
  std::vector<long long> c(m + 1, 0);
  long long b = 1;
  for (int j = 0; j <= m; ++j) {
    // coefficient of t^{2j} is binom(m, j) * (-1)^{m-j}
    c[j] = ((m - j) % 2 == 0) ? b : -b;
    b = b * (m - j) / (j + 1);
  }
  return PoincarePolynomial(std::move(c));
}

// Keep the terms of t-degree strictly below tdeg.
inline PoincarePolynomial truncate_below_tdegree(const PoincarePolynomial& p, int tdeg) {
  std::vector<long long> c;
  for (int q = 0; q <= p.qdegree(); ++q)
    if (2 * q < tdeg) c.push_back(p.coeff[q]);
  return PoincarePolynomial(std::move(c));
}

// t^{2n} p(1/t) for p of t-degree at most 2n.
inline PoincarePolynomial reverse_degree(const PoincarePolynomial& p, int n) {
  if (p.qdegree() > n) throw std::invalid_argument("degree exceeds reversal bound");
  std::vector<long long> c(n + 1, 0);
  for (int q = 0; q <= n; ++q) c[q] = p.at(n - q);
  return PoincarePolynomial(std::move(c));
}

namespace detail {

inline void local_poincare_fill(const FanPoset& p, int e,
                                std::vector<PoincarePolynomial>& memo,
                                std::vector<char>& done) {
  if (done[e]) return;
  if (p.dims[e] == 0) {
    memo[e] = pp_one();
    done[e] = true;
    return;
  }
  int d = p.dims[e];
  PoincarePolynomial lambda;  // invariant of the complete fan carved from the facets
  for (int g : p.proper_faces(e)) {
    local_poincare_fill(p, g, memo, done);
    lambda = lambda + pow_t2_minus_1((d - 1) - p.dims[g]) * memo[g];
  }
  PoincarePolynomial one_minus_t2(std::vector<long long>{1, -1});
  memo[e] = truncate_below_tdegree(one_minus_t2 * lambda, d);
  done[e] = true;
}

}  // namespace detail

// Local invariant of one poset element: 1 in dimensions zero to two, and in
// general the low-degree part of (1 - t^2) times the invariant of the
// flattened boundary, which the recursion expands over the proper faces.
inline PoincarePolynomial local_poincare(const FanPoset& p, int e) {
  std::vector<PoincarePolynomial> memo(p.n());
  std::vector<char> done(p.n(), 0);
  detail::local_poincare_fill(p, e, memo, done);
  return memo[e];
}

inline std::vector<PoincarePolynomial> all_local_poincare(const FanPoset& p) {
  std::vector<PoincarePolynomial> memo(p.n());
  std::vector<char> done(p.n(), 0);
  for (int e = 0; e < p.n(); ++e) detail::local_poincare_fill(p, e, memo, done);
  return memo;
}

// Global invariant of the pair (fan, boundary): the local-to-global sum over
// every cone. For a complete fan this is also the absolute invariant.
inline PoincarePolynomial global_poincare_relative(const FanPoset& p) {
  std::vector<PoincarePolynomial> loc = all_local_poincare(p);
  PoincarePolynomial out;
  for (int e = 0; e < p.n(); ++e)
    out = out + pow_t2_minus_1(p.top_dim - p.dims[e]) * loc[e];
  return out;
}

// Absolute invariant: equals the relative one on complete fans and its degree
// reversal otherwise. The reversal step is a theorem about quasi-convex fans,
// so callers must have established quasi-convexity first.
inline PoincarePolynomial global_poincare_absolute(const FanPoset& p) {
  PoincarePolynomial rel = global_poincare_relative(p);
  bool has_boundary = false;
  for (char b : p.boundary)
    if (b) has_boundary = true;
  if (!has_boundary) return rel;
  return reverse_degree(rel, p.top_dim);
}

// Classical h-polynomial from the face numbers alone, valuing every cone at 1.
// Matches the global invariant exactly on simplicial fans and deviates
// otherwise, which is what the comparison tests exploit.
inline PoincarePolynomial classical_h_from_f(const FanPoset& p) {
  PoincarePolynomial out;
  for (int d = 0; d <= p.top_dim; ++d) {
    long long count = static_cast<long long>(p.elements_of_dim(d).size());
    out = out + pow_t2_minus_1(p.top_dim - d) * PoincarePolynomial({count});
  }
  return out;
}

struct DualityReport {
  bool ok{true};
  bool complete{false};
  PoincarePolynomial relative;
  PoincarePolynomial absolute;
  std::vector<std::string> failures;
};

// Degree and symmetry consequences of Poincare duality, checkable from the
// poset alone: the relative invariant is monic of full degree; complete fans
// are palindromic; fans with boundary have absolute degree at most 2n-2.
inline DualityReport duality_check(const FanPoset& p) {
  DualityReport r;
  r.relative = global_poincare_relative(p);
  int n = p.top_dim;
  bool has_boundary = false;
  for (char b : p.boundary)
    if (b) has_boundary = true;
  r.complete = !has_boundary;
  if (r.relative.at(n) != 1 || r.relative.qdegree() != n) {
    r.ok = false;
    r.failures.push_back("relative invariant is not monic of degree " +
                         std::to_string(2 * n));
  }
  if (r.complete) {
    r.absolute = r.relative;
    for (int q = 0; q <= n; ++q)
      if (r.relative.at(q) != r.relative.at(n - q)) {
        r.ok = false;
        r.failures.push_back("palindrome fails at t^" + std::to_string(2 * q));
      }
  } else {
    if (r.relative.at(0) != 0) {
      r.ok = false;
      r.failures.push_back("absolute degree bound 2n-2 fails");
    }
    r.absolute = reverse_degree(r.relative, n);
    if (r.absolute.at(0) != 1) {
      r.ok = false;
      r.failures.push_back("absolute invariant does not start at 1");
    }
  }
  for (int q = 0; q <= n; ++q)
    if (r.relative.at(q) < 0) {
      r.ok = false;
      r.failures.push_back("negative coefficient at t^" + std::to_string(2 * q));
    }
  return r;
}

struct KalaiViolation {
  int tau;
  int sigma;
  PoincarePolynomial whole;
  PoincarePolynomial product;
};

struct KalaiReport {
  bool ok{true};
  int pairs_checked{0};
  std::vector<KalaiViolation> violations;
};

// Coefficientwise  P(sigma) >= P(tau) * P(interval)  for every face pair.
inline KalaiReport kalai_check(const FanPoset& p) {
  KalaiReport r;
  std::vector<PoincarePolynomial> loc = all_local_poincare(p);
  for (int s = 0; s < p.n(); ++s) {
    for (int t = 0; t < p.n(); ++t) {
      if (t == s || !p.leq[t][s]) continue;
      FanPoset iv = interval_poset(p, t, s);
      int top = -1;
      for (int e = 0; e < iv.n(); ++e)
        if (iv.dims[e] == iv.top_dim) top = e;
      PoincarePolynomial prod = loc[t] * local_poincare(iv, top);
      ++r.pairs_checked;
      bool fine = true;
      for (int q = 0; q <= std::max(prod.qdegree(), loc[s].qdegree()); ++q)
        if (loc[s].at(q) < prod.at(q)) fine = false;
      if (!fine) {
        r.ok = false;
        r.violations.push_back({t, s, loc[s], prod});
      }
    }
  }
  return r;
}

// Coefficients of p(t) / (1-t^2)^n up to t^{2*qmax}: the graded ranks of a
// free module over the polynomial ring whose generators are counted by p.
inline std::vector<long long> poincare_series(const PoincarePolynomial& p, int n,
                                              int qmax) {
  std::vector<long long> s(qmax + 1, 0);
  for (int q = 0; q <= qmax; ++q) s[q] = p.at(q);
  for (int round = 0; round < n; ++round)
    for (int q = 1; q <= qmax; ++q) s[q] += s[q - 1];
  return s;
}

}  // namespace fanih
