#pragma once

#include <map>
#include <vector>

#include "fanih/linalg.hpp"
#include "fanih/scalar.hpp"

namespace fanih {

// Basis of the degree-q piece of the symmetric algebra on `vars` coordinates,
// in graded lexicographic order (within the fixed total degree q, exponent
// vectors sorted lexicographically descending, so x1^q comes first).
// Cohomological grading doubles q: this space sits in degree 2q.
struct GradedPolySpace {
  int vars{0};
  int q{0};
  std::vector<std::vector<int>> monomials;
  std::map<std::vector<int>, int> index;

  int dim() const { return static_cast<int>(monomials.size()); }
};

inline unsigned long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / i;
  return r;
}

namespace detail {

inline void enumerate_monomials(int vars, int q, std::vector<int>& cur,
                                std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == vars - 1) {
    cur.push_back(q);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = q; e >= 0; --e) {
    cur.push_back(e);
    enumerate_monomials(vars, q - e, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline const GradedPolySpace& monomial_basis(int vars, int q) {
  static std::map<std::pair<int, int>, GradedPolySpace> cache;
  auto key = std::make_pair(vars, q);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  GradedPolySpace s;
  s.vars = vars;
  s.q = q;
  if (vars == 0) {
    if (q == 0) s.monomials.push_back({});
  } else {
    std::vector<int> cur;
    detail::enumerate_monomials(vars, q, cur, s.monomials);
  }
  for (int i = 0; i < static_cast<int>(s.monomials.size()); ++i) s.index[s.monomials[i]] = i;
  if (s.dim() != static_cast<int>(binomial(vars + q - 1, q)) && !(vars == 0 && q == 0))
    throw std::logic_error("monomial count mismatch");
  return cache.emplace(key, std::move(s)).first->second;
}

// Product of homogeneous pieces: coefficients in degree q1 + q2.
inline std::vector<FieldScalar> poly_mul(int vars, int q1, const std::vector<FieldScalar>& c1,
                                         int q2, const std::vector<FieldScalar>& c2) {
  const GradedPolySpace& s1 = monomial_basis(vars, q1);
  const GradedPolySpace& s2 = monomial_basis(vars, q2);
  const GradedPolySpace& sp = monomial_basis(vars, q1 + q2);
  std::vector<FieldScalar> out(sp.dim());
  for (int i = 0; i < s1.dim(); ++i) {
    if (c1[i].is_zero()) continue;
    for (int j = 0; j < s2.dim(); ++j) {
      if (c2[j].is_zero()) continue;
      std::vector<int> e = s1.monomials[i];
      for (int v = 0; v < vars; ++v) e[v] += s2.monomials[j][v];
      out[sp.index.at(e)] += c1[i] * c2[j];
    }
  }
  return out;
}

// Multiplication by a linear form given by `lin` (length vars).
inline std::vector<FieldScalar> poly_mul_linear(int vars, int q, const std::vector<FieldScalar>& c,
                                                const std::vector<FieldScalar>& lin) {
  const GradedPolySpace& s = monomial_basis(vars, q);
  const GradedPolySpace& sp = monomial_basis(vars, q + 1);
  std::vector<FieldScalar> out(sp.dim());
  for (int i = 0; i < s.dim(); ++i) {
    if (c[i].is_zero()) continue;
    for (int v = 0; v < vars; ++v) {
      if (lin[v].is_zero()) continue;
      std::vector<int> e = s.monomials[i];
      ++e[v];
      out[sp.index.at(e)] += c[i] * lin[v];
    }
  }
  return out;
}

// Restriction of a degree-q polynomial in `vars_from` coordinates along the
// inclusion whose image basis is the columns of `basis` (vars_from x vars_to):
// substitute x_i = sum_j basis(i, j) t_j. A ring homomorphism degreewise;
// restricting along a chain composes.
inline std::vector<FieldScalar> restrict_polynomial(int vars_from, int q,
                                                    const std::vector<FieldScalar>& coeffs,
                                                    const ExactMatrix& basis) {
  if (basis.rows != vars_from) throw std::invalid_argument("restriction basis shape mismatch");
  int vars_to = basis.cols;
  const GradedPolySpace& src = monomial_basis(vars_from, q);
  const GradedPolySpace& dst = monomial_basis(vars_to, q);
  std::vector<FieldScalar> out(dst.dim());
  for (int i = 0; i < src.dim(); ++i) {
    if (coeffs[i].is_zero()) continue;
    std::vector<FieldScalar> cur{FieldScalar(1)};  // degree 0
    int deg = 0;
    for (int v = 0; v < vars_from; ++v) {
      std::vector<FieldScalar> lin = basis.row(v);
      for (int rep = 0; rep < src.monomials[i][v]; ++rep) {
        cur = poly_mul_linear(vars_to, deg, cur, lin);
        ++deg;
      }
    }
    for (int j = 0; j < dst.dim(); ++j)
      if (!cur[j].is_zero()) out[j] += coeffs[i] * cur[j];
  }
  return out;
}

}  // namespace fanih
