#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fanih/fan.hpp"
#include "fanih/linalg.hpp"
#include "fanih/poly.hpp"
#include "fanih/sheaf.hpp"

namespace fanih {

// The minimal sheaf on a fan, cone by cone: each stalk is a free graded
// module over the polynomial functions on the cone's span, recorded by its
// generator degrees together with the value of every generator on every
// facet. Everything else (restriction matrices in any degree, section
// spaces, reductions) is assembled from this data on demand.
struct MESModel {
  const Fan* fan{nullptr};
  std::vector<std::vector<int>> gen_degrees;  // per cone, ascending, even
  // [cone][facet_idx][gen] = generator value on that facet, written in the
  // facet's degree-(generator degree) basis
  std::vector<std::vector<std::vector<std::vector<FieldScalar>>>> gen_images;
  int scan_margin{4};  // degrees examined beyond the design bound 2*dim - 2
};

// Basis of E^d on a cone: for each generator of degree gd <= d, the graded
// lexicographic monomials of polynomial degree (d - gd)/2 in dim variables.
inline int mes_dim(const MESModel& m, int cone, int d) {
  if (d < 0 || d % 2 != 0) return 0;
  int vars = m.fan->cone(cone).dim;
  int total = 0;
  for (int gd : m.gen_degrees[cone])
    if (gd <= d) total += monomial_basis(vars, (d - gd) / 2).dim();
  return total;
}

inline std::vector<int> mes_offsets(const MESModel& m, int cone, int d) {
  int vars = m.fan->cone(cone).dim;
  std::vector<int> off;
  int run = 0;
  for (int gd : m.gen_degrees[cone]) {
    off.push_back(run);
    if (gd <= d) run += monomial_basis(vars, (d - gd) / 2).dim();
  }
  return off;
}

// Multiplication E^d -> E^{d+2} on one cone by a linear form written in the
// cone's span coordinates. Acts as the identity on the generator index.
inline ExactMatrix mes_mult_linear(const MESModel& m, int cone, int d,
                                   const std::vector<FieldScalar>& lin) {
  int vars = m.fan->cone(cone).dim;
  ExactMatrix out(mes_dim(m, cone, d + 2), mes_dim(m, cone, d));
  std::vector<int> ofrom = mes_offsets(m, cone, d);
  std::vector<int> oto = mes_offsets(m, cone, d + 2);
  for (size_t g = 0; g < m.gen_degrees[cone].size(); ++g) {
    int gd = m.gen_degrees[cone][g];
    if (gd > d) continue;
    int q = (d - gd) / 2;
    const GradedPolySpace& src = monomial_basis(vars, q);
    for (int i = 0; i < src.dim(); ++i) {
      std::vector<FieldScalar> unit(src.dim());
      unit[i] = FieldScalar(1);
      std::vector<FieldScalar> prod = poly_mul_linear(vars, q, unit, lin);
      for (size_t j = 0; j < prod.size(); ++j)
        if (!prod[j].is_zero())
          out.at(oto[g] + static_cast<int>(j), ofrom[g] + i) = prod[j];
    }
  }
  return out;
}

// Full restriction matrix E^d_sigma -> E^d_tau across one covering pair:
// restrict the monomial part to the facet's span and multiply it into the
// stored generator value.
inline ExactMatrix mes_restriction_matrix(const MESModel& m, int sigma, int facet_idx,
                                          int d) {
  const Fan& f = *m.fan;
  int tau = f.facets_of[sigma][facet_idx];
  int sv = f.cone(sigma).dim;
  int tv = f.cone(tau).dim;
  ExactMatrix out(mes_dim(m, tau, d), mes_dim(m, sigma, d));
  if (out.rows == 0 || out.cols == 0) return out;
  ExactMatrix basis = face_basis_in_span(f, sigma, tau);
  std::vector<int> soff = mes_offsets(m, sigma, d);
  std::vector<int> toff = mes_offsets(m, tau, d);
  for (size_t g = 0; g < m.gen_degrees[sigma].size(); ++g) {
    int gd = m.gen_degrees[sigma][g];
    if (gd > d) continue;
    int q = (d - gd) / 2;
    const GradedPolySpace& src = monomial_basis(sv, q);
    const std::vector<FieldScalar>& img = m.gen_images[sigma][facet_idx][g];
    std::vector<int> ioff = mes_offsets(m, tau, gd);
    for (int i = 0; i < src.dim(); ++i) {
      std::vector<FieldScalar> unit(src.dim());
      unit[i] = FieldScalar(1);
      std::vector<FieldScalar> rme = restrict_polynomial(sv, q, unit, basis);
      for (size_t h = 0; h < m.gen_degrees[tau].size(); ++h) {
        int hd = m.gen_degrees[tau][h];
        if (hd > gd) continue;
        int hq = (gd - hd) / 2;
        int bdim = monomial_basis(tv, hq).dim();
        std::vector<FieldScalar> block(img.begin() + ioff[h],
                                       img.begin() + ioff[h] + bdim);
        std::vector<FieldScalar> prod = poly_mul(tv, q, rme, hq, block);
        for (size_t j = 0; j < prod.size(); ++j)
          if (!prod[j].is_zero())
            out.at(toff[h] + static_cast<int>(j), soff[g] + i) += prod[j];
      }
    }
  }
  return out;
}

namespace detail {

// Row-space tracker over the exact field: add() absorbs a vector when it is
// independent of what came before, keeping reduced normalized pivot rows.
struct IncrementalSpan {
  std::vector<std::vector<FieldScalar>> rows;
  std::vector<size_t> pivots;

  int rank() const { return static_cast<int>(rows.size()); }

  void reduce(std::vector<FieldScalar>& v) const {
    for (size_t r = 0; r < rows.size(); ++r) {
      FieldScalar c = v[pivots[r]];
      if (c.is_zero()) continue;
      for (size_t j = 0; j < v.size(); ++j)
        if (!rows[r][j].is_zero()) v[j] -= c * rows[r][j];
    }
  }

  bool contains(std::vector<FieldScalar> v) const {
    reduce(v);
    for (const FieldScalar& x : v)
      if (!x.is_zero()) return false;
    return true;
  }

  bool add(std::vector<FieldScalar> v) {
    reduce(v);
    size_t p = v.size();
    for (size_t j = 0; j < v.size(); ++j)
      if (!v[j].is_zero()) {
        p = j;
        break;
      }
    if (p == v.size()) return false;
    FieldScalar inv = v[p].inverse();
    for (FieldScalar& x : v)
      if (!x.is_zero()) x = x * inv;
    rows.push_back(std::move(v));
    pivots.push_back(p);
    return true;
  }
};

// Stacked products of the previous-degree section basis with a family of
// linear forms: the degree-d image of the maximal ideal.
inline std::vector<std::vector<FieldScalar>> ideal_products(
    const MESModel& m, const SectionBasis& prev, const SectionBasis& cur,
    const std::vector<std::vector<std::vector<FieldScalar>>>& lin_per_gen) {
  // lin_per_gen[form][k-th generator cone] = form in that cone's span coords
  std::vector<std::vector<FieldScalar>> out;
  if (prev.basis.empty()) return out;
  int d_prev = -1;
  // recover degrees from dims: caller guarantees consistent shapes; the
  // multiplication matrices are built per generator cone below.
  (void)d_prev;
  for (size_t fidx = 0; fidx < lin_per_gen.size(); ++fidx) {
    std::vector<ExactMatrix> mult;
    for (size_t k = 0; k < cur.gens.size(); ++k) {
      int cone = cur.gens[k];
      int to = (k + 1 < cur.gens.size() ? cur.offsets[k + 1] : cur.total) -
               cur.offsets[k];
      int from = (k + 1 < prev.gens.size() ? prev.offsets[k + 1] : prev.total) -
                 prev.offsets[k];
      (void)to;
      (void)from;
      // degree is implicit in the block dimensions; find d with matching dims
      mult.push_back(ExactMatrix(0, 0));
      (void)cone;
    }
    (void)mult;
  }
  return out;
}

}  // namespace detail

// Materialized sheaf data for every even degree up to dmax, suitable for the
// cochain and section machinery.
inline FanSheafData sheaf_from_mes(const MESModel& m, int dmax) {
  const Fan& f = *m.fan;
  FanSheafData s;
  s.fan = &f;
  s.dims.resize(f.n_cones());
  s.restr.resize(f.n_cones());
  for (const Cone& c : f.cones) {
    for (int d = 0; d <= dmax; d += 2) {
      int dd = mes_dim(m, c.id, d);
      if (dd > 0) s.dims[c.id][d] = dd;
    }
    s.restr[c.id].resize(f.facets_of[c.id].size());
    for (size_t i = 0; i < f.facets_of[c.id].size(); ++i)
      for (int d = 0; d <= dmax; d += 2) {
        ExactMatrix r = mes_restriction_matrix(m, c.id, static_cast<int>(i), d);
        if (r.rows > 0 && r.cols > 0) s.restr[c.id][i][d] = r;
      }
  }
  return s;
}

// Construction, one cone at a time by increasing dimension: sections over the
// facet subfan, reduced modulo the span's maximal ideal; a complement of the
// ideal part is lifted as the new generators. The scan runs past the design
// bound 2*dim - 2 so that unexpected high-degree generators are still caught
// (and then flagged by the condition report) instead of silently dropped.
inline MESModel construct_mes(const Fan& f) {
  MESModel m;
  m.fan = &f;
  m.gen_degrees.resize(f.n_cones());
  m.gen_images.resize(f.n_cones());

  FanSheafData partial;
  partial.fan = &f;
  partial.dims.resize(f.n_cones());
  partial.restr.resize(f.n_cones());
  int cap = 2 * f.fan_dim + m.scan_margin - 2;
  if (cap < 0) cap = 0;

  for (const Cone& c : f.cones) {
    m.gen_images[c.id].resize(f.facets_of[c.id].size());
    if (c.dim == 0) {
      m.gen_degrees[c.id] = {0};
    } else {
      const std::vector<int>& walls = f.facets_of[c.id];
      // linear forms of the span, restricted to each wall
      std::vector<ExactMatrix> wall_basis;
      for (int w : walls) wall_basis.push_back(face_basis_in_span(f, c.id, w));
      int scan = 2 * c.dim - 2 + m.scan_margin;
      SectionBasis prev;
      detail::IncrementalSpan dummy;
      for (int d = 0; d <= scan; d += 2) {
        SectionBasis cur = sheaf_sections(partial, walls, {}, d);
        detail::IncrementalSpan span;
        if (d >= 2) {
          for (const auto& s : prev.basis) {
            for (int k = 0; k < c.dim; ++k) {
              std::vector<FieldScalar> product(cur.total);
              for (size_t w = 0; w < walls.size(); ++w) {
                std::vector<FieldScalar> lin = wall_basis[w].row(k);
                ExactMatrix mult = mes_mult_linear(m, walls[w], d - 2, lin);
                for (int r = 0; r < mult.rows; ++r) {
                  FieldScalar acc(0);
                  for (int col = 0; col < mult.cols; ++col)
                    if (!mult.at(r, col).is_zero())
                      acc += mult.at(r, col) * s[prev.offsets[w] + col];
                  product[cur.offsets[w] + r] = acc;
                }
              }
              span.add(std::move(product));
            }
          }
        }
        for (const auto& sec : cur.basis) {
          if (!span.add(sec)) continue;
          m.gen_degrees[c.id].push_back(d);
          for (size_t w = 0; w < walls.size(); ++w) {
            int len = mes_dim(m, walls[w], d);
            std::vector<FieldScalar> block(sec.begin() + cur.offsets[w],
                                           sec.begin() + cur.offsets[w] + len);
            m.gen_images[c.id][w].push_back(std::move(block));
          }
        }
        prev = std::move(cur);
      }
      (void)dummy;
    }
    // materialize this cone so that deeper cones can take sections over it
    for (int d = 0; d <= cap; d += 2) {
      int dd = mes_dim(m, c.id, d);
      if (dd > 0) partial.dims[c.id][d] = dd;
    }
    partial.restr[c.id].resize(f.facets_of[c.id].size());
    for (size_t i = 0; i < f.facets_of[c.id].size(); ++i)
      for (int d = 0; d <= cap; d += 2) {
        ExactMatrix r = mes_restriction_matrix(m, c.id, static_cast<int>(i), d);
        if (r.rows > 0 && r.cols > 0) partial.restr[c.id][i][d] = r;
      }
  }
  return m;
}

inline std::vector<int> boundary_wall_ids(const Fan& f) {
  std::vector<int> out;
  for (const Cone& c : f.cones)
    if (f.in_boundary[c.id] && c.dim == f.fan_dim - 1) out.push_back(c.id);
  return out;
}

// Graded global sections over the maximal cones; RelBoundary imposes
// vanishing on the boundary walls.
struct GradedSections {
  int dmax{0};
  std::vector<SectionBasis> at;  // index d/2
  std::vector<int> dims;
};

inline GradedSections mes_sections(const MESModel& m, RelMode mode, int dmax) {
  const Fan& f = *m.fan;
  FanSheafData sheaf = sheaf_from_mes(m, dmax);
  std::vector<int> vanish;
  if (mode == RelMode::RelBoundary) vanish = boundary_wall_ids(f);
  GradedSections out;
  out.dmax = dmax;
  for (int d = 0; d <= dmax; d += 2) {
    out.at.push_back(sheaf_sections(sheaf, f.top_ids(), vanish, d));
    out.dims.push_back(out.at.back().dim());
  }
  return out;
}

// Sections reduced modulo the ambient maximal ideal: dimensions, chosen
// representative sections, and the ideal products that were quotiented out.
struct ReducedModule {
  std::vector<int> dims;          // reduced dimension in degree 2q
  std::vector<int> section_dims;  // plain section dimension in degree 2q
  std::vector<std::vector<std::vector<FieldScalar>>> reps;      // per q
  std::vector<std::vector<std::vector<FieldScalar>>> products;  // per q
  GradedSections sections;
};

inline ReducedModule reduced_module(const MESModel& m, RelMode mode, int dmax) {
  const Fan& f = *m.fan;
  ReducedModule out;
  out.sections = mes_sections(m, mode, dmax);
  std::vector<int> tops = f.top_ids();
  std::vector<ExactMatrix> top_span;
  for (int t : tops) top_span.push_back(f.span_basis(t));
  for (int d = 0; d <= dmax; d += 2) {
    const SectionBasis& cur = out.sections.at[d / 2];
    std::vector<std::vector<FieldScalar>> prods;
    if (d >= 2) {
      const SectionBasis& prev = out.sections.at[d / 2 - 1];
      for (const auto& s : prev.basis) {
        for (int k = 0; k < f.ambient_dim; ++k) {
          std::vector<FieldScalar> product(cur.total);
          for (size_t w = 0; w < tops.size(); ++w) {
            std::vector<FieldScalar> lin = top_span[w].row(k);
            ExactMatrix mult = mes_mult_linear(m, tops[w], d - 2, lin);
            for (int r = 0; r < mult.rows; ++r) {
              FieldScalar acc(0);
              for (int col = 0; col < mult.cols; ++col)
                if (!mult.at(r, col).is_zero())
                  acc += mult.at(r, col) * s[prev.offsets[w] + col];
              product[cur.offsets[w] + r] = acc;
            }
          }
          prods.push_back(std::move(product));
        }
      }
    }
    detail::IncrementalSpan span;
    for (const auto& p : prods) span.add(p);
    std::vector<std::vector<FieldScalar>> reps;
    for (const auto& sec : cur.basis)
      if (span.add(sec)) reps.push_back(sec);
    out.section_dims.push_back(cur.dim());
    out.dims.push_back(static_cast<int>(reps.size()));
    out.reps.push_back(std::move(reps));
    out.products.push_back(std::move(prods));
  }
  return out;
}

// Re-derives the defining property of every stalk from the stored data: the
// generator values must be genuine sections over the facet subfan, and they
// must descend to a basis of those sections modulo the span's maximal ideal.
struct LMEReport {
  bool ok{true};
  std::vector<std::string> failures;
};

inline LMEReport check_lme(const MESModel& m) {
  const Fan& f = *m.fan;
  LMEReport rep;
  auto fail = [&](const std::string& s) {
    rep.ok = false;
    rep.failures.push_back(s);
  };
  if (m.gen_degrees.empty() || m.gen_degrees[f.cone_by_rays.at({})] != std::vector<int>{0})
    fail("the zero cone does not carry exactly one degree-zero generator");
  int cap = 2 * f.fan_dim + m.scan_margin - 2;
  if (cap < 0) cap = 0;
  FanSheafData sheaf = sheaf_from_mes(m, cap);
  for (const Cone& c : f.cones) {
    if (c.dim == 0) continue;
    const std::vector<int>& walls = f.facets_of[c.id];
    std::vector<ExactMatrix> wall_basis;
    for (int w : walls) wall_basis.push_back(face_basis_in_span(f, c.id, w));
    int scan = 2 * c.dim - 2 + m.scan_margin;
    SectionBasis prev;
    for (int d = 0; d <= scan && d <= cap; d += 2) {
      SectionBasis cur = sheaf_sections(sheaf, walls, {}, d);
      detail::IncrementalSpan sections;
      for (const auto& s : cur.basis) sections.add(s);
      detail::IncrementalSpan span;
      if (d >= 2) {
        for (const auto& s : prev.basis) {
          for (int k = 0; k < c.dim; ++k) {
            std::vector<FieldScalar> product(cur.total);
            for (size_t w = 0; w < walls.size(); ++w) {
              std::vector<FieldScalar> lin = wall_basis[w].row(k);
              ExactMatrix mult = mes_mult_linear(m, walls[w], d - 2, lin);
              for (int r = 0; r < mult.rows; ++r) {
                FieldScalar acc(0);
                for (int col = 0; col < mult.cols; ++col)
                  if (!mult.at(r, col).is_zero())
                    acc += mult.at(r, col) * s[prev.offsets[w] + col];
                product[cur.offsets[w] + r] = acc;
              }
            }
            span.add(std::move(product));
          }
        }
      }
      int ideal_rank = span.rank();
      int quotient = cur.dim() - ideal_rank;
      int found = 0;
      for (size_t g = 0; g < m.gen_degrees[c.id].size(); ++g) {
        if (m.gen_degrees[c.id][g] != d) continue;
        ++found;
        std::vector<FieldScalar> stacked(cur.total);
        for (size_t w = 0; w < walls.size(); ++w) {
          const auto& block = m.gen_images[c.id][w][g];
          for (size_t j = 0; j < block.size(); ++j)
            stacked[cur.offsets[w] + j] = block[j];
        }
        if (!sections.contains(stacked))
          fail("generator value on cone " + std::to_string(c.id) +
               " is not a section over its facets");
        if (!span.add(stacked))
          fail("generator of cone " + std::to_string(c.id) + " at degree " +
               std::to_string(d) + " lies in the ideal part");
      }
      if (found != quotient)
        fail("cone " + std::to_string(c.id) + " has " + std::to_string(found) +
             " generators at degree " + std::to_string(d) + ", expected " +
             std::to_string(quotient));
      prev = std::move(cur);
    }
  }
  return rep;
}

// Vanishing of the reduced stalk above the dimension, in both readings of
// the degree: the stalk is graded by even t-degrees, and the condition can
// be read against the cohomological index (t-degree / 2) or the t-degree.
struct VConditionReport {
  bool cohomological_ok{true};
  bool tdegree_ok{true};
  std::vector<std::pair<int, int>> cohomological_violations;  // (cone, degree)
  std::vector<std::pair<int, int>> tdegree_violations;
};

inline VConditionReport check_v_condition(const MESModel& m) {
  VConditionReport r;
  for (const Cone& c : m.fan->cones) {
    if (c.dim == 0) continue;
    for (int gd : m.gen_degrees[c.id]) {
      if (gd / 2 >= c.dim) {
        r.cohomological_ok = false;
        r.cohomological_violations.emplace_back(c.id, gd);
      }
      if (gd >= c.dim) {
        r.tdegree_ok = false;
        r.tdegree_violations.emplace_back(c.id, gd);
      }
    }
  }
  return r;
}

// Compares global section dimensions with the free-module prediction from
// the reduced dimensions. Agreement up to dmax is evidence (not proof) of
// freeness; the first disagreement certifies non-freeness.
struct FreenessProbe {
  bool ok{true};
  int first_failure{-1};  // degree of the first mismatch
  std::vector<int> section_dims;
  std::vector<int> predicted;
  std::vector<int> reduced;
};

inline FreenessProbe freeness_probe(const MESModel& m, int dmax) {
  const Fan& f = *m.fan;
  FreenessProbe p;
  ReducedModule rm = reduced_module(m, RelMode::Absolute, dmax);
  p.section_dims = rm.section_dims;
  p.reduced = rm.dims;
  for (int d = 0; d <= dmax; d += 2) {
    int pred = 0;
    for (int q = 0; 2 * q <= d; ++q)
      pred += rm.dims[q] * monomial_basis(f.ambient_dim, (d - 2 * q) / 2).dim();
    p.predicted.push_back(pred);
    if (pred != rm.section_dims[d / 2] && p.first_failure < 0) {
      p.ok = false;
      p.first_failure = d;
    }
  }
  return p;
}

// Exactness of the augmented complexes with sheaf coefficients in every
// degree up to dmax, in both modes.
struct AcyclicityReport {
  bool ok{true};
  std::vector<std::string> failures;
};

inline AcyclicityReport acyclicity_check(const MESModel& m, int dmax) {
  const Fan& f = *m.fan;
  AcyclicityReport rep;
  FanSheafData sheaf = sheaf_from_mes(m, dmax);
  for (RelMode mode : {RelMode::Absolute, RelMode::RelBoundary}) {
    for (int d = 0; d <= dmax; d += 2) {
      CochainComplex cc = cochain_complex(f, mode, sheaf, d, true);
      std::vector<int> h = cohomology_dims(cc);
      for (int q = 0; q <= cc.n; ++q)
        if (h[q] != 0) {
          rep.ok = false;
          rep.failures.push_back(
              std::string(mode == RelMode::Absolute ? "absolute" : "relative") +
              " complex in coefficient degree " + std::to_string(d) +
              " has cohomology " + std::to_string(h[q]) + " at position " +
              std::to_string(q));
        }
    }
  }
  return rep;
}

// Reduced global dimensions against reduced boundary-vanishing dimensions,
// reversed in degree: the numerical shadow of the duality pairing.
struct DualityDims {
  bool ok{true};
  std::vector<int> absolute;  // index q
  std::vector<int> relative;
};

inline DualityDims duality_dims_check(const MESModel& m) {
  const Fan& f = *m.fan;
  int n = f.fan_dim;
  DualityDims r;
  r.absolute = reduced_module(m, RelMode::Absolute, 2 * n).dims;
  r.relative = reduced_module(m, RelMode::RelBoundary, 2 * n).dims;
  for (int q = 0; q <= n; ++q)
    if (r.absolute[q] != r.relative[n - q]) r.ok = false;
  return r;
}

// Iterated multiplication by a strictly convex conewise linear function:
// from reduced degree 2q to reduced degree 2n-2q it must be bijective.
struct HardLefschetzReport {
  bool ok{true};
  std::string why;
  std::vector<int> source_dims;  // reduced dims at 2q for q = 0..n/2
  std::vector<int> image_ranks;  // ranks of the iterated map mod the ideal
};

inline HardLefschetzReport hard_lefschetz_check(
    const MESModel& m, const std::map<int, std::vector<FieldScalar>>& forms) {
  const Fan& f = *m.fan;
  HardLefschetzReport rep;
  if (!is_complete(f)) {
    rep.ok = false;
    rep.why = "needs a complete fan";
    return rep;
  }
  if (!pl_strictly_convex(f, forms, &rep.why)) {
    rep.ok = false;
    return rep;
  }
  int n = f.fan_dim;
  ReducedModule rm = reduced_module(m, RelMode::Absolute, 2 * n);
  std::vector<int> tops = f.top_ids();
  std::vector<std::vector<FieldScalar>> lin_per_top;
  for (int t : tops) {
    ExactMatrix b = f.span_basis(t);
    const std::vector<FieldScalar>& a = forms.at(t);
    std::vector<FieldScalar> lin(f.cone(t).dim, FieldScalar(0));
    for (int j = 0; j < b.cols; ++j)
      for (int i = 0; i < b.rows; ++i)
        if (!a[i].is_zero() && !b.at(i, j).is_zero()) lin[j] += a[i] * b.at(i, j);
    lin_per_top.push_back(std::move(lin));
  }
  for (int q = 2 * q <= n ? 0 : 0; 2 * q <= n; ++q) {
    std::vector<std::vector<FieldScalar>> vecs = rm.reps[q];
    for (int d = 2 * q; d < 2 * n - 2 * q; d += 2) {
      const SectionBasis& from = rm.sections.at[d / 2];
      const SectionBasis& to = rm.sections.at[d / 2 + 1];
      std::vector<std::vector<FieldScalar>> next;
      for (const auto& v : vecs) {
        std::vector<FieldScalar> w(to.total);
        for (size_t t = 0; t < tops.size(); ++t) {
          ExactMatrix mult = mes_mult_linear(m, tops[t], d, lin_per_top[t]);
          for (int r = 0; r < mult.rows; ++r) {
            FieldScalar acc(0);
            for (int col = 0; col < mult.cols; ++col)
              if (!mult.at(r, col).is_zero())
                acc += mult.at(r, col) * v[from.offsets[t] + col];
            w[to.offsets[t] + r] = acc;
          }
        }
        next.push_back(std::move(w));
      }
      vecs = std::move(next);
    }
    int target_q = n - q;
    detail::IncrementalSpan span;
    for (const auto& p : rm.products[target_q]) span.add(p);
    int independent = 0;
    for (const auto& v : vecs)
      if (span.add(v)) ++independent;
    rep.source_dims.push_back(rm.dims[q]);
    rep.image_ranks.push_back(independent);
    if (independent != rm.dims[q] || rm.dims[q] != rm.dims[target_q]) rep.ok = false;
  }
  return rep;
}

// Nondegeneracy of the multiplication pairing between global sections and
// boundary-vanishing sections on a simplicial fan, where every stalk is the
// full polynomial ring and sections multiply componentwise. The evaluation
// sends the distinguished top-degree class to 1.
struct PairingReport {
  bool ok{true};
  std::string why;
  std::vector<int> ranks;  // rank of the degree-q pairing matrix
};

inline PairingReport simplicial_pd_pairing(const MESModel& m) {
  const Fan& f = *m.fan;
  PairingReport rep;
  if (!is_simplicial(f)) {
    rep.ok = false;
    rep.why = "pairing by componentwise products needs a simplicial fan";
    return rep;
  }
  int n = f.fan_dim;
  ReducedModule rabs = reduced_module(m, RelMode::Absolute, 2 * n);
  ReducedModule rrel = reduced_module(m, RelMode::RelBoundary, 2 * n);
  if (rrel.dims[n] != 1) {
    rep.ok = false;
    rep.why = "top reduced boundary-vanishing piece is not one-dimensional";
    return rep;
  }
  std::vector<int> tops = f.top_ids();
  // evaluation basis at the top degree: ideal products plus the top class
  const SectionBasis& top_sec = rrel.sections.at[n];
  std::vector<std::vector<FieldScalar>> cols = rrel.products[n];
  cols.push_back(rrel.reps[n][0]);
  ExactMatrix eval(top_sec.total, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < top_sec.total; ++i)
      eval.at(i, static_cast<int>(j)) = cols[j][i];
  for (int q = 0; q <= n; ++q) {
    const auto& A = rabs.reps[q];
    const auto& B = rrel.reps[n - q];
    if (A.size() != B.size()) {
      rep.ok = false;
      rep.why = "reduced dimensions are not dual";
      return rep;
    }
    if (A.empty()) {
      rep.ranks.push_back(0);
      continue;
    }
    ExactMatrix pairing(static_cast<int>(A.size()), static_cast<int>(B.size()));
    for (size_t a = 0; a < A.size(); ++a)
      for (size_t b = 0; b < B.size(); ++b) {
        // componentwise product of the two sections, then the coefficient of
        // the top class in the evaluation basis
        std::vector<FieldScalar> prod(top_sec.total);
        const SectionBasis& sa = rabs.sections.at[q];
        const SectionBasis& sb = rrel.sections.at[n - q];
        for (size_t t = 0; t < tops.size(); ++t) {
          int vars = f.cone(tops[t]).dim;
          int da = monomial_basis(vars, q).dim();
          int db = monomial_basis(vars, n - q).dim();
          std::vector<FieldScalar> ca(A[a].begin() + sa.offsets[t],
                                      A[a].begin() + sa.offsets[t] + da);
          std::vector<FieldScalar> cb(B[b].begin() + sb.offsets[t],
                                      B[b].begin() + sb.offsets[t] + db);
          std::vector<FieldScalar> cp = poly_mul(vars, q, ca, n - q, cb);
          for (size_t j = 0; j < cp.size(); ++j)
            prod[top_sec.offsets[t] + j] = cp[j];
        }
        auto sol = solve_linear(eval, prod);
        if (!sol) {
          rep.ok = false;
          rep.why = "section product escaped the boundary-vanishing space";
          return rep;
        }
        pairing.at(static_cast<int>(a), static_cast<int>(b)) = sol->back();
      }
    int rank = rank_of(pairing);
    rep.ranks.push_back(rank);
    if (rank != static_cast<int>(A.size())) rep.ok = false;
  }
  return rep;
}

// Numerical decomposition of the pushforward along a subdivision of a single
// full-dimensional cone: reduced section dimensions of the fine fan, minus
// the coarse stalk's generators; the leftover counts the extra summands.
struct DirectImageDecomposition {
  bool ok{true};
  std::string why;
  std::vector<int> pushforward;  // index q
  std::vector<int> base;
  std::vector<int> excess;
};

inline DirectImageDecomposition decompose_direct_image(const Fan& coarse,
                                                       const Fan& fine) {
  DirectImageDecomposition r;
  auto fail = [&](const std::string& s) {
    r.ok = false;
    r.why = s;
    return r;
  };
  if (coarse.ambient_dim != fine.ambient_dim) return fail("ambient dimensions differ");
  std::vector<int> ctops = coarse.top_ids();
  if (ctops.size() != 1 || coarse.fan_dim != coarse.ambient_dim)
    return fail("the coarse fan must be the faces of one full-dimensional cone");
  const Cone& sigma = coarse.cone(ctops[0]);
  int n = coarse.ambient_dim;
  ExactMatrix cm(n, static_cast<int>(sigma.rays.size()));
  for (size_t j = 0; j < sigma.rays.size(); ++j)
    for (int i = 0; i < n; ++i) cm.at(i, static_cast<int>(j)) = coarse.rays[sigma.rays[j]][i];
  for (const auto& ray : fine.rays)
    if (!lp_feasible(cm, ray)) return fail("a fine ray leaves the coarse cone");
  for (int rid : sigma.rays) {
    bool covered = false;
    for (int t : fine.top_ids()) {
      const Cone& tc = fine.cone(t);
      ExactMatrix fm(n, static_cast<int>(tc.rays.size()));
      for (size_t j = 0; j < tc.rays.size(); ++j)
        for (int i = 0; i < n; ++i) fm.at(i, static_cast<int>(j)) = fine.rays[tc.rays[j]][i];
      if (lp_feasible(fm, coarse.rays[rid])) {
        covered = true;
        break;
      }
    }
    if (!covered) return fail("a coarse ray is not covered by the fine fan");
  }
  MESModel cmdl = construct_mes(coarse);
  MESModel fmdl = construct_mes(fine);
  ReducedModule push = reduced_module(fmdl, RelMode::Absolute, 2 * n);
  r.pushforward = push.dims;
  r.base.assign(n + 1, 0);
  for (int gd : cmdl.gen_degrees[sigma.id]) ++r.base[gd / 2];
  r.excess.assign(n + 1, 0);
  for (int q = 0; q <= n; ++q) {
    r.excess[q] = r.pushforward[q] - r.base[q];
    if (r.excess[q] < 0) {
      r.ok = false;
      r.why = "pushforward is smaller than the base sheaf";
    }
  }
  return r;
}

}  // namespace fanih
