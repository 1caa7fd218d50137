#pragma once

#include <map>
#include <vector>

#include "fanih/fan.hpp"
#include "fanih/linalg.hpp"

namespace fanih {

// Sheaf on the fan space, recorded as exact data: a graded dimension per cone
// per even cohomological degree, and one matrix per covering pair and degree
// mapping the value on the bigger cone to the value on the wall. Restrictions
// along any two saturated chains with the same endpoints must agree.
struct FanSheafData {
  const Fan* fan{nullptr};
  std::vector<std::map<int, int>> dims;                        // [cone][degree]
  std::vector<std::vector<std::map<int, ExactMatrix>>> restr;  // [cone][facet idx][degree]

  int dim_at(int cone, int degree) const {
    auto it = dims[cone].find(degree);
    return it == dims[cone].end() ? 0 : it->second;
  }

  ExactMatrix restriction(int sigma, int facet_idx, int degree) const {
    int tau = fan->facets_of[sigma][facet_idx];
    auto it = restr[sigma][facet_idx].find(degree);
    if (it != restr[sigma][facet_idx].end()) return it->second;
    return ExactMatrix(dim_at(tau, degree), dim_at(sigma, degree));
  }

  bool is_constant() const {
    for (const Cone& c : fan->cones) {
      if (dims[c.id] != std::map<int, int>{{0, 1}}) return false;
      for (size_t i = 0; i < fan->facets_of[c.id].size(); ++i) {
        ExactMatrix m = restriction(c.id, static_cast<int>(i), 0);
        if (m.rows != 1 || m.cols != 1 || m.at(0, 0) != FieldScalar(1)) return false;
      }
    }
    return true;
  }

  bool is_characteristic_of(int sigma) const {
    const Cone& s = fan->cone(sigma);
    for (const Cone& c : fan->cones) {
      bool in_star =
          std::includes(c.rays.begin(), c.rays.end(), s.rays.begin(), s.rays.end());
      std::map<int, int> want;
      if (in_star) want[0] = 1;
      if (dims[c.id] != want) return false;
      for (size_t i = 0; i < fan->facets_of[c.id].size(); ++i) {
        const Cone& t = fan->cone(fan->facets_of[c.id][i]);
        bool tau_in =
            std::includes(t.rays.begin(), t.rays.end(), s.rays.begin(), s.rays.end());
        if (tau_in && in_star) {
          ExactMatrix m = restriction(c.id, static_cast<int>(i), 0);
          if (m.rows != 1 || m.cols != 1 || m.at(0, 0) != FieldScalar(1)) return false;
        }
      }
    }
    return true;
  }
};

// R in degree zero on every cone, identity restrictions.
inline FanSheafData constant_sheaf(const Fan& f) {
  FanSheafData s;
  s.fan = &f;
  s.dims.resize(f.n_cones());
  s.restr.resize(f.n_cones());
  for (const Cone& c : f.cones) {
    s.dims[c.id][0] = 1;
    s.restr[c.id].resize(f.facets_of[c.id].size());
    for (size_t i = 0; i < f.facets_of[c.id].size(); ++i) {
      ExactMatrix one(1, 1);
      one.at(0, 0) = FieldScalar(1);
      s.restr[c.id][i][0] = one;
    }
  }
  return s;
}

// R in degree zero on the cones having sigma as a face, zero elsewhere;
// identity restrictions inside the star.
inline FanSheafData characteristic_sheaf(const Fan& f, int sigma) {
  FanSheafData s;
  s.fan = &f;
  s.dims.resize(f.n_cones());
  s.restr.resize(f.n_cones());
  const Cone& base = f.cone(sigma);
  auto in_star = [&](const Cone& c) {
    return std::includes(c.rays.begin(), c.rays.end(), base.rays.begin(), base.rays.end());
  };
  for (const Cone& c : f.cones) {
    if (in_star(c)) s.dims[c.id][0] = 1;
    s.restr[c.id].resize(f.facets_of[c.id].size());
    for (size_t i = 0; i < f.facets_of[c.id].size(); ++i) {
      const Cone& t = f.cone(f.facets_of[c.id][i]);
      if (in_star(c) && in_star(t)) {
        ExactMatrix one(1, 1);
        one.at(0, 0) = FieldScalar(1);
        s.restr[c.id][i][0] = one;
      }
    }
  }
  return s;
}

// Restriction along a saturated chain from sigma to a face gamma; the diamond
// condition makes the result chain independent, the first facet containing
// gamma is chosen at every step.
inline ExactMatrix composed_restriction(const FanSheafData& s, int sigma, int gamma,
                                        int degree) {
  const Fan& f = *s.fan;
  const Cone& g = f.cone(gamma);
  ExactMatrix acc = ExactMatrix::identity(s.dim_at(sigma, degree));
  int cur = sigma;
  while (cur != gamma) {
    const auto& fl = f.facets_of[cur];
    int chosen = -1;
    for (size_t i = 0; i < fl.size(); ++i) {
      const Cone& t = f.cone(fl[i]);
      if (std::includes(t.rays.begin(), t.rays.end(), g.rays.begin(), g.rays.end())) {
        chosen = static_cast<int>(i);
        break;
      }
    }
    if (chosen < 0) throw std::invalid_argument("gamma is not a face of sigma");
    acc = s.restriction(cur, chosen, degree) * acc;
    cur = fl[chosen];
  }
  return acc;
}

// Diamond condition: for every cone and every pair of its facets, the two
// compositions into each common facet of the pair agree, in every degree.
inline bool diamond_commutes(const FanSheafData& s) {
  const Fan& f = *s.fan;
  for (const Cone& c : f.cones) {
    std::set<int> degrees;
    for (const auto& [d, dim] : s.dims[c.id]) {
      (void)dim;
      degrees.insert(d);
    }
    const auto& fl = f.facets_of[c.id];
    for (size_t i = 0; i < fl.size(); ++i) {
      for (size_t j = i + 1; j < fl.size(); ++j) {
        for (int rho : f.facets_of[fl[i]]) {
          const auto& other = f.facets_of[fl[j]];
          if (std::find(other.begin(), other.end(), rho) == other.end()) continue;
          for (int d : degrees) {
            ExactMatrix left =
                composed_restriction(s, fl[i], rho, d) * s.restriction(c.id, static_cast<int>(i), d);
            ExactMatrix right =
                composed_restriction(s, fl[j], rho, d) * s.restriction(c.id, static_cast<int>(j), d);
            if (!(left == right)) return false;
          }
        }
      }
    }
  }
  return true;
}

// Compatible tuples over the listed generator cones (the maximal members of
// the subfan they generate), optionally vanishing on the subfan generated by
// `vanish`. Columns of `basis` are the sections in stacked coordinates.
struct SectionBasis {
  std::vector<int> gens;
  std::vector<int> offsets;
  int total{0};
  std::vector<std::vector<FieldScalar>> basis;

  int dim() const { return static_cast<int>(basis.size()); }
};

inline SectionBasis sheaf_sections(const FanSheafData& s, const std::vector<int>& gens,
                                   const std::vector<int>& vanish, int degree) {
  const Fan& f = *s.fan;
  SectionBasis out;
  out.gens = gens;
  for (int g : gens) {
    out.offsets.push_back(out.total);
    out.total += s.dim_at(g, degree);
  }
  std::vector<std::vector<FieldScalar>> rows;
  for (size_t i = 0; i < gens.size(); ++i) {
    for (size_t j = i + 1; j < gens.size(); ++j) {
      const Cone& a = f.cone(gens[i]);
      const Cone& b = f.cone(gens[j]);
      std::vector<int> common;
      std::set_intersection(a.rays.begin(), a.rays.end(), b.rays.begin(), b.rays.end(),
                            std::back_inserter(common));
      int gamma = f.cone_by_rays.at(common);
      ExactMatrix ra = composed_restriction(s, gens[i], gamma, degree);
      ExactMatrix rb = composed_restriction(s, gens[j], gamma, degree);
      for (int r = 0; r < ra.rows; ++r) {
        std::vector<FieldScalar> row(out.total);
        for (int c = 0; c < ra.cols; ++c) row[out.offsets[i] + c] = ra.at(r, c);
        for (int c = 0; c < rb.cols; ++c) row[out.offsets[j] + c] -= rb.at(r, c);
        rows.push_back(std::move(row));
      }
    }
  }
  for (int v : vanish) {
    const Cone& vc = f.cone(v);
    int host = -1;
    for (size_t i = 0; i < gens.size(); ++i) {
      const Cone& g = f.cone(gens[i]);
      if (std::includes(g.rays.begin(), g.rays.end(), vc.rays.begin(), vc.rays.end())) {
        host = static_cast<int>(i);
        break;
      }
    }
    if (host < 0) throw std::invalid_argument("vanishing cone outside the subfan");
    ExactMatrix rv = composed_restriction(s, gens[host], v, degree);
    for (int r = 0; r < rv.rows; ++r) {
      std::vector<FieldScalar> row(out.total);
      for (int c = 0; c < rv.cols; ++c) row[out.offsets[host] + c] = rv.at(r, c);
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) {
    // free: every coordinate vector is a section
    for (int c = 0; c < out.total; ++c) {
      std::vector<FieldScalar> e(out.total);
      e[c] = FieldScalar(1);
      out.basis.push_back(std::move(e));
    }
    return out;
  }
  ExactMatrix sys(static_cast<int>(rows.size()), out.total);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < out.total; ++c) sys.at(static_cast<int>(r), c) = rows[r][c];
  out.basis = rank_and_kernel(sys).kernel;
  return out;
}

enum class RelMode { Absolute, RelBoundary };

// The complex C^k = sum of values on the cones of dimension (fan dim - k),
// k = 0..n, with signs from the stored orientation coefficients. RelBoundary
// drops the summands lying in the boundary subfan. The augmented variant
// prepends the degree -1 term of the convention in use: global sections for
// the relative complex, boundary-vanishing sections for the absolute one.
struct CochainComplex {
  int n{0};
  bool augmented{false};
  std::vector<std::vector<int>> blocks;  // per k: contributing cone ids
  std::vector<int> dims;                 // dim C^k
  std::vector<ExactMatrix> deltas;       // delta^k: C^k -> C^{k+1}
  int aug_dim{0};
  ExactMatrix aug_map;                   // C^{-1} -> C^0
};

inline CochainComplex cochain_complex(const Fan& f, RelMode rel, const FanSheafData& s,
                                      int degree, bool augmented) {
  if (!f.pure) throw FanError("cochain complex needs a pure fan");
  if (s.fan != &f) throw std::invalid_argument("sheaf data belongs to a different fan");
  CochainComplex c;
  c.n = f.fan_dim;
  c.augmented = augmented;
  c.blocks.resize(c.n + 1);
  c.dims.assign(c.n + 1, 0);
  for (int k = 0; k <= c.n; ++k) {
    for (int id : f.cones_of_dim(c.n - k)) {
      if (rel == RelMode::RelBoundary && f.in_boundary[id]) continue;
      c.blocks[k].push_back(id);
      c.dims[k] += s.dim_at(id, degree);
    }
  }
  auto offset_in = [&](int k, int id) {
    int off = 0;
    for (int b : c.blocks[k]) {
      if (b == id) return off;
      off += s.dim_at(b, degree);
    }
    throw std::logic_error("cone not in block");
  };
  for (int k = 0; k + 1 <= c.n; ++k) {
    ExactMatrix d(c.dims[k + 1], c.dims[k]);
    for (int sid : c.blocks[k]) {
      int scol = offset_in(k, sid);
      const auto& fl = f.facets_of[sid];
      for (size_t i = 0; i < fl.size(); ++i) {
        int tid = fl[i];
        if (rel == RelMode::RelBoundary && f.in_boundary[tid]) continue;
        int trow = offset_in(k + 1, tid);
        ExactMatrix r = s.restriction(sid, static_cast<int>(i), degree);
        int sign = f.facet_orientation[sid][i];
        for (int a = 0; a < r.rows; ++a)
          for (int b = 0; b < r.cols; ++b)
            d.at(trow + a, scol + b) =
                sign > 0 ? r.at(a, b) : FieldScalar(0) - r.at(a, b);
      }
    }
    c.deltas.push_back(std::move(d));
  }
  if (augmented) {
    if (f.fan_dim != f.ambient_dim)
      throw FanError("augmentation needs a full-dimensional fan");
    std::vector<int> vanish;
    if (rel == RelMode::Absolute) {
      for (const Cone& w : f.cones)
        if (f.in_boundary[w.id] && w.dim == f.fan_dim - 1) vanish.push_back(w.id);
    }
    SectionBasis sec = sheaf_sections(s, c.blocks[0], vanish, degree);
    c.aug_dim = sec.dim();
    c.aug_map = ExactMatrix(c.dims[0], c.aug_dim);
    for (int j = 0; j < c.aug_dim; ++j)
      for (int i = 0; i < c.dims[0]; ++i) c.aug_map.at(i, j) = sec.basis[j][i];
  }
  return c;
}

// H^0..H^n of the complex; reduced against the augmentation when present.
inline std::vector<int> cohomology_dims(const CochainComplex& c) {
  std::vector<int> h(c.n + 1, 0);
  for (int k = 0; k <= c.n; ++k) {
    int kernel;
    if (k < c.n)
      kernel = c.dims[k] - rank_of(c.deltas[k]);
    else
      kernel = c.dims[k];
    int image = 0;
    if (k == 0)
      image = c.augmented ? c.aug_dim : 0;
    else
      image = rank_of(c.deltas[k - 1]);
    h[k] = kernel - image;
  }
  return h;
}

// Quasi-convexity sweep: for every cone whose transversal fan can carry
// cohomology (codimension at least two and sitting in the boundary, plus the
// zero cone of a non-complete fan), the boundary-relative augmented complex
// of the transversal fan with constant coefficients must be exact.
struct QuasiConvexity {
  bool quasiconvex{true};
  std::vector<int> tested;
  std::vector<int> skipped;
  std::vector<int> witnesses;
  std::map<int, std::vector<int>> witness_dims;
};

inline QuasiConvexity quasiconvexity_test(const Fan& f) {
  if (!f.pure || f.fan_dim != f.ambient_dim)
    throw FanError("quasi-convexity is defined for pure full-dimensional fans");
  QuasiConvexity out;
  bool complete = is_complete(f);
  for (const Cone& c : f.cones) {
    int k = f.ambient_dim - c.dim;
    bool skip;
    if (k <= 1)
      skip = true;  // exact by the closed low-codimension formula
    else if (c.dim == 0)
      skip = complete;  // transversal fan is the fan itself
    else
      skip = !f.in_boundary[c.id];  // interior: transversal fan complete
    if (skip) {
      out.skipped.push_back(c.id);
      continue;
    }
    out.tested.push_back(c.id);
    TransversalFan t = transversal_fan(f, c.id);
    FanSheafData cs = constant_sheaf(t.fan);
    CochainComplex cc = cochain_complex(t.fan, RelMode::RelBoundary, cs, 0, true);
    std::vector<int> h = cohomology_dims(cc);
    bool zero = true;
    for (int v : h)
      if (v != 0) zero = false;
    if (!zero) {
      out.quasiconvex = false;
      out.witnesses.push_back(c.id);
      out.witness_dims[c.id] = h;
    }
  }
  return out;
}

// Homology of the link of a boundary cone (or the zero cone) in the unit
// sphere of a non-complete pure fan, read off fan-level complexes: the
// absolute complex of the transversal fan gives the reduced link homology,
// the relative complex gives the pair, the boundary subfan gives its own
// link boundary. No triangulation of the link is ever built.
struct LinkProfile {
  int cone{-1};
  int k{0};                          // codimension: link is a (k-1)-manifold
  std::vector<int> link_reduced;     // reduced H_j(L), j = 0..k-1
  std::vector<int> pair_dims;        // H_j(L, dL), j = 0..k-1
  std::vector<int> boundary_reduced; // reduced H_j(dL), j = 0..k-2
  bool point{false};                 // L is a homology point
  bool cell{false};                  // (L, dL) is a homology cell mod boundary
  bool sphere{false};                // dL is a homology (k-2)-sphere
};

inline LinkProfile link_homology_profile(const Fan& f, int sigma) {
  if (!f.pure || f.fan_dim != f.ambient_dim)
    throw FanError("link profiles need a pure full-dimensional fan");
  if (is_complete(f)) throw FanError("link profiles require a non-complete fan");
  const Cone& s = f.cone(sigma);
  if (s.dim > 0 && !f.in_boundary[sigma])
    throw FanError("link profile is for boundary cones or the zero cone");
  LinkProfile out;
  out.cone = sigma;
  int k = f.ambient_dim - s.dim;
  out.k = k;

  TransversalFan t = transversal_fan(f, sigma);
  FanSheafData cs = constant_sheaf(t.fan);

  // absolute, not augmented: position q holds reduced H_{k-1-q}(L)
  CochainComplex abs = cochain_complex(t.fan, RelMode::Absolute, cs, 0, false);
  std::vector<int> habs = cohomology_dims(abs);
  out.link_reduced.assign(k, 0);
  for (int j = 0; j <= k - 1; ++j) out.link_reduced[j] = habs[k - 1 - j];
  out.point = true;
  for (int v : out.link_reduced)
    if (v != 0) out.point = false;

  // relative, not augmented: position q holds H_{k-1-q}(L, dL)
  CochainComplex rel = cochain_complex(t.fan, RelMode::RelBoundary, cs, 0, false);
  std::vector<int> hrel = cohomology_dims(rel);
  out.pair_dims.assign(k, 0);
  for (int j = 0; j <= k - 1; ++j) out.pair_dims[j] = hrel[k - 1 - j];
  out.cell = out.pair_dims[k - 1] == 1;
  for (int j = 0; j < k - 1; ++j)
    if (out.pair_dims[j] != 0) out.cell = false;

  // boundary subfan of the transversal fan: its complex computes dL
  Fan bd = boundary_fan(t.fan);
  if (bd.fan_dim == 0) {
    out.sphere = (k == 1);  // dL empty: the (-1)-sphere
  } else {
    FanSheafData bs = constant_sheaf(bd);
    CochainComplex bc = cochain_complex(bd, RelMode::Absolute, bs, 0, false);
    std::vector<int> hb = cohomology_dims(bc);
    out.boundary_reduced.assign(k - 1, 0);
    for (int j = 0; j <= k - 2; ++j) out.boundary_reduced[j] = hb[k - 2 - j];
    out.sphere = true;
    for (int j = 0; j <= k - 2; ++j) {
      int want = (j == k - 2) ? 1 : 0;
      if (out.boundary_reduced[j] != want) out.sphere = false;
    }
  }
  return out;
}

}  // namespace fanih
