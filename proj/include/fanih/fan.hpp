#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fanih/linalg.hpp"

namespace fanih {

struct FanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A strictly convex polyhedral cone inside a fan. `rays` are sorted global
// ray indices; the zero cone has an empty list. `basis_rays` is the
// lexicographically smallest independent subset of `rays`; it fixes both the
// coordinates used for polynomials on the span and, for cones below the
// ambient dimension, the reference orientation of the span.
struct Cone {
  int id{-1};
  std::vector<int> rays;
  int dim{0};
  std::vector<int> basis_rays;
};

struct Fan {
  int ambient_dim{0};
  long long radicand{0};  // 0 = rational coordinates
  std::vector<std::vector<FieldScalar>> rays;
  std::vector<Cone> cones;  // sorted by (dim, rays); id == index
  std::map<std::vector<int>, int> cone_by_rays;
  std::vector<std::vector<int>> facets_of;
  std::vector<std::vector<int>> cofacets_of;
  std::vector<std::vector<int>> facet_orientation;  // aligned with facets_of
  std::vector<char> in_boundary;  // meaningful for pure fans
  int fan_dim{0};
  bool pure{true};

  int n_cones() const { return static_cast<int>(cones.size()); }

  const Cone& cone(int id) const { return cones[static_cast<size_t>(id)]; }

  std::vector<int> cones_of_dim(int d) const {
    std::vector<int> out;
    for (const Cone& c : cones)
      if (c.dim == d) out.push_back(c.id);
    return out;
  }

  std::vector<int> top_ids() const {
    std::vector<int> out;
    for (const Cone& c : cones)
      if (cofacets_of[c.id].empty()) out.push_back(c.id);
    return out;
  }

  // Columns are the basis rays (ambient coordinates).
  ExactMatrix span_basis(int id) const {
    const Cone& c = cone(id);
    ExactMatrix b(ambient_dim, c.dim);
    for (int j = 0; j < c.dim; ++j)
      for (int i = 0; i < ambient_dim; ++i) b.at(i, j) = rays[c.basis_rays[j]][i];
    return b;
  }

  // Reference orientation basis: ambient standard basis for full-dimensional
  // cones (one fixed orientation on all of them), span basis rays otherwise.
  ExactMatrix orientation_basis(int id) const {
    const Cone& c = cone(id);
    if (c.dim == ambient_dim) return ExactMatrix::identity(ambient_dim);
    return span_basis(id);
  }

  std::vector<FieldScalar> coords_in_span(int id, const std::vector<FieldScalar>& x) const {
    auto c = solve_linear(span_basis(id), x);
    if (!c) throw std::logic_error("vector outside cone span");
    return *c;
  }
};

namespace detail {

inline std::string rayset_str(const std::vector<int>& rays) {
  std::string s = "{";
  for (size_t i = 0; i < rays.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(rays[i]);
  }
  return s + "}";
}

inline std::vector<int> greedy_independent(const std::vector<std::vector<FieldScalar>>& vecs) {
  std::vector<int> chosen;
  std::vector<std::vector<FieldScalar>> cols;
  for (int i = 0; i < static_cast<int>(vecs.size()); ++i) {
    cols.push_back(vecs[i]);
    if (rank_of(ExactMatrix::from_columns(cols)) == static_cast<int>(cols.size()))
      chosen.push_back(i);
    else
      cols.pop_back();
  }
  return chosen;
}

// Facets of the strictly convex cone on `coords` (columns of the span basis
// already divided out; vectors have length d). Returns pairs of (inward
// normal in span coordinates, subset of positions lying on the facet).
inline std::vector<std::pair<std::vector<FieldScalar>, std::vector<int>>> cone_facets(
    const std::vector<std::vector<FieldScalar>>& coords, int d) {
  std::vector<std::pair<std::vector<FieldScalar>, std::vector<int>>> out;
  std::set<std::vector<int>> seen;
  int m = static_cast<int>(coords.size());
  if (d == 0) return out;
  // iterate over (d-1)-subsets of the m generators
  std::vector<int> idx(d - 1);
  for (int i = 0; i < d - 1; ++i) idx[i] = i;
  auto advance = [&]() {
    int k = d - 2;
    while (k >= 0 && idx[k] == m - (d - 1) + k) --k;
    if (k < 0) return false;
    ++idx[k];
    for (int j = k + 1; j < d - 1; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };
  if (d - 1 > m) return out;
  while (true) {
    ExactMatrix rows(d - 1, d);
    for (int i = 0; i < d - 1; ++i)
      for (int j = 0; j < d; ++j) rows.at(i, j) = coords[idx[i]][j];
    RankKernel rk = rank_and_kernel(rows);
    if (rk.rank == d - 1) {
      const std::vector<FieldScalar>& xi = rk.kernel[0];
      int pos = 0, neg = 0;
      std::vector<int> on;
      for (int i = 0; i < m; ++i) {
        FieldScalar v(0);
        for (int j = 0; j < d; ++j)
          if (!xi[j].is_zero() && !coords[i][j].is_zero()) v += xi[j] * coords[i][j];
        int s = v.sign();
        if (s > 0) ++pos;
        else if (s < 0) ++neg;
        else on.push_back(i);
      }
      if (pos == 0 || neg == 0) {
        std::vector<FieldScalar> normal = xi;
        if (pos == 0 && neg > 0)
          for (auto& v : normal) v = -v;
        if (!seen.count(on)) {
          seen.insert(on);
          out.emplace_back(std::move(normal), std::move(on));
        }
      }
    }
    if (d == 1 || !advance()) break;
  }
  return out;
}

}  // namespace detail

// Builds the fan generated by the listed cones: computes all faces, checks
// the fan axioms exactly, and assigns deterministic ids (sorted by dimension,
// then by ray index list). Throws FanError naming the offending data when a
// listed set is not strictly convex, a generator is redundant, rays repeat up
// to positive scale, or two cones meet outside a common face.
inline Fan build_fan(int ambient_dim, std::vector<std::vector<FieldScalar>> rays,
                     const std::vector<std::vector<int>>& cone_lists) {
  Fan f;
  f.ambient_dim = ambient_dim;
  f.rays = std::move(rays);

  long long rad = 0;
  for (int i = 0; i < static_cast<int>(f.rays.size()); ++i) {
    if (static_cast<int>(f.rays[i].size()) != ambient_dim)
      throw FanError("ray " + std::to_string(i) + " has wrong length");
    bool zero = true;
    for (const FieldScalar& v : f.rays[i]) {
      if (!v.is_zero()) zero = false;
      if (v.d != 0) {
        if (rad != 0 && rad != v.d) throw FanError("mixed radicands among ray coordinates");
        rad = v.d;
      }
    }
    if (zero) throw FanError("ray " + std::to_string(i) + " is zero");
  }
  f.radicand = rad;
  for (int i = 0; i < static_cast<int>(f.rays.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(f.rays.size()); ++j) {
      // duplicate up to positive scale?
      int k = 0;
      while (f.rays[i][k].is_zero() && f.rays[j][k].is_zero()) {
        ++k;
        if (k == ambient_dim) break;
      }
      if (k == ambient_dim) continue;
      if (f.rays[i][k].is_zero() || f.rays[j][k].is_zero()) continue;
      FieldScalar lambda = f.rays[j][k] / f.rays[i][k];
      if (lambda.sign() <= 0) continue;
      bool same = true;
      for (int c = 0; c < ambient_dim; ++c)
        if (f.rays[j][c] != f.rays[i][c] * lambda) {
          same = false;
          break;
        }
      if (same)
        throw FanError("rays " + std::to_string(i) + " and " + std::to_string(j) +
                       " coincide up to positive scale");
    }
  }

  struct InputCone {
    std::vector<int> rays;
    int dim;
    ExactMatrix basis;  // ambient x dim
    std::vector<std::vector<FieldScalar>> coords;  // per listed ray, in basis
    std::vector<std::pair<std::vector<FieldScalar>, std::vector<int>>> facets;  // global raysets
    std::set<std::vector<int>> faces;  // global raysets, includes itself and {}
  };
  std::vector<InputCone> input;

  for (const std::vector<int>& listed : cone_lists) {
    InputCone ic;
    ic.rays = listed;
    std::sort(ic.rays.begin(), ic.rays.end());
    ic.rays.erase(std::unique(ic.rays.begin(), ic.rays.end()), ic.rays.end());
    for (int r : ic.rays)
      if (r < 0 || r >= static_cast<int>(f.rays.size()))
        throw FanError("cone references unknown ray " + std::to_string(r));

    std::vector<std::vector<FieldScalar>> vecs;
    for (int r : ic.rays) vecs.push_back(f.rays[r]);
    std::vector<int> basis_pos = detail::greedy_independent(vecs);
    ic.dim = static_cast<int>(basis_pos.size());
    std::vector<std::vector<FieldScalar>> bcols;
    for (int p : basis_pos) bcols.push_back(vecs[p]);
    ic.basis = ExactMatrix::from_columns(bcols);

    if (ic.dim > 0) {
      // strict convexity: no nontrivial nonnegative combination of the rays
      // vanishes. Test sum lambda_i r_i = 0, sum lambda_i = 1, lambda >= 0.
      int m = static_cast<int>(ic.rays.size());
      ExactMatrix lp(ambient_dim + 1, m);
      std::vector<FieldScalar> rhs(ambient_dim + 1);
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < ambient_dim; ++i) lp.at(i, j) = vecs[j][i];
        lp.at(ambient_dim, j) = FieldScalar(1);
      }
      rhs[ambient_dim] = FieldScalar(1);
      if (lp_feasible(lp, rhs))
        throw FanError("cone " + detail::rayset_str(ic.rays) + " is not strictly convex");
      // extremality of each listed generator
      for (int g = 0; g < m; ++g) {
        if (m == 1) break;
        ExactMatrix sys(ambient_dim, m - 1);
        int col = 0;
        for (int j = 0; j < m; ++j) {
          if (j == g) continue;
          for (int i = 0; i < ambient_dim; ++i) sys.at(i, col) = vecs[j][i];
          ++col;
        }
        if (lp_feasible(sys, vecs[g]))
          throw FanError("generator " + std::to_string(ic.rays[g]) + " of cone " +
                         detail::rayset_str(ic.rays) + " is not extremal");
      }
      for (const auto& v : vecs) ic.coords.push_back(*solve_linear(ic.basis, v));
    }

    auto local_facets = detail::cone_facets(ic.coords, ic.dim);
    for (auto& [normal, on] : local_facets) {
      std::vector<int> global;
      for (int p : on) global.push_back(ic.rays[p]);
      ic.facets.emplace_back(normal, global);
    }
    ic.faces.insert(ic.rays);
    std::set<std::vector<int>> frontier{ic.rays};
    while (!frontier.empty()) {
      std::set<std::vector<int>> next;
      for (const auto& face : frontier) {
        for (const auto& [normal, fr] : ic.facets) {
          (void)normal;
          std::vector<int> meet;
          std::set_intersection(face.begin(), face.end(), fr.begin(), fr.end(),
                                std::back_inserter(meet));
          if (!ic.faces.count(meet)) {
            ic.faces.insert(meet);
            next.insert(meet);
          }
        }
      }
      frontier = std::move(next);
    }
    if (ic.dim > 0) ic.faces.insert({});
    input.push_back(std::move(ic));
  }

  // pairwise: cones must meet exactly in a common face
  for (size_t p = 0; p < input.size(); ++p) {
    for (size_t q = p + 1; q < input.size(); ++q) {
      const InputCone& c1 = input[p];
      const InputCone& c2 = input[q];
      std::vector<int> common;
      std::set_intersection(c1.rays.begin(), c1.rays.end(), c2.rays.begin(), c2.rays.end(),
                            std::back_inserter(common));
      if (!c1.faces.count(common) || !c2.faces.count(common))
        throw FanError("cones " + detail::rayset_str(c1.rays) + " and " +
                       detail::rayset_str(c2.rays) + " intersect outside a common face");
      // containment: points of c1 * c2 with xi1 > 0 must not exist, where xi1
      // sums the facet normals of c1 whose facets contain the common rays.
      std::vector<FieldScalar> xi1(c1.dim);
      bool any = false;
      for (const auto& [normal, fr] : c1.facets) {
        if (std::includes(fr.begin(), fr.end(), common.begin(), common.end())) {
          for (int i = 0; i < c1.dim; ++i) xi1[i] += normal[i];
          any = true;
        }
      }
      if (!any) continue;  // common == c1.rays: c1 is itself the common face
      int d1 = c1.dim, d2 = c2.dim;
      int f1 = static_cast<int>(c1.facets.size()), f2 = static_cast<int>(c2.facets.size());
      int vars = 2 * d1 + 2 * d2 + f1 + f2;
      int rows = ambient_dim + f1 + f2 + 1;
      ExactMatrix lp(rows, vars);
      std::vector<FieldScalar> rhs(rows);
      auto setcol = [&](int row, int col, const FieldScalar& v) { lp.at(row, col) = v; };
      // ambient: B1 y - B2 c = 0 with y = y+ - y-, c = c+ - c-
      for (int i = 0; i < ambient_dim; ++i) {
        for (int j = 0; j < d1; ++j) {
          setcol(i, j, c1.basis.at(i, j));
          setcol(i, d1 + j, -c1.basis.at(i, j));
        }
        for (int j = 0; j < d2; ++j) {
          setcol(i, 2 * d1 + j, -c2.basis.at(i, j));
          setcol(i, 2 * d1 + d2 + j, c2.basis.at(i, j));
        }
      }
      // facet normals of c1 on y, minus slack
      for (int k = 0; k < f1; ++k) {
        int row = ambient_dim + k;
        for (int j = 0; j < d1; ++j) {
          setcol(row, j, c1.facets[k].first[j]);
          setcol(row, d1 + j, -c1.facets[k].first[j]);
        }
        setcol(row, 2 * d1 + 2 * d2 + k, FieldScalar(-1));
      }
      // facet normals of c2 on c, minus slack
      for (int k = 0; k < f2; ++k) {
        int row = ambient_dim + f1 + k;
        for (int j = 0; j < d2; ++j) {
          setcol(row, 2 * d1 + j, c2.facets[k].first[j]);
          setcol(row, 2 * d1 + d2 + j, -c2.facets[k].first[j]);
        }
        setcol(row, 2 * d1 + 2 * d2 + f1 + k, FieldScalar(-1));
      }
      // xi1(y) = 1
      int last = ambient_dim + f1 + f2;
      for (int j = 0; j < d1; ++j) {
        setcol(last, j, xi1[j]);
        setcol(last, d1 + j, -xi1[j]);
      }
      rhs[last] = FieldScalar(1);
      if (lp_feasible(lp, rhs))
        throw FanError("cones " + detail::rayset_str(c1.rays) + " and " +
                       detail::rayset_str(c2.rays) + " intersect outside a common face");
    }
  }

  // assemble the global cone list: all faces of all listed cones
  std::set<std::vector<int>> all_faces;
  all_faces.insert({});
  for (const InputCone& ic : input)
    for (const auto& face : ic.faces) all_faces.insert(face);

  for (const auto& rayset : all_faces) {
    Cone c;
    c.rays = rayset;
    std::vector<std::vector<FieldScalar>> vecs;
    for (int r : c.rays) vecs.push_back(f.rays[r]);
    std::vector<int> basis_pos = detail::greedy_independent(vecs);
    c.dim = static_cast<int>(basis_pos.size());
    for (int p : basis_pos) c.basis_rays.push_back(c.rays[p]);
    f.cones.push_back(std::move(c));
  }
  std::sort(f.cones.begin(), f.cones.end(), [](const Cone& a, const Cone& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.rays < b.rays;
  });
  for (int i = 0; i < f.n_cones(); ++i) {
    f.cones[i].id = i;
    f.cone_by_rays[f.cones[i].rays] = i;
  }

  // covering relations: in a validated fan a cone's rayset subset that is
  // itself a fan member is automatically a face
  f.facets_of.assign(f.n_cones(), {});
  f.cofacets_of.assign(f.n_cones(), {});
  f.facet_orientation.assign(f.n_cones(), {});
  for (const Cone& s : f.cones) {
    for (const Cone& t : f.cones) {
      if (t.dim != s.dim - 1) continue;
      if (!std::includes(s.rays.begin(), s.rays.end(), t.rays.begin(), t.rays.end())) continue;
      f.facets_of[s.id].push_back(t.id);
      f.cofacets_of[t.id].push_back(s.id);
    }
  }

  // orientation coefficients: coordinates of [basis(tau) | w] in the
  // orientation basis of sigma, where w sums the rays of sigma not in tau
  // (an inward vector off the wall); the sign of the determinant compares
  // the two orientations.
  for (const Cone& s : f.cones) {
    for (int t_id : f.facets_of[s.id]) {
      const Cone& t = f.cones[t_id];
      std::vector<FieldScalar> w(f.ambient_dim);
      for (int r : s.rays) {
        if (std::binary_search(t.rays.begin(), t.rays.end(), r)) continue;
        for (int i = 0; i < f.ambient_dim; ++i) w[i] += f.rays[r][i];
      }
      ExactMatrix bs = f.orientation_basis(s.id);
      ExactMatrix m(s.dim, s.dim);
      for (int j = 0; j < t.dim; ++j) {
        std::vector<FieldScalar> col(f.ambient_dim);
        for (int i = 0; i < f.ambient_dim; ++i) col[i] = f.rays[t.basis_rays[j]][i];
        auto coords = solve_linear(bs, col);
        for (int i = 0; i < s.dim; ++i) m.at(i, j) = (*coords)[i];
      }
      auto wc = solve_linear(bs, w);
      for (int i = 0; i < s.dim; ++i) m.at(i, s.dim - 1) = (*wc)[i];
      int sgn = det_sign(m);
      if (sgn == 0) throw std::logic_error("degenerate orientation data");
      f.facet_orientation[s.id].push_back(sgn);
    }
  }

  f.fan_dim = 0;
  for (const Cone& c : f.cones) f.fan_dim = std::max(f.fan_dim, c.dim);
  f.pure = true;
  for (const Cone& c : f.cones)
    if (f.cofacets_of[c.id].empty() && c.dim != f.fan_dim) f.pure = false;

  f.in_boundary.assign(f.n_cones(), 0);
  if (f.pure && f.fan_dim > 0) {
    std::vector<int> stack;
    for (const Cone& c : f.cones)
      if (c.dim == f.fan_dim - 1 && f.cofacets_of[c.id].size() == 1) {
        f.in_boundary[c.id] = 1;
        stack.push_back(c.id);
      }
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      for (int t : f.facets_of[id])
        if (!f.in_boundary[t]) {
          f.in_boundary[t] = 1;
          stack.push_back(t);
        }
    }
  }
  return f;
}

// or^sigma_tau for a covering pair; +1 when the orientation of the wall
// followed by an inward vector matches the reference orientation of sigma.
inline int orientation_coefficient(const Fan& f, int tau, int sigma) {
  const auto& fl = f.facets_of[sigma];
  for (size_t i = 0; i < fl.size(); ++i)
    if (fl[i] == tau) return f.facet_orientation[sigma][i];
  throw std::invalid_argument("not a covering pair");
}

// Extracts the subfan on `ids` (closed under faces by construction of the
// caller; faces are added here defensively). Keeps the ray list and all
// derived data; no re-validation.
inline Fan subfan(const Fan& f, const std::vector<int>& ids) {
  std::set<int> keep;
  std::vector<int> stack(ids.begin(), ids.end());
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (keep.count(id)) continue;
    keep.insert(id);
    for (int t : f.facets_of[id]) stack.push_back(t);
  }
  keep.insert(f.cone_by_rays.at({}));

  Fan s;
  s.ambient_dim = f.ambient_dim;
  s.radicand = f.radicand;
  s.rays = f.rays;
  std::map<int, int> remap;
  for (int old_id : keep) {
    Cone c = f.cone(old_id);
    c.id = static_cast<int>(s.cones.size());
    remap[old_id] = c.id;
    s.cones.push_back(std::move(c));
  }
  // f.cones are sorted by (dim, rays) and std::set iterates ids in
  // increasing order, so the subfan inherits the deterministic order.
  for (const Cone& c : s.cones) s.cone_by_rays[c.rays] = c.id;
  s.facets_of.assign(s.n_cones(), {});
  s.cofacets_of.assign(s.n_cones(), {});
  s.facet_orientation.assign(s.n_cones(), {});
  for (int old_id : keep) {
    int sid = remap[old_id];
    const auto& fl = f.facets_of[old_id];
    for (size_t i = 0; i < fl.size(); ++i) {
      if (!keep.count(fl[i])) continue;
      int tid = remap[fl[i]];
      s.facets_of[sid].push_back(tid);
      s.cofacets_of[tid].push_back(sid);
      s.facet_orientation[sid].push_back(f.facet_orientation[old_id][i]);
    }
  }
  s.fan_dim = 0;
  for (const Cone& c : s.cones) s.fan_dim = std::max(s.fan_dim, c.dim);
  s.pure = true;
  for (const Cone& c : s.cones)
    if (s.cofacets_of[c.id].empty() && c.dim != s.fan_dim) s.pure = false;
  s.in_boundary.assign(s.n_cones(), 0);
  if (s.pure && s.fan_dim > 0) {
    std::vector<int> stk;
    for (const Cone& c : s.cones)
      if (c.dim == s.fan_dim - 1 && s.cofacets_of[c.id].size() == 1) {
        s.in_boundary[c.id] = 1;
        stk.push_back(c.id);
      }
    while (!stk.empty()) {
      int id = stk.back();
      stk.pop_back();
      for (int t : s.facets_of[id])
        if (!s.in_boundary[t]) {
          s.in_boundary[t] = 1;
          stk.push_back(t);
        }
    }
  }
  return s;
}

// Subfan generated by the (n-1)-cones lying in exactly one n-cone.
inline Fan boundary_fan(const Fan& f) {
  if (!f.pure) throw FanError("boundary fan needs a pure fan");
  std::vector<int> ids;
  for (const Cone& c : f.cones)
    if (f.in_boundary[c.id]) ids.push_back(c.id);
  return subfan(f, ids);
}

inline Fan skeleton(const Fan& f, int k) {
  std::vector<int> ids;
  for (const Cone& c : f.cones)
    if (c.dim <= k) ids.push_back(c.id);
  return subfan(f, ids);
}

// Ids of the cones having `id` as a face.
inline std::vector<int> star(const Fan& f, int id) {
  const Cone& s = f.cone(id);
  std::vector<int> out;
  for (const Cone& c : f.cones)
    if (std::includes(c.rays.begin(), c.rays.end(), s.rays.begin(), s.rays.end()))
      out.push_back(c.id);
  return out;
}

inline bool is_simplicial_cone(const Fan& f, int id) {
  return static_cast<int>(f.cone(id).rays.size()) == f.cone(id).dim;
}

inline bool is_simplicial(const Fan& f) {
  for (const Cone& c : f.cones)
    if (!is_simplicial_cone(f, c.id)) return false;
  return true;
}

// Maximal purely top-dimensional pieces glued along shared walls.
inline std::vector<std::vector<int>> facet_connected_components(const Fan& f) {
  if (!f.pure) throw FanError("facet components need a pure fan");
  std::vector<int> tops = f.top_ids();
  std::map<int, int> comp;
  for (int t : tops) comp[t] = t;
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (const Cone& c : f.cones) {
    if (c.dim != f.fan_dim - 1) continue;
    const auto& up = f.cofacets_of[c.id];
    for (size_t i = 1; i < up.size(); ++i) comp[find(up[0])] = find(up[i]);
  }
  std::map<int, std::vector<int>> groups;
  for (int t : tops) groups[find(t)].push_back(t);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) {
    (void)root;
    out.push_back(std::move(members));
  }
  return out;
}

// Complete means the support is the whole space: full-dimensional and pure,
// every wall inside exactly two top cones, and one facet component.
inline bool is_complete(const Fan& f) {
  if (f.fan_dim != f.ambient_dim) return false;
  if (f.ambient_dim == 0) return true;
  if (!f.pure) return false;
  if (f.ambient_dim == 1) return f.cones_of_dim(1).size() == 2;
  for (const Cone& c : f.cones)
    if (c.dim == f.fan_dim - 1 && f.cofacets_of[c.id].size() != 2) return false;
  return facet_connected_components(f).size() == 1;
}

namespace detail {

inline std::vector<FieldScalar> l1_normalized(const std::vector<FieldScalar>& v) {
  FieldScalar norm(0);
  for (const FieldScalar& x : v) norm += x.sign() < 0 ? -x : x;
  std::vector<FieldScalar> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
  return out;
}

}  // namespace detail

// The transversal fan of sigma: the star projected along the span of sigma
// into explicit coordinates on a complement (spanned by the lexicographically
// first standard basis vectors completing the span basis). Its poset is the
// interval above sigma; `cone_map` sends each star member to its image.
struct TransversalFan {
  Fan fan;
  std::map<int, int> cone_map;
};

inline TransversalFan transversal_fan(const Fan& f, int id) {
  const Cone& s = f.cone(id);
  int n = f.ambient_dim, d = s.dim, k = n - d;

  // complement coordinates
  std::vector<std::vector<FieldScalar>> cols;
  for (int j = 0; j < d; ++j) {
    std::vector<FieldScalar> c(n);
    for (int i = 0; i < n; ++i) c[i] = f.rays[s.basis_rays[j]][i];
    cols.push_back(std::move(c));
  }
  std::vector<int> complement;
  for (int e = 0; e < n && static_cast<int>(complement.size()) < k; ++e) {
    std::vector<FieldScalar> unit(n);
    unit[e] = FieldScalar(1);
    cols.push_back(unit);
    if (rank_of(ExactMatrix::from_columns(cols)) == static_cast<int>(cols.size()))
      complement.push_back(e);
    else
      cols.pop_back();
  }
  ExactMatrix full = ExactMatrix::from_columns(cols);  // n x n, invertible
  auto project = [&](const std::vector<FieldScalar>& x) {
    auto z = solve_linear(full, x);
    return std::vector<FieldScalar>(z->begin() + d, z->end());
  };

  // one projected ray per covering cone of sigma
  std::vector<int> covers = f.cofacets_of[id];
  std::sort(covers.begin(), covers.end());
  std::vector<std::vector<FieldScalar>> qrays;
  for (int mu : covers) {
    std::vector<FieldScalar> w(n);
    for (int r : f.cone(mu).rays) {
      if (std::binary_search(s.rays.begin(), s.rays.end(), r)) continue;
      for (int i = 0; i < n; ++i) w[i] += f.rays[r][i];
    }
    qrays.push_back(detail::l1_normalized(project(w)));
  }

  std::vector<int> members = star(f, id);
  std::vector<std::vector<int>> cone_lists;
  for (int g : members) {
    std::vector<int> rs;
    for (size_t m = 0; m < covers.size(); ++m) {
      const Cone& mu = f.cone(covers[m]);
      if (std::includes(f.cone(g).rays.begin(), f.cone(g).rays.end(), mu.rays.begin(),
                        mu.rays.end()))
        rs.push_back(static_cast<int>(m));
    }
    cone_lists.push_back(std::move(rs));
  }

  TransversalFan out;
  out.fan = build_fan(k, qrays, cone_lists);
  for (size_t i = 0; i < members.size(); ++i) {
    std::vector<int> rs = cone_lists[i];
    std::sort(rs.begin(), rs.end());
    out.cone_map[members[i]] = out.fan.cone_by_rays.at(rs);
  }
  if (out.fan.n_cones() != static_cast<int>(members.size()))
    throw std::logic_error("transversal fan poset mismatch");
  for (int g : members)
    if (out.fan.cone(out.cone_map.at(g)).dim != f.cone(g).dim - d)
      throw std::logic_error("transversal fan dimension mismatch");
  return out;
}

// Flattens the boundary of a full or partial dimensional cone sigma into a
// complete fan in coordinates on span(sigma)/L, where L is spanned by the sum
// of the L1-normalized rays of sigma (an interior point). Also returns the
// piecewise linear function induced by the graph heights: on the image of a
// facet tau, f composes the inverse of the projection with the L-coordinate.
struct FlattenedBoundary {
  Fan fan;
  std::map<int, int> cone_map;                       // proper faces of sigma -> image
  std::map<int, std::vector<FieldScalar>> support;   // per image top cone id
};

inline FlattenedBoundary flattened_boundary_fan(const Fan& f, int id) {
  const Cone& s = f.cone(id);
  int n = f.ambient_dim, d = s.dim;
  if (d == 0) throw FanError("zero cone has no boundary to flatten");

  std::vector<FieldScalar> ell(n);
  for (int r : s.rays) {
    std::vector<FieldScalar> u = detail::l1_normalized(f.rays[r]);
    for (int i = 0; i < n; ++i) ell[i] += u[i];
  }
  std::vector<std::vector<FieldScalar>> cols{ell};
  for (int j = 0; j < d && static_cast<int>(cols.size()) < d; ++j) {
    std::vector<FieldScalar> c(n);
    for (int i = 0; i < n; ++i) c[i] = f.rays[s.basis_rays[j]][i];
    cols.push_back(std::move(c));
    if (rank_of(ExactMatrix::from_columns(cols)) != static_cast<int>(cols.size()))
      cols.pop_back();
  }
  ExactMatrix basis = ExactMatrix::from_columns(cols);  // n x d
  auto split = [&](const std::vector<FieldScalar>& x) {
    auto z = solve_linear(basis, x);
    if (!z) throw std::logic_error("vector outside cone span in flattening");
    return *z;  // z[0] = height along ell, z[1..] = flattened coordinates
  };

  std::vector<std::vector<FieldScalar>> frays;
  std::vector<FieldScalar> heights;
  for (int r : s.rays) {
    std::vector<FieldScalar> z = split(f.rays[r]);
    heights.push_back(z[0]);
    frays.emplace_back(z.begin() + 1, z.end());
  }

  std::vector<int> proper;
  std::vector<std::vector<int>> cone_lists;
  for (const Cone& c : f.cones) {
    if (c.id == id) continue;
    if (!std::includes(s.rays.begin(), s.rays.end(), c.rays.begin(), c.rays.end())) continue;
    // only faces of sigma project; all fan members inside sigma are faces
    std::vector<int> rs;
    for (int r : c.rays) {
      auto pos = std::lower_bound(s.rays.begin(), s.rays.end(), r) - s.rays.begin();
      rs.push_back(static_cast<int>(pos));
    }
    proper.push_back(c.id);
    cone_lists.push_back(std::move(rs));
  }

  FlattenedBoundary out;
  out.fan = build_fan(d - 1, frays, cone_lists);
  for (size_t i = 0; i < proper.size(); ++i) {
    std::vector<int> rs = cone_lists[i];
    std::sort(rs.begin(), rs.end());
    out.cone_map[proper[i]] = out.fan.cone_by_rays.at(rs);
  }
  if (out.fan.n_cones() != static_cast<int>(proper.size()))
    throw std::logic_error("flattened boundary poset mismatch");
  if (!is_complete(out.fan)) throw std::logic_error("flattened boundary fan not complete");

  // support function per facet image: solve w * M = u with M the projected
  // facet basis and u the heights of that basis.
  for (int fid : f.facets_of[id]) {
    const Cone& t = f.cone(fid);
    ExactMatrix m(d - 1, t.dim);
    std::vector<FieldScalar> u(t.dim);
    for (int j = 0; j < t.dim; ++j) {
      std::vector<FieldScalar> z = split(f.rays[t.basis_rays[j]]);
      u[j] = z[0];
      for (int i = 0; i < d - 1; ++i) m.at(i, j) = z[i + 1];
    }
    // w has length d-1; M is (d-1) x (d-1) after the poset check above.
    ExactMatrix mt(t.dim, d - 1);
    for (int i = 0; i < d - 1; ++i)
      for (int j = 0; j < t.dim; ++j) mt.at(j, i) = m.at(i, j);
    auto w = solve_linear(mt, u);
    if (!w) throw std::logic_error("flattening support solve failed");
    out.support[out.cone_map.at(fid)] = *w;
  }
  return out;
}

// Validates a piecewise linear function given by one linear form per top
// cone (ambient coordinates): forms of neighbouring top cones must agree on
// the wall between them, and each must strictly dominate its neighbour's
// form on the rays off the wall (the function is a max of its pieces).
inline bool pl_strictly_convex(const Fan& f,
                               const std::map<int, std::vector<FieldScalar>>& forms,
                               std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  auto value = [&](const std::vector<FieldScalar>& form, int ray) {
    FieldScalar v(0);
    for (int i = 0; i < f.ambient_dim; ++i)
      if (!form[i].is_zero()) v += form[i] * f.rays[ray][i];
    return v;
  };
  for (int t : f.top_ids())
    if (!forms.count(t)) return fail("missing form on top cone " + std::to_string(t));
  for (const Cone& w : f.cones) {
    if (w.dim != f.fan_dim - 1) continue;
    const auto& up = f.cofacets_of[w.id];
    if (up.size() != 2) continue;
    const auto& g1 = forms.at(up[0]);
    const auto& g2 = forms.at(up[1]);
    for (int r : w.rays)
      if (value(g1, r) != value(g2, r))
        return fail("forms disagree on wall " + detail::rayset_str(w.rays));
    for (int side = 0; side < 2; ++side) {
      const auto& own = forms.at(up[side]);
      const auto& other = forms.at(up[1 - side]);
      for (int r : f.cone(up[side]).rays) {
        if (std::binary_search(w.rays.begin(), w.rays.end(), r)) continue;
        if ((value(own, r) - value(other, r)).sign() <= 0)
          return fail("not strictly convex across wall " + detail::rayset_str(w.rays));
      }
    }
  }
  return true;
}

// Coordinates of the span basis of a face inside the span coordinates of the
// larger cone; the matrix restrict_polynomial consumes.
inline ExactMatrix face_basis_in_span(const Fan& f, int sigma, int tau) {
  const Cone& s = f.cone(sigma);
  const Cone& t = f.cone(tau);
  ExactMatrix b = f.span_basis(sigma);
  ExactMatrix out(s.dim, t.dim);
  for (int j = 0; j < t.dim; ++j) {
    std::vector<FieldScalar> col(f.ambient_dim);
    for (int i = 0; i < f.ambient_dim; ++i) col[i] = f.rays[t.basis_rays[j]][i];
    auto c = solve_linear(b, col);
    if (!c) throw std::logic_error("face span not inside cone span");
    for (int i = 0; i < s.dim; ++i) out.at(i, j) = (*c)[i];
  }
  return out;
}

// Pure combinatorial shadow of a fan: dimensions, the face relation, atom
// counts, boundary membership. Identical for fans with the same poset
// regardless of coordinates or field.
struct FanPoset {
  int top_dim{0};
  bool pure{true};
  bool coords_rational{true};
  std::vector<int> dims;
  std::vector<std::vector<char>> leq;  // leq[a][b]: a is a face of b
  std::vector<int> atom_count;
  std::vector<char> boundary;

  int n() const { return static_cast<int>(dims.size()); }

  std::vector<int> elements_of_dim(int d) const {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
      if (dims[i] == d) out.push_back(i);
    return out;
  }

  std::vector<int> proper_faces(int e) const {
    std::vector<int> out;
    for (int i = 0; i < n(); ++i)
      if (i != e && leq[i][e]) out.push_back(i);
    return out;
  }
};

inline FanPoset poset_of(const Fan& f) {
  FanPoset p;
  p.top_dim = f.fan_dim;
  p.pure = f.pure;
  p.coords_rational = f.radicand == 0;
  p.dims.resize(f.n_cones());
  p.atom_count.assign(f.n_cones(), 0);
  p.boundary.assign(f.n_cones(), 0);
  p.leq.assign(f.n_cones(), std::vector<char>(f.n_cones(), 0));
  for (const Cone& a : f.cones) {
    p.dims[a.id] = a.dim;
    p.boundary[a.id] = f.in_boundary[a.id];
    for (const Cone& b : f.cones)
      if (std::includes(b.rays.begin(), b.rays.end(), a.rays.begin(), a.rays.end()))
        p.leq[a.id][b.id] = 1;
    if (a.dim >= 1)
      for (const Cone& b : f.cones)
        if (b.dim == 1 && p.leq[b.id][a.id]) ++p.atom_count[a.id];
  }
  return p;
}

// The interval [bottom, top] re-graded so bottom has dimension 0; its atoms
// are the elements covering bottom. This is the poset of the transversal fan
// of bottom inside the cone top.
inline FanPoset interval_poset(const FanPoset& p, int bottom, int top) {
  if (!p.leq[bottom][top]) throw std::invalid_argument("not a face pair");
  std::vector<int> members;
  for (int e = 0; e < p.n(); ++e)
    if (p.leq[bottom][e] && p.leq[e][top]) members.push_back(e);
  FanPoset q;
  q.top_dim = p.dims[top] - p.dims[bottom];
  q.pure = true;
  q.coords_rational = p.coords_rational;
  int m = static_cast<int>(members.size());
  q.dims.resize(m);
  q.atom_count.assign(m, 0);
  q.boundary.assign(m, 0);
  q.leq.assign(m, std::vector<char>(m, 0));
  for (int i = 0; i < m; ++i) {
    q.dims[i] = p.dims[members[i]] - p.dims[bottom];
    for (int j = 0; j < m; ++j) q.leq[i][j] = p.leq[members[i]][members[j]];
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (q.dims[j] == 1 && q.leq[j][i]) ++q.atom_count[i];
  return q;
}

}  // namespace fanih
