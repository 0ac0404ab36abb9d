#pragma once

// Convex polyhedral cones in Q^n with both descriptions kept in sync.
//
// A Cone is immutable and canonical: rays are primitive, projected onto the
// orthogonal complement of the lineality space and sorted; the lineality
// space and the span equations are stored as canonical row bases; facet
// normals are primitive, projected into the linear span of the cone and
// sorted. Two cones are equal as sets iff their canonical data agree.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "gitbag/errors.hpp"
#include "gitbag/exactmath.hpp"

namespace gitbag {

namespace detail {

struct Generators {
  std::vector<IntVector> rays;
  std::vector<IntVector> lineality;
};

inline void check_lengths(std::size_t dim, const std::vector<IntVector>& vs, const char* what) {
  for (const auto& v : vs)
    if (v.size() != dim)
      throw Error(ErrorKind::DimensionMismatch,
                  std::string(what) + ": expected length " + std::to_string(dim) + ", got " + std::to_string(v.size()));
}

/// Double description (Motzkin) for {x : <a,x> >= 0 for a in ineqs, <e,x> = 0 for e in eqs}.
///
/// The lineality space is split off first and the remaining pointed cone is
/// handled in coordinates of a basis of (ker eqs) ∩ lineality^⊥, where the
/// constraint matrix has full column rank. Adjacency uses the combinatorial
/// zero-set test, valid because the ray list stays irredundant.
inline Generators double_description(std::size_t n, const std::vector<IntVector>& ineqs,
                                     const std::vector<IntVector>& eqs) {
  Generators out;
  std::vector<IntVector> all = ineqs;
  all.insert(all.end(), eqs.begin(), eqs.end());
  out.lineality = nullspace(all, n);

  std::vector<IntVector> sub_eqs = eqs;
  sub_eqs.insert(sub_eqs.end(), out.lineality.begin(), out.lineality.end());
  const std::vector<IntVector> basis = nullspace(sub_eqs, n);
  const std::size_t s = basis.size();
  if (s == 0) return out;

  // Constraints in subspace coordinates, deduplicated.
  std::set<IntVector> unique_rows;
  for (const auto& a : ineqs) {
    IntVector row(s);
    for (std::size_t j = 0; j < s; ++j) row[j] = dot(a, basis[j]);
    if (!is_zero(row)) unique_rows.insert(primitive_vector(row));
  }
  const std::vector<IntVector> rows(unique_rows.begin(), unique_rows.end());
  const std::size_t m = rows.size();

  // Initial simplicial cone from s independent constraints.
  std::vector<std::size_t> chosen;
  std::vector<IntVector> chosen_rows;
  std::vector<bool> used(m, false);
  for (std::size_t i = 0; i < m && chosen.size() < s; ++i) {
    chosen_rows.push_back(rows[i]);
    if (rank_of(chosen_rows, s) == chosen_rows.size()) {
      chosen.push_back(i);
      used[i] = true;
    } else {
      chosen_rows.pop_back();
    }
  }
  if (chosen.size() != s) throw Error(ErrorKind::InternalError, "double description: constraint matrix rank deficient");

  RatMatrix sel(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) sel(i, j) = rows[chosen[i]][j];

  struct Ray {
    IntVector y;
    boost::dynamic_bitset<> zeros;
  };
  std::vector<Ray> current;
  for (std::size_t j = 0; j < s; ++j) {
    RatVector e(s);
    e[j] = 1;
    const auto col = solve_square(sel, e);
    if (!col) throw Error(ErrorKind::InternalError, "double description: singular start");
    Ray ray{primitive_vector(*col), boost::dynamic_bitset<>(m)};
    for (std::size_t i = 0; i < s; ++i)
      if (i != j) ray.zeros.set(chosen[i]);
    current.push_back(std::move(ray));
  }

  for (std::size_t c = 0; c < m; ++c) {
    if (used[c]) continue;
    const IntVector& a = rows[c];
    std::vector<Integer> val(current.size());
    std::vector<std::size_t> pos, neg, zer;
    for (std::size_t i = 0; i < current.size(); ++i) {
      val[i] = dot(a, current[i].y);
      if (val[i] > 0) pos.push_back(i);
      else if (val[i] < 0) neg.push_back(i);
      else zer.push_back(i);
    }
    if (neg.empty()) {
      for (auto i : zer) current[i].zeros.set(c);
      continue;
    }
    std::vector<Ray> next;
    for (auto i : pos) next.push_back(current[i]);
    for (auto i : zer) {
      next.push_back(current[i]);
      next.back().zeros.set(c);
    }
    for (auto p : pos) {
      for (auto q : neg) {
        const auto common = current[p].zeros & current[q].zeros;
        if (common.count() + 2 < s) continue;
        bool adjacent = true;
        for (std::size_t t = 0; t < current.size() && adjacent; ++t) {
          if (t == p || t == q) continue;
          if (common.is_subset_of(current[t].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        IntVector y(s);
        for (std::size_t j = 0; j < s; ++j) y[j] = val[p] * current[q].y[j] - val[q] * current[p].y[j];
        Ray ray{primitive_vector(y), common};
        ray.zeros.set(c);
        next.push_back(std::move(ray));
      }
    }
    current = std::move(next);
    used[c] = true;
  }

  std::set<IntVector> rays;
  for (const auto& ray : current) {
    IntVector x(n);
    for (std::size_t j = 0; j < s; ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += ray.y[j] * basis[j][i];
    rays.insert(primitive_vector(x));
  }
  out.rays.assign(rays.begin(), rays.end());
  return out;
}

}  // namespace detail

class Cone {
 public:
  Cone() = default;

  /// Cone generated by `rays` plus the linear span of `lineality`.
  static Cone from_generators(std::size_t dim, const std::vector<IntVector>& rays,
                              const std::vector<IntVector>& lineality = {}) {
    detail::check_lengths(dim, rays, "cone ray");
    detail::check_lengths(dim, lineality, "cone lineality vector");
    std::vector<IntVector> nonzero;
    for (const auto& r : rays)
      if (!gitbag::is_zero(r)) nonzero.push_back(r);

    Cone c;
    c.ambient_dim_ = dim;
    const auto dual = detail::double_description(dim, nonzero, lineality);
    c.facet_normals_ = dual.rays;
    c.span_equations_ = dual.lineality;

    std::vector<IntVector> constraints = c.facet_normals_;
    constraints.insert(constraints.end(), c.span_equations_.begin(), c.span_equations_.end());
    c.lineality_ = nullspace(constraints, dim);

    if (!c.facet_normals_.empty()) {
      const std::size_t target = dim - c.lineality_.size() - 1;
      std::set<IntVector> extreme;
      for (const auto& r : nonzero) {
        const RatVector projected = project_out(r, c.lineality_);
        if (gitbag::is_zero(projected)) continue;
        const IntVector p = primitive_vector(projected);
        if (extreme.count(p)) continue;
        std::vector<IntVector> tight = c.span_equations_;
        for (const auto& u : c.facet_normals_)
          if (dot(u, p) == 0) tight.push_back(u);
        if (rank_of(tight, dim) == target) extreme.insert(p);
      }
      c.rays_.assign(extreme.begin(), extreme.end());
    }
    return c;
  }

  /// Cone {x : <a,x> >= 0 for a in inequalities, <e,x> = 0 for e in equations}.
  static Cone from_constraints(std::size_t dim, const std::vector<IntVector>& inequalities,
                               const std::vector<IntVector>& equations = {}) {
    detail::check_lengths(dim, inequalities, "cone inequality");
    detail::check_lengths(dim, equations, "cone equation");
    const auto gens = detail::double_description(dim, inequalities, equations);
    return from_generators(dim, gens.rays, gens.lineality);
  }

  static Cone zero(std::size_t dim) { return from_generators(dim, {}); }

  static Cone whole_space(std::size_t dim) {
    std::vector<IntVector> basis;
    for (std::size_t i = 0; i < dim; ++i) {
      IntVector e(dim);
      e[i] = 1;
      basis.push_back(e);
    }
    return from_generators(dim, {}, basis);
  }

  static Cone orthant(std::size_t dim) {
    std::vector<IntVector> basis;
    for (std::size_t i = 0; i < dim; ++i) {
      IntVector e(dim);
      e[i] = 1;
      basis.push_back(e);
    }
    return from_generators(dim, basis);
  }

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  const std::vector<IntVector>& rays() const noexcept { return rays_; }
  const std::vector<IntVector>& lineality() const noexcept { return lineality_; }
  const std::vector<IntVector>& facet_normals() const noexcept { return facet_normals_; }
  const std::vector<IntVector>& span_equations() const noexcept { return span_equations_; }

  std::size_t dim() const noexcept { return ambient_dim_ - span_equations_.size(); }
  bool is_pointed() const noexcept { return lineality_.empty(); }
  bool is_zero() const noexcept { return rays_.empty() && lineality_.empty(); }
  bool is_full_dimensional() const noexcept { return span_equations_.empty(); }
  bool is_subspace() const noexcept { return facet_normals_.empty(); }

  template <class Vec>
  bool contains(const Vec& p) const {
    check_point(p);
    for (const auto& e : span_equations_)
      if (dot(e, p) != 0) return false;
    for (const auto& u : facet_normals_)
      if (dot(u, p) < 0) return false;
    return true;
  }

  template <class Vec>
  bool relint_contains(const Vec& p) const {
    check_point(p);
    for (const auto& e : span_equations_)
      if (dot(e, p) != 0) return false;
    for (const auto& u : facet_normals_)
      if (dot(u, p) <= 0) return false;
    return true;
  }

  /// True iff `other` ⊆ this.
  bool contains(const Cone& other) const {
    if (other.ambient_dim_ != ambient_dim_) throw Error(ErrorKind::DimensionMismatch, "cone containment");
    for (const auto& r : other.rays_)
      if (!contains(r)) return false;
    for (const auto& l : other.lineality_) {
      if (!contains(l) || !contains(negated(l))) return false;
    }
    return true;
  }

  /// Sum of the ray generators; lies in the relative interior.
  IntVector relint_point() const {
    IntVector p(ambient_dim_);
    for (const auto& r : rays_)
      for (std::size_t i = 0; i < ambient_dim_; ++i) p[i] += r[i];
    return p;
  }

  std::string to_string() const {
    std::string s = "cone(";
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      if (i) s += ",";
      s += gitbag::to_string(rays_[i]);
    }
    s += ")";
    if (!lineality_.empty()) {
      s += "+lin(";
      for (std::size_t i = 0; i < lineality_.size(); ++i) {
        if (i) s += ",";
        s += gitbag::to_string(lineality_[i]);
      }
      s += ")";
    }
    if (rays_.empty() && lineality_.empty()) s = "{0}";
    return s;
  }

  friend bool operator==(const Cone& a, const Cone& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.rays_ == b.rays_ && a.lineality_ == b.lineality_;
  }
  friend bool operator<(const Cone& a, const Cone& b) {
    if (a.ambient_dim_ != b.ambient_dim_) return a.ambient_dim_ < b.ambient_dim_;
    if (a.rays_ != b.rays_) return a.rays_ < b.rays_;
    return a.lineality_ < b.lineality_;
  }

 private:
  template <class Vec>
  void check_point(const Vec& p) const {
    if (p.size() != ambient_dim_) throw Error(ErrorKind::DimensionMismatch, "point has wrong length");
  }

  std::size_t ambient_dim_ = 0;
  std::vector<IntVector> rays_;
  std::vector<IntVector> lineality_;
  std::vector<IntVector> facet_normals_;
  std::vector<IntVector> span_equations_;
};

inline std::ostream& operator<<(std::ostream& os, const Cone& c) { return os << c.to_string(); }

// ---------------------------------------------------------------------------
// Operations

inline Cone cone_from_generators(std::size_t dim, const std::vector<IntVector>& rays,
                                 const std::vector<IntVector>& lineality = {}) {
  return Cone::from_generators(dim, rays, lineality);
}

inline Cone dual_cone(const Cone& c) {
  return Cone::from_generators(c.ambient_dim(), c.facet_normals(), c.span_equations());
}

inline Cone intersect_all(std::size_t dim, const std::vector<const Cone*>& cones) {
  std::vector<IntVector> ineqs, eqs;
  for (const Cone* c : cones) {
    if (c->ambient_dim() != dim) throw Error(ErrorKind::DimensionMismatch, "cone intersection");
    ineqs.insert(ineqs.end(), c->facet_normals().begin(), c->facet_normals().end());
    eqs.insert(eqs.end(), c->span_equations().begin(), c->span_equations().end());
  }
  return Cone::from_constraints(dim, ineqs, eqs);
}

inline Cone intersect(const Cone& a, const Cone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "cone intersection");
  return intersect_all(a.ambient_dim(), {&a, &b});
}

inline Cone linear_image(const Cone& c, const IntMatrix& a) {
  if (a.cols() != c.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "linear_image");
  std::vector<IntVector> rays, lin;
  for (const auto& r : c.rays()) rays.push_back(a * r);
  for (const auto& l : c.lineality()) lin.push_back(a * l);
  return Cone::from_generators(a.rows(), rays, lin);
}

inline Cone linear_image(const Cone& c, const RatMatrix& a) {
  IntMatrix scaled(a.rows(), a.cols());
  Integer l = 1;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Integer den = boost::multiprecision::denominator(a(i, j));
      l = l / boost::multiprecision::gcd(l, den) * den;
    }
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      scaled(i, j) = boost::multiprecision::numerator(Rational(a(i, j) * l));
  return linear_image(c, scaled);
}

/// Scales a rational point to an integer point on the same ray (zero stays zero).
inline IntVector integral_point(const RatVector& p) {
  if (is_zero(p)) return IntVector(p.size());
  return primitive_vector(p);
}

/// The face of `c` whose relative interior contains `p`.
inline Cone smallest_face(const Cone& c, const IntVector& p) {
  if (!c.contains(p)) throw Error(ErrorKind::PointNotInCone, gitbag::to_string(p) + " not in " + c.to_string());
  std::vector<const IntVector*> tight;
  for (const auto& u : c.facet_normals())
    if (dot(u, p) == 0) tight.push_back(&u);
  std::vector<IntVector> gens;
  for (const auto& r : c.rays()) {
    bool in = true;
    for (const auto* u : tight)
      if (dot(*u, r) != 0) {
        in = false;
        break;
      }
    if (in) gens.push_back(r);
  }
  return Cone::from_generators(c.ambient_dim(), gens, c.lineality());
}

inline Cone smallest_face(const Cone& c, const RatVector& p) { return smallest_face(c, integral_point(p)); }

inline IntVector relint_point(const Cone& c) { return c.relint_point(); }

/// relint(a) ⊆ relint(b).
inline bool relint_subset(const Cone& a, const Cone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "relint_subset");
  return b.contains(a) && b.relint_contains(a.relint_point());
}

/// relint(a) ∩ relint(b) ≠ ∅.
inline bool relints_meet(const Cone& a, const Cone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "relints_meet");
  const IntVector p = intersect(a, b).relint_point();
  return a.relint_contains(p) && b.relint_contains(p);
}

/// a ∩ relint(b) ≠ ∅.
inline bool meets_relint(const Cone& a, const Cone& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "meets_relint");
  return b.relint_contains(intersect(a, b).relint_point());
}

inline bool is_face_of(const Cone& face, const Cone& c) {
  if (face.ambient_dim() != c.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "is_face_of");
  if (!c.contains(face)) return false;
  return smallest_face(c, face.relint_point()) == face;
}

/// All faces of `c`, from the lineality space up to `c` itself, ordered by
/// dimension and then canonically.
inline std::vector<Cone> faces(const Cone& c) {
  const auto& rays = c.rays();
  const auto& normals = c.facet_normals();
  const std::size_t nr = rays.size();
  std::vector<boost::dynamic_bitset<>> tight(normals.size(), boost::dynamic_bitset<>(nr));
  for (std::size_t j = 0; j < normals.size(); ++j)
    for (std::size_t i = 0; i < nr; ++i)
      if (dot(normals[j], rays[i]) == 0) tight[j].set(i);

  std::set<boost::dynamic_bitset<>> seen;
  std::vector<boost::dynamic_bitset<>> queue;
  boost::dynamic_bitset<> full(nr);
  full.set();
  seen.insert(full);
  queue.push_back(full);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto current = queue[head];
    for (std::size_t j = 0; j < normals.size(); ++j) {
      auto candidate = current & tight[j];
      if (candidate == current) continue;
      // Close up: the face is cut out by every facet vanishing on the candidate rays.
      boost::dynamic_bitset<> closed(nr);
      closed.set();
      for (std::size_t k = 0; k < normals.size(); ++k)
        if (candidate.is_subset_of(tight[k])) closed &= tight[k];
      if (seen.insert(closed).second) queue.push_back(closed);
    }
  }

  std::vector<Cone> out;
  for (const auto& mask : queue) {
    std::vector<IntVector> gens;
    for (std::size_t i = 0; i < nr; ++i)
      if (mask.test(i)) gens.push_back(rays[i]);
    out.push_back(Cone::from_generators(c.ambient_dim(), gens, c.lineality()));
  }
  std::sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a < b;
  });
  return out;
}

}  // namespace gitbag
