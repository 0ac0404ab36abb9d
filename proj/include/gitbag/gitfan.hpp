#pragma once

// Orbit cones, GIT-cones and the GIT-quasifan of a diagonal torus action on
// affine space K^r, where coordinate i has weight column_i(W).
//
// Orbit cones of such an action are exactly the cones generated by the
// weights of a coordinate support I ⊆ {1..r}; a GIT-cone is the intersection
// of all orbit cones containing a given weight, and the GIT-cones form a
// quasifan supported on the weight cone.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gitbag/errors.hpp"
#include "gitbag/exactmath.hpp"
#include "gitbag/polycone.hpp"

namespace gitbag {

/// Subset of the coordinate indices {0..r-1} as a bit mask.
using Support = std::uint32_t;

inline constexpr std::size_t kHardMaxCoordinates = 30;

inline std::vector<std::size_t> support_indices(Support s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; s; ++i, s >>= 1)
    if (s & 1u) out.push_back(i);
  return out;
}

inline Support support_of(const std::vector<std::size_t>& indices) {
  Support s = 0;
  for (auto i : indices) s |= Support(1) << i;
  return s;
}

/// Coordinate cap for exhaustive support enumeration, read from GITBAG_MAX_R.
inline std::size_t max_coordinates_from_env() {
  if (const char* v = std::getenv("GITBAG_MAX_R")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) return std::min<std::size_t>(n, kHardMaxCoordinates);
  }
  return 16;
}

struct WeightData {
  IntMatrix weights;  ///< k x r, column i is the weight of coordinate i

  std::size_t r() const noexcept { return weights.cols(); }
  std::size_t k() const noexcept { return weights.rows(); }
  IntVector column(std::size_t i) const { return weights.column(i); }
};

inline Cone orbit_cone(const WeightData& w, Support s) {
  if (w.r() < 32 && (s >> w.r()) != 0) throw Error(ErrorKind::InvalidInput, "support index out of range");
  std::vector<IntVector> gens;
  for (auto i : support_indices(s)) gens.push_back(w.column(i));
  return Cone::from_generators(w.k(), gens);
}

class OrbitConeSet {
 public:
  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t coordinate_count() const noexcept { return r_; }
  const std::vector<Cone>& cones() const noexcept { return cones_; }
  const Cone& cone(std::size_t i) const { return cones_.at(i); }
  std::size_t size() const noexcept { return cones_.size(); }
  /// Supports realizing cone i, ascending.
  const std::vector<Support>& supports(std::size_t i) const { return supports_.at(i); }
  /// Index of ω_I for the support I.
  std::size_t cone_of_support(Support s) const { return cone_of_support_.at(s); }
  const Cone& weight_cone() const noexcept { return cones_[cone_of_support_.back()]; }

  std::optional<std::size_t> find(const Cone& c) const {
    const auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Indices of the orbit cones that are faces of cone i (including i).
  const std::vector<std::size_t>& faces_of(std::size_t i) const {
    if (faces_.empty()) {
      faces_.resize(cones_.size());
      for (std::size_t j = 0; j < cones_.size(); ++j) {
        for (const auto& f : faces(cones_[j])) {
          const auto idx = find(f);
          if (!idx) throw Error(ErrorKind::InternalError, "face of an orbit cone is not an orbit cone: " + f.to_string());
          faces_[j].push_back(*idx);
        }
        std::sort(faces_[j].begin(), faces_[j].end());
      }
    }
    return faces_.at(i);
  }

 private:
  friend OrbitConeSet enumerate_orbit_cones(const WeightData&, std::optional<std::size_t>);

  std::size_t ambient_dim_ = 0;
  std::size_t r_ = 0;
  std::vector<Cone> cones_;
  std::vector<std::vector<Support>> supports_;
  std::vector<std::size_t> cone_of_support_;
  std::map<Cone, std::size_t> index_;
  mutable std::vector<std::vector<std::size_t>> faces_;
};

/// Evaluates all 2^r supports and deduplicates the resulting cones. Cones are
/// stored in canonical order.
inline OrbitConeSet enumerate_orbit_cones(const WeightData& w, std::optional<std::size_t> limit = std::nullopt) {
  const std::size_t cap = limit.value_or(max_coordinates_from_env());
  if (w.r() > cap || w.r() > kHardMaxCoordinates)
    throw Error(ErrorKind::LimitExceeded, std::to_string(w.r()) + " coordinates exceed the enumeration limit " +
                                              std::to_string(std::min(cap, kHardMaxCoordinates)));
  const std::size_t count = std::size_t(1) << w.r();
  std::vector<Cone> per_support(count);
  std::map<std::vector<IntVector>, Cone> by_generators;
  for (std::size_t s = 0; s < count; ++s) {
    // Distinct supports often share a generator set; reuse the cone then.
    std::set<IntVector> gens;
    for (auto i : support_indices(Support(s))) {
      const auto col = w.column(i);
      if (!is_zero(col)) gens.insert(primitive_vector(col));
    }
    std::vector<IntVector> key(gens.begin(), gens.end());
    auto it = by_generators.find(key);
    if (it == by_generators.end()) it = by_generators.emplace(key, Cone::from_generators(w.k(), key)).first;
    per_support[s] = it->second;
  }

  OrbitConeSet out;
  out.ambient_dim_ = w.k();
  out.r_ = w.r();
  std::set<Cone> distinct(per_support.begin(), per_support.end());
  out.cones_.assign(distinct.begin(), distinct.end());
  for (std::size_t i = 0; i < out.cones_.size(); ++i) out.index_.emplace(out.cones_[i], i);
  out.supports_.resize(out.cones_.size());
  out.cone_of_support_.resize(count);
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t idx = out.index_.at(per_support[s]);
    out.cone_of_support_[s] = idx;
    out.supports_[idx].push_back(Support(s));
  }
  return out;
}

/// σ(w): intersection of all orbit cones containing w.
inline Cone git_cone(const OrbitConeSet& o, const IntVector& w) {
  if (w.size() != o.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "weight has wrong length");
  if (!o.weight_cone().contains(w))
    throw Error(ErrorKind::WeightOutsideOmega, to_string(w) + " lies outside the weight cone");
  std::vector<const Cone*> containing;
  for (const auto& c : o.cones())
    if (c.contains(w)) containing.push_back(&c);
  return intersect_all(o.ambient_dim(), containing);
}

/// Supports I with w ∈ ω_I.
inline std::vector<Support> semistable_supports_affine(const OrbitConeSet& o, const IntVector& w) {
  if (w.size() != o.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "weight has wrong length");
  std::vector<bool> contains(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) contains[i] = o.cone(i).contains(w);
  std::vector<Support> out;
  const std::size_t count = std::size_t(1) << o.coordinate_count();
  for (std::size_t s = 0; s < count; ++s)
    if (contains[o.cone_of_support(Support(s))]) out.push_back(Support(s));
  return out;
}

struct Quasifan {
  std::vector<Cone> maximal_cones;  ///< canonical order
  std::vector<Cone> all_cones;      ///< face closure, by dimension then canonical order
  Cone support;

  /// The unique cone whose relative interior contains p.
  std::optional<std::size_t> cone_containing_in_relint(const IntVector& p) const {
    for (std::size_t i = 0; i < all_cones.size(); ++i)
      if (all_cones[i].relint_contains(p)) return i;
    return std::nullopt;
  }
};

namespace detail {

/// Distinct hyperplanes bounding orbit cones, restricted to those not
/// vanishing on the given subspace basis.
inline std::vector<IntVector> orbit_cone_hyperplanes(const OrbitConeSet& o, const std::vector<IntVector>& span_basis) {
  std::set<IntVector> planes;
  auto add = [&](const IntVector& h) {
    bool relevant = false;
    for (const auto& b : span_basis)
      if (dot(h, b) != 0) relevant = true;
    if (!relevant) return;
    IntVector p = primitive_vector(h);
    // Normalize sign so ±h are stored once.
    const auto first = std::find_if(p.begin(), p.end(), [](const Integer& x) { return x != 0; });
    if (*first < 0) p = negated(p);
    planes.insert(p);
  };
  for (const auto& c : o.cones()) {
    for (const auto& u : c.facet_normals()) add(u);
    for (const auto& e : c.span_equations()) add(e);
  }
  return {planes.begin(), planes.end()};
}

/// Generic start point: relint_point(Ω) pushed along the moment curve
/// t b1 + t^2 b2 + ... with t = 1/N^k, k = 1, 2, ..., until it lies off
/// every relevant hyperplane and inside relint(Ω).
inline IntVector generic_point(const Cone& omega, const std::vector<IntVector>& basis,
                               const std::vector<IntVector>& planes) {
  const IntVector p = omega.relint_point();
  Integer n = 1;
  for (const auto& x : p) n = std::max(n, Integer(abs(x)));
  n += 1;
  Rational step = Rational(1) / Rational(n);
  for (int k = 1; k < 4096; ++k, step /= Rational(n)) {
    RatVector w = to_rational(p);
    Rational t = step;
    for (const auto& b : basis) {
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += t * Rational(b[i]);
      t *= step;
    }
    if (!omega.relint_contains(w)) continue;
    bool generic = true;
    for (const auto& h : planes)
      if (dot(h, w) == 0) {
        generic = false;
        break;
      }
    if (generic) return integral_point(w);
  }
  throw Error(ErrorKind::InternalError, "no generic point found");
}

}  // namespace detail

/// The quasifan of all GIT-cones, via breadth-first chamber traversal across
/// interior facets. Chambers are the GIT-cones of full dimension in span(Ω).
inline Quasifan compute_git_quasifan(const OrbitConeSet& o) {
  const std::size_t n = o.ambient_dim();
  const Cone& omega = o.weight_cone();
  Quasifan fan;
  fan.support = omega;

  std::vector<IntVector> span_gens = omega.rays();
  span_gens.insert(span_gens.end(), omega.lineality().begin(), omega.lineality().end());
  const std::vector<IntVector> basis = canonical_row_basis(span_gens, n);
  const std::size_t s = basis.size();

  if (s == 0) {
    fan.maximal_cones = {omega};
    fan.all_cones = {omega};
    return fan;
  }

  const auto planes = detail::orbit_cone_hyperplanes(o, basis);
  const IntVector start = detail::generic_point(omega, basis, planes);
  const Cone first = git_cone(o, start);
  if (first.dim() != s) throw Error(ErrorKind::InternalError, "start chamber is not full-dimensional");

  std::set<Cone> seen{first};
  std::deque<Cone> queue{first};
  while (!queue.empty()) {
    const Cone chamber = queue.front();
    queue.pop_front();
    for (const auto& u : chamber.facet_normals()) {
      std::vector<IntVector> gens;
      for (const auto& r : chamber.rays())
        if (dot(u, r) == 0) gens.push_back(r);
      const Cone facet = Cone::from_generators(n, gens, chamber.lineality());
      const IntVector p = facet.relint_point();
      if (!omega.relint_contains(p)) continue;

      // Step from p along -u, stopping halfway to the first hyperplane hit.
      const IntVector d = negated(u);
      std::optional<Rational> t;
      for (const auto& h : planes) {
        const Integer hp = dot(h, p), hd = dot(h, d);
        if (hp == 0 || hd == 0 || (hp > 0) == (hd > 0)) continue;
        const Rational th = Rational(-hp) / Rational(hd);
        if (!t || th < *t) t = th;
      }
      const Rational step = t ? *t / 2 : Rational(1);
      RatVector q = to_rational(p);
      for (std::size_t i = 0; i < n; ++i) q[i] += step * Rational(d[i]);
      const Cone next = git_cone(o, integral_point(q));
      if (next.dim() != s || !is_face_of(facet, next))
        throw Error(ErrorKind::InternalError, "chamber traversal failed to cross " + facet.to_string());
      if (seen.insert(next).second) queue.push_back(next);
    }
  }

  fan.maximal_cones.assign(seen.begin(), seen.end());
  std::set<Cone> closure;
  for (const auto& c : fan.maximal_cones)
    for (auto& f : faces(c)) closure.insert(std::move(f));
  fan.all_cones.assign(closure.begin(), closure.end());
  std::stable_sort(fan.all_cones.begin(), fan.all_cones.end(),
                   [](const Cone& a, const Cone& b) { return a.dim() < b.dim(); });
  return fan;
}

/// Violations of the quasifan axioms (empty when the fan is valid): face
/// closure, pairwise intersections being common faces, and the maximal cones
/// covering the support (each interior facet shared by two maximal cones).
inline std::vector<std::string> quasifan_violations(const Quasifan& fan) {
  std::vector<std::string> problems;
  const std::set<Cone> all(fan.all_cones.begin(), fan.all_cones.end());
  for (const auto& c : fan.all_cones)
    for (const auto& f : faces(c))
      if (!all.count(f)) problems.push_back("face " + f.to_string() + " of " + c.to_string() + " missing");
  const auto& maxi = fan.maximal_cones;
  for (std::size_t i = 0; i < maxi.size(); ++i) {
    if (!fan.support.contains(maxi[i])) problems.push_back(maxi[i].to_string() + " leaves the support");
    if (maxi[i].dim() != fan.support.dim())
      problems.push_back(maxi[i].to_string() + " is not of full dimension in the support");
    for (std::size_t j = i + 1; j < maxi.size(); ++j) {
      const Cone meet = intersect(maxi[i], maxi[j]);
      if (!is_face_of(meet, maxi[i]) || !is_face_of(meet, maxi[j]))
        problems.push_back(maxi[i].to_string() + " and " + maxi[j].to_string() + " overlap improperly");
    }
  }
  const std::size_t n = fan.support.ambient_dim();
  for (const auto& c : maxi) {
    for (const auto& u : c.facet_normals()) {
      std::vector<IntVector> gens;
      for (const auto& r : c.rays())
        if (dot(u, r) == 0) gens.push_back(r);
      const Cone facet = Cone::from_generators(n, gens, c.lineality());
      if (!fan.support.relint_contains(facet.relint_point())) continue;
      std::size_t sharing = 0;
      for (const auto& other : maxi)
        if (other.contains(facet)) ++sharing;
      if (sharing != 2) problems.push_back("interior facet " + facet.to_string() + " lies in " +
                                           std::to_string(sharing) + " maximal cones");
    }
  }
  return problems;
}

}  // namespace gitbag
