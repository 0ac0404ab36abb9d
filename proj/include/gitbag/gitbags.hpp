#pragma once

// GIT-bags of a subtorus action: the collection C_T(X), bags μ(c), their
// order, and the quotient-property flags.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "gitbag/errors.hpp"
#include "gitbag/gitfan.hpp"
#include "gitbag/polycone.hpp"
#include "gitbag/toricinput.hpp"

namespace gitbag {

/// A linearized class (D, w) in K ⊕ M.
using LinClass = IntVector;
using OrbitSet = boost::dynamic_bitset<>;

/// κ° ⊂ Π(ω)°.
inline bool in_ct_x(const GitInput& g, const Cone& omega) {
  if (omega.ambient_dim() != g.k + g.d) throw Error(ErrorKind::DimensionMismatch, "orbit cone lives in the wrong space");
  return relint_subset(g.kappa, linear_image(omega, g.Pi));
}

struct GitBag {
  Cone cone;
  std::vector<std::size_t> witness_set;  ///< S(μ) as orbit-cone indices, ascending
  OrbitSet witness_bits;
  std::vector<std::size_t> git_cones;    ///< cones of Σ whose relint points produce this bag
  IntVector representative;              ///< a class c with μ(c) = μ
  std::optional<bool> qp_maximal;
  std::optional<bool> projective;
  std::optional<std::size_t> projectivity_witness;  ///< an orbit cone outside C_T(X) meeting μ°
  std::optional<bool> ample_realizable;
  std::optional<bool> geometric;
};

struct BagCollection {
  std::vector<GitBag> bags;                  ///< canonical order of cones
  std::vector<std::vector<bool>> order;      ///< order[i][j] ⇔ bags[i] ≤ bags[j]
  std::vector<std::size_t> lambda0;          ///< indices of Λ⁰
  std::vector<std::size_t> ct_sharp_witnesses;

  std::optional<std::size_t> find(const Cone& c) const {
    for (std::size_t i = 0; i < bags.size(); ++i)
      if (bags[i].cone == c) return i;
    return std::nullopt;
  }
  bool in_lambda0(std::size_t i) const {
    return std::binary_search(lambda0.begin(), lambda0.end(), i);
  }
};

struct SemistableFamily {
  std::vector<Support> supports;  ///< upward closed, ascending
  std::vector<Support> minimal;
};

class GitBagEngine {
 public:
  explicit GitBagEngine(GitInput input, std::optional<std::size_t> max_r = std::nullopt)
      : input_(std::move(input)), orbit_(enumerate_orbit_cones(input_.weights(), max_r)) {
    in_ct_.resize(orbit_.size());
    for (std::size_t i = 0; i < orbit_.size(); ++i) {
      in_ct_[i] = in_ct_x(input_, orbit_.cone(i));
      if (in_ct_[i]) ct_.push_back(i);
    }
  }

  const GitInput& input() const noexcept { return input_; }
  const OrbitConeSet& orbit_cones() const noexcept { return orbit_; }
  bool in_ct(std::size_t orbit_index) const { return in_ct_.at(orbit_index); }
  /// Indices of the orbit cones forming C_T(X).
  const std::vector<std::size_t>& ct_cones() const noexcept { return ct_; }

  const Quasifan& quasifan() const {
    if (!fan_) fan_ = compute_git_quasifan(orbit_);
    return *fan_;
  }

  /// C_T(σ): orbit cones whose relative interior contains σ°.
  std::vector<std::size_t> ct_sigma(const Cone& sigma) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < orbit_.size(); ++i)
      if (relint_subset(sigma, orbit_.cone(i))) out.push_back(i);
    return out;
  }

  /// {ω ∈ C_T(X) : c ∈ ω°}.
  std::vector<std::size_t> witnesses(const LinClass& c) const {
    check_class(c);
    std::vector<std::size_t> out;
    for (auto i : ct_)
      if (orbit_.cone(i).relint_contains(c)) out.push_back(i);
    return out;
  }

  bool ct_sharp_member(const LinClass& c) const { return !witnesses(c).empty(); }

  GitBag compute_bag(const LinClass& c) const {
    auto w = witnesses(c);
    if (w.empty()) throw Error(ErrorKind::EmptySemistableSet, to_string(c) + " has no semistable points");
    return make_bag(std::move(w));
  }

  /// μ1 ≤ μ2: every witness of μ2 has a face that witnesses μ1.
  bool bag_le(const GitBag& a, const GitBag& b) const {
    for (auto w2 : b.witness_set) {
      bool found = false;
      for (auto f : orbit_.faces_of(w2))
        if (a.witness_bits.test(f)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  }

  /// Evaluates the projectivity condition over all orbit cones. The reported
  /// witness prefers cones containing μ° in their relative interior, then
  /// lower dimension, then canonical order.
  std::pair<bool, std::optional<std::size_t>> projectivity(const GitBag& mu) const {
    std::optional<std::size_t> best;
    bool best_contains = false;
    for (std::size_t i = 0; i < orbit_.size(); ++i) {
      if (in_ct_[i] || !relints_meet(orbit_.cone(i), mu.cone)) continue;
      const bool contains = relint_subset(mu.cone, orbit_.cone(i));
      if (!best || (contains && !best_contains) ||
          (contains == best_contains && orbit_.cone(i).dim() < orbit_.cone(*best).dim())) {
        best = i;
        best_contains = contains;
      }
    }
    return {!best.has_value(), best};
  }

  bool projectivity_flag(const GitBag& mu) const { return projectivity(mu).first; }

  /// Requires Λ⁰ membership to be known by the caller.
  bool ample_flag(const GitBag& mu, bool in_lambda0) const {
    return in_lambda0 && relints_meet(linear_image(mu.cone, input_.Pi), input_.kappa);
  }

  /// dim ω = dim Π(ω) + d for every witness.
  bool geometric_from_witnesses(const std::vector<std::size_t>& ws) const {
    for (auto i : ws) {
      const Cone& w = orbit_.cone(i);
      if (w.dim() != linear_image(w, input_.Pi).dim() + input_.d) return false;
    }
    return true;
  }

  bool geometric_flag(const LinClass& c) const {
    const auto ws = witnesses(c);
    if (ws.empty()) throw Error(ErrorKind::EmptySemistableSet, to_string(c) + " has no semistable points");
    const bool geometric = geometric_from_witnesses(ws);
    if (simplicial_input()) {
      const bool full = make_bag(ws).cone.is_full_dimensional();
      if (full != geometric)
        throw Error(ErrorKind::InternalError, "geometric flag disagrees with the full-dimension test at " + to_string(c));
    }
    return geometric;
  }

  /// X^ss(c1) is T-saturated in X^ss(c2).
  bool saturated_flag(const LinClass& c1, const LinClass& c2) const {
    return relint_subset(compute_bag(c2).cone, compute_bag(c1).cone);
  }

  /// Supports I whose coordinate stratum lies over X^ss(c): some face f of
  /// ω_I has f ∈ C_T(X) and σ(c)° ⊂ f°.
  SemistableFamily semistable_supports(const LinClass& c) const {
    check_class(c);
    SemistableFamily out;
    if (!orbit_.weight_cone().contains(c)) return out;
    const Cone sigma = git_cone(orbit_, c);
    OrbitSet good(orbit_.size());
    for (auto i : ct_)
      if (relint_subset(sigma, orbit_.cone(i))) good.set(i);
    if (good.none()) return out;
    std::vector<char> cone_ok(orbit_.size(), 0);
    for (std::size_t i = 0; i < orbit_.size(); ++i)
      for (auto f : orbit_.faces_of(i))
        if (good.test(f)) {
          cone_ok[i] = 1;
          break;
        }
    const std::size_t count = std::size_t(1) << orbit_.coordinate_count();
    std::vector<char> member(count, 0);
    for (std::size_t s = 0; s < count; ++s)
      if (cone_ok[orbit_.cone_of_support(Support(s))]) {
        member[s] = 1;
        out.supports.push_back(Support(s));
      }
    for (auto s : out.supports) {
      bool minimal = true;
      for (auto i : support_indices(s))
        if (member[s & ~(Support(1) << i)]) {
          minimal = false;
          break;
        }
      if (minimal) out.minimal.push_back(s);
    }
    return out;
  }

  struct Options {
    bool flags = true;  ///< projectivity, ampleness and geometricity for every bag
  };

  BagCollection enumerate_bags(Options opts) const {
    BagCollection out;
    out.ct_sharp_witnesses = ct_;
    const auto& fan = quasifan();
    std::map<Cone, std::size_t> seen;
    std::vector<GitBag> found;
    for (std::size_t s = 0; s < fan.all_cones.size(); ++s) {
      auto ws = witnesses(fan.all_cones[s].relint_point());
      if (ws.empty()) continue;
      GitBag bag = make_bag(std::move(ws));
      bag.representative = fan.all_cones[s].relint_point();
      auto it = seen.find(bag.cone);
      if (it == seen.end()) {
        it = seen.emplace(bag.cone, found.size()).first;
        found.push_back(std::move(bag));
      }
      found[it->second].git_cones.push_back(s);
    }
    for (auto& [cone, idx] : seen) out.bags.push_back(std::move(found[idx]));

    const std::size_t n = out.bags.size();
    out.order.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.order[i][j] = i == j || bag_le(out.bags[i], out.bags[j]);

    for (std::size_t i = 0; i < n; ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < n && minimal; ++j)
        if (j != i && relint_subset(out.bags[j].cone, out.bags[i].cone)) minimal = false;
      out.bags[i].qp_maximal = minimal;
      if (minimal) out.lambda0.push_back(i);
    }
    if (opts.flags)
      for (auto& bag : out.bags) fill_flags(bag);
    return out;
  }
  BagCollection enumerate_bags() const { return enumerate_bags(Options{}); }

  /// Computes the projectivity, ampleness and geometricity flags in place.
  /// qp_maximal must already be set.
  void fill_flags(GitBag& bag) const {
    const auto [proj, witness] = projectivity(bag);
    bag.projective = proj;
    bag.projectivity_witness = witness;
    bag.ample_realizable = ample_flag(bag, bag.qp_maximal.value_or(false));
    bag.geometric = geometric_from_witnesses(bag.witness_set);
  }

  bool simplicial_input() const { return input_.fan_diagnostics && input_.fan_diagnostics->simplicial; }

 private:
  void check_class(const LinClass& c) const {
    if (c.size() != input_.k + input_.d)
      throw Error(ErrorKind::DimensionMismatch, "class has length " + std::to_string(c.size()) + ", expected " +
                                                    std::to_string(input_.k + input_.d));
  }

  GitBag make_bag(std::vector<std::size_t> ws) const {
    GitBag bag;
    std::vector<const Cone*> ptrs;
    bag.witness_bits.resize(orbit_.size());
    for (auto i : ws) {
      ptrs.push_back(&orbit_.cone(i));
      bag.witness_bits.set(i);
    }
    bag.cone = intersect_all(input_.k + input_.d, ptrs);
    bag.witness_set = std::move(ws);
    return bag;
  }

  GitInput input_;
  OrbitConeSet orbit_;
  std::vector<bool> in_ct_;
  std::vector<std::size_t> ct_;
  mutable std::optional<Quasifan> fan_;
};

/// Bags of Λ⁰ as returned by enumerate_bags.
inline std::vector<std::size_t> qp_maximal_bags(const BagCollection& b) { return b.lambda0; }

/// Cover relations of ≤ restricted to Λ⁰, as pairs (lower, upper) of bag indices.
inline std::vector<std::pair<std::size_t, std::size_t>> lambda0_hasse(const BagCollection& b) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (auto i : b.lambda0)
    for (auto j : b.lambda0) {
      if (i == j || !b.order[i][j]) continue;
      bool cover = true;
      for (auto m : b.lambda0)
        if (m != i && m != j && b.order[i][m] && b.order[m][j]) {
          cover = false;
          break;
        }
      if (cover) edges.emplace_back(i, j);
    }
  return edges;
}

}  // namespace gitbag
