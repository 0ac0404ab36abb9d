#pragma once

// From toric data to a GIT problem instance: fan validation, the Gale dual
// weight matrix Q, the closed ample cone κ_X, and the lifted subtorus weights.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gitbag/errors.hpp"
#include "gitbag/exactmath.hpp"
#include "gitbag/gitfan.hpp"
#include "gitbag/polycone.hpp"

namespace gitbag {

struct ToricFan {
  std::size_t lattice_dim = 0;
  std::vector<IntVector> rays;                          ///< primitive v_1..v_r
  std::vector<std::vector<std::size_t>> maximal_cones;  ///< 0-based ray indices

  std::size_t r() const noexcept { return rays.size(); }

  /// The n x r matrix P sending e_i to v_i.
  IntMatrix ray_matrix() const { return IntMatrix::from_columns(rays, lattice_dim); }

  Cone cone(const std::vector<std::size_t>& indices) const {
    std::vector<IntVector> gens;
    for (auto i : indices) gens.push_back(rays.at(i));
    return Cone::from_generators(lattice_dim, gens);
  }
};

struct FanDiagnostics {
  std::vector<std::string> violations;
  bool simplicial = false;
  bool complete = false;

  bool valid() const noexcept { return violations.empty(); }
};

/// Checks primitivity and distinctness of rays, that every maximal cone is
/// pointed with exactly its listed rays among the fan rays, the fan axiom,
/// and completeness (pure full dimension, every facet shared by two maximal
/// cones, connected dual graph).
inline FanDiagnostics validate_fan(const ToricFan& fan) {
  FanDiagnostics diag;
  auto fail = [&](std::string msg) { diag.violations.push_back(std::move(msg)); };
  const std::size_t n = fan.lattice_dim;

  std::set<IntVector> distinct;
  for (std::size_t i = 0; i < fan.r(); ++i) {
    const auto& v = fan.rays[i];
    if (v.size() != n) {
      fail("ray " + std::to_string(i + 1) + " has length " + std::to_string(v.size()) + ", expected " + std::to_string(n));
      return diag;
    }
    if (is_zero(v) || content(v) != 1) fail("ray " + std::to_string(i + 1) + " is not primitive");
    if (!distinct.insert(v).second) fail("ray " + std::to_string(i + 1) + " is repeated");
  }
  if (!diag.valid()) return diag;
  if (fan.maximal_cones.empty()) {
    fail("no maximal cones");
    return diag;
  }

  std::vector<Cone> cones;
  bool pure = true;
  diag.simplicial = true;
  for (std::size_t c = 0; c < fan.maximal_cones.size(); ++c) {
    const auto& idx = fan.maximal_cones[c];
    const std::string name = "maximal cone " + std::to_string(c + 1);
    for (auto i : idx)
      if (i >= fan.r()) {
        fail(name + " references ray " + std::to_string(i + 1) + " which does not exist");
        return diag;
      }
    const Cone cone = fan.cone(idx);
    if (!cone.is_pointed()) fail(name + " is not pointed");
    std::set<std::size_t> listed(idx.begin(), idx.end());
    for (std::size_t i = 0; i < fan.r(); ++i) {
      const bool inside = cone.contains(fan.rays[i]);
      if (inside && !listed.count(i)) fail(name + " contains ray " + std::to_string(i + 1) + " without listing it");
      if (listed.count(i) && std::find(cone.rays().begin(), cone.rays().end(), fan.rays[i]) == cone.rays().end())
        fail(name + " lists ray " + std::to_string(i + 1) + " which is not extremal");
    }
    if (cone.dim() != n) pure = false;
    if (cone.rays().size() != cone.dim()) diag.simplicial = false;
    cones.push_back(cone);
  }

  for (std::size_t a = 0; a < cones.size(); ++a)
    for (std::size_t b = a + 1; b < cones.size(); ++b) {
      const Cone meet = intersect(cones[a], cones[b]);
      if (!is_face_of(meet, cones[a]) || !is_face_of(meet, cones[b]))
        fail("maximal cones " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
             " do not meet in a common face");
    }

  if (!pure) {
    fail("fan is not pure of full dimension");
    return diag;
  }
  // Facets: each must lie in exactly two maximal cones.
  std::vector<std::vector<std::size_t>> adjacency(cones.size());
  bool every_facet_shared = true;
  for (std::size_t a = 0; a < cones.size(); ++a) {
    for (const auto& u : cones[a].facet_normals()) {
      std::vector<IntVector> gens;
      for (const auto& r : cones[a].rays())
        if (dot(u, r) == 0) gens.push_back(r);
      const Cone facet = Cone::from_generators(n, gens);
      std::vector<std::size_t> owners;
      for (std::size_t b = 0; b < cones.size(); ++b)
        if (b != a && is_face_of(facet, cones[b])) owners.push_back(b);
      if (owners.size() != 1) {
        every_facet_shared = false;
        fail("facet " + facet.to_string() + " of maximal cone " + std::to_string(a + 1) + " lies in " +
             std::to_string(owners.size() + 1) + " maximal cones");
      } else {
        adjacency[a].push_back(owners.front());
      }
    }
  }
  std::vector<bool> reached(cones.size(), false);
  std::vector<std::size_t> stack{0};
  reached[0] = true;
  while (!stack.empty()) {
    const auto a = stack.back();
    stack.pop_back();
    for (auto b : adjacency[a])
      if (!reached[b]) {
        reached[b] = true;
        stack.push_back(b);
      }
  }
  const bool connected = std::all_of(reached.begin(), reached.end(), [](bool x) { return x; });
  if (!connected) fail("dual graph of the fan is disconnected");
  diag.complete = every_facet_shared && connected;
  return diag;
}

/// Weight matrix of the Cox torus: rows form the Hermite basis of the
/// integer relations among the rays.
inline IntMatrix gale_dual(const ToricFan& fan) {
  const IntMatrix p = fan.ray_matrix();
  const auto snf = smith_normal_form(p);
  if (snf.rank != fan.lattice_dim)
    throw Error(ErrorKind::InvalidFan, "rays do not span the lattice rationally");
  for (std::size_t i = 0; i < snf.rank; ++i)
    if (snf.D(i, i) != 1)
      throw Error(ErrorKind::TorsionClassGroup,
                  "class group has torsion (invariant factor " + snf.D(i, i).str() + ")");
  const auto relations = kernel_basis(p);
  return IntMatrix::from_rows(hermite_basis(relations, fan.r()), fan.r());
}

/// Problems with a user supplied weight matrix (empty when it is a valid Gale dual).
inline std::vector<std::string> gale_dual_violations(const ToricFan& fan, const IntMatrix& q) {
  std::vector<std::string> out;
  if (q.cols() != fan.r()) {
    out.push_back("Q has " + std::to_string(q.cols()) + " columns, expected " + std::to_string(fan.r()));
    return out;
  }
  const std::size_t k = fan.r() - fan.lattice_dim;
  if (q.rows() != k) out.push_back("Q has " + std::to_string(q.rows()) + " rows, expected " + std::to_string(k));
  const IntMatrix prod = q * fan.ray_matrix().transpose();
  for (std::size_t i = 0; i < prod.rows(); ++i)
    for (std::size_t j = 0; j < prod.cols(); ++j)
      if (prod(i, j) != 0) {
        out.push_back("Q does not annihilate the rays");
        i = prod.rows();
        break;
      }
  if (!out.empty()) return out;
  const auto snf = smith_normal_form(q);
  if (snf.rank != q.rows()) out.push_back("Q does not have full row rank");
  else
    for (std::size_t i = 0; i < snf.rank; ++i)
      if (snf.D(i, i) != 1) {
        out.push_back("Q is not surjective onto Z^k");
        break;
      }
  return out;
}

struct AmpleConeResult {
  Cone kappa;
  std::vector<Cone> images;  ///< Q(γ0) for each maximal cone, in fan order
};

/// κ_X = ⋂ over maximal cones σ of Q(cone(e_i : v_i ∉ σ)). Throws
/// NotProjective when the relative interiors of these images have no
/// common point, i.e. the fan admits no ample class.
inline AmpleConeResult ample_cone_kappa(const ToricFan& fan, const IntMatrix& q) {
  AmpleConeResult res;
  const std::size_t r = fan.r();
  for (const auto& sigma : fan.maximal_cones) {
    std::vector<bool> in_sigma(r, false);
    for (auto i : sigma) in_sigma[i] = true;
    std::vector<IntVector> gens;
    for (std::size_t i = 0; i < r; ++i)
      if (!in_sigma[i]) gens.push_back(q.column(i));
    res.images.push_back(Cone::from_generators(q.rows(), gens));
  }
  std::vector<const Cone*> ptrs;
  for (const auto& c : res.images) ptrs.push_back(&c);
  res.kappa = intersect_all(q.rows(), ptrs);
  const IntVector p = res.kappa.relint_point();
  for (const auto& c : res.images)
    if (!c.relint_contains(p))
      throw Error(ErrorKind::NotProjective, "the images " + c.to_string() + " have no common relative interior point");
  return res;
}

/// Integer ι (r x d) with P ι = B, returned as W = ιᵀ (d x r).
inline IntMatrix lift_subtorus(const ToricFan& fan, const IntMatrix& b) {
  if (b.rows() != fan.lattice_dim) throw Error(ErrorKind::DimensionMismatch, "sublattice generators have wrong length");
  if (rank(b) != b.cols()) throw Error(ErrorKind::InvalidInput, "sublattice generators are linearly dependent");
  const IntMatrix p = fan.ray_matrix();
  IntMatrix w(b.cols(), fan.r());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const auto x = solve_integer(p, b.column(j));
    if (!x) throw Error(ErrorKind::NoLift, "generator " + to_string(b.column(j)) + " has no integral lift");
    for (std::size_t i = 0; i < fan.r(); ++i) w(j, i) = (*x)[i];
  }
  return w;
}

/// A complete problem instance: weights Q̂ = [Q; W] of H×T on K^r, the
/// projection Π onto the first k coordinates, and κ_X.
struct GitInput {
  std::size_t r = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  IntMatrix Q;     ///< k x r
  IntMatrix W;     ///< d x r
  IntMatrix Qhat;  ///< (k+d) x r
  IntMatrix Pi;    ///< k x (k+d)
  Cone kappa;      ///< in Q^k
  std::optional<ToricFan> fan;
  std::optional<FanDiagnostics> fan_diagnostics;

  WeightData weights() const { return {Qhat}; }

  IntVector project(const IntVector& v) const { return Pi * v; }
};

inline IntMatrix stack_rows(const IntMatrix& top, const IntMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw Error(ErrorKind::DimensionMismatch, "stacked matrices differ in width");
  IntMatrix out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) out(i, j) = top(i, j);
  for (std::size_t i = 0; i < bottom.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) out(top.rows() + i, j) = bottom(i, j);
  return out;
}

inline IntMatrix projection_matrix(std::size_t k, std::size_t d) {
  IntMatrix pi(k, k + d);
  for (std::size_t i = 0; i < k; ++i) pi(i, i) = 1;
  return pi;
}

inline GitInput assemble_git_input(IntMatrix q, IntMatrix w, Cone kappa) {
  GitInput g;
  g.r = q.cols();
  g.k = q.rows();
  g.d = w.rows();
  if (w.rows() == 0) w = IntMatrix(0, g.r);
  if (w.cols() != g.r) throw Error(ErrorKind::DimensionMismatch, "W and Q differ in column count");
  if (kappa.ambient_dim() != g.k) throw Error(ErrorKind::DimensionMismatch, "kappa lives in the wrong dimension");
  g.Qhat = stack_rows(q, w);
  g.Q = std::move(q);
  g.W = std::move(w);
  g.Pi = projection_matrix(g.k, g.d);
  g.kappa = std::move(kappa);
  return g;
}

/// How the subtorus is specified for a toric instance.
struct SubtorusLift {
  std::optional<IntMatrix> generators;    ///< B, n x d (columns generate N_T)
  std::optional<IntMatrix> lift_weights;  ///< W, d x r
};

inline GitInput build_git_input(const ToricFan& fan, const SubtorusLift& lift,
                                const std::optional<IntMatrix>& user_q = std::nullopt) {
  auto diag = validate_fan(fan);
  if (!diag.valid()) {
    std::string msg = diag.violations.front();
    if (diag.violations.size() > 1) msg += " (+" + std::to_string(diag.violations.size() - 1) + " more)";
    throw Error(ErrorKind::InvalidFan, msg);
  }
  IntMatrix q;
  if (user_q) {
    const auto problems = gale_dual_violations(fan, *user_q);
    if (!problems.empty()) throw Error(ErrorKind::InvalidInput, "user Q: " + problems.front());
    q = *user_q;
    // Still surface torsion in Cl(X) even when Q is given.
    (void)gale_dual(fan);
  } else {
    q = gale_dual(fan);
  }

  IntMatrix w;
  if (lift.lift_weights) {
    w = *lift.lift_weights;
    if (w.cols() != fan.r()) throw Error(ErrorKind::DimensionMismatch, "lift weights have wrong width");
    const IntMatrix image = fan.ray_matrix() * w.transpose();
    if (rank(image) != w.rows()) throw Error(ErrorKind::InvalidInput, "lift weights do not define a subtorus of that rank");
    if (lift.generators) {
      const auto& b = *lift.generators;
      if (b.rows() != fan.lattice_dim) throw Error(ErrorKind::DimensionMismatch, "sublattice generators have wrong length");
      if (hermite_basis(image.column_list(), fan.lattice_dim) != hermite_basis(b.column_list(), fan.lattice_dim))
        throw Error(ErrorKind::LiftMismatch, "P * W^T does not generate the given sublattice");
    }
  } else if (lift.generators) {
    w = lift_subtorus(fan, *lift.generators);
  } else {
    w = IntMatrix(0, fan.r());
  }

  auto kappa = ample_cone_kappa(fan, q).kappa;
  GitInput g = assemble_git_input(std::move(q), std::move(w), std::move(kappa));
  g.fan = fan;
  g.fan_diagnostics = std::move(diag);
  return g;
}

/// Diagnostics for an assembled instance (fan and raw alike). Warnings do not
/// prevent computation.
struct InputDiagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool weight_cone_pointed = true;
  bool lifted_weight_cone_pointed = true;
  bool kappa_full_dimensional = false;
};

inline InputDiagnostics diagnose_input(const GitInput& g) {
  InputDiagnostics out;
  const Cone omega_h = linear_image(Cone::orthant(g.r), g.Q);
  const Cone omega = linear_image(Cone::orthant(g.r), g.Qhat);
  out.weight_cone_pointed = omega_h.is_pointed();
  out.lifted_weight_cone_pointed = omega.is_pointed();
  if (!out.weight_cone_pointed) out.warnings.push_back("weight cone of H is not pointed; working with a quasifan");
  if (!out.lifted_weight_cone_pointed) out.warnings.push_back("weight cone of H x T is not pointed; working with a quasifan");
  out.kappa_full_dimensional = g.kappa.is_full_dimensional();
  if (g.kappa.is_zero()) out.errors.push_back("kappa is the zero cone");
  if (!omega_h.contains(g.kappa)) out.errors.push_back("kappa is not contained in the weight cone of H");

  // kappa must be a GIT-cone of the H-action.
  const auto orbit_h = enumerate_orbit_cones({g.Q});
  if (omega_h.contains(g.kappa.relint_point()) && git_cone(orbit_h, g.kappa.relint_point()) != g.kappa)
    out.errors.push_back("kappa is not a GIT-cone of the H-action");

  // Each coordinate divisor must be movable with respect to kappa, and any
  // r-1 weights must generate K, as for the Cox construction of a toric variety.
  for (std::size_t i = 0; i < g.r; ++i) {
    std::vector<IntVector> others;
    for (std::size_t j = 0; j < g.r; ++j)
      if (j != i) others.push_back(g.Q.column(j));
    const Cone moved = Cone::from_generators(g.k, others);
    if (!relint_subset(g.kappa, moved))
      out.warnings.push_back("relint(kappa) is not inside the relative interior of the weight cone without column " +
                             std::to_string(i + 1));
    if (g.k > 0) {
      const auto snf = smith_normal_form(IntMatrix::from_columns(others, g.k));
      bool generates = snf.rank == g.k;
      for (std::size_t t = 0; generates && t < g.k; ++t) generates = snf.D(t, t) == 1;
      if (!generates) out.warnings.push_back("weights without column " + std::to_string(i + 1) + " do not generate K");
    }
  }
  if (g.fan_diagnostics && !g.fan_diagnostics->simplicial && out.kappa_full_dimensional)
    out.errors.push_back("fan is not simplicial but kappa is full-dimensional");
  if (g.fan_diagnostics && g.fan_diagnostics->simplicial && !out.kappa_full_dimensional)
    out.errors.push_back("fan is simplicial but kappa is not full-dimensional");
  return out;
}

}  // namespace gitbag
