#pragma once

// Random complete projective fans: face fans of random lattice polytopes
// containing the origin in their interior.

#include <optional>
#include <random>

#include "gitbag/toricinput.hpp"

namespace gitbag::testing {

inline std::optional<ToricFan> random_face_fan(std::mt19937& rng, std::size_t n, std::size_t points, int bound = 2) {
  std::uniform_int_distribution<int> entry(-bound, bound);
  std::vector<IntVector> pts;
  for (std::size_t i = 0; i < points; ++i) {
    IntVector p(n);
    for (auto& x : p) x = entry(rng);
    if (!is_zero(p)) pts.push_back(primitive_vector(p));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty() || !Cone::from_generators(n, pts).contains(Cone::whole_space(n))) return std::nullopt;
  // Homogenize: facets of cone{(p,1)} are the facets of the polytope.
  std::vector<IntVector> lifted;
  for (const auto& p : pts) {
    IntVector q = p;
    q.push_back(1);
    lifted.push_back(q);
  }
  const Cone hull = Cone::from_generators(n + 1, lifted);
  ToricFan fan;
  fan.lattice_dim = n;
  std::vector<IntVector> vertices;
  for (const auto& r : hull.rays()) vertices.emplace_back(r.begin(), r.end() - 1);
  for (auto& v : vertices) v = primitive_vector(v);
  fan.rays = vertices;
  for (const auto& u : hull.facet_normals()) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < hull.rays().size(); ++i)
      if (dot(u, hull.rays()[i]) == 0) idx.push_back(i);
    // The origin is interior, so no facet passes through it.
    if (u.back() == 0) return std::nullopt;
    fan.maximal_cones.push_back(idx);
  }
  return fan;
}

}  // namespace gitbag::testing
