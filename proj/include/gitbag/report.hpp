#pragma once

// JSON instance files and deterministic reports (JSON, text, DOT).

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gitbag/errors.hpp"
#include "gitbag/gitbags.hpp"
#include "gitbag/toricinput.hpp"

namespace gitbag {

using Json = nlohmann::ordered_json;

struct InstanceSpec {
  std::string name;
  std::optional<ToricFan> fan;
  SubtorusLift lift;
  std::optional<IntMatrix> user_q;
  std::optional<IntMatrix> raw_q;
  std::optional<IntMatrix> raw_w;
  std::optional<Cone> raw_kappa;
};

// ---------------------------------------------------------------------------
// JSON conversions

inline Json to_json(const Integer& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return Json(static_cast<long long>(x));
  return Json(x.str());
}

inline Json to_json(const IntVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

inline Json to_json(const std::vector<IntVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

inline Json matrix_to_json(const IntMatrix& m) { return to_json(m.row_list()); }

inline Json cone_to_json(const Cone& c) {
  return Json{{"rays", to_json(c.rays())}, {"lineality", to_json(c.lineality())}};
}

inline Json support_to_json(Support s) {
  Json out = Json::array();
  for (auto i : support_indices(s)) out.push_back(i + 1);
  return out;
}

namespace detail {

class SchemaErrors {
 public:
  void add(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }
  bool empty() const { return errors_.empty(); }
  [[noreturn]] void raise(const std::string& source) const {
    std::string msg = source + ": schema error";
    for (const auto& e : errors_) msg += "\n  " + e;
    throw Error(ErrorKind::InvalidInput, msg);
  }
  std::size_t size() const { return errors_.size(); }

 private:
  std::vector<std::string> errors_;
};

inline std::optional<IntVector> read_vector(const Json& j, const std::string& path, SchemaErrors& errs) {
  if (!j.is_array()) {
    errs.add(path, "expected an array of integers");
    return std::nullopt;
  }
  IntVector v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) {
      errs.add(path + "[" + std::to_string(i) + "]", "expected an integer");
      return std::nullopt;
    }
    v.push_back(Integer(j[i].get<long long>()));
  }
  return v;
}

/// Array of equal-length integer arrays. `width` fixes the length when known.
inline std::optional<std::vector<IntVector>> read_vectors(const Json& j, const std::string& path, SchemaErrors& errs,
                                                          std::optional<std::size_t> width = std::nullopt) {
  if (!j.is_array()) {
    errs.add(path, "expected an array of integer arrays");
    return std::nullopt;
  }
  std::vector<IntVector> out;
  const std::size_t before = errs.size();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    auto v = read_vector(j[i], p, errs);
    if (!v) continue;
    if (!width) width = v->size();
    if (v->size() != *width) {
      errs.add(p, "has length " + std::to_string(v->size()) + ", expected " + std::to_string(*width));
      continue;
    }
    out.push_back(std::move(*v));
  }
  if (errs.size() != before) return std::nullopt;
  return out;
}

inline std::optional<IntMatrix> read_matrix(const Json& j, const std::string& path, SchemaErrors& errs,
                                            std::optional<std::size_t> cols = std::nullopt) {
  auto rows = read_vectors(j, path, errs, cols);
  if (!rows) return std::nullopt;
  return IntMatrix::from_rows(*rows, cols.value_or(rows->empty() ? 0 : rows->front().size()));
}

inline void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed,
                       SchemaErrors& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) errs.add(path + "." + it.key(), "unknown field");
  }
}

}  // namespace detail

/// Reads {rays, lineality} in the given ambient dimension.
inline Cone cone_from_json(const Json& j, std::size_t dim) {
  detail::SchemaErrors errs;
  if (!j.is_object() || !j.contains("rays")) {
    errs.add("cone", "expected an object with \"rays\"");
    errs.raise("cone");
  }
  detail::check_keys(j, "cone", {"rays", "lineality"}, errs);
  auto rays = detail::read_vectors(j["rays"], "cone.rays", errs, dim);
  std::optional<std::vector<IntVector>> lin = std::vector<IntVector>{};
  if (j.contains("lineality")) lin = detail::read_vectors(j["lineality"], "cone.lineality", errs, dim);
  if (!errs.empty() || !rays || !lin) errs.raise("cone");
  return Cone::from_generators(dim, *rays, *lin);
}

/// Parses an instance description. `source` names the input in messages.
inline InstanceSpec parse_instance(const std::string& text, const std::string& source = "<input>") {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, source + ": malformed JSON: " + e.what());
  }
  detail::SchemaErrors errs;
  if (!j.is_object()) {
    errs.add("$", "expected an object");
    errs.raise(source);
  }
  detail::check_keys(j, "$", {"name", "fan", "subtorus", "Q", "raw", "kappa"}, errs);

  InstanceSpec spec;
  if (j.contains("name")) {
    if (j["name"].is_string()) spec.name = j["name"].get<std::string>();
    else errs.add("$.name", "expected a string");
  }
  const bool has_fan = j.contains("fan"), has_raw = j.contains("raw");
  if (has_fan == has_raw) {
    errs.add("$", "exactly one of \"fan\" and \"raw\" must be present");
    errs.raise(source);
  }

  if (has_fan) {
    const Json& f = j["fan"];
    if (!f.is_object() || !f.contains("rays") || !f.contains("maximal_cones")) {
      errs.add("$.fan", "expected an object with \"rays\" and \"maximal_cones\"");
      errs.raise(source);
    }
    detail::check_keys(f, "$.fan", {"lattice_dim", "rays", "maximal_cones"}, errs);
    std::optional<std::size_t> n;
    if (f.contains("lattice_dim")) {
      if (f["lattice_dim"].is_number_unsigned()) n = f["lattice_dim"].get<std::size_t>();
      else errs.add("$.fan.lattice_dim", "expected a nonnegative integer");
    }
    auto rays = detail::read_vectors(f["rays"], "$.fan.rays", errs, n);
    ToricFan fan;
    if (rays) {
      fan.rays = *rays;
      fan.lattice_dim = n.value_or(rays->empty() ? 0 : rays->front().size());
    }
    const Json& mc = f["maximal_cones"];
    if (!mc.is_array()) errs.add("$.fan.maximal_cones", "expected an array of index arrays");
    else
      for (std::size_t c = 0; c < mc.size(); ++c) {
        const std::string p = "$.fan.maximal_cones[" + std::to_string(c) + "]";
        auto idx = detail::read_vector(mc[c], p, errs);
        if (!idx) continue;
        std::vector<std::size_t> cone;
        for (const auto& i : *idx) {
          if (i < 1 || (rays && i > Integer(rays->size()))) {
            errs.add(p, "ray index " + i.str() + " out of range (indices start at 1)");
            continue;
          }
          cone.push_back(static_cast<std::size_t>(i) - 1);
        }
        fan.maximal_cones.push_back(cone);
      }
    spec.fan = fan;

    if (j.contains("subtorus")) {
      const Json& s = j["subtorus"];
      if (!s.is_object()) errs.add("$.subtorus", "expected an object");
      else {
        detail::check_keys(s, "$.subtorus", {"generators", "lift_weights"}, errs);
        if (s.contains("generators")) {
          auto cols = detail::read_vectors(s["generators"], "$.subtorus.generators", errs, fan.lattice_dim);
          if (cols) spec.lift.generators = IntMatrix::from_columns(*cols, fan.lattice_dim);
        }
        if (s.contains("lift_weights"))
          spec.lift.lift_weights = detail::read_matrix(s["lift_weights"], "$.subtorus.lift_weights", errs, fan.r());
      }
    }
    if (j.contains("Q")) spec.user_q = detail::read_matrix(j["Q"], "$.Q", errs, fan.r());
    if (j.contains("kappa")) errs.add("$.kappa", "only allowed with \"raw\"; it is derived from the fan");
  } else {
    const Json& r = j["raw"];
    if (!r.is_object() || !r.contains("Q")) {
      errs.add("$.raw", "expected an object with \"Q\"");
      errs.raise(source);
    }
    detail::check_keys(r, "$.raw", {"Q", "W"}, errs);
    spec.raw_q = detail::read_matrix(r["Q"], "$.raw.Q", errs);
    if (spec.raw_q) {
      if (r.contains("W")) spec.raw_w = detail::read_matrix(r["W"], "$.raw.W", errs, spec.raw_q->cols());
      else spec.raw_w = IntMatrix(0, spec.raw_q->cols());
    }
    if (j.contains("subtorus") || j.contains("Q")) errs.add("$", "\"subtorus\" and \"Q\" belong to fan mode");
    if (!j.contains("kappa")) errs.add("$.kappa", "required in raw mode");
    else if (spec.raw_q) {
      try {
        spec.raw_kappa = cone_from_json(j["kappa"], spec.raw_q->rows());
      } catch (const Error& e) {
        errs.add("$.kappa", e.what());
      }
    }
  }
  if (!errs.empty()) errs.raise(source);
  return spec;
}

inline InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str(), path);
}

inline GitInput build_input(const InstanceSpec& spec) {
  if (spec.fan) return build_git_input(*spec.fan, spec.lift, spec.user_q);
  return assemble_git_input(*spec.raw_q, *spec.raw_w, *spec.raw_kappa);
}

// ---------------------------------------------------------------------------
// Reports

inline Json instance_json(const InstanceSpec& spec, const GitInput& g) {
  Json j;
  j["name"] = spec.name;
  j["source"] = spec.fan ? "fan" : "raw";
  j["r"] = g.r;
  j["k"] = g.k;
  j["d"] = g.d;
  j["Q"] = matrix_to_json(g.Q);
  j["W"] = matrix_to_json(g.W);
  return j;
}

inline Json orbit_cones_report(const GitBagEngine& e) {
  const auto& o = e.orbit_cones();
  Json list = Json::array();
  for (std::size_t i = 0; i < o.size(); ++i) {
    Json supports = Json::array();
    for (auto s : o.supports(i)) supports.push_back(support_to_json(s));
    list.push_back(Json{{"index", i + 1},
                        {"cone", cone_to_json(o.cone(i))},
                        {"dim", o.cone(i).dim()},
                        {"in_CT", e.in_ct(i)},
                        {"supports", supports}});
  }
  return Json{{"count", o.size()}, {"in_CT_count", e.ct_cones().size()}, {"orbit_cones", list}};
}

/// Rays of the fan as primitive vectors and cones as 1-based ray index sets.
inline Json quasifan_json(const Quasifan& fan) {
  std::set<IntVector> ray_set;
  for (const auto& c : fan.maximal_cones)
    for (const auto& r : c.rays()) ray_set.insert(r);
  const std::vector<IntVector> rays(ray_set.begin(), ray_set.end());
  auto indices = [&](const Cone& c) {
    Json out = Json::array();
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (std::binary_search(c.rays().begin(), c.rays().end(), rays[i])) out.push_back(i + 1);
    return out;
  };
  Json maximal = Json::array();
  for (const auto& c : fan.maximal_cones) maximal.push_back(indices(c));
  return Json{{"rays", to_json(rays)},
              {"lineality", to_json(fan.support.lineality())},
              {"maximal_cones", maximal},
              {"cone_count", fan.all_cones.size()},
              {"support", cone_to_json(fan.support)}};
}

inline Json bag_json(const GitBagEngine& e, const GitBag& b) {
  auto flag = [](const std::optional<bool>& f) { return f ? Json(*f) : Json("not computed"); };
  Json j{{"cone", cone_to_json(b.cone)},
         {"dim", b.cone.dim()},
         {"representative", to_json(b.representative)},
         {"qp_maximal", flag(b.qp_maximal)},
         {"projective", flag(b.projective)},
         {"ample_realizable", flag(b.ample_realizable)},
         {"geometric", flag(b.geometric)},
         {"witness_count", b.witness_set.size()}};
  if (b.projectivity_witness) j["projectivity_witness"] = cone_to_json(e.orbit_cones().cone(*b.projectivity_witness));
  return j;
}

inline Json bags_report(const GitBagEngine& e, const BagCollection& b) {
  Json bags = Json::array();
  for (std::size_t i = 0; i < b.bags.size(); ++i) {
    Json bj{{"index", i + 1}};
    bj.update(bag_json(e, b.bags[i]));
    bags.push_back(bj);
  }
  Json l0 = Json::array();
  for (auto i : b.lambda0) l0.push_back(i + 1);
  Json hasse = Json::array();
  for (auto [lo, hi] : lambda0_hasse(b)) hasse.push_back(Json::array({lo + 1, hi + 1}));
  return Json{{"bag_count", b.bags.size()},
              {"qp_maximal_count", b.lambda0.size()},
              {"bags", bags},
              {"lambda0", l0},
              {"lambda0_hasse", hasse}};
}

/// Hasse diagram of ≤ on Λ⁰, with edges from the smaller to the larger bag.
inline std::string hasse_dot(const BagCollection& b) {
  std::ostringstream os;
  os << "digraph lambda0 {\n  rankdir=BT;\n";
  for (auto i : b.lambda0) {
    os << "  b" << i + 1 << " [label=\"" << i + 1 << ": " << b.bags[i].cone.to_string() << "\"";
    if (b.bags[i].ample_realizable && *b.bags[i].ample_realizable) os << ", style=bold";
    os << "];\n";
  }
  for (auto [lo, hi] : lambda0_hasse(b)) os << "  b" << lo + 1 << " -> b" << hi + 1 << ";\n";
  os << "}\n";
  return os.str();
}

inline Json classify_report(const GitBagEngine& e, const BagCollection& bags, const LinClass& c) {
  Json j{{"class", to_json(c)}};
  const bool in_omega = e.orbit_cones().weight_cone().contains(c);
  j["in_weight_cone"] = in_omega;
  if (in_omega) j["git_cone"] = cone_to_json(git_cone(e.orbit_cones(), c));
  if (!e.ct_sharp_member(c)) throw Error(ErrorKind::EmptySemistableSet, to_string(c) + " has no semistable points");
  GitBag bag = e.compute_bag(c);
  const auto idx = bags.find(bag.cone);
  bag.qp_maximal = idx && bags.in_lambda0(*idx);
  e.fill_flags(bag);
  bag.geometric = e.geometric_flag(c);
  bag.representative = c;
  j["bag"] = bag_json(e, bag);
  if (idx) j["bag_index"] = *idx + 1;
  return j;
}

inline Json ss_locus_report(const GitBagEngine& e, const LinClass& c) {
  const auto fam = e.semistable_supports(c);
  Json minimal = Json::array();
  for (auto s : fam.minimal) minimal.push_back(support_to_json(s));
  return Json{{"class", to_json(c)},
              {"empty", fam.supports.empty()},
              {"support_count", fam.supports.size()},
              {"minimal_supports", minimal}};
}

inline Json check_report(const InstanceSpec& spec, const GitInput& g) {
  Json j;
  if (g.fan_diagnostics) {
    j["fan"] = Json{{"valid", g.fan_diagnostics->valid()},
                    {"complete", g.fan_diagnostics->complete},
                    {"simplicial", g.fan_diagnostics->simplicial}};
  }
  const auto d = diagnose_input(g);
  j["weight_cone_pointed"] = d.weight_cone_pointed;
  j["lifted_weight_cone_pointed"] = d.lifted_weight_cone_pointed;
  j["kappa_full_dimensional"] = d.kappa_full_dimensional;
  if (spec.fan) j["projective"] = true;
  j["errors"] = d.errors;
  j["warnings"] = d.warnings;
  j["ok"] = d.errors.empty();
  return j;
}

// ---------------------------------------------------------------------------
// Text rendering

namespace detail {

inline bool is_cone_json(const Json& j) {
  return j.is_object() && j.size() == 2 && j.contains("rays") && j.contains("lineality");
}

inline std::string inline_vectors(const Json& arr) {
  std::string s;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (i) s += ",";
    s += "(";
    for (std::size_t k = 0; k < arr[i].size(); ++k) {
      if (k) s += ",";
      s += arr[i][k].dump();
    }
    s += ")";
  }
  return s;
}

inline std::string scalar_text(const Json& j) {
  if (is_cone_json(j)) {
    std::string s = "cone(" + inline_vectors(j["rays"]) + ")";
    if (!j["lineality"].empty()) s += " + span(" + inline_vectors(j["lineality"]) + ")";
    return s;
  }
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline bool is_inline(const Json& j) {
  if (!j.is_structured() || is_cone_json(j)) return true;
  if (j.is_array())
    return std::all_of(j.begin(), j.end(), [](const Json& x) {
      return x.is_primitive() || (x.is_array() && std::all_of(x.begin(), x.end(), [](const Json& y) { return y.is_primitive(); }));
    });
  return false;
}

inline void render(const Json& j, int indent, std::ostream& os) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (is_inline(it.value())) {
        os << pad << it.key() << ": " << scalar_text(it.value()) << "\n";
      } else {
        os << pad << it.key() << ":\n";
        render(it.value(), indent + 2, os);
      }
    }
  } else if (j.is_array()) {
    for (const auto& x : j) {
      if (is_inline(x)) {
        os << pad << "- " << scalar_text(x) << "\n";
      } else {
        os << pad << "-\n";
        render(x, indent + 2, os);
      }
    }
  } else {
    os << pad << scalar_text(j) << "\n";
  }
}

}  // namespace detail

inline std::string render_text(const Json& j) {
  std::ostringstream os;
  detail::render(j, 0, os);
  return os.str();
}

}  // namespace gitbag
