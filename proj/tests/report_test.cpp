#include <random>
#include <regex>

#include <gtest/gtest.h>

#include "gitbag/report.hpp"
#include "paper_instances.hpp"
#include "suites.hpp"

using namespace gitbag;
using namespace gitbag::testing;

namespace {

std::string fixture(const std::string& name) { return std::string(GITBAG_INSTANCE_DIR) + "/" + name; }

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorKind::InternalError;
}

void expect_same_input(const GitInput& a, const GitInput& b) {
  EXPECT_EQ(a.Q, b.Q);
  EXPECT_EQ(a.W, b.W);
  EXPECT_EQ(a.Qhat, b.Qhat);
  EXPECT_EQ(a.kappa, b.kappa);
}

std::size_t count_matches(const std::string& s, const std::regex& re) {
  return std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator());
}

}  // namespace

TEST(ParseInstance, Fixtures) {
  const auto h = load_instance(fixture("hirzebruch1.json"));
  EXPECT_EQ(h.name, "hirzebruch1");
  ASSERT_TRUE(h.fan);
  EXPECT_EQ(h.fan->rays, hirzebruch_fan().rays);
  EXPECT_EQ(h.fan->maximal_cones, hirzebruch_fan().maximal_cones);
  expect_same_input(build_input(h), hirzebruch_input());
  expect_same_input(build_input(load_instance(fixture("bbsw.json"))), blowup_input());
  expect_same_input(build_input(load_instance(fixture("example63.json"))), threefold_input());

  const auto raw = build_input(load_instance(fixture("hirzebruch1_raw.json")));
  expect_same_input(raw, hirzebruch_input());
  EXPECT_FALSE(raw.fan);
}

TEST(ParseInstance, SchemaErrors) {
  EXPECT_EQ(parse_error_kind(R"({"fan": {"rays": [[1,0],[0,1,1]], "maximal_cones": [[1,2]]}})"),
            ErrorKind::InvalidInput);
  EXPECT_EQ(parse_error_kind(R"({"raw": {"Q": [[1,1]]}})"), ErrorKind::InvalidInput);
  EXPECT_EQ(parse_error_kind(R"({"name": "x"})"), ErrorKind::InvalidInput);
  EXPECT_EQ(parse_error_kind(R"({"raw": {"Q": [[1,1]]}, "kappa": {"rays": [[1]]}, "fan": {}})"),
            ErrorKind::InvalidInput);
  EXPECT_EQ(parse_error_kind(R"({"fan": {"rays": [[1,0]], "maximal_cones": [[0]]}})"), ErrorKind::InvalidInput);
  EXPECT_EQ(parse_error_kind(R"({"fan": {"rays": [[1,0.5]], "maximal_cones": [[1]]}})"), ErrorKind::InvalidInput);
  EXPECT_EQ(parse_error_kind(R"({"raw": {"Q": [[1,1]]}, "kappa": {"rays": [[1]]}, "extra": 1})"),
            ErrorKind::InvalidInput);
  EXPECT_EQ(parse_error_kind("{not json"), ErrorKind::InvalidInput);

  // Messages carry the JSON path of the offending entry.
  try {
    parse_instance(R"({"fan": {"rays": [[1,0],[0,1,1]], "maximal_cones": [[1,2]]}})");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("$.fan.rays[1]"), std::string::npos) << e.what();
  }
}

TEST(ParseInstance, RawModeMatchesFanMode) {
  const GitBagEngine fan_engine(build_input(load_instance(fixture("hirzebruch1.json"))));
  const GitBagEngine raw_engine(build_input(load_instance(fixture("hirzebruch1_raw.json"))));
  EXPECT_EQ(bags_report(fan_engine, fan_engine.enumerate_bags()).dump(),
            bags_report(raw_engine, raw_engine.enumerate_bags()).dump());
}

TEST(Report, ConeJsonRoundTrip) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> dim_dist(1, 4), gen_dist(0, 5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t dim = dim_dist(rng);
    const IntMatrix g = random_matrix(rng, gen_dist(rng), dim);
    const IntMatrix l = random_matrix(rng, t % 4 == 0 ? 1 : 0, dim);
    const Cone c = Cone::from_generators(dim, g.row_list(), l.row_list());
    const Json j = cone_to_json(c);
    EXPECT_EQ(cone_from_json(Json::parse(j.dump()), dim), c) << j.dump();
    for (const auto& key : {"rays", "lineality"})
      for (const auto& v : j[key]) {
        IntVector iv;
        for (const auto& x : v) iv.push_back(Integer(x.get<long long>()));
        EXPECT_EQ(primitive_vector(iv), iv);
      }
  }
}

TEST(Report, Deterministic) {
  for (const auto* name : {"hirzebruch1.json", "example63.json"}) {
    auto once = [&] {
      const auto spec = load_instance(fixture(name));
      const GitBagEngine e(build_input(spec));
      Json j;
      j["instance"] = instance_json(spec, e.input());
      j["git_fan"] = quasifan_json(e.quasifan());
      j["orbit_cones"] = orbit_cones_report(e);
      j["bags"] = bags_report(e, e.enumerate_bags());
      return j.dump(2) + render_text(j) + hasse_dot(e.enumerate_bags());
    };
    EXPECT_EQ(once(), once()) << name;
  }
}

TEST(Report, HasseDot) {
  const GitBagEngine e(hirzebruch_input());
  const auto bags = e.enumerate_bags();
  // Covers of ≤ on Λ⁰ recomputed from the order matrix.
  std::size_t covers = 0;
  for (auto a : bags.lambda0)
    for (auto b : bags.lambda0) {
      if (a == b || !bags.order[a][b]) continue;
      bool cover = true;
      for (auto m : bags.lambda0)
        if (m != a && m != b && bags.order[a][m] && bags.order[m][b]) cover = false;
      covers += cover;
    }
  const std::string dot = hasse_dot(bags);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_EQ(count_matches(dot, std::regex(R"(\n  b\d+ \[label)")), bags.lambda0.size());
  EXPECT_EQ(count_matches(dot, std::regex(" -> ")), covers);
  EXPECT_EQ(bags.lambda0.size(), 7u);
  EXPECT_EQ(covers, 6u);
}

TEST(Report, ClassifyBlowUpNonAmpleChamber) {
  const GitBagEngine e(build_input(load_instance(fixture("bbsw.json"))));
  const auto bags = e.enumerate_bags();
  const Cone chamber = blowup_cone({1, 2, 3, 7, 5, 6});
  IntVector c(6);
  for (const auto& r : chamber.rays()) c = c + r;
  const Json j = classify_report(e, bags, c);
  EXPECT_EQ(cone_from_json(j["bag"]["cone"], 6), chamber);
  EXPECT_TRUE(j["bag"]["geometric"].get<bool>());
  EXPECT_TRUE(j["bag"]["projective"].get<bool>());
  EXPECT_FALSE(j["bag"]["ample_realizable"].get<bool>());
  EXPECT_TRUE(j["bag"]["qp_maximal"].get<bool>());
}

TEST(Report, ClassifyEmptySemistableSet) {
  const GitBagEngine e(hirzebruch_input());
  try {
    classify_report(e, e.enumerate_bags(), make_vector({-1, 0, 0}));
    ADD_FAILURE();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::EmptySemistableSet);
  }
  EXPECT_TRUE(ss_locus_report(e, make_vector({-1, 0, 0}))["empty"].get<bool>());
}

TEST(Report, AmpleConeAndCheck) {
  const auto spec = load_instance(fixture("example63.json"));
  const auto input = build_input(spec);
  EXPECT_EQ(cone_from_json(cone_to_json(input.kappa), 2), cone_of(2, {{1, 1}, {0, 1}}));
  for (const auto* name : {"hirzebruch1.json", "bbsw.json", "example63.json", "hirzebruch1_raw.json"}) {
    const auto s = load_instance(fixture(name));
    const Json c = check_report(s, build_input(s));
    EXPECT_TRUE(c["ok"].get<bool>()) << name << c.dump();
  }
}

TEST(Report, TextRendering) {
  const Json j{{"kappa", cone_to_json(cone_of(2, {{1, 1}, {0, 1}}))}, {"n", 3}};
  EXPECT_EQ(render_text(j), "kappa: cone((0,1),(1,1))\nn: 3\n");
}
