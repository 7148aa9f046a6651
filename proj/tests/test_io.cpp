#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "nlgames/io.hpp"
#include "nlgames/sampling.hpp"

using namespace nlg;
using io::Json;

namespace {

std::string parse_error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const io::ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(GameJson, RoundTrip) {
  Rng rng(61);
  const Game g = random_game({2, 3, 2, 3}, rng);
  const Game h = io::game_from_json(io::game_to_json(g));
  EXPECT_EQ(h.scenario(), g.scenario());
  EXPECT_EQ(h.predicate_values(), g.predicate_values());
  for (std::size_t k = 0; k < g.pi_values().size(); ++k) EXPECT_NEAR(h.pi_values()[k], g.pi_values()[k], 1e-15);
}

TEST(GameJson, RoundTripThroughText) {
  const Game g = chsh_game();
  const Game h = io::game_from_json(io::parse_json(io::dump(io::game_to_json(g)), "text"));
  EXPECT_EQ(h.pi_values(), g.pi_values());
  EXPECT_EQ(h.predicate_values(), g.predicate_values());
}

TEST(GameJson, NearlyNormalizedPiIsRescaled) {
  Json j = io::game_to_json(chsh_game());
  j["pi"][0][0] = 0.25 + 4e-10;
  const Game g = io::game_from_json(j);
  double total = 0.0;
  for (double x : g.pi_values()) total += x;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(GameJson, ErrorsNameTheField) {
  Json j = io::game_to_json(chsh_game());
  Json no_v = j;
  no_v.erase("V");
  EXPECT_EQ(parse_error_of([&] { io::game_from_json(no_v); }), "missing field 'V'");

  Json bad_v = j;
  bad_v["V"][0][1][0][1] = 2;
  EXPECT_EQ(parse_error_of([&] { io::game_from_json(bad_v); }), "field 'V[0][1][0][1]' must be 0 or 1");

  Json bad_pi = j;
  bad_pi["pi"][1][1] = 0.5;
  EXPECT_NE(parse_error_of([&] { io::game_from_json(bad_pi); }).find("field 'pi' sums to 1.25"), std::string::npos);

  Json neg_pi = j;
  neg_pi["pi"][0][1] = -0.25;
  EXPECT_NE(parse_error_of([&] { io::game_from_json(neg_pi); }).find("pi[0][1]"), std::string::npos);

  Json short_v = j;
  short_v["V"][1].erase(1);
  EXPECT_EQ(parse_error_of([&] { io::game_from_json(short_v); }), "field 'V[1]' must be an array of length 2");

  Json bad_ns = j;
  bad_ns["nS"] = 0;
  EXPECT_EQ(parse_error_of([&] { io::game_from_json(bad_ns); }), "field 'nS' must be an integer >= 1");
}

TEST(CorrelationJson, RoundTripIsExact) {
  Rng rng(62);
  const Correlation p = random_nosignaling({2, 2, 3, 2}, rng);
  const Correlation q = io::correlation_from_json(io::parse_json(io::dump(io::correlation_to_json(p)), "text"));
  EXPECT_EQ(q.values(), p.values());
}

TEST(CorrelationJson, NonNumericEntry) {
  Json j = io::correlation_to_json(pr_box());
  j["p"][1][0][1][0] = "x";
  EXPECT_EQ(parse_error_of([&] { io::correlation_from_json(j); }), "field 'p[1][0][1][0]' must be a number");
}

TEST(GraphJson, RoundTripAndErrors) {
  const Graph g = cycle_graph(5);
  const Graph h = io::graph_from_json(io::graph_to_json(g));
  EXPECT_EQ(h.size(), 5u);
  EXPECT_EQ(h.edges(), g.edges());
  EXPECT_EQ(parse_error_of([] { io::graph_from_json(Json::parse(R"({"n":3,"edges":[[0,3]]})")); }),
            "field 'edges[0][1]' must be a vertex index below n");
  EXPECT_EQ(parse_error_of([] { io::graph_from_json(Json::parse(R"({"n":3,"edges":[[1,1]]})")); }),
            "field 'edges[0]' is a loop");
  EXPECT_NE(parse_error_of([] { io::graph_from_json(Json::parse(R"({"n":3,"edges":[[0,1],[1,0]]})")); }).find("duplicate"),
            std::string::npos);
  EXPECT_EQ(parse_error_of([] { io::graph_from_json(Json::parse(R"({"edges":[]})")); }), "missing field 'n'");
}

TEST(CspJson, RoundTripAndErrors) {
  Rng rng(63);
  const Csp c = random_csp(rng, 4, 3, 3);
  const Csp d = io::csp_from_json(io::csp_to_json(c));
  EXPECT_EQ(d.domains, c.domains);
  ASSERT_EQ(d.constraints.size(), c.constraints.size());
  for (std::size_t k = 0; k < c.constraints.size(); ++k) {
    EXPECT_EQ(d.constraints[k].scope, c.constraints[k].scope);
    EXPECT_EQ(d.constraints[k].allowed, c.constraints[k].allowed);
  }
  EXPECT_EQ(parse_error_of([] { io::csp_from_json(Json::parse(R"({"domains":[2],"constraints":[{"scope":[0]}]})")); }),
            "missing field 'constraints[0].allowed'");
  EXPECT_EQ(parse_error_of([] { io::csp_from_json(Json::parse(R"({"domains":[2,-1],"constraints":[]})")); }),
            "field 'domains[1]' must be a nonnegative integer");
  EXPECT_NE(parse_error_of([] {
              io::csp_from_json(Json::parse(R"({"domains":[2],"constraints":[{"scope":[0],"allowed":[[5]]}]})"));
            }).find("outside domain"),
            std::string::npos);
}

TEST(ParseJson, SyntaxErrorNamesTheSource) {
  EXPECT_NE(parse_error_of([] { io::parse_json("{", "input.json"); }).find("input.json"), std::string::npos);
  EXPECT_NE(parse_error_of([] { io::load_json("/nonexistent/file.json"); }).find("cannot open"), std::string::npos);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(1.0), "1.0");
  EXPECT_EQ(io::format_double(-2.0), "-2.0");
  EXPECT_EQ(io::format_double(1e-20), "9.9999999999999995e-21");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::quiet_NaN()), "null");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "null");
}

TEST(Dump, RoundTripsDoublesBitExactly) {
  Rng rng(64);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Json j = Json::object();
  std::vector<double> xs;
  for (int i = 0; i < 200; ++i) xs.push_back(u(rng) * std::pow(10.0, i % 20 - 10));
  j["xs"] = xs;
  const Json back = Json::parse(io::dump(j));
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(back["xs"][i].get<double>(), xs[i]);
}

TEST(Dump, ScalarArraysStayOnOneLine) {
  Json j = Json::object();
  j["v"] = std::vector<int>{1, 2, 3};
  j["name"] = "x";
  const std::string s = io::dump(j);
  EXPECT_NE(s.find("[1, 2, 3]"), std::string::npos) << s;
  EXPECT_NE(s.find("\"name\": \"x\""), std::string::npos) << s;
}
