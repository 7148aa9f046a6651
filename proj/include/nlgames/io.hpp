#pragma once

// JSON readers and writers for games, correlations, graphs and CSPs, plus
// a fixed-precision serializer for reports (17 significant digits).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlgames/gamecore.hpp"
#include "nlgames/syncgraph.hpp"

namespace nlg::io {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

namespace detail {

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError("expected a JSON object at top level");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

inline std::size_t size_field(const Json& j, const char* name, std::size_t min_value = 1) {
  const Json& v = field(j, name);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min_value))
    throw ParseError(std::string("field '") + name + "' must be an integer >= " + std::to_string(min_value));
  return v.get<std::size_t>();
}

inline const Json& array_of(const Json& v, std::size_t n, const std::string& where) {
  if (!v.is_array() || v.size() != n)
    throw ParseError("field '" + where + "' must be an array of length " + std::to_string(n));
  return v;
}

inline double number_at(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("field '" + where + "' must be a number");
  return v.get<double>();
}

inline std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline Scenario scenario_from(const Json& j) {
  return {size_field(j, "nS"), size_field(j, "nT"), size_field(j, "nA"), size_field(j, "nB")};
}

/// Reads a 4-deep array shaped [nS][nT][nA][nB] in s,t,a,b order.
template <typename F>
void read_tensor(const Json& v, const Scenario& sc, const std::string& name, F&& store) {
  array_of(v, sc.nS, name);
  for (std::size_t s = 0; s < sc.nS; ++s) {
    const std::string ns = idx(name, s);
    array_of(v[s], sc.nT, ns);
    for (std::size_t t = 0; t < sc.nT; ++t) {
      const std::string nt = idx(ns, t);
      array_of(v[s][t], sc.nA, nt);
      for (std::size_t a = 0; a < sc.nA; ++a) {
        const std::string na = idx(nt, a);
        array_of(v[s][t][a], sc.nB, na);
        for (std::size_t b = 0; b < sc.nB; ++b) store(s, t, a, b, v[s][t][a][b], idx(na, b));
      }
    }
  }
}

template <typename F>
Json write_tensor(const Scenario& sc, F&& get) {
  Json out = Json::array();
  for (std::size_t s = 0; s < sc.nS; ++s) {
    Json js = Json::array();
    for (std::size_t t = 0; t < sc.nT; ++t) {
      Json jt = Json::array();
      for (std::size_t a = 0; a < sc.nA; ++a) {
        Json ja = Json::array();
        for (std::size_t b = 0; b < sc.nB; ++b) ja.push_back(get(s, t, a, b));
        jt.push_back(std::move(ja));
      }
      js.push_back(std::move(jt));
    }
    out.push_back(std::move(js));
  }
  return out;
}

inline void write_scenario(Json& j, const Scenario& sc) {
  j["nS"] = sc.nS;
  j["nT"] = sc.nT;
  j["nA"] = sc.nA;
  j["nB"] = sc.nB;
}

}  // namespace detail

/// {"nS","nT","nA","nB","pi":[[...]],"V":[[[[0/1]]]]}. pi is re-normalized
/// when its total is within 1e-9 of 1 and rejected otherwise.
inline Game game_from_json(const Json& j) {
  const Scenario sc = detail::scenario_from(j);
  const Json& jpi = detail::array_of(detail::field(j, "pi"), sc.nS, "pi");
  std::vector<double> pi(sc.nS * sc.nT);
  double total = 0.0;
  for (std::size_t s = 0; s < sc.nS; ++s) {
    detail::array_of(jpi[s], sc.nT, detail::idx("pi", s));
    for (std::size_t t = 0; t < sc.nT; ++t) {
      const std::string where = detail::idx(detail::idx("pi", s), t);
      const double v = detail::number_at(jpi[s][t], where);
      if (!(v >= 0.0)) throw ParseError("field '" + where + "' must be nonnegative");
      pi[s * sc.nT + t] = v;
      total += v;
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", total);
    throw ParseError(std::string("field 'pi' sums to ") + buf + ", expected 1");
  }
  for (auto& v : pi) v /= total;
  std::vector<std::uint8_t> vv(sc.nS * sc.nT * sc.nA * sc.nB);
  detail::read_tensor(detail::field(j, "V"), sc, "V",
                      [&](std::size_t s, std::size_t t, std::size_t a, std::size_t b, const Json& x,
                          const std::string& where) {
                        if (!x.is_number_integer() || (x.get<long long>() != 0 && x.get<long long>() != 1))
                          throw ParseError("field '" + where + "' must be 0 or 1");
                        vv[((s * sc.nT + t) * sc.nA + a) * sc.nB + b] = static_cast<std::uint8_t>(x.get<int>());
                      });
  return Game(sc, std::move(pi), std::move(vv));
}

inline Json game_to_json(const Game& g) {
  const Scenario& sc = g.scenario();
  Json j = Json::object();
  detail::write_scenario(j, sc);
  Json pi = Json::array();
  for (std::size_t s = 0; s < sc.nS; ++s) {
    Json row = Json::array();
    for (std::size_t t = 0; t < sc.nT; ++t) row.push_back(g.pi(s, t));
    pi.push_back(std::move(row));
  }
  j["pi"] = std::move(pi);
  j["V"] = detail::write_tensor(sc, [&](auto s, auto t, auto a, auto b) { return g.wins(s, t, a, b) ? 1 : 0; });
  return j;
}

/// {"nS","nT","nA","nB","p":[[[[...]]]]}.
inline Correlation correlation_from_json(const Json& j) {
  const Scenario sc = detail::scenario_from(j);
  Correlation p(sc);
  detail::read_tensor(detail::field(j, "p"), sc, "p",
                      [&](std::size_t s, std::size_t t, std::size_t a, std::size_t b, const Json& x,
                          const std::string& where) { p.at(s, t, a, b) = detail::number_at(x, where); });
  return p;
}

inline Json correlation_to_json(const Correlation& p) {
  Json j = Json::object();
  detail::write_scenario(j, p.scenario());
  j["p"] = detail::write_tensor(p.scenario(), [&](auto s, auto t, auto a, auto b) { return p(s, t, a, b); });
  return j;
}

/// {"n": int, "edges": [[i,j],...]}, zero-indexed, no loops or duplicates.
inline Graph graph_from_json(const Json& j) {
  const std::size_t n = detail::size_field(j, "n", 0);
  const Json& je = detail::field(j, "edges");
  if (!je.is_array()) throw ParseError("field 'edges' must be an array");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k < je.size(); ++k) {
    const std::string where = detail::idx("edges", k);
    const Json& e = detail::array_of(je[k], 2, where);
    for (std::size_t c = 0; c < 2; ++c)
      if (!e[c].is_number_integer() || e[c].get<long long>() < 0 || e[c].get<std::size_t>() >= n)
        throw ParseError("field '" + detail::idx(where, c) + "' must be a vertex index below n");
    if (e[0] == e[1]) throw ParseError("field '" + where + "' is a loop");
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  try {
    return Graph(n, std::move(edges));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(std::string("field 'edges': ") + ex.what());
  }
}

inline Json graph_to_json(const Graph& g) {
  Json j = Json::object();
  j["n"] = g.size();
  Json e = Json::array();
  for (auto [u, v] : g.edges()) e.push_back(Json::array({u, v}));
  j["edges"] = std::move(e);
  return j;
}

/// {"domains":[int,...],"constraints":[{"scope":[i,...],"allowed":[[v,...],...]}]}.
inline Csp csp_from_json(const Json& j) {
  Csp c;
  const Json& jd = detail::field(j, "domains");
  if (!jd.is_array()) throw ParseError("field 'domains' must be an array");
  for (std::size_t i = 0; i < jd.size(); ++i) {
    if (!jd[i].is_number_integer() || jd[i].get<long long>() < 0)
      throw ParseError("field '" + detail::idx("domains", i) + "' must be a nonnegative integer");
    c.domains.push_back(jd[i].get<std::size_t>());
  }
  const Json& jc = detail::field(j, "constraints");
  if (!jc.is_array()) throw ParseError("field 'constraints' must be an array");
  for (std::size_t k = 0; k < jc.size(); ++k) {
    const std::string where = detail::idx("constraints", k);
    if (!jc[k].is_object()) throw ParseError("field '" + where + "' must be an object");
    CspConstraint con;
    auto ints = [&](const Json& arr, const std::string& name) {
      if (!arr.is_array()) throw ParseError("field '" + name + "' must be an array");
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_integer() || arr[i].get<long long>() < 0)
          throw ParseError("field '" + detail::idx(name, i) + "' must be a nonnegative integer");
        out.push_back(arr[i].get<std::size_t>());
      }
      return out;
    };
    if (!jc[k].contains("scope")) throw ParseError("missing field '" + where + ".scope'");
    if (!jc[k].contains("allowed")) throw ParseError("missing field '" + where + ".allowed'");
    con.scope = ints(jc[k]["scope"], where + ".scope");
    const Json& ja = jc[k]["allowed"];
    if (!ja.is_array()) throw ParseError("field '" + where + ".allowed' must be an array");
    for (std::size_t i = 0; i < ja.size(); ++i) con.allowed.push_back(ints(ja[i], detail::idx(where + ".allowed", i)));
    c.constraints.push_back(std::move(con));
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& ex) {
    throw ParseError(std::string("field 'constraints': ") + ex.what());
  }
  return c;
}

inline Json csp_to_json(const Csp& c) {
  Json j = Json::object();
  j["domains"] = c.domains;
  Json cons = Json::array();
  for (const auto& con : c.constraints) {
    Json jc = Json::object();
    jc["scope"] = con.scope;
    jc["allowed"] = con.allowed;
    cons.push_back(std::move(jc));
  }
  j["constraints"] = std::move(cons);
  return j;
}

inline Json matrix_to_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// "%.17g", with non-finite values written as null.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void dump_to(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_to(out, it.value(), indent, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump_to(out, x, indent, depth + 1);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Pretty-printed JSON with every float at 17 significant digits.
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_to(out, j, indent, 0);
  out += "\n";
  return out;
}

}  // namespace nlg::io
