#pragma once

// Command-line front end. run_cli parses arguments, runs one command and
// returns the process exit code:
//   0 success, 2 parse error, 3 enumeration cap, 4 precondition,
//   5 solver hit its iteration limit without a verdict.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlgames/conicsolve.hpp"
#include "nlgames/corrsets.hpp"
#include "nlgames/gamecore.hpp"
#include "nlgames/gamevalues.hpp"
#include "nlgames/io.hpp"
#include "nlgames/syncgraph.hpp"

namespace nlg::cli {

using io::Json;

enum ExitCode : int { kOk = 0, kParse = 2, kCap = 3, kPrecondition = 4, kNoVerdict = 5 };

struct RunConfig {
  double tol = 1e-7;
  int max_iter = 200000;
  double eps_feas = 1e-6;
  std::uint64_t seed = 42;
  std::string output;  // empty: stdout
  std::string format = "json";

  void validate() const {
    if (!(tol > 0.0)) throw io::ParseError("option '--tol' must be positive");
    if (!(eps_feas >= tol)) throw io::ParseError("option '--eps-feas' must be at least --tol");
    if (max_iter < 1) throw io::ParseError("option '--max-iter' must be at least 1");
  }

  SolverOptions solver() const {
    SolverOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    return o;
  }

  Json to_json() const {
    Json j = Json::object();
    j["tol"] = tol;
    j["max_iter"] = max_iter;
    j["eps_feas"] = eps_feas;
    j["seed"] = seed;
    j["output"] = output.empty() ? Json(nullptr) : Json(output);
    j["format"] = format;
    return j;
  }
};

/// Left-aligned text table with columns padded to their widest cell.
class Table {
 public:
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_)
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (width.size() <= c) width.push_back(0);
        width[c] = std::max(width[c], r[c].size());
      }
    std::string out;
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t c = 0; c < r.size(); ++c) {
        line += r[c];
        if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
      }
      line.erase(line.find_last_not_of(' ') + 1);
      out += line + "\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace detail {

inline Json residuals_json(const Residuals& r) {
  Json j = Json::object();
  j["primal"] = r.primal;
  j["dual"] = r.dual;
  j["gap"] = r.gap;
  return j;
}

inline Json verdict_json(const MembershipVerdict& v) {
  Json j = Json::object();
  j["status"] = to_string(v.status);
  j["distance"] = v.distance;
  return j;
}

inline int verdict_exit(Verdict v) { return v == Verdict::Undecided ? kNoVerdict : kOk; }

struct Emitter {
  const RunConfig& cfg;
  std::ostream& out;

  void write(const std::string& text) const {
    if (cfg.output.empty()) {
      out << text;
      return;
    }
    std::ofstream f(cfg.output);
    if (!f) throw std::runtime_error("cannot write " + cfg.output);
    f << text;
  }

  void report(Json j, const Table& t) const {
    if (cfg.format == "table") {
      write(t.render());
      return;
    }
    Json full = Json::object();
    full["config"] = cfg.to_json();
    for (auto it = j.begin(); it != j.end(); ++it) full[it.key()] = it.value();
    write(io::dump(full));
  }
};

}  // namespace detail

inline int cmd_value(const RunConfig& cfg, const std::string& path, const std::string& set, std::ostream& out) {
  const Game g = io::game_from_json(io::load_json(path));
  const SolverOptions opt = cfg.solver();
  const bool all = set == "all";
  Json values = Json::object(), status = Json::object(), residuals = Json::object();
  Json report = Json::object();
  report["game"] = io::game_to_json(g);
  Table t;
  t.add({"quantity", "value", "status"});
  bool max_iter_hit = false;
  ValueChain chain;

  auto record_solve = [&](const char* name, const ValueReport& r) {
    values[name] = r.value;
    status[name] = to_string(r.status);
    residuals[name] = detail::residuals_json(r.residuals);
    t.add({name, fmt6(r.value), to_string(r.status)});
    if (r.status == SolveStatus::MaxIter) max_iter_hit = true;
  };

  if (all || set == "classical") {
    const ValueReport r = value_classical(g);
    chain.classical = r.value;
    values["classical"] = r.value;
    status["classical"] = "EXACT";
    Json s = Json::object();
    s["alpha"] = r.strategy->alpha;
    s["beta"] = r.strategy->beta;
    report["strategy"] = std::move(s);
    t.add({"classical", fmt6(r.value), "EXACT"});
  }
  if (all || set == "dnn") {
    const ValueReport r = value_dnn(g, opt);
    chain.dnn = r.value;
    record_solve("dnn", r);
    if (r.certificate) {
      Json c = Json::object();
      c["v"] = r.certificate->v;
      c["bound"] = *r.certificate_bound;
      report["certificate"] = std::move(c);
      t.add({"dnn bound", fmt6(*r.certificate_bound), "CERTIFIED"});
    } else {
      report["certificate"] = nullptr;
      t.add({"dnn bound", "-", "UNAVAILABLE"});
    }
  }
  if (all || set == "sdp1") {
    const ValueReport r = value_sdp1(g, opt);
    chain.sdp1 = r.value;
    record_solve("sdp1", r);
  }
  if (all || set == "nosignaling") {
    const ValueReport r = value_nosignaling(g, opt);
    chain.nosignaling = r.value;
    record_solve("nosignaling", r);
  }
  if (all || set == "unrestricted") {
    const ValueReport r = value_unrestricted(g, opt);
    chain.unrestricted = r.value;
    values["unrestricted"] = r.value;
    status["unrestricted"] = "EXACT";
    t.add({"unrestricted", fmt6(r.value), "EXACT"});
  }
  report["values"] = std::move(values);
  report["status"] = std::move(status);
  report["residuals"] = std::move(residuals);
  if (all) {
    const ChainCheck c = check_chain(chain, 1e-5);
    auto mark = [](bool ok) { return ok ? "OK" : "VIOLATED"; };
    Json checks = Json::object();
    checks["classical<=dnn"] = mark(c.classical_le_dnn);
    checks["dnn<=sdp1"] = mark(c.dnn_le_sdp1);
    checks["dnn<=nosignaling"] = mark(c.dnn_le_nosignaling);
    checks["nosignaling<=unrestricted"] = mark(c.nosignaling_le_unrestricted);
    t.add({"", "", ""});
    for (auto it = checks.begin(); it != checks.end(); ++it) t.add({it.key(), "", it.value().get<std::string>()});
    report["chain"] = std::move(checks);
  }
  detail::Emitter{cfg, out}.report(std::move(report), t);
  return max_iter_hit ? kNoVerdict : kOk;
}

inline int cmd_member(const RunConfig& cfg, const std::string& path, const std::string& set,
                      const std::string& witness_path, std::ostream& out) {
  const Correlation p = io::correlation_from_json(io::load_json(path));
  MembershipVerdict v;
  if (set == "probability") {
    double worst = 0.0;
    const Scenario& sc = p.scenario();
    for (double x : p.values()) worst = std::max(worst, -x);
    for (std::size_t s = 0; s < sc.nS; ++s)
      for (std::size_t u = 0; u < sc.nT; ++u) {
        double sum = 0.0;
        for (std::size_t a = 0; a < sc.nA; ++a)
          for (std::size_t b = 0; b < sc.nB; ++b) sum += p(s, u, a, b);
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    v = {is_correlation(p) ? Verdict::In : Verdict::Out, worst, std::nullopt};
  } else if (set == "nosignaling") {
    if (!is_correlation(p)) throw PreconditionError("input is not a correlation");
    v = {is_nosignaling(p) ? Verdict::In : Verdict::Out, nlg::detail::signaling_gap(p), std::nullopt};
  } else if (set == "classical") {
    v = classical_membership(p, cfg.eps_feas);
  } else if (set == "dnn") {
    v = corr_membership(p, CorrCone::Dnn, cfg.eps_feas);
  } else {
    v = npa1_membership(p, cfg.eps_feas);
  }
  Json report = Json::object();
  report["set"] = set;
  report["status"] = to_string(v.status);
  report["distance"] = v.distance;
  Table t;
  t.add({"set", "status", "distance"});
  t.add({set, to_string(v.status), fmt6(v.distance)});
  if (!witness_path.empty()) {
    if (v.witness) {
      std::ofstream f(witness_path);
      if (!f) throw std::runtime_error("cannot write " + witness_path);
      f << io::dump(io::matrix_to_json(*v.witness));
      report["witness"] = witness_path;
    } else {
      report["witness"] = nullptr;
    }
  }
  detail::Emitter{cfg, out}.report(std::move(report), t);
  return detail::verdict_exit(v.status);
}

inline int cmd_graph(const RunConfig& cfg, const std::string& path, const std::string& task,
                     const std::string& parameter, std::optional<std::size_t> k, std::ostream& out) {
  const Graph g = io::graph_from_json(io::load_json(path));
  Json report = Json::object();
  report["task"] = task;
  Table t;
  if (task == "chromatic" || task == "independence") {
    const std::size_t v = task == "chromatic" ? chromatic_number(g) : independence_number(g);
    report["value"] = v;
    t.add({task, std::to_string(v)});
    detail::Emitter{cfg, out}.report(std::move(report), t);
    return kOk;
  }

  const GraphParameter param = parameter == "independence" ? GraphParameter::Independence : GraphParameter::Chromatic;
  report["parameter"] = to_string(param);
  report["relaxation"] = "DNN (necessary condition only)";
  t.add({"k", "verdict", "distance"});
  int code = kOk;
  if (k) {
    const MembershipVerdict v = quantum_graph_bounds(g, param, *k, cfg.eps_feas);
    report["k"] = *k;
    report["status"] = feasibility_label(v.status);
    report["distance"] = v.distance;
    t.add({std::to_string(*k), feasibility_label(v.status), fmt6(v.distance)});
    code = detail::verdict_exit(v.status);
  } else {
    // Chromatic feasibility grows with k, independence feasibility shrinks.
    Json sweep = Json::array();
    std::optional<std::size_t> answer;
    bool undecided = false;
    for (std::size_t kk = 1; kk <= std::max<std::size_t>(g.size(), 1); ++kk) {
      const MembershipVerdict v = quantum_graph_bounds(g, param, kk, cfg.eps_feas);
      Json e = Json::object();
      e["k"] = kk;
      e["status"] = feasibility_label(v.status);
      e["distance"] = v.distance;
      sweep.push_back(std::move(e));
      t.add({std::to_string(kk), feasibility_label(v.status), fmt6(v.distance)});
      if (v.status == Verdict::Undecided) undecided = true;
      if (param == GraphParameter::Chromatic && v.status == Verdict::In) {
        answer = kk;
        break;
      }
      if (param == GraphParameter::Independence) {
        if (v.status == Verdict::Out) break;
        if (v.status == Verdict::In) answer = kk;
      }
    }
    report["sweep"] = std::move(sweep);
    const char* key = param == GraphParameter::Chromatic ? "smallest_feasible_k" : "largest_feasible_k";
    report[key] = answer ? Json(*answer) : Json(nullptr);
    t.add({key, answer ? std::to_string(*answer) : "none", ""});
    if (undecided) code = kNoVerdict;
  }
  detail::Emitter{cfg, out}.report(std::move(report), t);
  return code;
}

inline int cmd_csp(const RunConfig& cfg, const std::string& path, const std::string& task, std::ostream& out) {
  const Csp c = io::csp_from_json(io::load_json(path));
  Json report = Json::object();
  report["task"] = task;
  Table t;
  if (task == "sat") {
    const auto sol = csp_solve(c);
    report["satisfiable"] = sol.has_value();
    report["assignment"] = sol ? Json(*sol) : Json(nullptr);
    t.add({"sat", sol ? "SAT" : "UNSAT"});
    detail::Emitter{cfg, out}.report(std::move(report), t);
    return kOk;
  }
  const Csp binary = c.is_binary() ? c : csp_binarize(c);
  if (task == "binarize" || task == "compile") {
    const Json data = task == "binarize" ? io::csp_to_json(csp_binarize(c)) : io::game_to_json(csp_game(binary));
    if (cfg.output.empty()) {
      out << io::dump(data);
      return kOk;
    }
    detail::Emitter{cfg, out}.write(io::dump(data));
    return kOk;
  }
  // game-sat
  const bool sat = csp_satisfiable(c);
  const MembershipVerdict v = sync_perfect(csp_game(binary), SyncCone::Classical, cfg.eps_feas);
  const bool perfect = v.status == Verdict::In;
  report["satisfiable"] = sat;
  report["perfect_classical_strategy"] = perfect;
  report["cross_check"] = sat == perfect ? "OK" : "MISMATCH";
  t.add({"game-sat", perfect ? "SAT" : "UNSAT"});
  t.add({"cross-check", sat == perfect ? "OK" : "MISMATCH"});
  detail::Emitter{cfg, out}.report(std::move(report), t);
  return kOk;
}

/// Example inputs used by the documentation and the acceptance runs.
inline std::vector<std::pair<std::string, Json>> example_files() {
  std::vector<std::pair<std::string, Json>> files;
  files.emplace_back("chsh.json", io::game_to_json(chsh_game()));
  files.emplace_back("allwin.json", io::game_to_json(make_game({2, 2, 2, 2}, uniform_pi({2, 2, 2, 2}),
                                                               [](auto, auto, auto, auto) { return true; })));
  files.emplace_back("prbox.json", io::correlation_to_json(pr_box()));
  files.emplace_back("deterministic.json", io::correlation_to_json(deterministic_correlation({2, 2, 2, 2}, {0, 1}, {1, 0})));
  files.emplace_back("c5.json", io::graph_to_json(cycle_graph(5)));
  files.emplace_back("k2.json", io::graph_to_json(complete_graph(2)));
  Csp tri;
  tri.domains = {2, 2, 2};
  for (auto [u, v] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {0, 2}})
    tri.constraints.push_back({{u, v}, {{0, 1}, {1, 0}}});
  files.emplace_back("triangle2col.json", io::csp_to_json(tri));
  files.emplace_back("empty.json", io::csp_to_json(Csp{{2}, {}}));
  return files;
}

inline int cmd_examples(const RunConfig& cfg, const std::string& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  Json written = Json::array();
  Table t;
  for (const auto& [name, data] : example_files()) {
    const std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << io::dump(data);
    written.push_back(p.string());
    t.add({p.string()});
  }
  Json report = Json::object();
  report["written"] = std::move(written);
  detail::Emitter{cfg, out}.report(std::move(report), t);
  return kOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Nonlocal game values, correlation-set membership and graph/CSP games"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--tol", cfg.tol, "Solver tolerance")->capture_default_str();
  app.add_option("--max-iter", cfg.max_iter, "Solver iteration limit")->capture_default_str();
  app.add_option("--eps-feas", cfg.eps_feas, "Feasibility threshold")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--output", cfg.output, "Write the report to this file instead of stdout");
  app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "table"}))->capture_default_str();

  std::string file, set = "all", witness, task, parameter = "chromatic", dir = ".";
  std::optional<std::size_t> k;

  auto* value = app.add_subcommand("value", "Game values");
  value->add_option("game", file, "Game JSON file")->required();
  value->add_option("--set", set, "Which value")
      ->check(CLI::IsMember({"classical", "nosignaling", "unrestricted", "dnn", "sdp1", "all"}));

  std::string member_set;
  auto* member = app.add_subcommand("member", "Correlation-set membership");
  member->add_option("correlation", file, "Correlation JSON file")->required();
  member->add_option("--set", member_set, "Which set")
      ->required()
      ->check(CLI::IsMember({"probability", "nosignaling", "classical", "dnn", "npa1"}));
  member->add_option("--witness", witness, "Write the witness matrix here when one is found");

  auto* graph = app.add_subcommand("graph", "Graph parameters and their DNN bounds");
  graph->add_option("graph", file, "Graph JSON file")->required();
  graph->add_option("--task", task, "chromatic | independence | qbound")
      ->required()
      ->check(CLI::IsMember({"chromatic", "independence", "qbound"}));
  graph->add_option("--parameter", parameter, "Parameter for qbound")
      ->check(CLI::IsMember({"chromatic", "independence"}));
  graph->add_option("--k", k, "Bound to test; sweeps k when omitted");

  std::string csp_task;
  auto* csp = app.add_subcommand("csp", "Constraint satisfaction and its synchronous game");
  csp->add_option("csp", file, "CSP JSON file")->required();
  csp->add_option("--task", csp_task, "sat | binarize | compile | game-sat")
      ->required()
      ->check(CLI::IsMember({"sat", "binarize", "compile", "game-sat"}));

  auto* examples = app.add_subcommand("examples", "Write example input files");
  examples->add_option("dir", dir, "Target directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    cfg.validate();
    if (*value) return cmd_value(cfg, file, set, out);
    if (*member) return cmd_member(cfg, file, member_set, witness, out);
    if (*graph) return cmd_graph(cfg, file, task, parameter, k, out);
    if (*csp) return cmd_csp(cfg, file, csp_task, out);
    return cmd_examples(cfg, dir, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCap;
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("nlgames");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nlg::cli
