// cgdist: canonical forms, game distances, sequences and convergence tables.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cgd/dag.hpp"
#include "cgd/enumerate.hpp"
#include "cgd/loopy.hpp"
#include "cgd/metrics.hpp"
#include "cgd/parser.hpp"
#include "json.hpp"

using namespace cgd;

namespace {

struct Config {
  std::string output;
  std::size_t jobs = 1;
  int fib_offset = 3;
  unsigned seed = 1;

  // canon
  std::string canon_expr;
  // dist
  std::string dist_a, dist_b, metric = "wd";
  bool exact = false, bounds = false;
  std::size_t depth_budget = 0, max_states = 400000;
  std::string cost_cap;
  // seq
  std::string family;
  std::size_t n = 1;
  std::string emit = "text";
  bool all_terms = false;
  // converge
  std::string target, csv_path, json_path;
  std::size_t max_n = 8;
  bool pretty = false;
  // enumerate
  std::size_t day = 1;
  // dag
  std::string dag_expr, dag_emit = "dot";
};

std::size_t env_jobs() {
  const char* v = std::getenv("CGDIST_JOBS");
  if (!v || !*v) return 1;
  try {
    long j = std::stol(v);
    return j >= 1 ? static_cast<std::size_t>(j) : 1;
  } catch (...) {
    return 1;
  }
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + cfg.output);
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

Game parse_arg(const std::string& text) {
  try {
    return parse_canonical(text);
  } catch (const ParseError& e) {
    std::ostringstream msg;
    msg << e.what() << "\n  " << text << "\n  " << std::string(e.column() - 1, ' ') << "^";
    throw std::runtime_error(msg.str());
  }
}

Family family_arg(const std::string& name) {
  auto f = family_from_string(name);
  if (!f) throw std::runtime_error("unknown family '" + name + "'");
  return *f;
}

std::string annotate(Game g) {
  return print_game(g) + "  outcome=" + std::string(to_string(outcome(g))) +
         "  birthday=" + std::to_string(birthday(g));
}

int cmd_canon(const Config& cfg) {
  emit(cfg, annotate(parse_arg(cfg.canon_expr)) + "\n");
  return 0;
}

int cmd_dist(const Config& cfg) {
  Game a = parse_arg(cfg.dist_a), b = parse_arg(cfg.dist_b);
  nlohmann::ordered_json j;
  j["metric"] = cfg.metric;
  if (cfg.metric == "wd" || cfg.metric == "ed") {
    SearchOptions opts;
    if (cfg.depth_budget) opts.depth_budget = cfg.depth_budget;
    if (!cfg.cost_cap.empty()) opts.cost_cap = Dyadic::parse(cfg.cost_cap);
    opts.max_states = cfg.max_states;
    DistanceResult r;
    if (cfg.metric == "ed")
      r = ed_exact(a, b, opts);
    else
      r = cfg.bounds ? wd_bounds(a, b) : wd_exact(a, b, opts);
    auto body = nlohmann::ordered_json::parse(to_json(r));
    j["mode"] = cfg.metric == "wd" && cfg.bounds ? "bounds" : "exact";
    for (auto& [k, v] : body.items()) j[k] = v;
    j["states"] = r.states;
  } else if (cfg.metric == "bd") {
    j["value"] = std::to_string(metric_bd(a, b));
  } else if (cfg.metric == "bs") {
    j["value"] = metric_bs(a, b).to_string();
  } else {
    j["value"] = metric_discrete(a, b).to_string();
  }
  emit(cfg, j.dump(2) + "\n");
  return 0;
}

int cmd_seq(const Config& cfg) {
  SequenceSpec spec{family_arg(cfg.family), cfg.fib_offset};
  std::size_t first = cfg.all_terms ? 1 : cfg.n;
  std::string out;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t k = first; k <= cfg.n; ++k) {
    Game g = term(spec, k);
    if (cfg.emit == "json") {
      nlohmann::ordered_json o;
      o["family"] = cfg.family;
      o["n"] = k;
      o["term"] = print_game(g);
      o["outcome"] = std::string(to_string(outcome(g)));
      o["birthday"] = birthday(g);
      arr.push_back(std::move(o));
    } else {
      out += (cfg.all_terms ? std::to_string(k) + " " : "") + print_game(g) + "\n";
    }
  }
  if (cfg.emit == "json") out = (cfg.all_terms ? arr : arr[0]).dump(2) + "\n";
  emit(cfg, out);
  return 0;
}

std::string pretty_table(const ConvergenceReport& r) {
  std::ostringstream s;
  s << to_string(r.family) << " -> " << r.target << (r.surrogate_term ? " (deep term " : " (unrolled to ")
    << r.depth << ", tail " << r.tail.to_string() << ")\n";
  char line[160];
  std::snprintf(line, sizeof line, "%4s  %-22s %-22s %10s %10s\n", "n", "upper", "bound", "ratio", "step");
  s << line;
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line, "%4zu  %-22.15g %-22.15g %10.6f %10.6f\n", row.n, row.upper.to_double(),
                  row.bound.value, row.ratio, row.step_ratio);
    s << line;
  }
  return s.str();
}

int cmd_converge(const Config& cfg) {
  SequenceSpec spec{family_arg(cfg.family), cfg.fib_offset};
  auto rep = convergence_report(spec, cfg.target, cfg.max_n, cfg.jobs);
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, to_csv(rep));
  if (!cfg.json_path.empty()) write_file(cfg.json_path, to_json(rep) + "\n");
  if (cfg.pretty)
    emit(cfg, pretty_table(rep));
  else if (cfg.csv_path.empty() && cfg.json_path.empty())
    emit(cfg, to_csv(rep));
  return 0;
}

int cmd_enumerate(const Config& cfg) {
  auto games = enumerate_games(cfg.day, cfg.jobs);
  std::string out;
  for (Game g : games) out += print_game(g) + "\n";
  emit(cfg, out);
  std::cerr << games.size() << " games\n";
  return 0;
}

int cmd_dag(const Config& cfg) {
  Game g = parse_arg(cfg.dag_expr);
  GameDag d = build_dag(g);
  NodeLabeler label = [](const GameDag& x, NodeId v) { return x.label(v) ? print_game(*x.label(v)) : std::string(); };
  emit(cfg, cfg.dag_emit == "tikz" ? to_tikz(d, label) : to_dot(d, label));
  return 0;
}

int cmd_selftest(const Config& cfg) {
  int failed = 0;
  std::string out;
  auto check = [&](const std::string& name, bool ok) {
    out += std::string(ok ? "PASS " : "FAIL ") + name + "\n";
    failed += ok ? 0 : 1;
  };
  check("canon {*,1|0}", print_game(parse_canonical("{*,1|0}")) == "{1|0}");
  check("canon {0|1}", parse_canonical("{0|1}") == dyadic(1, 1));
  check("canon {0|*}", parse_canonical("{0|*}") == up_multiple(1, false));
  check("canon {0|up}", parse_canonical("{0|up}") == up_multiple(2, true));
  auto w = wd_exact(zero(), star());
  check("wd(0,*) = 2", w.certified && w.upper == Dyadic(2));
  check("bs(0,*) = 1/2", metric_bs(zero(), star()) == Dyadic(1).half());
  check("chi_2 display", print_game(term({Family::Chi}, 2)) == "{3||pm(1,-1)|-2}");
  check("enumerate day 1", enumerate_games(1, cfg.jobs).size() == 4);
  std::mt19937 rng(cfg.seed);
  bool round = true;
  auto games = enumerate_games(2);
  for (int i = 0; i < 200 && round; ++i) {
    Game g = games[rng() % games.size()];
    round = parse_canonical(print_game(g)) == g;
  }
  check("round trip", round);
  emit(cfg, out);
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  cfg.jobs = env_jobs();
  CLI::App app{"Canonical short games and the distances between them"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--output", cfg.output, "write the main output to a file");
  app.add_option("-j,--jobs", cfg.jobs, "worker threads (default $CGDIST_JOBS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--fib-offset", cfg.fib_offset, "delta uses F_{n+offset}")->check(CLI::Range(1, 8));
  app.add_option("--seed", cfg.seed, "seed for randomized checks");

  auto* canon = app.add_subcommand("canon", "canonical form, outcome and birthday");
  canon->add_option("expr", cfg.canon_expr)->required();

  auto* dist = app.add_subcommand("dist", "distance between two games (JSON)");
  dist->add_option("first", cfg.dist_a)->required();
  dist->add_option("second", cfg.dist_b)->required();
  auto* ex = dist->add_flag("--exact", cfg.exact, "exact search (default)");
  dist->add_flag("--bounds", cfg.bounds, "cheap lower/upper bounds only")->excludes(ex);
  dist->add_option("--metric", cfg.metric)->check(CLI::IsMember({"wd", "bd", "bs", "ed", "discrete"}));
  dist->add_option("--depth-budget", cfg.depth_budget);
  dist->add_option("--cost-cap", cfg.cost_cap, "dyadic, e.g. 5/4");
  dist->add_option("--max-states", cfg.max_states)->check(CLI::PositiveNumber);

  auto* seq = app.add_subcommand("seq", "n-th term of a sequence family");
  seq->add_option("family", cfg.family)->required();
  seq->add_option("n", cfg.n)->required()->check(CLI::PositiveNumber);
  seq->add_option("--emit", cfg.emit)->check(CLI::IsMember({"text", "json"}));
  seq->add_flag("--all", cfg.all_terms, "terms 1..n");

  auto* conv = app.add_subcommand("converge", "convergence table against a loopy target");
  conv->add_option("family", cfg.family)->required();
  conv->add_option("target", cfg.target)->required();
  conv->add_option("max_n", cfg.max_n)->required()->check(CLI::PositiveNumber);
  conv->add_option("--csv", cfg.csv_path, "write CSV here");
  conv->add_option("--json", cfg.json_path, "write JSON here");
  conv->add_flag("--pretty", cfg.pretty, "human-readable table");

  auto* en = app.add_subcommand("enumerate", "all canonical games up to a birthday");
  en->add_option("--birthday", cfg.day)->required()->check(CLI::Range(0, 2));

  auto* dag = app.add_subcommand("dag", "export D(G)");
  dag->add_option("expr", cfg.dag_expr)->required();
  dag->add_option("--emit", cfg.dag_emit)->check(CLI::IsMember({"dot", "tikz"}));

  auto* self = app.add_subcommand("selftest", "quick built-in checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*canon) return cmd_canon(cfg);
    if (*dist) return cmd_dist(cfg);
    if (*seq) return cmd_seq(cfg);
    if (*conv) return cmd_converge(cfg);
    if (*en) return cmd_enumerate(cfg);
    if (*dag) return cmd_dag(cfg);
    if (*self) return cmd_selftest(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
