//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: gen, train, oracle, eval, report.
//

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rxnrl/checkpoint.h"
#include "rxnrl/env.h"
#include "rxnrl/hash.h"
#include "rxnrl/network.h"
#include "rxnrl/oracle.h"
#include "rxnrl/rules.h"
#include "rxnrl/smiles.h"
#include "rxnrl/train.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace rxnrl;

namespace {

enum Exit {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kInternal = 4,
};

class CliError: public std::runtime_error {
public:
  CliError(int code, const std::string &msg)
      : std::runtime_error(msg), code_(code) { }
  int code() const noexcept { return code_; }

private:
  int code_;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CliError(kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path &path, const std::string &text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out)
      throw CliError(kIo, "cannot write " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec)
    throw CliError(kIo, "cannot rename to " + path.string());
}

std::string default_out_dir() {
  const char *env = std::getenv("RXNRL_OUT_DIR");
  return env && *env ? env : "runs";
}

// Collects what a command read and wrote; written as JSON at the end.
class Manifest {
public:
  explicit Manifest(std::string command)
      : t0_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["config"] = json::object();
    doc_["seeds"] = json::array();
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::array();
  }

  json &config() { return doc_["config"]; }
  void seed(std::uint64_t s) { doc_["seeds"].push_back(s); }
  void input(const std::string &path) {
    doc_["inputs"][path] = to_hex(fnv1a(read_file(path)));
  }
  void output(const std::string &path) { doc_["outputs"].push_back(path); }

  void write(const fs::path &path, const std::string &outcome) {
    doc_["wall_clock_s"] = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0_)
                               .count();
    doc_["outcome"] = outcome;
    write_file_atomic(path, doc_.dump(2) + "\n");
  }

private:
  json doc_;
  std::chrono::steady_clock::time_point t0_;
};

RuleSet load_rules(const std::string &path) {
  if (path.empty())
    return default_catalog();
  return load_catalog(path);
}

// A species reference is a decimal id or a SMILES string.
std::string resolve_species(const ReactionNetwork &net,
                            const std::string &ref) {
  const bool numeric =
      !ref.empty() && std::all_of(ref.begin(), ref.end(), [](char c) {
        return c >= '0' && c <= '9';
      });
  if (numeric) {
    const int id = std::stoi(ref);
    if (id < 0 || id >= static_cast<int>(net.species.size()))
      throw ConfigError("no species with id " + ref);
    return net.species[id].canonical.text;
  }
  return ref;
}

struct NetOptions {
  std::string net_path;
  std::vector<std::string> start;
  std::string goal;
  bool reverse = false;
  int max_steps = 20;
  bool forbid_revisit = false;
  bool counted_pool = false;

  void add_to(CLI::App *cmd) {
    cmd->add_option("--net", net_path, "Network file")->required();
    // Bracket atoms must not be read as list literals.
    cmd->add_option("--start", start,
                    "Start species (id or SMILES); default: network start")
        ->allow_extra_args(false);
    cmd->add_option("--goal", goal,
                    "Goal species (id or SMILES); default: network goal");
    cmd->add_flag("--reverse", reverse,
                  "Reverse the network first (swaps start and goal)");
    cmd->add_option("--max-steps", max_steps, "Horizon M")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--forbid-revisit", forbid_revisit,
                  "Mask actions leading to visited states");
    cmd->add_flag("--counted-pool", counted_pool,
                  "Track water and hydronium counts");
  }

  Env make_env(Manifest &m) const {
    m.input(net_path);
    ReactionNetwork net =
        ReactionNetwork::load(net_path, default_catalog().hash());
    if (net.catalog_mismatch)
      std::cerr << "warning: network was built with a non-default catalog\n";
    if (reverse)
      net = reverse_network(net);
    EnvConfig cfg;
    for (const std::string &s: start)
      cfg.start.push_back(resolve_species(net, s));
    if (!goal.empty())
      cfg.goal = resolve_species(net, goal);
    cfg.max_steps = max_steps;
    cfg.forbid_revisit = forbid_revisit;
    cfg.aux_pool = counted_pool ? AuxPool::kCounted : AuxPool::kInexhaustible;
    auto shared = std::make_shared<const ReactionNetwork>(std::move(net));
    Env env = Env::dataset(shared, cfg);

    json &c = m.config();
    c["net"] = net_path;
    c["reverse"] = reverse;
    json st = json::array();
    for (int id: env.reset().state.species)
      st.push_back(env.backend().species(id).canonical.text);
    c["start"] = st;
    c["goal"] = env.goal_id() >= 0
                    ? json(env.backend().species(env.goal_id()).canonical.text)
                    : json(nullptr);
    c["max_steps"] = max_steps;
    c["forbid_revisit"] = forbid_revisit;
    c["aux_pool"] = counted_pool ? "counted" : "inexhaustible";
    return env;
  }

  static ReactionNetwork reverse_network(const ReactionNetwork &net) {
    return rxnrl::reverse(net);
  }
};

// --- gen -----------------------------------------------------------------

struct GenOptions {
  std::vector<std::string> start;
  std::string goal;
  std::string rules;
  std::string filter = SpeciesFilter {}.descriptor();
  std::string out;
  int max_species = ExpandLimits {}.max_species;
};

int cmd_gen(const GenOptions &o) {
  if (o.start.empty())
    throw CliError(kUsage, "gen: at least one --start species is required");
  Manifest m("gen");
  if (!o.rules.empty())
    m.input(o.rules);
  const RuleSet rules = load_rules(o.rules);
  SpeciesFilter filter;
  try {
    filter = SpeciesFilter::parse(o.filter);
  } catch (const std::invalid_argument &e) {
    throw CliError(kUsage, e.what());
  }
  std::vector<MolGraph> initial;
  for (const std::string &s: o.start) {
    try {
      initial.push_back(parse_smiles(s));
    } catch (const std::exception &e) {
      throw CliError(kUsage, "--start " + s + ": " + e.what());
    }
  }
  ExpandLimits limits;
  limits.max_species = o.max_species;
  ReactionNetwork net = expand(initial, rules, filter, limits);
  if (!o.goal.empty()) {
    const int g = net.find_smiles(o.goal);
    if (g < 0)
      throw CliError(kUsage, "goal " + o.goal + " is not in the network");
    net.set_goal(g);
  }
  fs::path out(o.out);
  if (out.has_parent_path())
    fs::create_directories(out.parent_path());
  net.save(o.out);
  m.output(o.out);

  json &c = m.config();
  c["start"] = o.start;
  c["goal"] = o.goal;
  c["rules"] = o.rules.empty() ? "builtin" : o.rules;
  c["catalog_hash"] = to_hex(rules.hash());
  c["filter"] = filter.descriptor();
  c["max_species"] = o.max_species;
  const std::string manifest = o.out + ".manifest.json";
  m.write(manifest, "ok");
  std::cout << "species=" << net.species.size() << "\n"
            << "reactions=" << net.reactions.size() << "\n"
            << "termination="
            << (net.termination == Termination::kFixpoint ? "fixpoint"
                                                          : "species_limit")
            << "\n"
            << "goal=" << net.goal_id << "\n";
  return kOk;
}

// --- train ---------------------------------------------------------------

struct TrainOptions {
  NetOptions net;
  std::string algo = "ppo";
  long budget = PPOConfig {}.budget;
  std::uint64_t seed = 0;
  std::string out_dir;
  int target_length = 0;
  int episodes_per_batch = PPOConfig {}.episodes_per_batch;
  int minibatch_episodes = PPOConfig {}.minibatch_episodes;
  double learning_rate = PPOConfig {}.learning_rate;
  int epochs = PPOConfig {}.epochs;
  double entropy_coef = PPOConfig {}.entropy_coef;
  int hidden = PolicyShape {}.hidden;
};

int cmd_train(const TrainOptions &o) {
  Manifest m("train");
  Env env = o.net.make_env(m);
  if (env.goal_id() < 0)
    throw CliError(kUsage, "train: the network has no goal; pass --goal");
  const fs::path dir = o.out_dir.empty() ? default_out_dir() : o.out_dir;
  fs::create_directories(dir);
  m.seed(o.seed);
  json &c = m.config();
  c["algo"] = o.algo;
  c["budget"] = o.budget;
  c["seed"] = o.seed;
  c["target_length"] = o.target_length;

  const fs::path csv = dir / "convergence.csv";
  if (o.algo == "tabular") {
    TabularConfig tc;
    tc.episodes = o.budget;
    tc.seed = o.seed;
    c["alpha"] = tc.alpha;
    c["gamma"] = tc.gamma;
    c["eps_start"] = tc.eps_start;
    c["eps_end"] = tc.eps_end;
    c["decay_episodes"] = tc.decay_episodes;
    const TabularResult r = tabular_q_learning(env, tc);
    write_convergence_csv(csv.string(), r.log);
    m.output(csv.string());
    m.write(dir / "manifest.json", "ok");
    std::cout << "trajectories=" << r.log.size() << "\n"
              << "best_len=" << r.best_len << "\n";
    return kOk;
  }
  if (o.algo != "ppo")
    throw CliError(kUsage, "unknown --algo " + o.algo);

  TrainConfig tc;
  tc.ppo.budget = o.budget;
  tc.ppo.seed = o.seed;
  tc.ppo.episodes_per_batch = o.episodes_per_batch;
  tc.ppo.minibatch_episodes = o.minibatch_episodes;
  tc.ppo.learning_rate = o.learning_rate;
  tc.ppo.epochs = o.epochs;
  tc.ppo.entropy_coef = o.entropy_coef;
  tc.shape.hidden = o.hidden;
  tc.target_length = o.target_length;
  try {
    tc.ppo.validate();
  } catch (const std::invalid_argument &e) {
    throw CliError(kUsage, e.what());
  }
  c["clip"] = tc.ppo.clip;
  c["gamma"] = tc.ppo.gamma;
  c["lambda"] = tc.ppo.lambda;
  c["learning_rate"] = tc.ppo.learning_rate;
  c["epochs"] = tc.ppo.epochs;
  c["episodes_per_batch"] = tc.ppo.episodes_per_batch;
  c["minibatch_episodes"] = tc.ppo.minibatch_episodes;
  c["entropy_coef"] = tc.ppo.entropy_coef;
  c["value_coef"] = tc.ppo.value_coef;
  c["max_grad_norm"] = tc.ppo.max_grad_norm;
  c["hidden"] = tc.shape.hidden;

  const TrainResult r = train(env, tc);
  write_convergence_csv(csv.string(), r.log);
  m.output(csv.string());
  const fs::path ckpt = dir / "policy.ckpt";
  save_checkpoint(ckpt.string(), r.params);
  m.output(ckpt.string());
  const GreedyResult g = greedy_rollout(r.params, env);
  std::string trace;
  for (const std::string &line: g.trace)
    trace += line + "\n";
  const fs::path trace_path = dir / "greedy_trace.txt";
  write_file_atomic(trace_path, trace);
  m.output(trace_path.string());
  m.write(dir / "manifest.json", "ok");

  std::cout << "trajectories=" << r.trajectories << "\n"
            << "best_len=" << r.best_len << "\n"
            << "reached_target=" << (r.reached_target ? "true" : "false")
            << "\n"
            << "greedy_outcome=" << outcome_name(g.outcome) << "\n"
            << "greedy_len=" << g.length << "\n";
  return kOk;
}

// --- oracle --------------------------------------------------------------

struct OracleOptions {
  NetOptions net;
  bool kv = false;
  int node_cap = 1000000;
};

int cmd_oracle(const OracleOptions &o) {
  Manifest m("oracle");
  Env env = o.net.make_env(m);
  const StateGraph graph = build_state_graph(env, -1, o.node_cap);
  const GraphStats st = graph_stats(graph);
  const PathResult p = shortest_path(env, graph);
  std::vector<std::string> trace;
  if (p.exists)
    trace = path_trace(env, p.actions);

  if (o.kv) {
    std::cout << "exists=" << (p.exists ? "true" : "false") << "\n"
              << "length=" << (p.exists ? p.length : -1) << "\n"
              << "states=" << st.states << "\n"
              << "edges=" << graph.edge_count() << "\n"
              << "dead_end_states=" << st.dead_end_states << "\n"
              << "max_out_degree=" << st.max_out_degree << "\n"
              << "truncated=" << (graph.truncated ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
      std::cout << "step=" << trace[i] << "\n";
  } else {
    if (p.exists)
      std::cout << "shortest path: " << p.length << " steps\n";
    else
      std::cout << "goal unreachable within " << env.config().max_steps
                << " steps\n";
    for (const std::string &line: trace)
      std::cout << "  " << line << "\n";
    std::cout << "states " << st.states << ", edges " << graph.edge_count()
              << ", dead ends " << st.dead_end_states << ", max out-degree "
              << st.max_out_degree << (graph.truncated ? " (truncated)" : "")
              << "\n";
  }
  return kOk;
}

// --- eval ----------------------------------------------------------------

struct EvalOptions {
  NetOptions net;
  std::string checkpoint;
  int episodes = 1;
  std::string rules;
};

int cmd_eval(const EvalOptions &o) {
  Manifest m("eval");
  Env env = o.net.make_env(m);
  PolicyParams params = load_checkpoint(o.checkpoint);
  if (params.shape().n_bits != env.config().fingerprint_bits)
    throw CliError(kUsage, "checkpoint fingerprint length does not match");
  const RuleSet rules = load_rules(o.rules);
  int success = 0, valid = 0;
  long total_len = 0;
  for (int k = 0; k < o.episodes; ++k) {
    const GreedyResult g = greedy_rollout(params, env);
    const std::string err = validate_with_rules(env, rules, g.actions);
    std::cout << "episode " << k + 1 << " outcome=" << outcome_name(g.outcome)
              << " length=" << g.length << " return=" << format_reward(g.ret)
              << " valid=" << (err.empty() ? "true" : "false") << "\n";
    for (const std::string &line: g.trace)
      std::cout << "  " << line << "\n";
    if (!err.empty())
      std::cout << "  invalid: " << err << "\n";
    valid += err.empty();
    if (g.outcome == Outcome::kGoal) {
      ++success;
      total_len += g.length;
    }
  }
  std::cout << "success_rate=" << format_reward(double(success) / o.episodes)
            << "\n"
            << "valid_rate=" << format_reward(double(valid) / o.episodes)
            << "\n";
  if (success > 0)
    std::cout << "mean_length="
              << format_reward(double(total_len) / success) << "\n";
  return kOk;
}

// --- report --------------------------------------------------------------

struct ReportOptions {
  std::vector<std::string> csv;
  std::string out;
};

struct Series {
  std::string name;
  std::vector<LogRow> rows;
  std::string trace;
};

int cmd_report(const ReportOptions &o) {
  if (o.csv.empty())
    throw CliError(kUsage, "report: at least one --csv file is required");
  std::vector<Series> series;
  for (const std::string &path: o.csv) {
    Series s;
    s.name = path;
    try {
      s.rows = parse_convergence_csv(read_file(path));
    } catch (const CliError &) {
      throw;
    } catch (const std::runtime_error &e) {
      throw CliError(kIo, path + ": " + e.what());
    }
    const fs::path trace = fs::path(path).parent_path() / "greedy_trace.txt";
    if (fs::exists(trace))
      s.trace = read_file(trace.string());
    series.push_back(std::move(s));
  }

  std::ostringstream md;
  md << "# Convergence report\n\n";
  md << "| series | trajectories | final best_len | first reached at | "
        "goal rate |\n|---|---|---|---|---|\n";
  for (const Series &s: series) {
    int goals = 0;
    for (const LogRow &r: s.rows)
      goals += r.outcome == Outcome::kGoal;
    // best_len holds the M + 1 sentinel until the first goal.
    std::string best = "-", first = "-";
    if (goals > 0) {
      const int final_best = s.rows.back().best_len;
      best = std::to_string(final_best);
      for (const LogRow &r: s.rows) {
        if (r.best_len == final_best) {
          first = std::to_string(r.trajectory);
          break;
        }
      }
    }
    md << "| " << s.name << " | " << s.rows.size() << " | " << best << " | "
       << first << " | "
       << format_reward(s.rows.empty() ? 0.0 : double(goals) / s.rows.size())
       << " |\n";
  }
  for (const Series &s: series) {
    md << "\n## " << s.name << "\n\n";
    md << "Best length after each improvement:\n\n"
          "| trajectory | best_len |\n|---|---|\n";
    int prev = -1;
    for (const LogRow &r: s.rows) {
      if (r.outcome == Outcome::kGoal && r.best_len != prev) {
        md << "| " << r.trajectory << " | " << r.best_len << " |\n";
        prev = r.best_len;
      }
    }
    if (!s.trace.empty())
      md << "\nGreedy rollout:\n\n```\n" << s.trace << "```\n";
  }
  if (o.out.empty() || o.out == "-") {
    std::cout << md.str();
  } else {
    write_file_atomic(o.out, md.str());
  }
  return kOk;
}

int classify(const std::exception &e) {
  if (auto *c = dynamic_cast<const CliError *>(&e))
    return c->code();
  if (dynamic_cast<const ConfigError *>(&e)
      || dynamic_cast<const CatalogError *>(&e)
      || dynamic_cast<const SmilesError *>(&e)
      || dynamic_cast<const MolError *>(&e)
      || dynamic_cast<const std::invalid_argument *>(&e))
    return kUsage;
  if (auto *oe = dynamic_cast<const OracleError *>(&e))
    return oe->kind() == OracleError::Kind::kReplay ? kInternal : kUsage;
  if (auto *n = dynamic_cast<const NetworkError *>(&e))
    return n->kind() == NetworkError::Kind::kInvalidSpecies ? kUsage : kIo;
  if (dynamic_cast<const CheckpointError *>(&e)
      || dynamic_cast<const fs::filesystem_error *>(&e))
    return kIo;
  return kInternal;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app { "Reaction-network generation and path-finding agent" };
  app.require_subcommand(1);

  GenOptions gen;
  auto *g = app.add_subcommand("gen", "Expand a reaction network");
  g->add_option("--start", gen.start, "Initial species SMILES")
      ->allow_extra_args(false);
  g->add_option("--goal", gen.goal, "Goal species SMILES");
  g->add_option("--rules", gen.rules, "Rule catalog (default: built-in)");
  g->add_option("--filter", gen.filter, "Species filter descriptor");
  g->add_option("--max-species", gen.max_species, "Species limit")
      ->check(CLI::PositiveNumber);
  g->add_option("--out", gen.out, "Output network file")->required();

  TrainOptions tr;
  auto *t = app.add_subcommand("train", "Train an agent on a network");
  tr.net.add_to(t);
  t->add_option("--algo", tr.algo, "ppo or tabular")
      ->check(CLI::IsMember({ "ppo", "tabular" }));
  t->add_option("--budget", tr.budget, "Trajectory budget")
      ->check(CLI::PositiveNumber);
  t->add_option("--seed", tr.seed, "Random seed");
  t->add_option("--out-dir", tr.out_dir,
                "Output directory (default: $RXNRL_OUT_DIR or ./runs)");
  t->add_option("--target-length", tr.target_length,
                "Stop once greedy and sampled paths reach this length");
  t->add_option("--episodes-per-batch", tr.episodes_per_batch);
  t->add_option("--minibatch-episodes", tr.minibatch_episodes);
  t->add_option("--learning-rate", tr.learning_rate);
  t->add_option("--epochs", tr.epochs);
  t->add_option("--entropy-coef", tr.entropy_coef);
  t->add_option("--hidden", tr.hidden)->check(CLI::PositiveNumber);

  OracleOptions orc;
  auto *o = app.add_subcommand("oracle", "Shortest path and state census");
  orc.net.add_to(o);
  o->add_flag("--kv", orc.kv, "key=value output, one record per line");
  o->add_option("--node-cap", orc.node_cap)->check(CLI::PositiveNumber);

  EvalOptions ev;
  auto *e = app.add_subcommand("eval", "Greedy rollouts of a checkpoint");
  ev.net.add_to(e);
  e->add_option("--checkpoint", ev.checkpoint)->required();
  e->add_option("--episodes", ev.episodes)->check(CLI::PositiveNumber);
  e->add_option("--rules", ev.rules, "Rule catalog for re-validation");

  ReportOptions rep;
  auto *r = app.add_subcommand("report", "Merge convergence logs");
  r->add_option("--csv", rep.csv, "Convergence CSV files");
  r->add_option("--out", rep.out, "Markdown output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int rc = app.exit(err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (g->parsed())
      return cmd_gen(gen);
    if (t->parsed())
      return cmd_train(tr);
    if (o->parsed())
      return cmd_oracle(orc);
    if (e->parsed())
      return cmd_eval(ev);
    return cmd_report(rep);
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << "\n";
    return classify(err);
  }
}
