//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <memory>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rxnrl/canonical.h"
#include "rxnrl/checkpoint.h"
#include "rxnrl/env.h"
#include "rxnrl/fingerprint.h"
#include "rxnrl/network.h"
#include "rxnrl/oracle.h"
#include "rxnrl/smiles.h"
#include "rxnrl/train.h"

namespace py = pybind11;
using namespace rxnrl;

namespace {

// pybind11 holders cannot be pointers to const; only const methods are
// bound.
using NetPtr = std::shared_ptr<ReactionNetwork>;

NetPtr expand_network(const std::vector<std::string> &start,
                      const std::string &goal, const std::string &rules_path,
                      const std::string &filter, int max_species) {
  std::vector<MolGraph> initial;
  for (const std::string &s: start)
    initial.push_back(parse_smiles(s));
  const RuleSet rules =
      rules_path.empty() ? default_catalog() : load_catalog(rules_path);
  ExpandLimits limits;
  limits.max_species = max_species;
  ReactionNetwork net =
      expand(initial, rules, SpeciesFilter::parse(filter), limits);
  if (!goal.empty()) {
    const int g = net.find_smiles(goal);
    if (g < 0)
      throw ConfigError("goal is not in the network");
    net.set_goal(g);
  }
  return std::make_shared<ReactionNetwork>(std::move(net));
}

py::dict log_dict(const std::vector<LogRow> &log) {
  std::vector<long> traj;
  std::vector<std::string> outcome;
  std::vector<double> ret;
  std::vector<int> path_len, best_len;
  for (const LogRow &r: log) {
    traj.push_back(r.trajectory);
    outcome.push_back(outcome_name(r.outcome));
    ret.push_back(r.ret);
    path_len.push_back(r.path_len);
    best_len.push_back(r.best_len);
  }
  py::dict d;
  d["trajectory"] = traj;
  d["outcome"] = outcome;
  d["return"] = ret;
  d["path_len"] = path_len;
  d["best_len"] = best_len;
  return d;
}

} // namespace

PYBIND11_MODULE(_rxnrl, m) {
  m.doc() = "Reaction-network generation, episodic environment and agents";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SmilesError>(m, "SmilesError", PyExc_ValueError);

  m.def("canonicalize", [](const std::string &smiles) {
    return canonicalize(parse_smiles(smiles)).text;
  });
  m.def("write_smiles",
        [](const std::string &smiles) {
          return write_smiles(parse_smiles(smiles));
        },
        "Re-serialize without canonical reordering");
  m.def("fingerprint",
        [](const std::string &smiles, int radius, int n_bits) {
          return morgan_fingerprint(parse_smiles(smiles), radius, n_bits)
              .on_bits();
        },
        py::arg("smiles"), py::arg("radius") = kDefaultRadius,
        py::arg("n_bits") = kDefaultFingerprintBits);

  py::class_<ReactionNetwork, NetPtr>(m, "Network")
      .def_static("expand", &expand_network, py::arg("start"),
                  py::arg("goal") = "", py::arg("rules") = "",
                  py::arg("filter") = SpeciesFilter {}.descriptor(),
                  py::arg("max_species") = ExpandLimits {}.max_species)
      .def_static("load",
                  [](const std::string &path) {
                    return std::make_shared<ReactionNetwork>(
                        ReactionNetwork::load(path));
                  })
      .def("save", &ReactionNetwork::save)
      .def("to_text", &ReactionNetwork::to_text)
      .def("reverse",
           [](const ReactionNetwork &n) {
             return std::make_shared<ReactionNetwork>(reverse(n));
           })
      .def("find", &ReactionNetwork::find_smiles)
      .def_property_readonly("species_count",
                             [](const ReactionNetwork &n) {
                               return n.species.size();
                             })
      .def_property_readonly("reaction_count",
                             [](const ReactionNetwork &n) {
                               return n.reactions.size();
                             })
      .def_readonly("goal_id", &ReactionNetwork::goal_id)
      .def_readonly("initial_ids", &ReactionNetwork::initial_ids)
      .def("species_smiles",
           [](const ReactionNetwork &n, int id) {
             return n.species.at(id).canonical.text;
           })
      .def("stats", [](const ReactionNetwork &n, int max_steps) {
        const NetworkStats s = stats(n, max_steps);
        py::dict d;
        d["species"] = s.species;
        d["reactions"] = s.reactions;
        d["states"] = s.states;
        d["dead_end_states"] = s.dead_end_states;
        d["max_out_degree"] = s.max_out_degree;
        d["degree_histogram"] = s.degree_histogram;
        return d;
      }, py::arg("max_steps") = 20);

  py::class_<EnvState>(m, "State")
      .def_readonly("species", &EnvState::species)
      .def_readonly("t", &EnvState::t)
      .def_property_readonly("outcome",
                             [](const EnvState &s) {
                               return std::string(outcome_name(s.outcome));
                             })
      .def_property_readonly("num_actions",
                             [](const EnvState &s) {
                               return s.actions.size();
                             })
      .def_property_readonly("done", &EnvState::done);

  py::class_<Env>(m, "Env")
      .def(py::init([](NetPtr net, std::vector<std::string> start,
                       std::string goal, int max_steps, bool forbid_revisit) {
             EnvConfig cfg;
             cfg.start = std::move(start);
             cfg.goal = std::move(goal);
             cfg.max_steps = max_steps;
             cfg.forbid_revisit = forbid_revisit;
             return Env::dataset(std::move(net), cfg);
           }),
           py::arg("network"), py::arg("start") = std::vector<std::string> {},
           py::arg("goal") = "", py::arg("max_steps") = 20,
           py::arg("forbid_revisit") = false)
      .def("reset",
           [](const Env &e) {
             StepResult r = e.reset();
             return py::make_tuple(r.state, r.reward, r.done);
           })
      .def("step",
           [](const Env &e, const EnvState &s, int a) {
             StepResult r = e.step(s, a);
             return py::make_tuple(r.state, r.reward, r.done);
           })
      .def("state_key", &Env::state_key)
      .def("action_labels",
           [](const Env &e, const EnvState &s) {
             std::vector<std::string> out;
             for (const ActionInstance &a: e.legal_actions(s))
               out.push_back(e.action_label(a));
             return out;
           })
      .def("observation", [](const Env &e, const EnvState &s) {
        const Observation o = e.encode_observation(s);
        return py::make_tuple(o.bits.on_bits(), o.step_frac);
      });

  m.def("shortest_path", [](const Env &env) {
    const StateGraph g = build_state_graph(env);
    const PathResult p = shortest_path(env, g);
    py::dict d;
    d["exists"] = p.exists;
    d["length"] = p.exists ? p.length : -1;
    d["actions"] = p.actions;
    d["trace"] = p.exists ? path_trace(env, p.actions)
                          : std::vector<std::string> {};
    d["states"] = g.size();
    return d;
  });

  m.def("train",
        [](const Env &env, long budget, std::uint64_t seed, int target_length,
           int hidden, const std::string &checkpoint) {
          TrainConfig tc;
          tc.ppo.budget = budget;
          tc.ppo.seed = seed;
          tc.target_length = target_length;
          tc.shape.hidden = hidden;
          TrainResult r;
          {
            py::gil_scoped_release release;
            r = train(env, tc);
          }
          if (!checkpoint.empty())
            save_checkpoint(checkpoint, r.params);
          const GreedyResult g = greedy_rollout(r.params, env);
          py::dict d;
          d["best_len"] = r.best_len;
          d["trajectories"] = r.trajectories;
          d["reached_target"] = r.reached_target;
          d["log"] = log_dict(r.log);
          d["greedy_trace"] = g.trace;
          d["greedy_outcome"] = std::string(outcome_name(g.outcome));
          return d;
        },
        py::arg("env"), py::arg("budget") = PPOConfig {}.budget,
        py::arg("seed") = 0, py::arg("target_length") = 0,
        py::arg("hidden") = PolicyShape {}.hidden,
        py::arg("checkpoint") = "");

  m.def("tabular", [](const Env &env, long episodes, std::uint64_t seed) {
    TabularConfig tc;
    tc.episodes = episodes;
    tc.seed = seed;
    const TabularResult r = tabular_q_learning(env, tc);
    py::dict d;
    d["best_len"] = r.best_len;
    d["log"] = log_dict(r.log);
    return d;
  }, py::arg("env"), py::arg("episodes") = 1000, py::arg("seed") = 0);
}
