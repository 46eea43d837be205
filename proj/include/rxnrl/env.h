//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_ENV_H_
#define RXNRL_ENV_H_

#include <cstdint>
#include <deque>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rxnrl/fingerprint.h"
#include "rxnrl/network.h"
#include "rxnrl/rules.h"

namespace rxnrl {

enum class AuxPool : std::uint8_t {
  // Auxiliary species are always available and never tracked.
  kInexhaustible,
  // Auxiliary species are counted; consumed ones must be present.
  kCounted,
};

enum class Outcome : std::uint8_t {
  kRunning,
  kGoal,
  kDeadEnd,
  kTimeout,
};

const char *outcome_name(Outcome o) noexcept;

struct Rewards {
  double goal_base = 1.0; // plus 1/T
  double dead_end = -1.0;
  double timeout = -1.0;
};

struct EnvConfig {
  // SMILES of the start species. Empty: the network's principal initial
  // species (dataset backend only).
  std::vector<std::string> start;
  // SMILES of the goal. Empty: the network goal; with no network goal the
  // episode can only end by dead end or timeout.
  std::string goal;
  int max_steps = 20;
  Rewards rewards;
  AuxPool aux_pool = AuxPool::kInexhaustible;
  // Masks actions whose successor was already visited in the episode.
  bool forbid_revisit = false;
  int fingerprint_radius = kDefaultRadius;
  int fingerprint_bits = kDefaultFingerprintBits;
};

class ConfigError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class EnvError: public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Species and reactions as seen by the environment. Dataset backends are
// immutable views of a network; live backends grow lazily.
class EnvBackend {
public:
  virtual ~EnvBackend() = default;

  // -1 when the species is unknown (dataset) -- live backends add it.
  virtual int intern(const CanonicalForm &form) = 0;
  virtual const Species &species(int id) = 0;
  virtual bool is_auxiliary(int id) = 0;
  // Reactions with the species among their reactants, ascending ids.
  virtual const std::vector<int> &reactions_of(int id) = 0;
  virtual const Reaction &reaction(int id) = 0;
  virtual const Fingerprint &fingerprint(int id) = 0;
  virtual int species_count() const = 0;

  virtual bool is_live() const noexcept = 0;
  // Network defaults used when the config leaves start/goal empty.
  virtual std::vector<int> default_start() const { return {}; }
  virtual int default_goal() const { return -1; }
};

class DatasetBackend: public EnvBackend {
public:
  DatasetBackend(std::shared_ptr<const ReactionNetwork> net,
                 int fingerprint_radius = kDefaultRadius,
                 int fingerprint_bits = kDefaultFingerprintBits);

  int intern(const CanonicalForm &form) override { return net_->find(form); }
  const Species &species(int id) override { return net_->species[id]; }
  bool is_auxiliary(int id) override { return net_->species[id].auxiliary; }
  const std::vector<int> &reactions_of(int id) override {
    return by_reactant_[id];
  }
  const Reaction &reaction(int id) override { return net_->reactions[id]; }
  const Fingerprint &fingerprint(int id) override { return fps_[id]; }
  int species_count() const override {
    return static_cast<int>(net_->species.size());
  }
  bool is_live() const noexcept override { return false; }
  std::vector<int> default_start() const override;
  int default_goal() const override { return net_->goal_id; }

  const ReactionNetwork &network() const noexcept { return *net_; }

private:
  std::shared_ptr<const ReactionNetwork> net_;
  std::vector<std::vector<int>> by_reactant_;
  std::vector<Fingerprint> fps_;
};

// Applies the rule catalog on demand. Species reached by the same
// reactions get the same canonical forms as in an expanded network, but ids
// follow discovery order.
class LiveBackend: public EnvBackend {
public:
  LiveBackend(RuleSet rules, SpeciesFilter filter,
              int fingerprint_radius = kDefaultRadius,
              int fingerprint_bits = kDefaultFingerprintBits);

  int intern(const CanonicalForm &form) override;
  const Species &species(int id) override { return species_[id]; }
  bool is_auxiliary(int id) override { return species_[id].auxiliary; }
  const std::vector<int> &reactions_of(int id) override;
  const Reaction &reaction(int id) override { return reactions_[id]; }
  const Fingerprint &fingerprint(int id) override { return fps_[id]; }
  int species_count() const override {
    return static_cast<int>(species_.size());
  }
  bool is_live() const noexcept override { return true; }

  const RuleSet &rules() const noexcept { return rules_; }

private:
  RuleSet rules_;
  SpeciesFilter filter_;
  int radius_;
  int n_bits_;
  std::deque<Species> species_;
  std::deque<Reaction> reactions_;
  std::deque<Fingerprint> fps_;
  std::deque<std::vector<int>> by_reactant_;
  std::vector<bool> expanded_;
  std::map<CanonicalForm, int> index_;
};

struct ActionInstance {
  int index = 0;
  int reaction = 0;
};

struct EnvState {
  // Sorted multisets of species ids. `pool` holds auxiliary species and is
  // only used with AuxPool::kCounted.
  std::vector<int> species;
  std::vector<int> pool;
  int t = 0;
  Outcome outcome = Outcome::kRunning;
  // Legal actions in deterministic order; empty once done.
  std::vector<ActionInstance> actions;
  // State keys visited in this episode; only tracked with forbid_revisit.
  std::set<std::string> visited;

  bool done() const noexcept { return outcome != Outcome::kRunning; }
};

struct Observation {
  Fingerprint bits;
  double step_frac = 0.0;

  // bits followed by step_frac.
  std::vector<double> flatten() const;
};

struct StepResult {
  EnvState state;
  double reward = 0.0;
  bool done = false;
};

/**
 * Episodic MDP over a reaction network. The environment itself holds no
 * episode state: every operation takes an EnvState and returns a new one,
 * so one Env can serve any number of concurrent episodes (dataset backend).
 *
 * Rewards: reaching the goal at step T gives goal_base + 1/T; a successor
 * without legal actions gives dead_end (checked before the horizon); step M
 * without the goal gives timeout; every other step gives 0. A start that
 * already contains the goal ends at reset with goal_base + 1.
 */
class Env {
public:
  // Throws ConfigError for invalid configurations, including a start or goal
  // that is absent from a dataset network.
  Env(std::shared_ptr<EnvBackend> backend, EnvConfig config);

  static Env dataset(std::shared_ptr<const ReactionNetwork> net,
                     EnvConfig config = {});
  static Env live(RuleSet rules, SpeciesFilter filter, EnvConfig config);

  const EnvConfig &config() const noexcept { return config_; }
  EnvBackend &backend() const noexcept { return *backend_; }
  int goal_id() const noexcept { return goal_; }

  // The seed is accepted for interface stability; transitions are
  // deterministic.
  StepResult reset(std::uint64_t seed = 0) const;

  // Throws EnvError on a done state or an out-of-range index.
  StepResult step(const EnvState &state, int action_index) const;

  // Copy of state.actions; throws EnvError on a done state.
  std::vector<ActionInstance> legal_actions(const EnvState &state) const;

  Observation encode_observation(const EnvState &state) const;
  Fingerprint afterstate_bits(const EnvState &state, int action_index) const;

  // Builds a state at step t; outcome follows from goal, actions and t.
  EnvState make_state(std::vector<int> species, std::vector<int> pool,
                      int t) const;
  // Species and pool after applying the action, without reward logic.
  std::pair<std::vector<int>, std::vector<int>>
  apply_action(const EnvState &state, int action_index) const;

  // Sorted canonical forms joined with '.', plus "|pool" in counted mode.
  std::string state_key(const EnvState &state) const;
  std::string action_label(const ActionInstance &a) const;
  // `T <t> <template>@<site> -> <products> r=<reward>`, products sorted
  // and joined with '.'.
  std::string trace_line(const EnvState &before, int action_index,
                         const StepResult &after) const;

private:
  std::vector<ActionInstance> compute_actions(const EnvState &state) const;
  std::pair<std::vector<int>, std::vector<int>>
  apply_action_impl(const EnvState &state, const ActionInstance &a) const;
  void finish(EnvState &state) const;
  bool has_goal(const std::vector<int> &species) const;
  double goal_reward(int t) const;

  std::shared_ptr<EnvBackend> backend_;
  EnvConfig config_;
  std::vector<int> start_species_;
  std::vector<int> start_pool_;
  int goal_ = -1;
};

// Formats a reward the way traces and logs print it ("1.2", "-1", "0").
std::string format_reward(double r);

} // namespace rxnrl

#endif // RXNRL_ENV_H_
