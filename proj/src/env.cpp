//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/env.h"

#include <algorithm>
#include <cstdio>
#include <tuple>
#include <utility>

#include "rxnrl/canonical.h"
#include "rxnrl/smiles.h"

namespace rxnrl {

const char *outcome_name(Outcome o) noexcept {
  switch (o) {
  case Outcome::kRunning:
    return "running";
  case Outcome::kGoal:
    return "goal";
  case Outcome::kDeadEnd:
    return "dead_end";
  case Outcome::kTimeout:
    return "timeout";
  }
  return "?";
}

std::string format_reward(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", r);
  return buf;
}

std::vector<double> Observation::flatten() const {
  std::vector<double> out(bits.size() + 1, 0.0);
  for (int i = 0; i < bits.size(); ++i)
    out[i] = bits.test(i) ? 1.0 : 0.0;
  out.back() = step_frac;
  return out;
}

// DatasetBackend --------------------------------------------------------------

DatasetBackend::DatasetBackend(std::shared_ptr<const ReactionNetwork> net,
                               int fingerprint_radius, int fingerprint_bits)
    : net_(std::move(net)) {
  const int n = static_cast<int>(net_->species.size());
  by_reactant_.resize(n);
  for (const Reaction &r: net_->reactions) {
    std::vector<int> ids = r.reactants;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id: ids)
      by_reactant_[id].push_back(r.id);
  }
  fps_.reserve(n);
  for (const Species &s: net_->species)
    fps_.push_back(
        morgan_fingerprint(s.graph, fingerprint_radius, fingerprint_bits));
}

std::vector<int> DatasetBackend::default_start() const {
  return net_->principal_initial();
}

// LiveBackend -----------------------------------------------------------------

LiveBackend::LiveBackend(RuleSet rules, SpeciesFilter filter,
                         int fingerprint_radius, int fingerprint_bits)
    : rules_(std::move(rules)), filter_(filter), radius_(fingerprint_radius),
      n_bits_(fingerprint_bits) { }

int LiveBackend::intern(const CanonicalForm &form) {
  auto it = index_.find(form);
  if (it != index_.end())
    return it->second;
  Species s;
  s.id = static_cast<int>(species_.size());
  s.canonical = form;
  s.graph = parse_smiles(form.text);
  s.formula = s.graph.formula();
  s.charge = s.graph.net_charge();
  s.auxiliary = rules_.is_auxiliary(form);
  fps_.push_back(morgan_fingerprint(s.graph, radius_, n_bits_));
  species_.push_back(std::move(s));
  by_reactant_.emplace_back();
  expanded_.push_back(false);
  index_.emplace(form, species_.back().id);
  return species_.back().id;
}

const std::vector<int> &LiveBackend::reactions_of(int id) {
  if (!expanded_[id]) {
    expanded_[id] = true;
    const MolGraph graph = species_[id].graph;
    for (SpeciesReaction &sr: react(graph, rules_, filter_)) {
      Reaction rx;
      rx.id = static_cast<int>(reactions_.size());
      rx.template_id = sr.tmpl->id;
      rx.site_key = std::move(sr.match.site_key);
      rx.reactants = { id };
      for (const auto &f: sr.result.aux_consumed)
        rx.aux_consumed.push_back(intern(f));
      for (const auto &f: sr.result.product_forms)
        rx.products.push_back(intern(f));
      for (const auto &f: sr.result.aux_produced)
        rx.aux_produced.push_back(intern(f));
      std::sort(rx.aux_consumed.begin(), rx.aux_consumed.end());
      std::sort(rx.products.begin(), rx.products.end());
      std::sort(rx.aux_produced.begin(), rx.aux_produced.end());
      by_reactant_[id].push_back(rx.id);
      reactions_.push_back(std::move(rx));
    }
  }
  return by_reactant_[id];
}

// Env -------------------------------------------------------------------------

namespace {

int resolve(EnvBackend &backend, const std::string &smiles,
            const char *what) {
  CanonicalForm form;
  try {
    form = canonicalize(parse_smiles(smiles));
  } catch (const std::exception &e) {
    throw ConfigError(std::string(what) + " '" + smiles + "': " + e.what());
  }
  const int id = backend.intern(form);
  if (id < 0)
    throw ConfigError(std::string(what) + " '" + smiles
                      + "' is not in the network");
  return id;
}

bool contains(const std::vector<int> &sorted_big, std::vector<int> small) {
  std::sort(small.begin(), small.end());
  return std::includes(sorted_big.begin(), sorted_big.end(), small.begin(),
                       small.end());
}

void remove_all(std::vector<int> &sorted, const std::vector<int> &ids) {
  for (int id: ids) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), id);
    sorted.erase(it);
  }
}

void insert_all(std::vector<int> &sorted, const std::vector<int> &ids) {
  for (int id: ids)
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), id), id);
}

} // namespace

Env::Env(std::shared_ptr<EnvBackend> backend, EnvConfig config)
    : backend_(std::move(backend)), config_(std::move(config)) {
  if (!backend_)
    throw ConfigError("no backend");
  if (config_.max_steps < 1)
    throw ConfigError("max_steps must be at least 1");
  if (config_.fingerprint_bits < 1 || config_.fingerprint_radius < 0)
    throw ConfigError("invalid fingerprint parameters");

  std::vector<int> start;
  if (config_.start.empty()) {
    start = backend_->default_start();
    if (start.empty())
      throw ConfigError("no start species");
  } else {
    for (const std::string &s: config_.start)
      start.push_back(resolve(*backend_, s, "start species"));
  }

  if (!config_.goal.empty())
    goal_ = resolve(*backend_, config_.goal, "goal");
  else
    goal_ = backend_->default_goal();

  for (int id: start) {
    if (!backend_->is_auxiliary(id))
      start_species_.push_back(id);
    else
      start_pool_.push_back(id);
  }
  if (start_species_.empty())
    std::swap(start_species_, start_pool_);
  if (config_.aux_pool == AuxPool::kInexhaustible)
    start_pool_.clear();
  std::sort(start_species_.begin(), start_species_.end());
  std::sort(start_pool_.begin(), start_pool_.end());

  if (backend_->fingerprint(start_species_.front()).size()
      != config_.fingerprint_bits)
    throw ConfigError("backend fingerprint length differs from config");
}

Env Env::dataset(std::shared_ptr<const ReactionNetwork> net,
                 EnvConfig config) {
  auto backend = std::make_shared<DatasetBackend>(
      std::move(net), config.fingerprint_radius, config.fingerprint_bits);
  return Env(std::move(backend), std::move(config));
}

Env Env::live(RuleSet rules, SpeciesFilter filter, EnvConfig config) {
  if (config.start.empty())
    throw ConfigError("live backend needs explicit start species");
  auto backend = std::make_shared<LiveBackend>(std::move(rules), filter,
                                               config.fingerprint_radius,
                                               config.fingerprint_bits);
  return Env(std::move(backend), std::move(config));
}

bool Env::has_goal(const std::vector<int> &species) const {
  return goal_ >= 0
         && std::binary_search(species.begin(), species.end(), goal_);
}

double Env::goal_reward(int t) const {
  return config_.rewards.goal_base + 1.0 / std::max(t, 1);
}

std::vector<ActionInstance> Env::compute_actions(const EnvState &s) const {
  std::vector<int> cand;
  for (std::size_t i = 0; i < s.species.size(); ++i) {
    if (i > 0 && s.species[i] == s.species[i - 1])
      continue;
    const std::vector<int> &rs = backend_->reactions_of(s.species[i]);
    cand.insert(cand.end(), rs.begin(), rs.end());
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  using Key = std::tuple<std::string_view, std::string_view,
                         std::vector<std::string_view>, int>;
  std::vector<Key> keys;
  for (int rid: cand) {
    const Reaction &r = backend_->reaction(rid);
    if (!contains(s.species, r.reactants))
      continue;
    if (config_.aux_pool == AuxPool::kCounted
        && !contains(s.pool, r.aux_consumed))
      continue;
    std::vector<std::string_view> forms;
    for (int id: r.reactants)
      forms.push_back(backend_->species(id).canonical.text);
    std::sort(forms.begin(), forms.end());
    keys.emplace_back(r.template_id, r.site_key, std::move(forms), rid);
  }
  std::sort(keys.begin(), keys.end());

  std::vector<ActionInstance> out;
  out.reserve(keys.size());
  for (const Key &k: keys)
    out.push_back({ static_cast<int>(out.size()), std::get<3>(k) });

  if (config_.forbid_revisit && !s.visited.empty()) {
    std::vector<ActionInstance> kept;
    for (const ActionInstance &a: out) {
      EnvState next;
      std::tie(next.species, next.pool) = apply_action_impl(s, a);
      if (!s.visited.contains(state_key(next)))
        kept.push_back({ static_cast<int>(kept.size()), a.reaction });
    }
    out = std::move(kept);
  }
  return out;
}

std::pair<std::vector<int>, std::vector<int>>
Env::apply_action_impl(const EnvState &s, const ActionInstance &a) const {
  const Reaction &r = backend_->reaction(a.reaction);
  std::vector<int> species = s.species;
  std::vector<int> pool = s.pool;
  remove_all(species, r.reactants);
  insert_all(species, r.products);
  if (config_.aux_pool == AuxPool::kCounted) {
    remove_all(pool, r.aux_consumed);
    insert_all(pool, r.aux_produced);
  }
  return { std::move(species), std::move(pool) };
}

void Env::finish(EnvState &s) const {
  s.actions.clear();
  if (has_goal(s.species)) {
    s.outcome = Outcome::kGoal;
    return;
  }
  s.actions = compute_actions(s);
  if (s.actions.empty())
    s.outcome = Outcome::kDeadEnd;
  else if (s.t >= config_.max_steps)
    s.outcome = Outcome::kTimeout;
  else
    s.outcome = Outcome::kRunning;
  if (s.outcome != Outcome::kRunning)
    s.actions.clear();
}

EnvState Env::make_state(std::vector<int> species, std::vector<int> pool,
                         int t) const {
  EnvState s;
  s.species = std::move(species);
  s.pool = std::move(pool);
  std::sort(s.species.begin(), s.species.end());
  std::sort(s.pool.begin(), s.pool.end());
  s.t = t;
  if (config_.forbid_revisit)
    s.visited.insert(state_key(s));
  finish(s);
  return s;
}

StepResult Env::reset(std::uint64_t) const {
  StepResult out;
  out.state = make_state(start_species_, start_pool_, 0);
  switch (out.state.outcome) {
  case Outcome::kGoal:
    out.reward = goal_reward(0);
    break;
  case Outcome::kDeadEnd:
    out.reward = config_.rewards.dead_end;
    break;
  default:
    break;
  }
  out.done = out.state.done();
  return out;
}

std::vector<ActionInstance> Env::legal_actions(const EnvState &s) const {
  if (s.done())
    throw EnvError("legal_actions on a finished episode");
  return s.actions;
}

std::pair<std::vector<int>, std::vector<int>>
Env::apply_action(const EnvState &s, int index) const {
  if (index < 0 || index >= static_cast<int>(s.actions.size()))
    throw EnvError("action index " + std::to_string(index)
                   + " out of range");
  return apply_action_impl(s, s.actions[index]);
}

StepResult Env::step(const EnvState &s, int index) const {
  if (s.done())
    throw EnvError("step on a finished episode");
  StepResult out;
  EnvState &next = out.state;
  std::tie(next.species, next.pool) = apply_action(s, index);
  next.t = s.t + 1;
  if (config_.forbid_revisit) {
    next.visited = s.visited;
    next.visited.insert(state_key(next));
  }
  finish(next);
  switch (next.outcome) {
  case Outcome::kGoal:
    out.reward = goal_reward(next.t);
    break;
  case Outcome::kDeadEnd:
    out.reward = config_.rewards.dead_end;
    break;
  case Outcome::kTimeout:
    out.reward = config_.rewards.timeout;
    break;
  case Outcome::kRunning:
    break;
  }
  out.done = next.done();
  return out;
}

Observation Env::encode_observation(const EnvState &s) const {
  Observation obs;
  obs.bits = Fingerprint(config_.fingerprint_bits);
  for (int id: s.species) {
    if (!backend_->is_auxiliary(id))
      obs.bits |= backend_->fingerprint(id);
  }
  obs.step_frac = static_cast<double>(s.t) / config_.max_steps;
  return obs;
}

Fingerprint Env::afterstate_bits(const EnvState &s, int index) const {
  const auto [species, pool] = apply_action(s, index);
  Fingerprint bits(config_.fingerprint_bits);
  for (int id: species) {
    if (!backend_->is_auxiliary(id))
      bits |= backend_->fingerprint(id);
  }
  return bits;
}

std::string Env::state_key(const EnvState &s) const {
  auto join = [this](const std::vector<int> &ids) {
    std::vector<std::string_view> forms;
    for (int id: ids)
      forms.push_back(backend_->species(id).canonical.text);
    std::sort(forms.begin(), forms.end());
    std::string out;
    for (std::size_t i = 0; i < forms.size(); ++i) {
      if (i > 0)
        out += '.';
      out += forms[i];
    }
    return out;
  };
  std::string key = join(s.species);
  if (config_.aux_pool == AuxPool::kCounted)
    key += '|' + join(s.pool);
  return key;
}

std::string Env::action_label(const ActionInstance &a) const {
  const Reaction &r = backend_->reaction(a.reaction);
  return r.template_id + '@' + r.site_key;
}

std::string Env::trace_line(const EnvState &before, int index,
                            const StepResult &after) const {
  const ActionInstance &a = before.actions.at(index);
  const Reaction &r = backend_->reaction(a.reaction);
  // Sorted by text so that the line does not depend on species ids.
  std::vector<std::string> texts;
  for (int id: r.products)
    texts.push_back(backend_->species(id).canonical.text);
  std::sort(texts.begin(), texts.end());
  std::string products;
  for (const std::string &t: texts) {
    if (!products.empty())
      products += '.';
    products += t;
  }
  return "T " + std::to_string(after.state.t) + ' ' + action_label(a)
         + " -> " + products + " r=" + format_reward(after.reward);
}

} // namespace rxnrl
