//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

#include <gtest/gtest.h>

#include "../fixtures.h"
#include "rxnrl/hash.h"
#include "rxnrl/network.h"
#include "rxnrl/rules.h"

namespace rxnrl {
namespace {

using namespace rxnrl::testing;

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path()
          / ("rxnrl_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

RuleSet only(const char *letters) {
  std::vector<std::string> p;
  for (const char *c = letters; *c; ++c)
    p.emplace_back(1, *c);
  return default_catalog().subset(p);
}

TEST(Network, WaterHydroniumLoop) {
  const ReactionNetwork net =
      expand({ parse_smiles(kWater), parse_smiles(kHydronium) }, only("a"),
             SpeciesFilter {});
  EXPECT_EQ(net.species.size(), 2u);
  EXPECT_EQ(net.reactions.size(), 2u);
  EXPECT_EQ(net.termination, Termination::kFixpoint);
}

TEST(Network, EmptyRuleset) {
  const ReactionNetwork net =
      expand({ parse_smiles(kFructose) }, RuleSet {}, SpeciesFilter {});
  EXPECT_EQ(net.species.size(), 1u);
  EXPECT_TRUE(net.reactions.empty());
  const NetworkStats st = stats(net);
  EXPECT_EQ(st.states, 1);
  EXPECT_EQ(st.dead_end_states, 1);
}

TEST(Network, InvalidInitial) {
  EXPECT_THROW(expand({}, default_catalog(), SpeciesFilter {}),
               NetworkError);
  Atom c, o;
  c.element = Element::kC;
  c.implicit_h = 4;
  o.element = Element::kO;
  o.implicit_h = 2;
  const MolGraph methane_and_water({ c, o }, {});
  EXPECT_THROW(expand({ methane_and_water }, default_catalog(),
                      SpeciesFilter {}),
               NetworkError);
}

TEST(Network, FructoseFixpoint) {
  const auto net = fructose_network();
  EXPECT_EQ(net->termination, Termination::kFixpoint);
  EXPECT_EQ(static_cast<int>(net->species.size()), kFructoseSpecies);
  EXPECT_EQ(static_cast<int>(net->reactions.size()), kFructoseReactions);
  EXPECT_GE(net->find_smiles(kHmf), 0);
  EXPECT_EQ(net->goal_id, net->find_smiles(kHmf));
  const SpeciesFilter filter;
  for (const Species &s: net->species)
    EXPECT_TRUE(filter.accepts(s.graph)) << s.canonical.text;
}

TEST(Network, ReactionsAreBalancedAndUnique) {
  const auto net = fructose_network();
  std::set<std::tuple<std::string, std::string, std::vector<int>>> seen;
  for (const Reaction &r: net->reactions) {
    Formula lhs, rhs;
    int ql = 0, qr = 0;
    for (int id: r.reactants) {
      lhs += net->species[id].formula;
      ql += net->species[id].charge;
    }
    for (int id: r.aux_consumed) {
      lhs += net->species[id].formula;
      ql += net->species[id].charge;
    }
    for (int id: r.products) {
      rhs += net->species[id].formula;
      qr += net->species[id].charge;
    }
    for (int id: r.aux_produced) {
      rhs += net->species[id].formula;
      qr += net->species[id].charge;
    }
    EXPECT_EQ(lhs, rhs) << r.id;
    EXPECT_EQ(ql, qr) << r.id;
    EXPECT_TRUE(seen.insert({ r.template_id, r.site_key, r.reactants }).second);
  }
}

TEST(Network, EveryReactionRederivable) {
  const auto net = fructose_network();
  for (const Reaction &r: net->reactions) {
    const ReactionTemplate *t = default_catalog().find(r.template_id);
    ASSERT_NE(t, nullptr);
    const MolGraph &mol = net->species[r.reactants.front()].graph;
    bool ok = false;
    for (const Match &m: find_matches(*t, mol)) {
      if (m.site_key != r.site_key)
        continue;
      const ApplyResult res = apply(*t, mol, m);
      std::vector<CanonicalForm> want;
      for (int id: r.products)
        want.push_back(net->species[id].canonical);
      std::sort(want.begin(), want.end());
      ok = want == res.product_forms;
    }
    EXPECT_TRUE(ok) << r.template_id << "@" << r.site_key;
  }
}

TEST(Network, ReExpansionAddsNothing) {
  const auto net = fructose_network();
  std::vector<MolGraph> all;
  for (const Species &s: net->species)
    all.push_back(s.graph);
  const ReactionNetwork again =
      expand(all, default_catalog(), SpeciesFilter {});
  EXPECT_EQ(again.species.size(), net->species.size());
  EXPECT_EQ(again.reactions.size(), net->reactions.size());
  for (const Species &s: again.species)
    EXPECT_GE(net->find(s.canonical), 0);
}

TEST(Network, SpeciesLimitIsMonotone) {
  ExpandLimits small, larger;
  small.max_species = 50;
  larger.max_species = 200;
  const ReactionNetwork a =
      expand(fructose_initial(), default_catalog(), SpeciesFilter {}, small);
  const ReactionNetwork b =
      expand(fructose_initial(), default_catalog(), SpeciesFilter {}, larger);
  EXPECT_EQ(a.termination, Termination::kSpeciesLimit);
  for (const Species &s: a.species)
    EXPECT_GE(b.find(s.canonical), 0) << s.canonical.text;
}

TEST(Network, ReverseIsInvolution) {
  const auto net = fructose_network();
  const ReactionNetwork rev = reverse(*net);
  EXPECT_EQ(reverse(rev).to_text(), net->to_text());
  EXPECT_EQ(rev.species.size(), net->species.size());
  EXPECT_EQ(rev.goal_id, net->find_smiles(kFructose));
  EXPECT_EQ(rev.principal_initial(),
            std::vector<int> { net->find_smiles(kHmf) });
}

TEST(Network, ReverseOfLoopIsLoop) {
  const ReactionNetwork net =
      expand({ parse_smiles(kWater), parse_smiles(kHydronium) }, only("a"),
             SpeciesFilter {});
  const ReactionNetwork rev = reverse(net);
  EXPECT_EQ(rev.species.size(), 2u);
  EXPECT_EQ(rev.reactions.size(), 2u);
  std::set<std::pair<int, int>> a, b;
  for (const Reaction &r: net.reactions)
    a.insert({ r.reactants.front(), r.products.front() });
  for (const Reaction &r: rev.reactions)
    b.insert({ r.reactants.front(), r.products.front() });
  EXPECT_EQ(a, b);
}

TEST(Network, SaveLoadRoundTrip) {
  const auto net = fructose_network();
  const std::string p1 = temp_path("a.net"), p2 = temp_path("b.net");
  net->save(p1);
  const ReactionNetwork back = ReactionNetwork::load(p1);
  back.save(p2);
  EXPECT_EQ(back, *net);
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  const std::string s1((std::istreambuf_iterator<char>(f1)), {});
  const std::string s2((std::istreambuf_iterator<char>(f2)), {});
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(s1.rfind("RXNNET 1 ", 0), 0u);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

NetworkError::Kind load_error(const std::string &text) {
  try {
    ReactionNetwork::from_text(text);
  } catch (const NetworkError &e) {
    return e.kind();
  }
  ADD_FAILURE() << "loaded";
  return NetworkError::Kind::kIo;
}

TEST(Network, TruncatedFileIsChecksumError) {
  const std::string text = chain_network(3)->to_text();
  EXPECT_EQ(load_error(text.substr(0, text.size() / 2)),
            NetworkError::Kind::kChecksum);
  std::string flipped = text;
  flipped[text.find("S 1")] = 'X';
  EXPECT_EQ(load_error(flipped), NetworkError::Kind::kChecksum);
}

TEST(Network, VersionMismatch) {
  std::string text = chain_network(2)->to_text();
  text.replace(0, 8, "RXNNET 9");
  // Checksum still covers the header, so re-sign it.
  const std::size_t ck = text.rfind("CK ");
  text = text.substr(0, ck);
  text += "CK " + to_hex(fnv1a(text)) + "\n";
  EXPECT_EQ(load_error(text), NetworkError::Kind::kVersion);
}

TEST(Network, CatalogMismatchFlag) {
  const std::string path = temp_path("mismatch.net");
  ReactionNetwork net = *chain_network(2);
  net.catalog_hash = 0x1234;
  net.save(path);
  EXPECT_TRUE(
      ReactionNetwork::load(path, default_catalog().hash()).catalog_mismatch);
  EXPECT_FALSE(ReactionNetwork::load(path, 0x1234).catalog_mismatch);
  std::remove(path.c_str());
}

TEST(Network, MissingFile) {
  try {
    ReactionNetwork::load(temp_path("nope.net"));
    FAIL();
  } catch (const NetworkError &e) {
    EXPECT_EQ(e.kind(), NetworkError::Kind::kIo);
  }
}

TEST(Network, FilterDescriptor) {
  const SpeciesFilter f = SpeciesFilter::parse("charge=0..1,heavy<=13");
  EXPECT_EQ(f, SpeciesFilter {});
  EXPECT_EQ(SpeciesFilter::parse(f.descriptor()), f);
  EXPECT_THROW(SpeciesFilter::parse("charge=zero"), std::invalid_argument);
  EXPECT_FALSE(f.accepts(parse_smiles("C[O-]")));
  EXPECT_FALSE(f.accepts(parse_smiles("CCCCCCCCCCCCCC")));
}

TEST(Network, StatsForwardAndReverseDiffer) {
  const NetworkStats fwd = stats(*fructose_network());
  const NetworkStats rev = stats(*reversed_fructose_network());
  EXPECT_EQ(fwd.species, kFructoseSpecies);
  EXPECT_EQ(fwd.reactions, kFructoseReactions);
  EXPECT_NE(fwd.states, rev.states);
  EXPECT_EQ(fwd.states, 1811);
  EXPECT_EQ(fwd.dead_end_states, 2);
  EXPECT_EQ(fwd.max_out_degree, 8);
  EXPECT_EQ(rev.states, 52);
  EXPECT_EQ(rev.dead_end_states, 0);
  EXPECT_EQ(rev.max_out_degree, 7);
}

TEST(Network, StatsOfLoop) {
  const ReactionNetwork net =
      expand({ parse_smiles(kWater), parse_smiles(kHydronium) }, only("a"),
             SpeciesFilter {});
  const NetworkStats st = stats(net);
  EXPECT_EQ(st.dead_end_states, 0);
  EXPECT_EQ(st.max_out_degree, 1);
}

} // namespace
} // namespace rxnrl
