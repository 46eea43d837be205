//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "../fixtures.h"
#include "rxnrl/random.h"
#include "rxnrl/rules.h"

namespace rxnrl {
namespace {

using namespace rxnrl::testing;

const ReactionTemplate &tmpl(const char *id) {
  const ReactionTemplate *t = default_catalog().find(id);
  if (!t)
    throw std::runtime_error(std::string("missing template ") + id);
  return *t;
}

std::set<std::string> offspring(const ReactionTemplate &t, const MolGraph &m) {
  std::set<std::string> out;
  for (const Match &match: find_matches(t, m)) {
    std::string key;
    for (const CanonicalForm &f: apply(t, m, match).product_forms)
      key += f.text + " ";
    out.insert(key);
  }
  return out;
}

TEST(Rules, CatalogCoversAllNineRules) {
  std::set<char> letters;
  for (const ReactionTemplate &t: default_catalog().templates())
    letters.insert(t.id.front());
  EXPECT_EQ(letters, (std::set<char> { 'a', 'b', 'c', 'd', 'e', 'f', 'g',
                                       'h', 'i' }));
}

TEST(Rules, CatalogTextRoundTrip) {
  const RuleSet &r = default_catalog();
  const RuleSet back = parse_catalog(catalog_to_text(r));
  EXPECT_EQ(catalog_to_text(back), catalog_to_text(r));
  EXPECT_EQ(back.hash(), r.hash());
}

TEST(Rules, CatalogErrorsCarryLine) {
  try {
    parse_catalog("template z1\nname x\natom 0 Q\nend\n");
    FAIL();
  } catch (const CatalogError &e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Rules, ProtonationOfFructoseHasSixSites) {
  const MolGraph f = parse_smiles(kFructose);
  EXPECT_EQ(find_matches(tmpl("a1"), f).size(), 6u);
  EXPECT_EQ(offspring(tmpl("a1"), f).size(), 6u);
}

TEST(Rules, ProtonationOfWaterHasOneSite) {
  EXPECT_EQ(find_matches(tmpl("a1"), parse_smiles("O")).size(), 1u);
}

TEST(Rules, NoDehydrationOnMethane) {
  for (const ReactionTemplate &t: default_catalog().templates())
    if (t.id.front() == 'b') {
      EXPECT_TRUE(find_matches(t, parse_smiles("C")).empty()) << t.id;
    }
}

TEST(Rules, DistinctSitesDistinctOffspring) {
  const MolGraph f = parse_smiles(kFructose);
  const auto matches = find_matches(tmpl("a1"), f);
  std::set<std::string> products;
  for (const Match &m: matches)
    products.insert(apply(tmpl("a1"), f, m).product_forms.front().text);
  EXPECT_EQ(products.size(), matches.size());
}

TEST(Rules, DeprotonationOfHydronium) {
  const MolGraph h = parse_smiles("[OH3+]");
  const auto matches = find_matches(tmpl("a2"), h);
  ASSERT_EQ(matches.size(), 1u);
  const ApplyResult r = apply(tmpl("a2"), h, matches.front());
  ASSERT_EQ(r.product_forms.size(), 1u);
  EXPECT_EQ(r.product_forms.front().text, "O");
  EXPECT_EQ(r.aux_produced, std::vector<CanonicalForm> { { "[OH3+]" } });
}

TEST(Rules, SortedDeterministicMatches) {
  const MolGraph f = parse_smiles(kFructose);
  for (const ReactionTemplate &t: default_catalog().templates()) {
    const auto a = find_matches(t, f);
    const auto b = find_matches(t, f);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].site_key, b[i].site_key);
      if (i > 0) {
        EXPECT_LT(a[i - 1].site_key, a[i].site_key);
      }
    }
  }
}

bool brute_ok(const Pattern &p, const MolGraph &m,
              const std::vector<int> &map) {
  for (int i = 0; i < p.size(); ++i)
    if (!p.atoms[i].matches(m, map[i]))
      return false;
  for (const BondConstraint &b: p.bonds) {
    const int x = map[b.src], y = map[b.dst];
    if (m.bond_order(x, y) != static_cast<int>(b.order))
      return false;
    if (b.ring == RingPredicate::kRing && !m.bond_in_ring(x, y))
      return false;
    if (b.ring == RingPredicate::kChain && m.bond_in_ring(x, y))
      return false;
  }
  return true;
}

void brute(const Pattern &p, const MolGraph &m, std::vector<int> &map,
           std::vector<bool> &used, std::set<std::vector<int>> &out) {
  if (static_cast<int>(map.size()) == p.size()) {
    if (brute_ok(p, m, map))
      out.insert(map);
    return;
  }
  for (int a = 0; a < m.size(); ++a) {
    if (used[a])
      continue;
    used[a] = true;
    map.push_back(a);
    brute(p, m, map, used, out);
    map.pop_back();
    used[a] = false;
  }
}

TEST(Rules, MatcherAgreesWithBruteForce) {
  const auto net = fructose_network();
  Rng rng(11);
  int molecules = 0;
  for (const Species &s: net->species) {
    if (s.graph.size() > 8 || rng.uniform() > 0.3)
      continue;
    ++molecules;
    for (const ReactionTemplate &t: default_catalog().templates()) {
      if (t.pattern.size() > 4)
        continue;
      std::set<std::vector<int>> want;
      std::vector<int> map;
      std::vector<bool> used(s.graph.size());
      brute(t.pattern, s.graph, map, used, want);
      const auto got_list = find_mappings(t.pattern, s.graph);
      const std::set<std::vector<int>> got(got_list.begin(), got_list.end());
      EXPECT_EQ(got, want) << t.id << " on " << s.canonical.text;
      EXPECT_EQ(got.size(), got_list.size());
    }
  }
  EXPECT_GT(molecules, 10);
}

TEST(Rules, AutomorphicSitesGiveIsomorphicProducts) {
  const auto net = fructose_network();
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const Species &s = net->species[rng.below(net->species.size())];
    for (const ReactionTemplate &t: default_catalog().templates()) {
      std::map<std::string, std::set<std::string>> by_site;
      for (const auto &mapping: find_mappings(t.pattern, s.graph)) {
        Match m { t.id, mapping, site_key(s.graph, mapping) };
        std::string prod;
        try {
          for (const CanonicalForm &f: apply(t, s.graph, m).product_forms)
            prod += f.text + " ";
        } catch (const ApplyError &) {
          prod = "<rejected>";
        }
        by_site[m.site_key].insert(prod);
      }
      for (const auto &[site, prods]: by_site)
        EXPECT_EQ(prods.size(), 1u) << t.id << "@" << site;
    }
  }
}

TEST(Rules, BalanceFuzz) {
  const auto net = fructose_network();
  const auto &templates = default_catalog().templates();
  Rng rng(2024);
  int applied = 0;
  for (int attempt = 0; applied < 1000 && attempt < 100000; ++attempt) {
    const Species &s = net->species[rng.below(net->species.size())];
    const ReactionTemplate &t = templates[rng.below(templates.size())];
    const auto matches = find_matches(t, s.graph);
    if (matches.empty())
      continue;
    const Match &m = matches[rng.below(matches.size())];
    ApplyResult r;
    try {
      r = apply(t, s.graph, m);
    } catch (const ApplyError &e) {
      ASSERT_NE(e.kind(), ApplyError::Kind::kBalance) << e.what();
      continue;
    }
    EXPECT_NO_THROW(check_balance(s.graph, r));
    ++applied;
  }
  EXPECT_EQ(applied, 1000);
}

TEST(Rules, ReversePairsRestoreOriginals) {
  const auto net = fructose_network();
  int checked = 0;
  for (const Reaction &rx: net->reactions) {
    const ReactionTemplate &t = tmpl(rx.template_id.c_str());
    if (t.reverse_id.empty() || rx.products.size() != 1)
      continue;
    const ReactionTemplate &back = tmpl(t.reverse_id.c_str());
    const MolGraph &p = net->species[rx.products.front()].graph;
    bool restored = false;
    for (const Match &m: find_matches(back, p)) {
      try {
        const ApplyResult r = apply(back, p, m);
        if (r.product_forms.size() == 1
            && r.product_forms.front()
                   == net->species[rx.reactants.front()].canonical)
          restored = true;
      } catch (const ApplyError &) {
      }
    }
    EXPECT_TRUE(restored) << rx.template_id << "@" << rx.site_key;
    if (++checked == 400)
      break;
  }
  EXPECT_EQ(checked, 400);
}

TEST(Rules, EnumerateEmpty) {
  EXPECT_TRUE(enumerate_reactions(default_catalog(), {}).empty());
}

TEST(Rules, EnumerateFructoseWaterHydronium) {
  const RuleSet only_a = default_catalog().subset(std::vector<std::string> {
      "a" });
  const std::vector<MolGraph> sp = fructose_initial();
  const auto rx = enumerate_reactions(only_a, sp);
  int fructose_protonations = 0, water_protonations = 0;
  for (const ReactionInstance &r: rx) {
    if (r.template_id == "a1" && r.reactants == std::vector<int> { 0 })
      ++fructose_protonations;
    if (r.template_id == "a1" && r.reactants == std::vector<int> { 1 })
      ++water_protonations;
  }
  EXPECT_EQ(fructose_protonations, 6);
  EXPECT_EQ(water_protonations, 1);
  EXPECT_EQ(rx.size(), std::size_t(8));
  for (std::size_t i = 1; i < rx.size(); ++i)
    EXPECT_LE(std::tie(rx[i - 1].template_id, rx[i - 1].site_key),
              std::tie(rx[i].template_id, rx[i].site_key));
}

// Every dehydration (rule b) instance available on HMF, frozen once.
TEST(Rules, HmfDehydrationFixture) {
  const RuleSet only_b = default_catalog().subset(std::vector<std::string> {
      "b" });
  const std::vector<MolGraph> sp { parse_smiles(kHmf) };
  std::vector<std::string> got;
  for (const ReactionInstance &r: enumerate_reactions(only_b, sp))
    got.push_back(r.template_id + "@" + r.site_key);
  // Dehydration needs a protonated hydroxyl; HMF has none.
  EXPECT_TRUE(got.empty());
}

TEST(Rules, HmfFullCatalogFixture) {
  const std::vector<MolGraph> sp { parse_smiles(kHmf) };
  std::vector<std::string> got;
  for (const ReactionInstance &r: enumerate_reactions(default_catalog(), sp))
    got.push_back(r.template_id + "@" + r.site_key);
  EXPECT_EQ(got, (std::vector<std::string> {
                     "a1@C1(C=O)=CC=C(CO)[O:1]1",
                     "a1@C1(C=O)=CC=C(C[OH:1])O1",
                     "a1@C1(C=[O:1])=CC=C(CO)O1",
                 }));
}

} // namespace
} // namespace rxnrl
