//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/canonical.h"

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rxnrl/smiles.h"

namespace rxnrl {
namespace {

// Ranks where tied atoms share the count of strictly smaller keys, so a cell
// of size k at rank r covers [r, r + k).
template <class Key>
std::vector<int> ranks_from_keys(const std::vector<Key> &keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> rank(n);
  for (int k = 0; k < n; ++k) {
    if (k > 0 && keys[idx[k]] == keys[idx[k - 1]])
      rank[idx[k]] = rank[idx[k - 1]];
    else
      rank[idx[k]] = k;
  }
  return rank;
}

int count_classes(const std::vector<int> &rank) {
  std::vector<int> r = rank;
  std::sort(r.begin(), r.end());
  return static_cast<int>(std::unique(r.begin(), r.end()) - r.begin());
}

std::vector<int> initial_ranks(const MolGraph &mol,
                               std::span<const int> labels) {
  using Key = std::tuple<int, int, int, int, int, int>;
  std::vector<Key> keys(mol.size());
  for (int i = 0; i < mol.size(); ++i) {
    const Atom &a = mol.atom(i);
    int doubles = 0;
    for (const Neighbor &nb: mol.neighbors(i))
      doubles += nb.order == BondOrder::kDouble;
    keys[i] = { static_cast<int>(a.element), a.formal_charge, a.implicit_h,
                mol.degree(i), doubles, labels.empty() ? 0 : labels[i] };
  }
  return ranks_from_keys(keys);
}

void refine(const MolGraph &mol, std::vector<int> &rank) {
  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  const int n = mol.size();
  int classes = count_classes(rank);
  std::vector<Key> keys(n);
  while (classes < n) {
    for (int i = 0; i < n; ++i) {
      keys[i].first = rank[i];
      auto &sig = keys[i].second;
      sig.clear();
      for (const Neighbor &nb: mol.neighbors(i))
        sig.emplace_back(rank[nb.atom], static_cast<int>(nb.order));
      std::sort(sig.begin(), sig.end());
    }
    std::vector<int> next = ranks_from_keys(keys);
    const int next_classes = count_classes(next);
    rank = std::move(next);
    if (next_classes == classes)
      break;
    classes = next_classes;
  }
}

class Search {
public:
  Search(const MolGraph &mol, std::span<const int> labels)
      : mol_(mol), labels_(labels) { }

  void run(std::vector<int> rank) {
    refine(mol_, rank);
    descend(rank);
  }

  const std::vector<int> &best_rank() const { return best_rank_; }

private:
  void descend(const std::vector<int> &rank) {
    const int n = mol_.size();
    if (count_classes(rank) == n) {
      std::string s = write_smiles_ranked(mol_, rank, labels_);
      if (best_rank_.empty() || s < best_) {
        best_ = std::move(s);
        best_rank_ = rank;
      }
      return;
    }

    // Target the lowest non-singleton cell.
    std::vector<int> size(n, 0);
    for (int r: rank)
      ++size[r];
    int target = -1;
    for (int r = 0; r < n; ++r) {
      if (size[r] > 1) {
        target = r;
        break;
      }
    }

    for (int v = 0; v < n; ++v) {
      if (rank[v] != target)
        continue;
      std::vector<int> child = rank;
      for (int u = 0; u < n; ++u) {
        if (u != v && rank[u] == target)
          child[u] = target + 1;
      }
      refine(mol_, child);
      descend(child);
    }
  }

  const MolGraph &mol_;
  std::span<const int> labels_;
  std::string best_;
  std::vector<int> best_rank_;
};

} // namespace

std::vector<int> refined_classes(const MolGraph &mol) {
  std::vector<int> rank = initial_ranks(mol, {});
  refine(mol, rank);
  return rank;
}

std::vector<int> canonical_order(const MolGraph &mol,
                                 std::span<const int> labels) {
  const int n = mol.size();
  if (n == 0)
    return {};
  Search search(mol, labels);
  search.run(initial_ranks(mol, labels));
  std::vector<int> order(n);
  const auto &rank = search.best_rank();
  for (int i = 0; i < n; ++i)
    order[rank[i]] = i;
  return order;
}

CanonicalForm canonicalize(const MolGraph &mol) {
  if (!mol.is_connected())
    throw MolError(MolError::Kind::kDisconnected, -1,
                   "canonicalize requires a single connected molecule");
  const std::vector<int> order = canonical_order(mol);
  std::vector<int> rank(order.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i)
    rank[order[i]] = i;
  return { write_smiles_ranked(mol, rank) };
}

std::string canonical_labeled_smiles(const MolGraph &mol,
                                     std::span<const int> labels) {
  const std::vector<int> order = canonical_order(mol, labels);
  std::vector<int> rank(order.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i)
    rank[order[i]] = i;
  return write_smiles_ranked(mol, rank, labels);
}

MolGraph canonical_graph(const MolGraph &mol) {
  const std::vector<int> order = canonical_order(mol);
  return mol.permuted(order);
}

} // namespace rxnrl
