//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/smiles.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace rxnrl {
namespace {

struct ParsedAtom {
  Atom atom;
  bool bracket;
};

struct RingOpen {
  int atom;
  int order; // 0 = unspecified
  int pos;
};

class Parser {
public:
  explicit Parser(std::string_view text): text_(text) { }

  MolGraph parse() {
    if (text_.empty())
      fail(SmilesError::Kind::kSyntax, 0, "empty SMILES");

    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == 'C' || c == 'O') {
        check_two_letter(c);
        add_atom({ c == 'C' ? Element::kC : Element::kO, 0, 0 }, false);
        ++pos_;
      } else if (c == '[') {
        parse_bracket();
      } else if (c == '(') {
        if (prev_ < 0)
          fail(SmilesError::Kind::kSyntax, pos_, "branch before any atom");
        if (pending_ != 0)
          fail(SmilesError::Kind::kSyntax, pos_, "bond before branch");
        branches_.push_back(prev_);
        ++pos_;
      } else if (c == ')') {
        if (branches_.empty())
          fail(SmilesError::Kind::kSyntax, pos_, "unbalanced ')'");
        if (pending_ != 0)
          fail(SmilesError::Kind::kSyntax, pos_, "dangling bond");
        if (text_[pos_ - 1] == '(')
          fail(SmilesError::Kind::kSyntax, pos_, "empty branch");
        prev_ = branches_.back();
        branches_.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=') {
        if (pending_ != 0 || prev_ < 0)
          fail(SmilesError::Kind::kSyntax, pos_, "misplaced bond symbol");
        pending_ = c == '-' ? 1 : 2;
        pending_pos_ = pos_;
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        ring_bond(c - '0', pos_);
        ++pos_;
      } else if (c == '%') {
        if (pos_ + 2 >= text_.size()
            || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))
            || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
          fail(SmilesError::Kind::kSyntax, pos_, "malformed %nn ring number");
        ring_bond((text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0'), pos_);
        pos_ += 3;
      } else if (c == 'c' || c == 'o' || c == 'n' || c == 's' || c == 'p'
                 || c == 'b') {
        fail(SmilesError::Kind::kUnsupported, pos_, "aromatic atoms");
      } else if (c == '#' || c == '$' || c == ':') {
        fail(SmilesError::Kind::kUnsupported, pos_,
             std::string("bond type '") + c + "'");
      } else if (c == '/' || c == '\\' || c == '@') {
        fail(SmilesError::Kind::kUnsupported, pos_, "stereochemistry");
      } else if (c == '.') {
        fail(SmilesError::Kind::kUnsupported, pos_, "disconnected structures");
      } else if (std::isupper(static_cast<unsigned char>(c))
                 || c == '*') {
        fail(SmilesError::Kind::kUnsupported, pos_,
             std::string("element '") + c + "'");
      } else {
        fail(SmilesError::Kind::kSyntax, pos_,
             std::string("unexpected character '") + c + "'");
      }
    }

    if (!branches_.empty())
      fail(SmilesError::Kind::kSyntax, static_cast<int>(text_.size()),
           "unclosed branch");
    if (pending_ != 0)
      fail(SmilesError::Kind::kSyntax, pending_pos_, "dangling bond");
    if (!rings_.empty())
      fail(SmilesError::Kind::kUnmatchedRing, rings_.begin()->second.pos,
           "unmatched ring closure " + std::to_string(rings_.begin()->first));

    return build();
  }

private:
  [[noreturn]] void fail(SmilesError::Kind kind, std::size_t pos,
                         const std::string &reason) const {
    throw SmilesError(kind, static_cast<int>(pos),
                      reason + " at position " + std::to_string(pos));
  }

  void check_two_letter(char c) const {
    if (pos_ + 1 >= text_.size())
      return;
    const char n = text_[pos_ + 1];
    if (c == 'C' && (n == 'l' || n == 'a' || n == 'u' || n == 'o' || n == 'r'))
      fail(SmilesError::Kind::kUnsupported, pos_,
           std::string("element 'C") + n + "'");
    if (c == 'O' && n == 's')
      fail(SmilesError::Kind::kUnsupported, pos_, "element 'Os'");
  }

  void add_atom(Atom atom, bool bracket) {
    const int idx = static_cast<int>(atoms_.size());
    atoms_.push_back({ atom, bracket });
    if (prev_ >= 0)
      add_bond(prev_, idx, pending_ == 0 ? 1 : pending_, pos_);
    pending_ = 0;
    prev_ = idx;
  }

  void add_bond(int a, int b, int order, std::size_t pos) {
    if (a == b)
      fail(SmilesError::Kind::kSyntax, pos, "ring closure to itself");
    for (const Bond &x: bonds_) {
      if ((x.src == a && x.dst == b) || (x.src == b && x.dst == a))
        fail(SmilesError::Kind::kSyntax, pos, "duplicate bond");
    }
    bonds_.push_back(
        { a, b, order == 2 ? BondOrder::kDouble : BondOrder::kSingle });
  }

  void ring_bond(int num, std::size_t pos) {
    if (prev_ < 0)
      fail(SmilesError::Kind::kSyntax, pos, "ring closure before any atom");
    auto it = rings_.find(num);
    if (it == rings_.end()) {
      rings_[num] = { prev_, pending_, static_cast<int>(pos) };
    } else {
      const RingOpen open = it->second;
      rings_.erase(it);
      int order = open.order;
      if (pending_ != 0) {
        if (order != 0 && order != pending_)
          fail(SmilesError::Kind::kSyntax, pos,
               "conflicting ring closure bond orders");
        order = pending_;
      }
      add_bond(open.atom, prev_, order == 0 ? 1 : order, pos);
    }
    pending_ = 0;
  }

  void parse_bracket() {
    const std::size_t start = pos_++;
    auto peek = [&]() -> char {
      return pos_ < text_.size() ? text_[pos_] : '\0';
    };

    if (std::isdigit(static_cast<unsigned char>(peek())))
      fail(SmilesError::Kind::kUnsupported, pos_, "isotopes");

    Atom atom;
    const char e = peek();
    if (e == 'C' || e == 'O') {
      atom.element = e == 'C' ? Element::kC : Element::kO;
      ++pos_;
      const char n = peek();
      if (std::islower(static_cast<unsigned char>(n)))
        fail(SmilesError::Kind::kUnsupported, start,
             std::string("element '") + e + n + "'");
    } else if (e == 'c' || e == 'o') {
      fail(SmilesError::Kind::kUnsupported, pos_, "aromatic atoms");
    } else if (std::isalpha(static_cast<unsigned char>(e)) || e == '*') {
      fail(SmilesError::Kind::kUnsupported, pos_,
           std::string("element '") + e + "'");
    } else {
      fail(SmilesError::Kind::kSyntax, pos_, "missing element in bracket");
    }

    if (peek() == '@')
      fail(SmilesError::Kind::kUnsupported, pos_, "stereochemistry");

    if (peek() == 'H') {
      ++pos_;
      atom.implicit_h = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        atom.implicit_h = peek() - '0';
        ++pos_;
      }
    }

    const char s = peek();
    if (s == '+' || s == '-') {
      const int sign = s == '+' ? 1 : -1;
      ++pos_;
      int mag = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        mag = peek() - '0';
        ++pos_;
      } else {
        while (peek() == s) {
          ++mag;
          ++pos_;
        }
      }
      atom.formal_charge = sign * mag;
      if (mag > 1)
        fail(SmilesError::Kind::kUnsupported, start,
             "formal charge beyond +/-1");
    }

    if (peek() == ':')
      fail(SmilesError::Kind::kUnsupported, pos_, "atom classes");
    if (peek() != ']')
      fail(SmilesError::Kind::kSyntax, pos_, "expected ']'");
    ++pos_;

    add_atom(atom, true);
  }

  MolGraph build() {
    const int n = static_cast<int>(atoms_.size());
    std::vector<int> bond_sum(n, 0);
    for (const Bond &b: bonds_) {
      bond_sum[b.src] += static_cast<int>(b.order);
      bond_sum[b.dst] += static_cast<int>(b.order);
    }
    std::vector<Atom> atoms;
    atoms.reserve(n);
    for (int i = 0; i < n; ++i) {
      Atom a = atoms_[i].atom;
      if (!atoms_[i].bracket) {
        a.implicit_h = standard_valence(a.element, 0) - bond_sum[i];
        if (a.implicit_h < 0)
          throw SmilesError(SmilesError::Kind::kValence, i,
                            "valence violation at atom " + std::to_string(i));
      }
      atoms.push_back(a);
    }
    try {
      return MolGraph(std::move(atoms), std::move(bonds_));
    } catch (const MolError &e) {
      throw SmilesError(SmilesError::Kind::kValence, e.atom(), e.what());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<ParsedAtom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> branches_;
  std::map<int, RingOpen> rings_;
  int prev_ = -1;
  int pending_ = 0;
  std::size_t pending_pos_ = 0;
};

void write_atom(std::string &out, const Atom &a, int atom_class) {
  if (a.formal_charge == 0 && atom_class <= 0) {
    out += element_symbol(a.element);
    return;
  }
  out += '[';
  out += element_symbol(a.element);
  if (a.implicit_h > 0) {
    out += 'H';
    if (a.implicit_h > 1)
      out += std::to_string(a.implicit_h);
  }
  if (a.formal_charge != 0)
    out += a.formal_charge > 0 ? '+' : '-';
  if (atom_class > 0) {
    out += ':';
    out += std::to_string(atom_class);
  }
  out += ']';
}

void write_ring_number(std::string &out, int num) {
  if (num < 10) {
    out += static_cast<char>('0' + num);
  } else {
    out += '%';
    out += std::to_string(num);
  }
}

class Writer {
public:
  Writer(const MolGraph &mol, std::span<const int> rank,
         std::span<const int> classes)
      : mol_(mol), rank_(rank), classes_(classes), n_(mol.size()) { }

  std::string write() {
    if (n_ == 0)
      return {};

    order_nbrs();
    find_tree();

    std::string out;
    out.reserve(4 * n_);
    std::vector<int> digit_of_bond(mol_.bonds().size(), -1);
    std::vector<char> used_digits(100, 0);
    emit(root_, out, digit_of_bond, used_digits);
    return out;
  }

private:
  void order_nbrs() {
    nbrs_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      auto span = mol_.neighbors(i);
      nbrs_[i].assign(span.begin(), span.end());
      std::sort(nbrs_[i].begin(), nbrs_[i].end(),
                [&](const Neighbor &x, const Neighbor &y) {
                  return rank_[x.atom] < rank_[y.atom];
                });
    }
    root_ = static_cast<int>(std::min_element(rank_.begin(), rank_.end())
                             - rank_.begin());
  }

  // DFS over ranked neighbors to classify tree and ring-closure bonds.
  void find_tree() {
    visit_order_.assign(n_, -1);
    parent_bond_.assign(n_, -1);
    children_.assign(n_, {});
    closures_.assign(n_, {});
    int timer = 0;
    std::vector<std::pair<int, std::size_t>> stack;
    visit_order_[root_] = timer++;
    stack.push_back({ root_, 0 });
    std::vector<char> bond_seen(mol_.bonds().size(), 0);
    while (!stack.empty()) {
      auto &[u, next] = stack.back();
      if (next == nbrs_[u].size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = nbrs_[u][next++];
      if (bond_seen[nb.bond])
        continue;
      bond_seen[nb.bond] = 1;
      if (visit_order_[nb.atom] < 0) {
        visit_order_[nb.atom] = timer++;
        parent_bond_[nb.atom] = nb.bond;
        children_[u].push_back(nb);
        stack.push_back({ nb.atom, 0 });
      } else {
        // Ring closure from descendant u back to ancestor nb.atom. Both ends
        // emit the digit; the ancestor opens it.
        closures_[nb.atom].push_back(nb.bond);
        closures_[u].push_back(nb.bond);
      }
    }
  }

  void emit(int u, std::string &out, std::vector<int> &digit_of_bond,
            std::vector<char> &used) {
    write_atom(out, mol_.atom(u), classes_.empty() ? 0 : classes_[u]);

    // Ring closures at u, in the order the partner atoms appear in the
    // ranked neighbor list.
    std::vector<int> &cl = closures_[u];
    std::sort(cl.begin(), cl.end(), [&](int x, int y) {
      const Bond &bx = mol_.bonds()[x];
      const Bond &by = mol_.bonds()[y];
      return rank_[bx.other(u)] < rank_[by.other(u)];
    });
    // Closings first (their digits were opened earlier), then openings.
    for (int pass = 0; pass < 2; ++pass) {
      for (int b: cl) {
        const bool opened = digit_of_bond[b] >= 0;
        if ((pass == 0) != opened)
          continue;
        if (opened) {
          write_ring_number(out, digit_of_bond[b]);
          used[digit_of_bond[b]] = 0;
        } else {
          int d = 1;
          while (used[d])
            ++d;
          used[d] = 1;
          digit_of_bond[b] = d;
          if (mol_.bonds()[b].order == BondOrder::kDouble)
            out += '=';
          write_ring_number(out, d);
        }
      }
    }

    const auto &kids = children_[u];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const bool last = k + 1 == kids.size();
      if (!last)
        out += '(';
      if (kids[k].order == BondOrder::kDouble)
        out += '=';
      emit(kids[k].atom, out, digit_of_bond, used);
      if (!last)
        out += ')';
    }
  }

  const MolGraph &mol_;
  std::span<const int> rank_;
  std::span<const int> classes_;
  int n_;
  int root_ = 0;
  std::vector<std::vector<Neighbor>> nbrs_;
  std::vector<int> visit_order_;
  std::vector<int> parent_bond_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<int>> closures_;
};

} // namespace

MolGraph parse_smiles(std::string_view text) {
  return Parser(text).parse();
}

std::string write_smiles_ranked(const MolGraph &mol, std::span<const int> rank,
                                std::span<const int> classes) {
  return Writer(mol, rank, classes).write();
}

std::string write_smiles(const MolGraph &mol) {
  std::vector<int> rank(mol.size());
  std::iota(rank.begin(), rank.end(), 0);
  return write_smiles_ranked(mol, rank);
}

} // namespace rxnrl
