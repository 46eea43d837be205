//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rxnrl/canonical.h"
#include "rxnrl/hash.h"
#include "rxnrl/rules.h"
#include "rxnrl/smiles.h"

namespace rxnrl {

extern const char *const kDefaultCatalogText;

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
      ++i;
    const std::size_t j = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t')
      ++i;
    if (i > j)
      out.push_back(line.substr(j, i - j));
  }
  return out;
}

class CatalogParser {
public:
  explicit CatalogParser(std::string_view text): text_(text) { }

  RuleSet parse() {
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t eol = text_.find('\n', pos);
      if (eol == std::string_view::npos)
        eol = text_.size();
      std::string_view line = text_.substr(pos, eol - pos);
      ++line_no_;
      if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
      handle(line);
      pos = eol + 1;
    }
    if (open_)
      fail("missing 'end' for template " + cur_.id);
    try {
      return RuleSet(std::move(templates_));
    } catch (const std::invalid_argument &e) {
      fail(e.what());
    }
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw CatalogError(line_no_, msg);
  }

  int to_int(std::string_view s) const {
    if (!s.empty() && s.front() == '+')
      s.remove_prefix(1);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      fail("expected integer, got '" + std::string(s) + "'");
    return v;
  }

  std::string rest_after(std::string_view line, std::string_view key) const {
    std::size_t p = line.find(key) + key.size();
    while (p < line.size() && (line[p] == ' ' || line[p] == '\t'))
      ++p;
    return std::string(line.substr(p));
  }

  Element to_element(std::string_view s) const {
    if (s == "C")
      return Element::kC;
    if (s == "O")
      return Element::kO;
    fail("unknown element '" + std::string(s) + "'");
  }

  RingPredicate to_ring(std::string_view s) const {
    if (s == "yes")
      return RingPredicate::kRing;
    if (s == "no")
      return RingPredicate::kChain;
    fail("ring= expects yes or no");
  }

  CanonicalForm to_species(std::string_view s) const {
    try {
      return canonicalize(parse_smiles(s));
    } catch (const std::exception &e) {
      fail(std::string("bad species SMILES: ") + e.what());
    }
  }

  int atom_index(std::string_view s) const {
    const int i = to_int(s);
    if (i < 0 || i >= static_cast<int>(cur_.pattern.atoms.size()))
      fail("atom index out of range");
    return i;
  }

  void handle(std::string_view line) {
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#')
      return;
    const std::string_view key = tok[0];

    if (key == "template") {
      if (open_)
        fail("nested template");
      if (tok.size() != 2)
        fail("template expects an id");
      cur_ = ReactionTemplate {};
      cur_.id = std::string(tok[1]);
      open_ = true;
      return;
    }
    if (!open_)
      fail("'" + std::string(key) + "' outside template");

    if (key == "end") {
      templates_.push_back(std::move(cur_));
      open_ = false;
    } else if (key == "name") {
      cur_.name = rest_after(line, "name");
    } else if (key == "note") {
      cur_.note = rest_after(line, "note");
    } else if (key == "reverse") {
      if (tok.size() != 2)
        fail("reverse expects an id");
      cur_.reverse_id = std::string(tok[1]);
    } else if (key == "approximate") {
      cur_.approximate = true;
    } else if (key == "atom") {
      parse_atom(tok);
    } else if (key == "bond") {
      parse_bond(tok);
    } else if (key == "set_bond") {
      if (tok.size() != 4)
        fail("set_bond expects <i> <j> <order>");
      const int order = to_int(tok[3]);
      if (order < 0 || order > 2)
        fail("bond order must be 0, 1 or 2");
      cur_.edits.push_back(
          edit::SetBond { atom_index(tok[1]), atom_index(tok[2]), order });
    } else if (key == "set_charge") {
      if (tok.size() != 3)
        fail("set_charge expects <i> <charge>");
      cur_.edits.push_back(
          edit::SetCharge { atom_index(tok[1]), to_int(tok[2]) });
    } else if (key == "add_h") {
      if (tok.size() != 3)
        fail("add_h expects <i> <delta>");
      cur_.edits.push_back(
          edit::AddHydrogens { atom_index(tok[1]), to_int(tok[2]) });
    } else if (key == "attach") {
      parse_attach(tok);
    } else if (key == "consume") {
      cur_.consumes.push_back(species_arg(tok));
    } else if (key == "produce") {
      cur_.produces.push_back(species_arg(tok));
    } else if (key == "detach") {
      cur_.detaches.push_back(species_arg(tok));
    } else {
      fail("unknown keyword '" + std::string(key) + "'");
    }
  }

  CanonicalForm species_arg(const std::vector<std::string_view> &tok) const {
    if (tok.size() != 2)
      fail(std::string(tok[0]) + " expects one SMILES");
    return to_species(tok[1]);
  }

  void parse_atom(const std::vector<std::string_view> &tok) {
    if (tok.size() < 3)
      fail("atom expects <index> <element> [options]");
    if (to_int(tok[1]) != static_cast<int>(cur_.pattern.atoms.size()))
      fail("pattern atoms must be numbered consecutively from 0");
    AtomConstraint c;
    if (tok[2] != "*")
      c.element = to_element(tok[2]);
    for (std::size_t k = 3; k < tok.size(); ++k) {
      const std::string_view opt = tok[k];
      if (opt.starts_with("charge=")) {
        c.charge = to_int(opt.substr(7));
      } else if (opt.starts_with("h=")) {
        const std::string_view v = opt.substr(2);
        const std::size_t dots = v.find("..");
        if (dots == std::string_view::npos) {
          c.h_min = c.h_max = to_int(v);
        } else {
          c.h_min = to_int(v.substr(0, dots));
          const std::string_view hi = v.substr(dots + 2);
          c.h_max = hi.empty() ? AtomConstraint {}.h_max : to_int(hi);
        }
      } else if (opt.starts_with("ring=")) {
        c.ring = to_ring(opt.substr(5));
      } else if (opt == "sat=yes" || opt == "sat=no") {
        c.saturated = opt == "sat=yes";
      } else {
        fail("unknown atom option '" + std::string(opt) + "'");
      }
    }
    cur_.pattern.atoms.push_back(c);
  }

  void parse_bond(const std::vector<std::string_view> &tok) {
    if (tok.size() < 4 || tok.size() > 5)
      fail("bond expects <i> <j> <order> [ring=yes|no]");
    BondConstraint b { atom_index(tok[1]), atom_index(tok[2]),
                       BondOrder::kSingle };
    const int order = to_int(tok[3]);
    if (order != 1 && order != 2)
      fail("pattern bond order must be 1 or 2");
    b.order = order == 2 ? BondOrder::kDouble : BondOrder::kSingle;
    if (tok.size() == 5) {
      if (!tok[4].starts_with("ring="))
        fail("unknown bond option");
      b.ring = to_ring(tok[4].substr(5));
    }
    cur_.pattern.bonds.push_back(b);
  }

  void parse_attach(const std::vector<std::string_view> &tok) {
    if (tok.size() != 6)
      fail("attach expects <i> <order> <element> charge=<q> h=<n>");
    edit::Attach a;
    a.atom = atom_index(tok[1]);
    const int order = to_int(tok[2]);
    if (order != 1 && order != 2)
      fail("attach bond order must be 1 or 2");
    a.order = order == 2 ? BondOrder::kDouble : BondOrder::kSingle;
    a.added.element = to_element(tok[3]);
    if (!tok[4].starts_with("charge=") || !tok[5].starts_with("h="))
      fail("attach expects charge=<q> h=<n>");
    a.added.formal_charge = to_int(tok[4].substr(7));
    a.added.implicit_h = to_int(tok[5].substr(2));
    cur_.edits.push_back(a);
  }

  std::string_view text_;
  int line_no_ = 0;
  bool open_ = false;
  ReactionTemplate cur_;
  std::vector<ReactionTemplate> templates_;
};

std::string signed_int(int v) {
  return v > 0 ? "+" + std::to_string(v) : std::to_string(v);
}

const char *ring_word(RingPredicate r) {
  return r == RingPredicate::kRing ? "yes" : "no";
}

} // namespace

RuleSet parse_catalog(std::string_view text) {
  return CatalogParser(text).parse();
}

RuleSet load_catalog(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open catalog " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

std::string catalog_to_text(const RuleSet &rules) {
  std::ostringstream os;
  for (const ReactionTemplate &t: rules.templates()) {
    os << "template " << t.id << '\n';
    if (!t.name.empty())
      os << "name " << t.name << '\n';
    if (!t.reverse_id.empty())
      os << "reverse " << t.reverse_id << '\n';
    if (t.approximate)
      os << "approximate\n";
    if (!t.note.empty())
      os << "note " << t.note << '\n';
    for (int i = 0; i < t.pattern.size(); ++i) {
      const AtomConstraint &c = t.pattern.atoms[i];
      os << "atom " << i << ' '
         << (c.element ? element_symbol(*c.element) : "*");
      if (c.charge)
        os << " charge=" << signed_int(*c.charge);
      const AtomConstraint defaults;
      if (c.h_min == c.h_max)
        os << " h=" << c.h_min;
      else if (c.h_min != defaults.h_min || c.h_max != defaults.h_max)
        os << " h=" << c.h_min << ".."
           << (c.h_max == defaults.h_max ? "" : std::to_string(c.h_max));
      if (c.ring != RingPredicate::kAny)
        os << " ring=" << ring_word(c.ring);
      if (c.saturated)
        os << (*c.saturated ? " sat=yes" : " sat=no");
      os << '\n';
    }
    for (const BondConstraint &b: t.pattern.bonds) {
      os << "bond " << b.src << ' ' << b.dst << ' '
         << static_cast<int>(b.order);
      if (b.ring != RingPredicate::kAny)
        os << " ring=" << ring_word(b.ring);
      os << '\n';
    }
    for (const Edit &e: t.edits) {
      std::visit(
          [&](const auto &op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, edit::SetBond>) {
              os << "set_bond " << op.src << ' ' << op.dst << ' ' << op.order;
            } else if constexpr (std::is_same_v<T, edit::SetCharge>) {
              os << "set_charge " << op.atom << ' ' << signed_int(op.value);
            } else if constexpr (std::is_same_v<T, edit::AddHydrogens>) {
              os << "add_h " << op.atom << ' ' << signed_int(op.delta);
            } else if constexpr (std::is_same_v<T, edit::Attach>) {
              os << "attach " << op.atom << ' ' << static_cast<int>(op.order)
                 << ' ' << element_symbol(op.added.element)
                 << " charge=" << signed_int(op.added.formal_charge)
                 << " h=" << op.added.implicit_h;
            }
            os << '\n';
          },
          e);
    }
    for (const auto &s: t.consumes)
      os << "consume " << s.text << '\n';
    for (const auto &s: t.produces)
      os << "produce " << s.text << '\n';
    for (const auto &s: t.detaches)
      os << "detach " << s.text << '\n';
    os << "end\n";
  }
  return os.str();
}

std::uint64_t RuleSet::hash() const {
  return fnv1a(catalog_to_text(*this));
}

const RuleSet &default_catalog() {
  static const RuleSet rules = parse_catalog(kDefaultCatalogText);
  return rules;
}

} // namespace rxnrl
