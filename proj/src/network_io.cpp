//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rxnrl/hash.h"
#include "rxnrl/network.h"
#include "rxnrl/smiles.h"

namespace rxnrl {
namespace {

constexpr std::string_view kMagic = "RXNNET";
constexpr int kVersion = 1;

void append_ids(std::string &out, const std::vector<int> &ids) {
  for (int id: ids) {
    out += ' ';
    out += std::to_string(id);
  }
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ')
      ++i;
    const std::size_t j = i;
    while (i < line.size() && line[i] != ' ')
      ++i;
    if (i > j)
      out.push_back(line.substr(j, i - j));
  }
  return out;
}

[[noreturn]] void format_error(int line, const std::string &msg) {
  throw NetworkError(NetworkError::Kind::kFormat,
                     "network line " + std::to_string(line) + ": " + msg);
}

int to_int(std::string_view s, int line) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    format_error(line, "expected integer, got '" + std::string(s) + "'");
  return v;
}

std::uint64_t to_hex_u64(std::string_view s, int line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc() || p != s.data() + s.size() || s.size() != 16)
    format_error(line, "expected 16 hex digits");
  return v;
}

const char *termination_word(Termination t) {
  return t == Termination::kFixpoint ? "fixpoint" : "species_limit";
}

} // namespace

std::string ReactionNetwork::to_text() const {
  std::string out;
  out += kMagic;
  out += ' ' + std::to_string(kVersion) + ' ' + to_hex(catalog_hash) + ' '
         + filter_descriptor + '\n';
  out += 'I';
  append_ids(out, initial_ids);
  out += '\n';
  out += "G " + (goal_id < 0 ? std::string("-") : std::to_string(goal_id))
         + '\n';
  out += "T ";
  out += termination_word(termination);
  out += '\n';
  for (const Species &s: species) {
    out += "S " + std::to_string(s.id) + ' ' + std::to_string(s.charge) + ' '
           + s.canonical.text + '\n';
  }
  for (const Reaction &r: reactions) {
    out += "R " + std::to_string(r.id) + ' ' + r.template_id + ' '
           + r.site_key + " |";
    append_ids(out, r.reactants);
    out += " |";
    append_ids(out, r.aux_consumed);
    out += " =>";
    append_ids(out, r.products);
    out += " |";
    append_ids(out, r.aux_produced);
    out += '\n';
  }
  out += "CK " + to_hex(fnv1a(out)) + '\n';
  return out;
}

ReactionNetwork ReactionNetwork::from_text(std::string_view text) {
  // The checksum line covers every byte before it.
  const std::size_t ck = text.rfind("CK ");
  if (ck == std::string_view::npos || (ck > 0 && text[ck - 1] != '\n'))
    throw NetworkError(NetworkError::Kind::kChecksum,
                       "missing checksum line (truncated file?)");
  {
    std::string_view tail = text.substr(ck + 3);
    if (!tail.empty() && tail.back() == '\n')
      tail.remove_suffix(1);
    std::uint64_t stored = 0;
    auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(),
                                   stored, 16);
    if (ec != std::errc() || p != tail.data() + tail.size()
        || tail.size() != 16 || stored != fnv1a(text.substr(0, ck)))
      throw NetworkError(NetworkError::Kind::kChecksum, "checksum mismatch");
  }

  ReactionNetwork net;
  std::size_t pos = 0;
  int line_no = 0;
  bool header = false;
  while (pos < ck) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto tok = tokens(line);
    if (tok.empty())
      format_error(line_no, "empty line");

    if (!header) {
      if (tok.size() != 4 || tok[0] != kMagic)
        format_error(line_no, "bad header");
      if (to_int(tok[1], line_no) != kVersion)
        throw NetworkError(NetworkError::Kind::kVersion,
                           "unsupported network format version "
                               + std::string(tok[1]));
      net.catalog_hash = to_hex_u64(tok[2], line_no);
      net.filter_descriptor = std::string(tok[3]);
      header = true;
      continue;
    }

    const std::string_view kind = tok[0];
    if (kind == "I") {
      for (std::size_t k = 1; k < tok.size(); ++k)
        net.initial_ids.push_back(to_int(tok[k], line_no));
    } else if (kind == "G") {
      if (tok.size() != 2)
        format_error(line_no, "bad goal line");
      net.goal_id = tok[1] == "-" ? -1 : to_int(tok[1], line_no);
    } else if (kind == "T") {
      if (tok.size() != 2)
        format_error(line_no, "bad termination line");
      if (tok[1] == "fixpoint")
        net.termination = Termination::kFixpoint;
      else if (tok[1] == "species_limit")
        net.termination = Termination::kSpeciesLimit;
      else
        format_error(line_no, "unknown termination");
    } else if (kind == "S") {
      if (tok.size() != 4)
        format_error(line_no, "bad species line");
      Species s;
      s.id = to_int(tok[1], line_no);
      if (s.id != static_cast<int>(net.species.size()))
        format_error(line_no, "species ids must be consecutive");
      s.charge = to_int(tok[2], line_no);
      s.canonical.text = std::string(tok[3]);
      try {
        s.graph = parse_smiles(s.canonical.text);
      } catch (const SmilesError &e) {
        format_error(line_no, e.what());
      }
      s.formula = s.graph.formula();
      if (s.graph.net_charge() != s.charge)
        format_error(line_no, "species charge disagrees with SMILES");
      net.species.push_back(std::move(s));
    } else if (kind == "R") {
      if (tok.size() < 4)
        format_error(line_no, "bad reaction line");
      Reaction r;
      r.id = to_int(tok[1], line_no);
      if (r.id != static_cast<int>(net.reactions.size()))
        format_error(line_no, "reaction ids must be consecutive");
      r.template_id = std::string(tok[2]);
      r.site_key = std::string(tok[3]);
      std::vector<int> *lists[] = { &r.reactants, &r.aux_consumed,
                                    &r.products, &r.aux_produced };
      const std::string_view seps[] = { "|", "|", "=>", "|" };
      int section = -1;
      for (std::size_t k = 4; k < tok.size(); ++k) {
        if (section + 1 < 4 && tok[k] == seps[section + 1]) {
          ++section;
          continue;
        }
        if (section < 0)
          format_error(line_no, "missing '|' after site key");
        const int id = to_int(tok[k], line_no);
        if (id < 0 || id >= static_cast<int>(net.species.size()))
          format_error(line_no, "unknown species id");
        lists[section]->push_back(id);
      }
      if (section != 3)
        format_error(line_no, "reaction line missing sections");
      net.reactions.push_back(std::move(r));
    } else {
      format_error(line_no, "unknown record '" + std::string(kind) + "'");
    }
  }
  if (!header)
    format_error(line_no, "missing header");
  const int n = static_cast<int>(net.species.size());
  for (int id: net.initial_ids) {
    if (id < 0 || id >= n)
      format_error(line_no, "initial id out of range");
  }
  if (net.goal_id >= n)
    format_error(line_no, "goal id out of range");
  net.reindex();
  return net;
}

void ReactionNetwork::save(const std::string &path) const {
  const std::string text = to_text();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw NetworkError(NetworkError::Kind::kIo, "cannot write " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
      throw NetworkError(NetworkError::Kind::kIo, "write failed: " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw NetworkError(NetworkError::Kind::kIo,
                       "cannot move " + tmp + " to " + path);
}

ReactionNetwork
ReactionNetwork::load(const std::string &path,
                      std::optional<std::uint64_t> expected_catalog_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw NetworkError(NetworkError::Kind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  ReactionNetwork net = from_text(ss.str());
  if (expected_catalog_hash && *expected_catalog_hash != net.catalog_hash)
    net.catalog_mismatch = true;
  return net;
}

} // namespace rxnrl
