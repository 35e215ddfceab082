#include "tbn/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace tbn {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_ident_char);
}

// A count token is digits followed by a single 'x', e.g. "3x".
bool parse_count_token(std::string_view tok, long& count) {
  if (tok.size() < 2 || tok.back() != 'x') return false;
  std::string_view digits = tok.substr(0, tok.size() - 1);
  if (!std::all_of(digits.begin(), digits.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return false;
  count = std::stol(std::string(digits));
  return true;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Tbn parse_tbn(std::string_view text, const ParseOptions& options) {
  std::vector<Monomer> monomers;
  std::unordered_map<std::string, int> label_line;  // label -> defining line

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    size_t idx = 0;
    long count = 1;
    if (long c; idx < tokens.size() && parse_count_token(tokens[idx], c)) {
      if (c < 1)
        throw ParseError(line_no, "count must be positive: '" +
                                      std::string(tokens[idx]) + "'");
      count = c;
      ++idx;
    }

    Monomer monomer;
    if (idx < tokens.size() && tokens[idx].back() == ':') {
      std::string_view name = tokens[idx].substr(0, tokens[idx].size() - 1);
      if (!is_ident(name))
        throw ParseError(line_no, "malformed label: '" +
                                      std::string(tokens[idx]) + "'");
      std::string label(name);
      if (auto [it, inserted] = label_line.try_emplace(label, line_no);
          !inserted)
        throw ParseError(line_no, "duplicate label '" + label +
                                      "' (first used on line " +
                                      std::to_string(it->second) + ")");
      monomer.label = std::move(label);
      ++idx;
    }

    for (; idx < tokens.size(); ++idx) {
      std::string_view tok = tokens[idx];
      bool starred = false;
      if (tok.back() == '*') {
        starred = true;
        tok.remove_suffix(1);
      }
      if (!is_ident(tok))
        throw ParseError(line_no, "malformed site token: '" +
                                      std::string(tokens[idx]) + "'");
      monomer.sites.push_back({std::string(tok), starred});
    }
    if (monomer.sites.empty())
      throw ParseError(line_no, "monomer has no sites");

    for (long i = 0; i < count; ++i) monomers.push_back(monomer);
  }

  Tbn tbn(std::move(monomers));
  if (options.strict && tbn.has_self_complementary_monomer())
    throw ParseError(0, "strict mode: TBN contains a self-complementary monomer");
  return tbn;
}

std::string serialize_tbn(const Tbn& t) {
  std::ostringstream out;
  std::unordered_map<std::string, bool> label_emitted;
  int i = 0;
  while (i < t.monomer_count()) {
    const Monomer& m = t.monomer(i);
    int run = 1;
    while (i + run < t.monomer_count() && t.monomer(i + run) == m) ++run;
    if (m.label) {
      auto [it, inserted] = label_emitted.try_emplace(*m.label, true);
      if (!inserted)
        throw std::invalid_argument(
            "cannot serialize: label '" + *m.label +
            "' appears on non-adjacent monomer instances");
    }
    if (run > 1) out << run << "x ";
    if (m.label) out << *m.label << ": ";
    for (size_t s = 0; s < m.sites.size(); ++s) {
      if (s) out << ' ';
      out << to_string(m.sites[s]);
    }
    out << '\n';
    i += run;
  }
  return out.str();
}

std::string site_ref_string(const Tbn& t, int site) {
  SiteRef ref = t.site_ref(site);
  return std::to_string(ref.monomer) + "." + std::to_string(ref.slot);
}

}  // namespace tbn
