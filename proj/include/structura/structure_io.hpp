#pragma once

// Textual structure format. One file holds one structure:
//
//   # optional comments
//   domain: a b c
//   R/2: (a,b) (b,c)
//   P/1: (a)
//   tape X/2: (a,b)
//
// Tokens are whitespace-separated; `#` starts a comment. Printing is
// canonical (elements named e0, e1, ... in id order) and round-trips
// exactly through parse.

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "structura/structure.hpp"

namespace structura {

struct ParsedStructure {
  Structure structure;
  std::vector<std::string> element_names;          // index = element id
  std::map<std::string, Element> name_to_element;
};

namespace io_detail {

struct Line {
  int number = 0;
  std::string text;
};

inline std::vector<Line> logical_lines(std::string_view text) {
  std::vector<Line> out;
  int n = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) out.push_back({n, line});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace io_detail

inline ParsedStructure parse_structure(std::string_view text) {
  using io_detail::logical_lines;
  using io_detail::split_ws;

  auto lines = logical_lines(text);
  std::vector<std::string> names;
  std::map<std::string, Element> ids;
  bool have_domain = false;

  // First pass: the domain line fixes element names. If every name is of the
  // canonical form e<digits> with distinct indices, ids are taken literally;
  // otherwise ids follow order of appearance.
  std::vector<std::string> domain_tokens;
  for (const auto& line : lines) {
    auto toks = split_ws(line.text);
    if (!toks.empty() && toks[0] == "domain:") {
      if (have_domain) throw parse_error("duplicate domain line", line.number, 1);
      have_domain = true;
      domain_tokens.assign(toks.begin() + 1, toks.end());
    }
  }
  if (!have_domain) throw parse_error("missing domain line", 1, 1);

  bool canonical = !domain_tokens.empty();
  std::set<Element> literal_ids;
  for (const auto& t : domain_tokens) {
    if (t.size() < 2 || t[0] != 'e') {
      canonical = false;
      break;
    }
    Element v = 0;
    bool digits = true;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) {
        digits = false;
        break;
      }
      v = v * 10 + (t[i] - '0');
    }
    if (!digits || !literal_ids.insert(v).second) {
      canonical = false;
      break;
    }
  }

  std::set<Element> domain;
  if (canonical) {
    for (const auto& t : domain_tokens) {
      Element v = std::stoi(t.substr(1));
      ids[t] = v;
      domain.insert(v);
    }
  } else {
    Element next = 0;
    for (const auto& t : domain_tokens) {
      if (ids.count(t)) throw parse_error("duplicate domain element " + t, 1, 1);
      ids[t] = next++;
    }
    for (const auto& [n, v] : ids) domain.insert(v);
  }
  names.resize(domain.size());
  for (const auto& [n, v] : ids) {
    // With literal e<k> ids the vector is indexed sparsely by rank.
    std::size_t rank = std::distance(domain.begin(), domain.find(v));
    names[rank] = n;
  }

  std::vector<std::pair<std::string, int>> rels;
  std::map<std::string, std::set<Tuple>> interp;
  std::map<TapeSymbol, std::set<Tuple>> tape;

  auto parse_tuples = [&](const std::vector<std::string>& toks, std::size_t from, int arity,
                          const std::string& rel, int lineno) {
    std::set<Tuple> tuples;
    for (std::size_t i = from; i < toks.size(); ++i) {
      const std::string& tok = toks[i];
      if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')')
        throw parse_error("expected tuple like (a,b) in " + rel, lineno, 1);
      Tuple t;
      std::string body = tok.substr(1, tok.size() - 2);
      if (!body.empty()) {
        std::size_t p = 0;
        while (true) {
          std::size_t comma = body.find(',', p);
          std::string name = body.substr(p, comma == std::string::npos ? comma : comma - p);
          auto it = ids.find(name);
          if (it == ids.end())
            throw parse_error("element-not-in-domain: " + name, lineno, 1);
          t.push_back(it->second);
          if (comma == std::string::npos) break;
          p = comma + 1;
        }
      }
      if (static_cast<int>(t.size()) != arity)
        throw parse_error("arity-mismatch in " + rel, lineno, 1);
      tuples.insert(t);
    }
    return tuples;
  };

  auto split_decl = [](const std::string& tok, int lineno) {
    auto slash = tok.find('/');
    if (slash == std::string::npos || tok.back() != ':')
      throw parse_error("expected relation declaration like R/2:", lineno, 1);
    std::string name = tok.substr(0, slash);
    int arity = std::stoi(tok.substr(slash + 1, tok.size() - slash - 2));
    return std::pair<std::string, int>(name, arity);
  };

  for (const auto& line : lines) {
    auto toks = split_ws(line.text);
    if (toks.empty() || toks[0] == "domain:") continue;
    if (toks[0] == "tape") {
      if (toks.size() < 2) throw parse_error("tape line needs a symbol", line.number, 1);
      auto [name, arity] = split_decl(toks[1], line.number);
      TapeSymbol sym{name, arity};
      auto tuples = parse_tuples(toks, 2, arity, name, line.number);
      if (!tuples.empty()) tape[sym] = std::move(tuples);
      continue;
    }
    auto [name, arity] = split_decl(toks[0], line.number);
    rels.emplace_back(name, arity);
    interp[name] = parse_tuples(toks, 1, arity, name, line.number);
  }

  ParsedStructure out;
  out.structure = Structure::make(Signature(std::move(rels)), std::move(domain),
                                  std::move(interp), std::move(tape));
  out.element_names = std::move(names);
  out.name_to_element = std::move(ids);
  return out;
}

inline std::string element_name(Element e) { return "e" + std::to_string(e); }

inline std::string print_tuple(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += element_name(t[i]);
  }
  out += ")";
  return out;
}

inline std::string print_structure(const Structure& s) {
  std::string out = "domain:";
  for (Element e : s.domain()) out += " " + element_name(e);
  out += "\n";
  for (const auto& [name, arity] : s.signature().relations) {
    out += name + "/" + std::to_string(arity) + ":";
    for (const auto& t : s.tuples(name)) out += " " + print_tuple(t);
    out += "\n";
  }
  for (const auto& [sym, tuples] : s.tape_interp()) {
    out += "tape " + sym.name + "/" + std::to_string(sym.arity) + ":";
    for (const auto& t : tuples) out += " " + print_tuple(t);
    out += "\n";
  }
  return out;
}

// Compact single-line serialization; used as a canonical lookup key for
// table-driven systems and in traces.
inline std::string structure_key(const Structure& s) {
  std::string out = "{domain=";
  bool first = true;
  for (Element e : s.domain()) {
    if (!first) out += " ";
    out += std::to_string(e);
    first = false;
  }
  for (const auto& [name, arity] : s.signature().relations) {
    out += ";" + name + "/" + std::to_string(arity) + "=";
    for (const auto& t : s.tuples(name)) out += print_tuple(t);
  }
  for (const auto& [sym, tuples] : s.tape_interp()) {
    out += ";tape " + sym.name + "/" + std::to_string(sym.arity) + "=";
    for (const auto& t : tuples) out += print_tuple(t);
  }
  out += "}";
  return out;
}

}  // namespace structura
