#pragma once

// Axiom-set mental models: a set of facts, a set of negative facts and a
// set of other axioms over a universe B' of candidate elements. The agent
// knows whatever holds in every structure consistent with the three sets;
// querying works open-world, and the same enumeration answers
// ontology-mediated queries through model-set satisfaction.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "structura/fo.hpp"
#include "structura/formula.hpp"
#include "structura/formula_parse.hpp"
#include "structura/structure.hpp"

namespace structura {

// A ground literal over named elements of B'.
struct GroundLiteral {
  bool positive = true;
  std::string rel;
  std::vector<std::string> args;

  bool operator==(const GroundLiteral&) const = default;
  auto operator<=>(const GroundLiteral&) const = default;
};

inline std::string print_literal(const GroundLiteral& l) {
  std::string out = l.positive ? "" : "~";
  out += l.rel + "(";
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    if (i) out += ",";
    out += l.args[i];
  }
  return out + ")";
}

inline GroundLiteral parse_literal(const std::string& text) {
  GroundLiteral out;
  std::size_t pos = 0;
  if (pos < text.size() && text[pos] == '~') {
    out.positive = false;
    ++pos;
  }
  auto open = text.find('(', pos);
  if (open == std::string::npos || text.back() != ')')
    throw error("expected a literal like R(a,b): " + text);
  out.rel = text.substr(pos, open - pos);
  std::string body = text.substr(open + 1, text.size() - open - 2);
  if (!body.empty()) {
    std::size_t p = 0;
    while (true) {
      auto comma = body.find(',', p);
      out.args.push_back(body.substr(p, comma == std::string::npos ? comma : comma - p));
      if (comma == std::string::npos) break;
      p = comma + 1;
    }
  }
  if (out.rel.empty()) throw error("literal without a relation name: " + text);
  return out;
}

struct MentalModel {
  std::vector<std::string> universe;     // B' candidate elements, in order
  std::vector<GroundLiteral> facts;      // positive literals the agent holds
  std::vector<GroundLiteral> neg_facts;  // literals the agent thinks false
  std::vector<Formula> axioms;           // other axioms, may mention B' names
};

namespace mm_detail {

inline void collect_atom_rels(const Formula& f, std::map<std::string, int>& rels) {
  if (!f) return;
  if (f->kind == FKind::Atom) {
    auto [it, fresh] = rels.emplace(f->rel, static_cast<int>(f->args.size()));
    if (!fresh && it->second != static_cast<int>(f->args.size()))
      throw error("relation " + f->rel + " used with two different arities");
  }
  if (f->mod)
    for (const auto& a : f->mod->args)
      if (a.kind == ModArg::FormulaArg) collect_atom_rels(a.formula, rels);
  collect_atom_rels(f->left, rels);
  collect_atom_rels(f->right, rels);
}

}  // namespace mm_detail

// The relations mentioned anywhere in the mental model, with their arities.
inline Signature derive_signature(const MentalModel& m) {
  std::map<std::string, int> rels;
  for (const auto& lits : {m.facts, m.neg_facts})
    for (const auto& l : lits) {
      auto [it, fresh] = rels.emplace(l.rel, static_cast<int>(l.args.size()));
      if (!fresh && it->second != static_cast<int>(l.args.size()))
        throw error("relation " + l.rel + " used with two different arities");
    }
  for (const auto& a : m.axioms) mm_detail::collect_atom_rels(a, rels);
  std::vector<std::pair<std::string, int>> out(rels.begin(), rels.end());
  return Signature(std::move(out));
}

// Elements of B' mentioned by the facts, negative facts or axioms; these
// must belong to every consistent model's domain.
inline std::vector<std::string> mentioned_elements(const MentalModel& m) {
  std::set<std::string> names;
  for (const auto& lits : {m.facts, m.neg_facts})
    for (const auto& l : lits)
      for (const auto& a : l.args) names.insert(a);
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    if (!f) return;
    for (const auto& a : f->args)
      if (!a.is_var) names.insert(a.name);
    walk(f->left);
    walk(f->right);
  };
  for (const auto& a : m.axioms) walk(a);
  std::vector<std::string> out;
  for (const auto& n : names) {
    bool known = false;
    for (const auto& u : m.universe)
      if (u == n) known = true;
    if (!known) throw error("element " + n + " is not in the universe B'");
    out.push_back(n);
  }
  return out;
}

struct ConsistentModels {
  std::vector<Structure> models;
  NameMap names;  // B' name -> element id (each name denotes itself)
};

// Every structure over a domain D with mentioned ⊆ D ⊆ B' and |D| ≤
// max_domain whose named-element expansion satisfies facts, negative facts
// and axioms.
inline ConsistentModels consistent_models(const MentalModel& m, int max_domain,
                                          int max_bits = 26) {
  Signature sig = derive_signature(m);
  ConsistentModels out;
  for (std::size_t i = 0; i < m.universe.size(); ++i)
    out.names[m.universe[i]] = static_cast<Element>(i);

  std::vector<Element> required;
  for (const auto& n : mentioned_elements(m)) required.push_back(out.names.at(n));
  std::sort(required.begin(), required.end());
  std::vector<Element> optional_elems;
  for (const auto& [name, id] : out.names)
    if (!std::binary_search(required.begin(), required.end(), id))
      optional_elems.push_back(id);

  if (static_cast<int>(required.size()) > max_domain) return out;

  // enumerate domains: required plus any subset of the optional elements
  std::size_t n_opt = optional_elems.size();
  if (n_opt > 20) throw error("bound-too-large: universe has too many optional elements");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_opt); ++mask) {
    std::vector<Element> domain = required;
    for (std::size_t b = 0; b < n_opt; ++b)
      if (mask & (std::uint64_t{1} << b)) domain.push_back(optional_elems[b]);
    if (static_cast<int>(domain.size()) > max_domain) continue;
    std::sort(domain.begin(), domain.end());

    StructureEnumerator en(sig, domain, nullptr, nullptr, max_bits);
    while (auto s = en.next()) {
      bool ok = true;
      for (const auto& l : m.facts) {
        Tuple t;
        for (const auto& a : l.args) t.push_back(out.names.at(a));
        if (!s->tuples(l.rel).count(t)) ok = false;
        if (!ok) break;
      }
      if (ok)
        for (const auto& l : m.neg_facts) {
          Tuple t;
          for (const auto& a : l.args) t.push_back(out.names.at(a));
          if (s->tuples(l.rel).count(t)) ok = false;
          if (!ok) break;
        }
      if (ok)
        for (const auto& a : m.axioms)
          if (!eval_fo(*s, {}, a, &out.names)) {
            ok = false;
            break;
          }
      if (ok) out.models.push_back(std::move(*s));
    }
  }
  return out;
}

enum class KnowsAnswer { Yes, No, Unknown };

struct KnowsResult {
  KnowsAnswer answer = KnowsAnswer::Unknown;
  bool vacuous = false;  // the agent's beliefs admit no model at all
};

inline const char* knows_name(KnowsAnswer a) {
  switch (a) {
    case KnowsAnswer::Yes: return "yes";
    case KnowsAnswer::No: return "no";
    case KnowsAnswer::Unknown: return "unknown";
  }
  return "?";
}

// yes if every consistent model satisfies the query, no if none does.
inline KnowsResult knows(const MentalModel& m, const Formula& query, int max_domain,
                         int max_bits = 26) {
  ConsistentModels cm = consistent_models(m, max_domain, max_bits);
  if (cm.models.empty()) return {KnowsAnswer::Yes, true};
  bool all = true, none = true;
  for (const auto& s : cm.models) {
    bool sat = eval_fo(s, {}, query, &cm.names);
    all = all && sat;
    none = none && !sat;
  }
  if (all) return {KnowsAnswer::Yes, false};
  if (none) return {KnowsAnswer::No, false};
  return {KnowsAnswer::Unknown, false};
}

// --------------------------------------------------------------------------
// Bounded forward chaining over the literal sets

struct InferenceRule {
  std::string name;
  // Produces candidate conclusions from the current working set; the
  // chaining loop applies the first new one.
  std::function<std::vector<GroundLiteral>(const MentalModel&, const std::vector<GroundLiteral>&)>
      apply;
};

struct InferenceBudget {
  std::vector<InferenceRule> rules;
  int max_applications = 8;  // how many times a rule may be used in total
  int working_capacity = 16;
};

struct DeriveResult {
  std::vector<GroundLiteral> derived;  // the final working set, oldest first
  bool contradiction = false;          // a literal and its negation co-occurred
  int applications = 0;
};

// Recognizes ground implications written as axioms (a -> b, i.e. ~a | b)
// and fires them when the antecedent literal is in the working set.
inline InferenceRule modus_ponens_rule() {
  return {"modus-ponens",
          [](const MentalModel& m, const std::vector<GroundLiteral>& working) {
            std::vector<GroundLiteral> out;
            auto literal_of = [](const Formula& f) -> std::optional<GroundLiteral> {
              const FormulaNode* n = f.get();
              GroundLiteral l;
              if (n->kind == FKind::Not) {
                l.positive = false;
                n = f->left.get();
              }
              if (n->kind != FKind::Atom) return std::nullopt;
              l.rel = n->rel;
              for (const auto& a : n->args) {
                if (a.is_var) return std::nullopt;
                l.args.push_back(a.name);
              }
              return l;
            };
            for (const auto& ax : m.axioms) {
              if (ax->kind != FKind::Or) continue;
              for (bool flip : {false, true}) {
                const Formula& lhs = flip ? ax->right : ax->left;
                const Formula& rhs = flip ? ax->left : ax->right;
                if (lhs->kind != FKind::Not) continue;
                auto premise = literal_of(lhs->left);
                auto conclusion = literal_of(rhs);
                if (!premise || !conclusion) continue;
                for (const auto& w : working)
                  if (w == *premise) out.push_back(*conclusion);
              }
            }
            return out;
          }};
}

// Forward chaining with a use limit and a working-set capacity; the oldest
// literal is thrown away when the capacity would overflow.
inline DeriveResult derive(const MentalModel& m, const InferenceBudget& budget) {
  DeriveResult out;
  std::vector<GroundLiteral>& working = out.derived;
  auto contradicts = [&](const GroundLiteral& l) {
    GroundLiteral negated = l;
    negated.positive = !negated.positive;
    for (const auto& w : working)
      if (w == negated) return true;
    return false;
  };
  auto push = [&](const GroundLiteral& l) {
    for (const auto& w : working)
      if (w == l) return;
    if (contradicts(l)) out.contradiction = true;
    working.push_back(l);
    while (static_cast<int>(working.size()) > budget.working_capacity)
      working.erase(working.begin());
  };
  for (const auto& l : m.facts) push(l);
  for (const auto& l : m.neg_facts) push(l);

  while (out.applications < budget.max_applications) {
    bool fired = false;
    for (const auto& rule : budget.rules) {
      for (const auto& candidate : rule.apply(m, working)) {
        bool fresh = true;
        for (const auto& w : working)
          if (w == candidate) fresh = false;
        if (!fresh) continue;
        push(candidate);
        ++out.applications;
        fired = true;
        break;
      }
      if (fired) break;
    }
    if (!fired) break;
  }
  return out;
}

// --------------------------------------------------------------------------
// Ontology-mediated queries: certain answers up to a domain bound

enum class OmqAnswer { EntailedUpToBound, Refuted };

struct OmqResult {
  OmqAnswer answer = OmqAnswer::EntailedUpToBound;
  std::optional<Structure> countermodel;  // exhibited when refuted
  NameMap names;
  std::uint64_t models_checked = 0;
};

// Builds the model set over σ ∪ sig(O): every structure up to the domain
// bound whose diagram contains the database literals and which satisfies
// the ontology; the query is answered by universal satisfaction over that
// set. A countermodel is decisive; exhaustion is only bound-relative.
inline OmqResult omq_certain(const Signature& sig, const std::vector<Formula>& ontology,
                             const Formula& query, const std::vector<GroundLiteral>& db,
                             const std::vector<std::string>& answer_tuple, int max_domain,
                             int max_bits = 26) {
  OmqResult out;
  // named elements: database first, then answer-tuple names
  std::vector<std::string> names_in_order;
  auto note = [&](const std::string& n) {
    for (const auto& x : names_in_order)
      if (x == n) return;
    names_in_order.push_back(n);
  };
  for (const auto& l : db)
    for (const auto& a : l.args) note(a);
  for (const auto& a : answer_tuple) {
    bool seen = false;
    for (const auto& l : db)
      for (const auto& x : l.args)
        if (x == a) seen = true;
    if (!seen) throw error("answer element " + a + " does not occur in the database");
  }
  for (Element i = 0; i < static_cast<Element>(names_in_order.size()); ++i)
    out.names[names_in_order[i]] = i;

  std::vector<int> qvars = free_vars(query);
  if (qvars.size() != answer_tuple.size())
    throw error("answer tuple arity does not match the query's free variables");
  Assignment qassign;
  for (std::size_t i = 0; i < qvars.size(); ++i)
    qassign = qassign.set(qvars[i], out.names.at(answer_tuple[i]));

  int named = static_cast<int>(names_in_order.size());
  if (named > max_domain)
    throw error("database mentions more elements than the domain bound");

  for (int size = std::max(named, 1); size <= max_domain; ++size) {
    std::vector<Element> domain;
    for (int i = 0; i < size; ++i) domain.push_back(i);  // ids >= named are anonymous
    StructureEnumerator en(sig, domain, nullptr, nullptr, max_bits);
    while (auto s = en.next()) {
      bool admissible = true;
      for (const auto& l : db) {
        Tuple t;
        for (const auto& a : l.args) t.push_back(out.names.at(a));
        bool in = s->tuples(l.rel).count(t) > 0;
        if (in != l.positive) admissible = false;
        if (!admissible) break;
      }
      if (!admissible) continue;
      for (const auto& ax : ontology)
        if (!eval_fo(*s, {}, ax, &out.names)) {
          admissible = false;
          break;
        }
      if (!admissible) continue;
      ++out.models_checked;
      if (!eval_fo(*s, qassign, query, &out.names)) {
        out.answer = OmqAnswer::Refuted;
        out.countermodel = std::move(*s);
        return out;
      }
    }
  }
  out.answer = OmqAnswer::EntailedUpToBound;
  return out;
}

// --------------------------------------------------------------------------
// Mental-model files:
//   universe: a b c
//   facts: R(a,a) P(b)
//   negfacts: R(b,a)
//   axiom: ~Ex>=8 x1. x1=x1

inline MentalModel parse_mental_model(const std::string& text) {
  MentalModel out;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ws(raw);
    std::string head;
    if (!(ws >> head)) continue;
    if (head == "universe:") {
      std::string n;
      while (ws >> n) out.universe.push_back(n);
    } else if (head == "facts:" || head == "negfacts:") {
      std::string lit;
      while (ws >> lit) {
        GroundLiteral l = parse_literal(lit);
        if (head == "facts:") {
          if (!l.positive) throw parse_error("facts: expects positive literals", lineno, 1);
          out.facts.push_back(std::move(l));
        } else {
          if (l.positive) l.positive = false;  // negfacts may omit the tilde
          out.neg_facts.push_back(std::move(l));
        }
      }
    } else if (head == "axiom:") {
      std::string rest;
      std::getline(ws, rest);
      out.axioms.push_back(parse_formula(rest));
    } else {
      throw parse_error("unknown mental-model section " + head, lineno, 1);
    }
  }
  return out;
}

}  // namespace structura
