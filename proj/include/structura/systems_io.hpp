#pragma once

// System config files, the named-rule registry, canonical sequence keys for
// table-driven systems, and trace output.
//
//   actions: inc
//   agents: ctr
//   steps: 10
//   struct s0 {
//   domain:
//   P/1:
//   }
//   init: s0
//   F rule counter-add-point
//   G rule pick-first
//   agent ctr const inc
//
// Tables replace rules where explicit partial functions are wanted; table
// keys are canonical serializations of sequences (see evolution_key):
//
//   F table {
//   {domain=0;P/1=(0)} [inc] -> s1
//   }

#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "structura/structure_io.hpp"
#include "structura/systems.hpp"

namespace structura {

// Canonical serialization of an evolution: structure keys and action
// tuples, space-separated; the empty sequence is "eps".
inline std::string action_tuple_key(const ActionTuple& a) {
  std::string out = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += a[i];
  }
  return out + "]";
}

inline std::string evolution_key(const Evolution& e) {
  if (e.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < e.structures.size(); ++i) {
    if (i) out += " ";
    out += structure_key(e.structures[i]);
    if (i < e.actions.size()) out += " " + action_tuple_key(e.actions[i]);
  }
  return out;
}

// --------------------------------------------------------------------------
// Named rules (code plug-ins) loadable from config files.

namespace systems_detail {

struct RuleRegistry {
  std::shared_mutex mutex;
  std::map<std::string, FMap> f_rules;
  std::map<std::string, GMap> g_rules;
  std::map<std::string, AgentFn> agent_rules;

  static RuleRegistry& instance() {
    static RuleRegistry r;
    return r;
  }
};

}  // namespace systems_detail

inline void register_f_rule(const std::string& name, FMap f) {
  auto& reg = systems_detail::RuleRegistry::instance();
  std::unique_lock lock(reg.mutex);
  if (!reg.f_rules.emplace(name, std::move(f)).second)
    throw error("duplicate F rule: " + name);
}

inline void register_g_rule(const std::string& name, GMap g) {
  auto& reg = systems_detail::RuleRegistry::instance();
  std::unique_lock lock(reg.mutex);
  if (!reg.g_rules.emplace(name, std::move(g)).second)
    throw error("duplicate G rule: " + name);
}

inline void register_agent_rule(const std::string& name, AgentFn f) {
  auto& reg = systems_detail::RuleRegistry::instance();
  std::unique_lock lock(reg.mutex);
  if (!reg.agent_rules.emplace(name, std::move(f)).second)
    throw error("duplicate agent rule: " + name);
}

// Built-ins:
//   F counter-add-point  adds one fresh element to the unary relation P
//   F halt               outputs the empty set (allowed termination)
//   G pick-first         chooses the first candidate
inline void ensure_builtin_system_rules() {
  static std::once_flag once;
  std::call_once(once, [] {
    register_f_rule("counter-add-point", [](const Evolution& e)
                                             -> std::optional<std::vector<Structure>> {
      if (e.structures.empty()) return std::nullopt;
      const Structure& last = e.structures.back();
      if (!last.signature().arity_of("P")) return std::nullopt;
      auto [next, fresh] = insert_element(last);
      return std::vector<Structure>{insert_tuple(next, "P", {fresh})};
    });
    register_f_rule("halt", [](const Evolution&) {
      return std::optional<std::vector<Structure>>{std::vector<Structure>{}};
    });
    register_g_rule("pick-first",
                    [](const Evolution&, const std::vector<Structure>& w) -> std::optional<GChoice> {
                      if (w.empty()) return GChoice::end();
                      return GChoice::pick(w[0]);
                    });
  });
}

// --------------------------------------------------------------------------
// Config files

struct SystemConfig {
  SystemDef system;
  int steps = 10;
  std::map<std::string, Structure> structures;
};

namespace systems_detail {

struct TableSpec {
  std::map<std::string, std::vector<std::string>> rows;  // key -> value tokens
};

inline std::optional<std::vector<std::string>> lookup(const TableSpec& t, const std::string& key) {
  auto it = t.rows.find(key);
  if (it == t.rows.end()) return std::nullopt;
  return it->second;
}

}  // namespace systems_detail

inline SystemConfig parse_system_config(const std::string& text) {
  ensure_builtin_system_rules();
  auto& reg = systems_detail::RuleRegistry::instance();

  SystemConfig cfg;
  std::vector<std::string> init_labels;
  bool init_declared = false;
  bool init_empty = false;
  std::optional<std::string> f_rule, g_rule;
  std::optional<systems_detail::TableSpec> f_table, g_table;
  struct AgentSpec {
    std::string kind;  // const | rule | table | positional
    std::string value;
    systems_detail::TableSpec table;
  };
  std::map<std::string, AgentSpec> agent_specs;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto strip = [](std::string s) {
    if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    return s.substr(b);
  };
  auto words = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ws(s);
    std::string w;
    while (ws >> w) out.push_back(w);
    return out;
  };

  auto read_table = [&](systems_detail::TableSpec& table) {
    while (std::getline(in, raw)) {
      ++lineno;
      std::string line = strip(raw);
      if (line.empty()) continue;
      if (line == "}") return;
      auto arrow = line.rfind(" -> ");
      if (arrow == std::string::npos)
        throw parse_error("table row needs ' -> '", lineno, 1);
      std::string key = strip(line.substr(0, arrow));
      table.rows[key] = words(line.substr(arrow + 4));
    }
    throw parse_error("unterminated table block", lineno, 1);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(raw);
    if (line.empty()) continue;
    auto toks = words(line);
    const std::string& head = toks[0];
    if (head == "actions:") {
      cfg.system.actions.assign(toks.begin() + 1, toks.end());
    } else if (head == "agents:") {
      cfg.system.agents.assign(toks.begin() + 1, toks.end());
    } else if (head == "steps:") {
      if (toks.size() != 2) throw parse_error("steps: wants one number", lineno, 1);
      cfg.steps = std::stoi(toks[1]);
    } else if (head == "struct") {
      if (toks.size() != 3 || toks[2] != "{")
        throw parse_error("expected: struct NAME {", lineno, 1);
      std::string name = toks[1];
      std::string body;
      bool closed = false;
      while (std::getline(in, raw)) {
        ++lineno;
        std::string l = strip(raw);
        if (l == "}") {
          closed = true;
          break;
        }
        body += raw + "\n";
      }
      if (!closed) throw parse_error("unterminated struct block", lineno, 1);
      cfg.structures.emplace(name, parse_structure(body).structure);
    } else if (head == "init:") {
      init_declared = true;
      if (toks.size() == 2 && toks[1] == "empty")
        init_empty = true;
      else
        init_labels.assign(toks.begin() + 1, toks.end());
    } else if (head == "F" || head == "G") {
      if (toks.size() >= 2 && toks[1] == "rule") {
        if (toks.size() != 3) throw parse_error("rule wants a name", lineno, 1);
        (head == "F" ? f_rule : g_rule) = toks[2];
      } else if (toks.size() >= 2 && toks[1] == "table") {
        systems_detail::TableSpec t;
        read_table(t);
        (head == "F" ? f_table : g_table) = std::move(t);
      } else {
        throw parse_error("expected: " + head + " rule NAME | " + head + " table {", lineno, 1);
      }
    } else if (head == "agent") {
      if (toks.size() < 3) throw parse_error("agent wants a name and a kind", lineno, 1);
      AgentSpec spec;
      spec.kind = toks[2];
      if (spec.kind == "const" || spec.kind == "rule") {
        if (toks.size() != 4) throw parse_error("agent " + spec.kind + " wants a value", lineno, 1);
        spec.value = toks[3];
      } else if (spec.kind == "table" || spec.kind == "positional") {
        read_table(spec.table);
      } else {
        throw parse_error("unknown agent kind " + spec.kind, lineno, 1);
      }
      agent_specs[toks[1]] = std::move(spec);
    } else {
      throw parse_error("unknown config directive " + head, lineno, 1);
    }
  }

  auto resolve_labels = [&](const std::vector<std::string>& labels) {
    std::vector<Structure> out;
    for (const auto& l : labels) {
      auto it = cfg.structures.find(l);
      if (it == cfg.structures.end()) throw error("unknown structure label " + l);
      out.push_back(it->second);
    }
    return out;
  };

  // F: the init declaration covers the empty sequence; a rule or table
  // covers the rest. Undefined where neither speaks.
  {
    FMap rule_f;
    if (f_rule) {
      std::shared_lock lock(reg.mutex);
      auto it = reg.f_rules.find(*f_rule);
      if (it == reg.f_rules.end()) throw error("unknown F rule " + *f_rule);
      rule_f = it->second;
    }
    auto table = f_table;
    auto structures = cfg.structures;
    cfg.system.F = [=](const Evolution& e) -> std::optional<std::vector<Structure>> {
      if (e.empty() && init_declared) {
        if (init_empty) return std::vector<Structure>{};
        std::vector<Structure> out;
        for (const auto& l : init_labels) out.push_back(structures.at(l));
        return out;
      }
      if (table) {
        auto row = systems_detail::lookup(*table, evolution_key(e));
        if (!row) return std::nullopt;
        if (row->size() == 1 && (*row)[0] == "empty") return std::vector<Structure>{};
        std::vector<Structure> out;
        for (const auto& l : *row) out.push_back(structures.at(l));
        return out;
      }
      if (rule_f) return rule_f(e);
      return std::nullopt;
    };
    // validate init labels eagerly
    if (init_declared && !init_empty) resolve_labels(init_labels);
  }

  // G
  {
    GMap rule_g;
    if (g_rule) {
      std::shared_lock lock(reg.mutex);
      auto it = reg.g_rules.find(*g_rule);
      if (it == reg.g_rules.end()) throw error("unknown G rule " + *g_rule);
      rule_g = it->second;
    }
    auto table = g_table;
    auto structures = cfg.structures;
    cfg.system.G = [=](const Evolution& e,
                       const std::vector<Structure>& w) -> std::optional<GChoice> {
      if (table) {
        auto row = systems_detail::lookup(*table, evolution_key(e));
        if (!row) return std::nullopt;
        if (row->size() == 1 && (*row)[0] == "end") return GChoice::end();
        if (row->size() != 1) throw error("G table rows pick one structure or end");
        return GChoice::pick(structures.at((*row)[0]));
      }
      if (rule_g) return rule_g(e, w);
      return std::nullopt;
    };
  }

  // agents
  for (const auto& name : cfg.system.agents) {
    auto it = agent_specs.find(name);
    if (it == agent_specs.end()) throw error("agent " + name + " has no specification");
    const AgentSpec& spec = it->second;
    if (spec.kind == "const") {
      std::string action = spec.value;
      cfg.system.agent_fns.push_back([action](const Evolution&) { return action; });
    } else if (spec.kind == "rule") {
      std::shared_lock lock(reg.mutex);
      auto rit = reg.agent_rules.find(spec.value);
      if (rit == reg.agent_rules.end()) throw error("unknown agent rule " + spec.value);
      cfg.system.agent_fns.push_back(rit->second);
    } else if (spec.kind == "table") {
      auto table = spec.table;
      cfg.system.agent_fns.push_back([table](const Evolution& e) -> std::optional<Action> {
        auto row = systems_detail::lookup(table, evolution_key(e));
        if (!row || row->size() != 1) return std::nullopt;
        return (*row)[0];
      });
    } else {  // positional
      auto table = spec.table;
      cfg.system.agent_fns.push_back(
          positional_agent([table](const Structure& s) -> std::optional<Action> {
            auto row = systems_detail::lookup(table, structure_key(s));
            if (!row || row->size() != 1) return std::nullopt;
            return (*row)[0];
          }));
    }
  }

  return cfg;
}

// Trace: the evolution in the structure file format interleaved with the
// action tuples, plus the final status.
inline std::string print_trace(const Evolution& e, const TerminationReason* reason,
                               const std::vector<std::string>& agents = {}) {
  std::string out = "# structura trace\n";
  if (!agents.empty()) {
    out += "# agents:";
    for (const auto& a : agents) out += " " + a;
    out += "\n";
  }
  for (std::size_t i = 0; i < e.structures.size(); ++i) {
    out += "step " + std::to_string(i) + "\n";
    out += print_structure(e.structures[i]);
    if (i < e.actions.size()) {
      out += "actions:";
      for (const auto& a : e.actions[i]) out += " " + a;
      out += "\n";
    }
  }
  if (reason) {
    out += "end: " + std::string(termination_name(reason->kind));
    if (!reason->agent.empty()) out += " " + reason->agent;
    out += "\n";
  }
  return out;
}

}  // namespace structura
