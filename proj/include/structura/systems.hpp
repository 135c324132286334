#pragma once

// The multi-agent system machinery: a system is (S, F, G, (f_i)) where F
// constrains how action tuples may extend an evolution, G picks the actual
// next world, and the agents pick actions. All three are partial; the
// distinct ways a run can stop are reported as termination reasons.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "structura/structure.hpp"

namespace structura {

using Action = std::string;
using ActionTuple = std::vector<Action>;  // indexed like SystemDef::agents

// Conventional non-action symbols; available but not enforced.
inline constexpr const char* kNoop = "noop";
inline constexpr const char* kRemoved = "removed";
inline constexpr const char* kAbsent = "absent";
inline constexpr const char* kAway = "away";

// Alternating sequence B0, a0, B1, a1, ... ; the empty sequence is a valid
// evolution. structure-ended means one more structure than action tuples.
struct Evolution {
  std::vector<Structure> structures;
  std::vector<ActionTuple> actions;

  bool empty() const { return structures.empty() && actions.empty(); }
  bool structure_ended() const { return structures.size() == actions.size() + 1; }
  bool action_ended() const { return structures.size() == actions.size(); }
  const Structure& current() const {
    if (!structure_ended()) throw error("evolution is not structure-ended");
    return structures.back();
  }

  Evolution with_action(ActionTuple a) const {
    Evolution out = *this;
    out.actions.push_back(std::move(a));
    return out;
  }
  Evolution with_structure(Structure s) const {
    Evolution out = *this;
    out.structures.push_back(std::move(s));
    return out;
  }

  bool operator==(const Evolution&) const = default;
};

enum class TerminationKind {
  FForbidden,      // F undefined: the action tuple was forbidden
  FAllowedEnd,     // F output the empty set: allowed actions ended the run
  GEnd,            // G chose to end the evolution
  GUndefined,      // G had no output
  AgentUndefined,  // some agent had no action on this history
  StepBudget,      // the step cap was reached; the run could continue
};

struct TerminationReason {
  TerminationKind kind;
  std::string agent;  // set for AgentUndefined

  bool operator==(const TerminationReason&) const = default;
};

inline const char* termination_name(TerminationKind k) {
  switch (k) {
    case TerminationKind::FForbidden: return "FForbidden";
    case TerminationKind::FAllowedEnd: return "FAllowedEnd";
    case TerminationKind::GEnd: return "GEnd";
    case TerminationKind::GUndefined: return "GUndefined";
    case TerminationKind::AgentUndefined: return "AgentUndefined";
    case TerminationKind::StepBudget: return "StepBudget";
  }
  return "?";
}

// G either picks a structure from the candidate set or ends the evolution.
struct GChoice {
  bool is_end = false;
  std::optional<Structure> structure;

  static GChoice end() { return GChoice{true, std::nullopt}; }
  static GChoice pick(Structure s) { return GChoice{false, std::move(s)}; }
};

using FMap = std::function<std::optional<std::vector<Structure>>(const Evolution&)>;
using GMap =
    std::function<std::optional<GChoice>(const Evolution&, const std::vector<Structure>&)>;
using AgentFn = std::function<std::optional<Action>(const Evolution&)>;

struct SystemDef {
  std::vector<Action> actions;
  std::vector<std::string> agents;
  FMap F;
  GMap G;
  std::vector<AgentFn> agent_fns;
  // The universe S: intensional membership test, optionally an extensional
  // listing for table-driven systems. Either may be absent.
  std::function<bool(const Structure&)> universe;
  std::optional<std::vector<Structure>> universe_list;
};

namespace systems_detail {

inline void check_universe(const SystemDef& sys, const Structure& s) {
  if (sys.universe && !sys.universe(s))
    throw error("system produced a structure outside the universe S");
}

// Applies F then G to an action-ended sequence, enforcing G((t,W)) in W.
inline std::variant<Structure, TerminationReason> advance(const SystemDef& sys,
                                                          const Evolution& action_ended) {
  if (!sys.F) throw error("system has no F");
  auto candidates = sys.F(action_ended);
  if (!candidates) return TerminationReason{TerminationKind::FForbidden, {}};
  if (candidates->empty()) return TerminationReason{TerminationKind::FAllowedEnd, {}};
  if (!sys.G) throw error("system has no G");
  auto choice = sys.G(action_ended, *candidates);
  if (!choice) return TerminationReason{TerminationKind::GUndefined, {}};
  if (choice->is_end) return TerminationReason{TerminationKind::GEnd, {}};
  if (!choice->structure) throw error("G returned neither end nor a structure");
  bool in_candidates = false;
  for (const auto& w : *candidates)
    if (w == *choice->structure) in_candidates = true;
  if (!in_candidates) throw error("G chose a structure outside the candidate set");
  check_universe(sys, *choice->structure);
  return *choice->structure;
}

}  // namespace systems_detail

// B0 = G((eps, F(eps))), with the partiality taxonomy applied.
inline std::variant<Structure, TerminationReason> initial(const SystemDef& sys) {
  return systems_detail::advance(sys, Evolution{});
}

// One round: query every agent, extend by the action tuple, apply F and G.
inline std::variant<Evolution, TerminationReason> step(const SystemDef& sys,
                                                       const Evolution& e) {
  if (!e.structure_ended()) throw error("step requires a structure-ended evolution");
  if (sys.agent_fns.size() != sys.agents.size())
    throw error("agent functions do not match the agent list");
  ActionTuple actions;
  actions.reserve(sys.agents.size());
  for (std::size_t i = 0; i < sys.agents.size(); ++i) {
    auto a = sys.agent_fns[i](e);
    if (!a) return TerminationReason{TerminationKind::AgentUndefined, sys.agents[i]};
    actions.push_back(*a);
  }
  Evolution extended = e.with_action(std::move(actions));
  auto next = systems_detail::advance(sys, extended);
  if (std::holds_alternative<TerminationReason>(next))
    return std::get<TerminationReason>(next);
  return extended.with_structure(std::get<Structure>(std::move(next)));
}

struct RunResult {
  Evolution evolution;
  TerminationReason reason;
};

// Iterates step up to max_steps rounds from the initial world; a cap hit is
// reported as StepBudget (the run itself could continue).
inline RunResult run(const SystemDef& sys, int max_steps) {
  if (max_steps < 0) throw error("max_steps must be >= 0");
  Evolution e;
  auto first = initial(sys);
  if (std::holds_alternative<TerminationReason>(first))
    return {e, std::get<TerminationReason>(first)};
  systems_detail::check_universe(sys, std::get<Structure>(first));
  e = e.with_structure(std::get<Structure>(std::move(first)));
  for (int i = 0; i < max_steps; ++i) {
    auto next = step(sys, e);
    if (std::holds_alternative<TerminationReason>(next))
      return {e, std::get<TerminationReason>(next)};
    e = std::get<Evolution>(std::move(next));
  }
  return {e, TerminationReason{TerminationKind::StepBudget, {}}};
}

// Checks the defining conditions of a finite evolution: the initial world
// comes from G((eps, F(eps))) and every round follows the agents, F and G.
inline bool is_finite_evolution(const SystemDef& sys, const Evolution& e) {
  if (e.empty()) return true;
  if (!e.structure_ended()) return false;
  auto first = initial(sys);
  if (!std::holds_alternative<Structure>(first)) return false;
  if (!(std::get<Structure>(first) == e.structures[0])) return false;
  Evolution prefix;
  prefix = prefix.with_structure(e.structures[0]);
  for (std::size_t i = 0; i < e.actions.size(); ++i) {
    ActionTuple expected;
    for (std::size_t j = 0; j < sys.agents.size(); ++j) {
      auto a = sys.agent_fns[j](prefix);
      if (!a) return false;
      expected.push_back(*a);
    }
    if (expected != e.actions[i]) return false;
    auto next = systems_detail::advance(sys, prefix.with_action(e.actions[i]));
    if (!std::holds_alternative<Structure>(next)) return false;
    if (!(std::get<Structure>(next) == e.structures[i + 1])) return false;
    prefix = prefix.with_action(e.actions[i]).with_structure(e.structures[i + 1]);
  }
  return true;
}

// Positional scenario: the agent's choice depends only on the current
// structure, so it is defined on every sequence ending in a structure where
// the positional map is defined, and on none ending elsewhere.
inline AgentFn positional_agent(std::function<std::optional<Action>(const Structure&)> h) {
  return [h = std::move(h)](const Evolution& e) -> std::optional<Action> {
    return h(e.current());
  };
}

inline std::vector<AgentFn> positional_lift(
    const std::vector<std::function<std::optional<Action>(const Structure&)>>& h) {
  std::vector<AgentFn> out;
  out.reserve(h.size());
  for (const auto& hj : h) out.push_back(positional_agent(hj));
  return out;
}

// f_i = d_i after p_i: perception builds the mental model, decision picks
// the action. Partiality of either side propagates.
template <class Mental>
AgentFn perception_agent(std::function<std::optional<Mental>(const Evolution&)> perceive,
                         std::function<std::optional<Action>(const Mental&)> decide) {
  return [perceive = std::move(perceive),
          decide = std::move(decide)](const Evolution& e) -> std::optional<Action> {
    auto mental = perceive(e);
    if (!mental) return std::nullopt;
    return decide(*mental);
  };
}

template <class Mental>
AgentFn positional_perception_agent(
    std::function<std::optional<Mental>(const Structure&)> perceive,
    std::function<std::optional<Action>(const Mental&)> decide) {
  return perception_agent<Mental>(
      [perceive = std::move(perceive)](const Evolution& e) { return perceive(e.current()); },
      std::move(decide));
}

// Spot-checks the definitional invariants of a SystemDef on sampled
// evolutions: G stays inside the candidate set and complies when F
// outputs the empty set.
inline bool validate_system(const SystemDef& sys, const std::vector<Evolution>& samples) {
  for (const auto& e : samples) {
    if (!e.action_ended()) continue;
    if (!sys.F) continue;
    auto w = sys.F(e);
    if (!w) continue;
    if (!sys.G) continue;
    auto g = sys.G(e, *w);
    if (w->empty()) {
      if (g && !g->is_end) return false;  // G must comply with F's empty output
      continue;
    }
    if (!g || g->is_end) continue;
    bool found = false;
    for (const auto& cand : *w)
      if (cand == *g->structure) found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace structura
