#pragma once

// The semantic game. A position carries the current model-assignment pair,
// the node of the root formula being played, the verifying player and the
// stack of composition continuations. expand() produces rule-faithful
// successors; solve() builds the reachable position graph and labels it by
// alternating attractor computation, so an unlabeled closed graph means the
// play goes on forever and neither player wins.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "structura/formula.hpp"
#include "structura/structure.hpp"

namespace structura {

enum class Player : std::int8_t { Eloise, Abelard };

inline Player opponent(Player p) {
  return p == Player::Eloise ? Player::Abelard : Player::Eloise;
}

inline const char* player_name(Player p) {
  return p == Player::Eloise ? "Eloise" : "Abelard";
}

enum class JumpConvention {
  Free,           // verifier jumps to any Claim(i,_) occurrence in the root
  Superordinate,  // jump to the nearest enclosing Claim(i,_), if any
};

enum class Outcome : std::int8_t { EloiseWins, AbelardWins, Neither, Unknown };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::EloiseWins: return "EloiseWins";
    case Outcome::AbelardWins: return "AbelardWins";
    case Outcome::Neither: return "Neither";
    case Outcome::Unknown: return "Unknown";
  }
  return "?";
}

struct Budget {
  std::int64_t max_positions = 200000;
  int max_domain_growth = 16;
};

struct GamePosition {
  Structure structure;
  Assignment assign;
  int node = 0;
  Player verifier = Player::Eloise;
  // Pending right-hand formulas from ';' with the player obligated to win
  // them; back() is the innermost (resolved first).
  std::vector<std::pair<int, Player>> continuations;

  bool operator==(const GamePosition& o) const {
    return node == o.node && verifier == o.verifier && assign == o.assign &&
           continuations == o.continuations && structure == o.structure;
  }

  std::strong_ordering operator<=>(const GamePosition& o) const {
    if (auto c = node <=> o.node; c != 0) return c;
    if (auto c = verifier <=> o.verifier; c != 0) return c;
    if (auto c = assign <=> o.assign; c != 0) return c;
    if (auto c = continuations <=> o.continuations; c != 0) return c;
    return structure <=> o.structure;
  }
};

struct GameContext {
  IndexedFormula formula;
  JumpConvention convention = JumpConvention::Free;

  static GameContext make(Formula phi, JumpConvention conv = JumpConvention::Free) {
    if (!is_game_formula(phi))
      throw error("formula contains nodes outside the game language");
    return GameContext{IndexedFormula::build(std::move(phi)), conv};
  }
};

struct Expansion {
  bool terminal = false;
  Outcome verdict = Outcome::Neither;      // terminal only
  Player mover = Player::Eloise;           // choice nodes
  std::vector<GamePosition> successors;    // may be empty: the mover is stuck and loses
};

namespace game_detail {

// Winner at a decided atom, folded through the continuation stack: the
// obligated player continues on a win, the opponent's win ends everything.
inline Expansion settle_atom(const GamePosition& pos, AtomEval r) {
  Expansion out;
  if (r == AtomEval::UndefinedVariable) {
    out.terminal = true;
    out.verdict = Outcome::Neither;
    return out;
  }
  Player winner = r == AtomEval::Holds ? pos.verifier : opponent(pos.verifier);
  if (pos.continuations.empty()) {
    out.terminal = true;
    out.verdict = winner == Player::Eloise ? Outcome::EloiseWins : Outcome::AbelardWins;
    return out;
  }
  auto [next_node, obligated] = pos.continuations.back();
  if (winner != obligated) {
    out.terminal = true;
    out.verdict = winner == Player::Eloise ? Outcome::EloiseWins : Outcome::AbelardWins;
    return out;
  }
  GamePosition succ = pos;
  succ.continuations.pop_back();
  succ.node = next_node;
  succ.verifier = obligated;
  out.mover = obligated;
  out.successors.push_back(std::move(succ));
  return out;
}

inline void enumerate_tuples(const std::set<Element>& domain, int k,
                             const std::function<void(const Tuple&)>& fn) {
  std::vector<Element> elems(domain.begin(), domain.end());
  Tuple t(k);
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      fn(t);
      return;
    }
    for (Element e : elems) {
      t[i] = e;
      rec(i + 1);
    }
  };
  if (k == 0) {
    fn(Tuple{});
    return;
  }
  if (elems.empty()) return;
  rec(0);
}

}  // namespace game_detail

inline Expansion expand(const GameContext& ctx, const GamePosition& pos) {
  const auto& node = ctx.formula.nodes.at(pos.node);
  const FormulaNode& f = *node.f;
  Expansion out;

  auto child_pos = [&](int child) {
    GamePosition p = pos;
    p.node = child;
    return p;
  };

  switch (f.kind) {
    case FKind::Atom:
    case FKind::TapeAtom: {
      RelTarget target{f.rel, 0, f.kind == FKind::TapeAtom};
      if (target.is_tape) {
        target.arity = f.tape_arity;
      } else {
        auto a = pos.structure.signature().arity_of(f.rel);
        if (!a) throw error("unknown-relation: " + f.rel);
        target.arity = *a;
      }
      std::vector<int> vars;
      for (const auto& a : f.args) vars.push_back(a.var);
      return game_detail::settle_atom(pos, eval_rel_atom(pos.structure, pos.assign, target, vars));
    }
    case FKind::Eq:
      return game_detail::settle_atom(
          pos, eval_eq_atom(pos.assign, f.args[0].var, f.args[1].var));
    case FKind::ClaimAtom: {
      std::vector<int> targets;
      if (ctx.convention == JumpConvention::Free) {
        targets = ctx.formula.occurrences(f.var);
      } else {
        for (int p = node.parent; p != -1; p = ctx.formula.nodes[p].parent) {
          const FormulaNode* g = ctx.formula.nodes[p].f;
          if (g->kind == FKind::Claim && g->var == f.var) {
            targets.push_back(p);
            break;
          }
        }
      }
      if (targets.empty()) {
        out.terminal = true;
        out.verdict = Outcome::Neither;  // the claim refers to nothing
        return out;
      }
      out.mover = pos.verifier;
      for (int t : targets) out.successors.push_back(child_pos(t));
      return out;
    }
    case FKind::Not: {
      GamePosition p = child_pos(node.child0);
      p.verifier = opponent(pos.verifier);
      out.mover = pos.verifier;
      out.successors.push_back(std::move(p));
      return out;
    }
    case FKind::And:
    case FKind::Or: {
      out.mover = f.kind == FKind::And ? opponent(pos.verifier) : pos.verifier;
      out.successors.push_back(child_pos(node.child0));
      out.successors.push_back(child_pos(node.child1));
      return out;
    }
    case FKind::Exists:
    case FKind::Forall: {
      out.mover = f.kind == FKind::Exists ? pos.verifier : opponent(pos.verifier);
      for (Element e : pos.structure.domain()) {
        GamePosition p = child_pos(node.child0);
        p.assign = pos.assign.set(f.var, e);
        out.successors.push_back(std::move(p));
      }
      return out;  // empty domain: the chooser is stuck and loses
    }
    case FKind::InsertPoint: {
      auto [s, fresh] = insert_element(pos.structure);
      GamePosition p = child_pos(node.child0);
      p.structure = std::move(s);
      p.assign = pos.assign.set(f.var, fresh);
      out.mover = pos.verifier;
      out.successors.push_back(std::move(p));
      return out;
    }
    case FKind::DeletePoint: {
      GamePosition p = child_pos(node.child0);
      if (auto u = pos.assign.get(f.var)) {
        p.structure = delete_element(pos.structure, *u);
        p.assign = pos.assign.erase_value(*u);
      }
      out.mover = pos.verifier;
      out.successors.push_back(std::move(p));
      return out;
    }
    case FKind::InsertTuple:
    case FKind::DeleteTuple: {
      RelTarget target{f.rel, 0, f.target_tape};
      if (f.target_tape) {
        target.arity = f.tape_arity;
      } else {
        auto a = pos.structure.signature().arity_of(f.rel);
        if (!a) throw error("unknown-relation: " + f.rel);
        target.arity = *a;
        if (target.arity != static_cast<int>(f.tuple_vars.size()))
          throw error("arity-mismatch in tuple operator on " + f.rel);
      }
      bool insert = f.kind == FKind::InsertTuple;
      out.mover = pos.verifier;
      game_detail::enumerate_tuples(pos.structure.domain(), target.arity, [&](const Tuple& t) {
        GamePosition p = child_pos(node.child0);
        p.structure = insert ? insert_tuple(pos.structure, target, t)
                             : delete_tuple(pos.structure, target, t);
        Assignment a = pos.assign;
        for (std::size_t i = 0; i < f.tuple_vars.size(); ++i)
          a = a.set(f.tuple_vars[i], t[i]);
        p.assign = std::move(a);
        out.successors.push_back(std::move(p));
      });
      return out;
    }
    case FKind::Claim: {
      out.mover = pos.verifier;
      out.successors.push_back(child_pos(node.child0));
      return out;
    }
    case FKind::Compose: {
      GamePosition p = child_pos(node.child0);
      p.continuations.push_back({node.child1, pos.verifier});
      out.mover = pos.verifier;
      out.successors.push_back(std::move(p));
      return out;
    }
    default:
      throw error("expand: node kind outside the game language");
  }
}

// Solved position graph with winning regions and a positional strategy
// witness for each labeled position of the winner.
struct Solved {
  Outcome outcome = Outcome::Unknown;
  bool closed = true;  // the reachable graph was fully explored
  int initial = 0;
  GameContext ctx;
  std::vector<GamePosition> positions;
  std::vector<std::vector<int>> successors;
  std::vector<Player> mover;
  std::vector<std::int8_t> terminal;  // -1 none, else Outcome value
  std::vector<bool> expanded;
  std::vector<std::int8_t> label;     // 0 unlabeled, 1 Eloise, 2 Abelard
  std::vector<int> strategy;          // labeled mover choices, else -1
  std::map<GamePosition, int> index;

  std::optional<int> find(const GamePosition& p) const {
    auto it = index.find(p);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Player> winner_of(int id) const {
    if (label[id] == 1) return Player::Eloise;
    if (label[id] == 2) return Player::Abelard;
    return std::nullopt;
  }
};

namespace game_detail {

inline void attractor(Solved& g, Player who) {
  const std::int8_t mark = who == Player::Eloise ? 1 : 2;
  const Outcome wins = who == Player::Eloise ? Outcome::EloiseWins : Outcome::AbelardWins;
  std::size_t n = g.positions.size();
  std::vector<std::vector<int>> preds(n);
  std::vector<int> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = static_cast<int>(g.successors[i].size());
    for (int s : g.successors[i]) preds[s].push_back(static_cast<int>(i));
  }
  std::deque<int> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.expanded[i]) continue;  // unexplored frontier: no information
    bool base = false;
    if (g.terminal[i] >= 0) {
      base = static_cast<Outcome>(g.terminal[i]) == wins;
    } else if (g.successors[i].empty()) {
      base = g.mover[i] != who;  // the stuck mover loses
    }
    if (base && g.label[i] == 0) {
      g.label[i] = mark;
      queue.push_back(static_cast<int>(i));
    }
  }
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (int p : preds[cur]) {
      if (g.label[p] != 0 || !g.expanded[p] || g.terminal[p] >= 0) continue;
      if (g.mover[p] == who) {
        g.label[p] = mark;
        g.strategy[p] = cur;
        queue.push_back(p);
      } else if (--pending[p] == 0) {
        g.label[p] = mark;
        queue.push_back(p);
      }
    }
  }
}

}  // namespace game_detail

inline Solved solve(const Structure& s, const Formula& phi, Budget budget = {},
                    JumpConvention conv = JumpConvention::Free) {
  // Tape relations named by the formula must start out empty.
  {
    std::function<void(const Formula&)> check = [&](const Formula& f) {
      if (!f) return;
      if (f->kind == FKind::TapeAtom && !s.tape_tuples({f->rel, f->tape_arity}).empty())
        throw error("tape relation " + f->rel + " must start empty");
      if ((f->kind == FKind::InsertTuple || f->kind == FKind::DeleteTuple) && f->target_tape &&
          !s.tape_tuples({f->rel, f->tape_arity}).empty())
        throw error("tape relation " + f->rel + " must start empty");
      check(f->left);
      check(f->right);
    };
    check(phi);
  }

  Solved g;
  g.ctx = GameContext::make(phi, conv);
  const std::size_t initial_domain = s.domain().size();
  const std::size_t growth_cap = initial_domain + static_cast<std::size_t>(budget.max_domain_growth);

  auto intern = [&](GamePosition p) -> std::pair<int, bool> {
    auto it = g.index.find(p);
    if (it != g.index.end()) return {it->second, false};
    int id = static_cast<int>(g.positions.size());
    g.index.emplace(p, id);
    g.positions.push_back(std::move(p));
    g.successors.emplace_back();
    g.mover.push_back(Player::Eloise);
    g.terminal.push_back(-1);
    g.expanded.push_back(false);
    g.label.push_back(0);
    g.strategy.push_back(-1);
    return {id, true};
  };

  g.initial = intern(GamePosition{s, Assignment{}, 0, Player::Eloise, {}}).first;
  std::deque<int> queue{g.initial};
  bool cut = false;

  while (!queue.empty()) {
    if (static_cast<std::int64_t>(g.positions.size()) > budget.max_positions) {
      cut = true;
      break;
    }
    int id = queue.front();
    queue.pop_front();
    const GamePosition& pos = g.positions[id];
    const FormulaNode& f = *g.ctx.formula.nodes[pos.node].f;
    if (f.kind == FKind::InsertPoint && pos.structure.domain().size() >= growth_cap) {
      cut = true;  // expanding would exceed the domain growth budget
      continue;
    }
    Expansion exp = expand(g.ctx, pos);
    g.expanded[id] = true;
    if (exp.terminal) {
      g.terminal[id] = static_cast<std::int8_t>(exp.verdict);
      continue;
    }
    g.mover[id] = exp.mover;
    for (auto& succ : exp.successors) {
      auto [sid, fresh] = intern(std::move(succ));
      auto& list = g.successors[id];
      bool dup = false;
      for (int x : list)
        if (x == sid) dup = true;
      if (!dup) list.push_back(sid);
      if (fresh) queue.push_back(sid);
    }
  }
  if (!queue.empty()) cut = true;
  g.closed = !cut;
  for (std::size_t i = 0; i < g.positions.size(); ++i)
    if (!g.expanded[i]) g.closed = false;

  game_detail::attractor(g, Player::Eloise);
  game_detail::attractor(g, Player::Abelard);

  if (g.label[g.initial] == 1)
    g.outcome = Outcome::EloiseWins;
  else if (g.label[g.initial] == 2)
    g.outcome = Outcome::AbelardWins;
  else
    g.outcome = g.closed ? Outcome::Neither : Outcome::Unknown;
  return g;
}

// Restriction to determined first-order play: the outcome is EloiseWins or
// AbelardWins and agrees with the Tarskian oracle.
inline Outcome solve_fo(const Structure& s, const Formula& phi, Budget budget = {}) {
  if (!is_fo(phi)) throw error("formula-not-FO");
  return solve(s, phi, budget).outcome;
}

}  // namespace structura
