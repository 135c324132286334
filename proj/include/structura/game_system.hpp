#pragma once

// Realizes a semantic game as a system: Eloise is the sole agent and
// Abelard is played by G. The current world is the current model-assignment
// pair (the assignment rides along in reserved tape relations); the rest of
// the game state (formula node, verifier, continuation stack) lives in the
// agent's mental model, reconstructed from the history by replaying it.
// The game is turn-based, so Eloise submits the dummy action "noop"
// whenever the move is not hers.

#include <cctype>
#include <memory>
#include <string>

#include "structura/game.hpp"
#include "structura/systems.hpp"

namespace structura {

namespace bridge_detail {

inline std::string assign_tape_name(int var) { return "@x" + std::to_string(var); }

// The world is the model-assignment pair: the assignment rides in @x tapes.
// A marker element tagged @node<j> additionally pins the formula node, so
// that distinct game moves always yield distinct worlds (an And-move, say,
// changes neither the structure nor the assignment).
inline Structure encode_world(const GamePosition& p) {
  auto [s, marker] = insert_element(p.structure);
  s = insert_tape_tuple(s, {"@state", 1}, {marker});
  s = insert_tape_tuple(s, {"@node" + std::to_string(p.node), 1}, {marker});
  for (const auto& [var, elem] : p.assign.entries())
    s = insert_tape_tuple(s, {assign_tape_name(var), 1}, {elem});
  return s;
}

inline std::string move_action(int k) { return "m" + std::to_string(k); }

inline std::optional<int> parse_move(const std::string& a) {
  if (a.size() < 2 || a[0] != 'm') return std::nullopt;
  int v = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(a[i]))) return std::nullopt;
    v = v * 10 + (a[i] - '0');
  }
  return v;
}

}  // namespace bridge_detail

struct GameSystem {
  SystemDef def;
  std::shared_ptr<const GameContext> ctx;
  GamePosition start;
  // Reconstructs the current game position from a structure-ended history
  // (this is the perception map behind the Eloise agent).
  std::function<GamePosition(const Evolution&)> decode;
};

struct PlayStatus {
  bool ended = false;
  std::optional<Player> winner;  // empty on a neither-ending or a running play
};

namespace bridge_detail {

// Advances the replayed position by one recorded round. Eloise's recorded
// action fixes her move; for every other node the successor is identified
// by the world G picked (first match in rule order).
inline GamePosition advance_replay(const GameContext& ctx, const GamePosition& pos,
                                   const ActionTuple& actions, const Structure& next_world) {
  Expansion exp = expand(ctx, pos);
  if (exp.terminal || exp.successors.empty())
    throw error("bridge: history continues past the end of the play");
  if (exp.mover == Player::Eloise) {
    auto k = actions.empty() ? std::nullopt : parse_move(actions[0]);
    if (!k || *k < 0 || *k >= static_cast<int>(exp.successors.size()))
      throw error("bridge: history records an illegal move");
    const GamePosition& succ = exp.successors[*k];
    if (!(encode_world(succ) == next_world))
      throw error("bridge: recorded world does not match the chosen move");
    return succ;
  }
  for (const auto& succ : exp.successors)
    if (encode_world(succ) == next_world) return succ;
  throw error("bridge: recorded world matches no legal move");
}

inline GamePosition decode_history(const GameContext& ctx, const GamePosition& start,
                                   const Evolution& e) {
  if (e.empty()) return start;
  if (!e.structure_ended()) throw error("bridge: decode wants a structure-ended history");
  GamePosition pos = start;
  if (!(encode_world(pos) == e.structures[0]))
    throw error("bridge: history starts from a different world");
  for (std::size_t i = 0; i < e.actions.size(); ++i)
    pos = advance_replay(ctx, pos, e.actions[i], e.structures[i + 1]);
  return pos;
}

}  // namespace bridge_detail

// The winner's solved strategy (when given) drives that player's choices;
// every other choice takes the first legal option.
inline GameSystem semantic_game_as_system(const Structure& s, const Formula& phi,
                                          const Solved* solved = nullptr,
                                          JumpConvention conv = JumpConvention::Free) {
  GameSystem out;
  out.ctx = std::make_shared<const GameContext>(GameContext::make(phi, conv));
  out.start = GamePosition{s, Assignment{}, 0, Player::Eloise, {}};

  out.def.actions = {kNoop};
  for (int i = 0; i < 16; ++i) out.def.actions.push_back(bridge_detail::move_action(i));
  out.def.agents = {"eloise"};

  auto ctx = out.ctx;
  GamePosition start = out.start;
  out.decode = [ctx, start](const Evolution& e) {
    return bridge_detail::decode_history(*ctx, start, e);
  };
  auto decode = out.decode;

  auto strategy_move = [solved](const GamePosition& pos, Player who,
                                const Expansion& exp) -> std::optional<int> {
    if (!solved) return std::nullopt;
    auto id = solved->find(pos);
    if (!id) return std::nullopt;
    if (solved->winner_of(*id) != who) return std::nullopt;
    int target = solved->strategy[*id];
    if (target < 0) return std::nullopt;
    const GamePosition& goal = solved->positions[target];
    for (std::size_t k = 0; k < exp.successors.size(); ++k)
      if (exp.successors[k] == goal) return static_cast<int>(k);
    return std::nullopt;
  };

  // Eloise: pick by the solved strategy where it wins, otherwise the first
  // option; dummy "noop" when the move is not hers.
  out.def.agent_fns.push_back([ctx, decode, strategy_move](const Evolution& e)
                                  -> std::optional<Action> {
    GamePosition pos = decode(e);
    Expansion exp = expand(*ctx, pos);
    if (exp.terminal || exp.successors.empty() || exp.mover != Player::Eloise) return kNoop;
    if (auto k = strategy_move(pos, Player::Eloise, exp))
      return bridge_detail::move_action(*k);
    return bridge_detail::move_action(0);
  });

  // F: the game rules. Terminal positions allow no continuation; Eloise
  // moves constrain the candidate set to her pick; Abelard's freedom is
  // F's nondeterminism, resolved by G.
  out.def.F = [ctx, decode](const Evolution& e) -> std::optional<std::vector<Structure>> {
    Evolution prefix;
    prefix.structures = e.structures;
    prefix.actions.assign(e.actions.begin(), e.actions.end() - 1);
    GamePosition pos = decode(prefix);
    Expansion exp = expand(*ctx, pos);
    if (exp.terminal || exp.successors.empty()) return std::vector<Structure>{};
    const ActionTuple& acts = e.actions.back();
    if (acts.empty()) return std::nullopt;
    if (exp.mover == Player::Eloise) {
      auto k = bridge_detail::parse_move(acts[0]);
      if (!k || *k < 0 || *k >= static_cast<int>(exp.successors.size()))
        return std::nullopt;  // forbidden: not a legal move of hers
      return std::vector<Structure>{bridge_detail::encode_world(exp.successors[*k])};
    }
    if (acts[0] != kNoop) return std::nullopt;  // a dummy move was required
    std::vector<Structure> worlds;
    for (const auto& succ : exp.successors) {
      Structure w = bridge_detail::encode_world(succ);
      bool dup = false;
      for (const auto& x : worlds)
        if (x == w) dup = true;
      if (!dup) worlds.push_back(std::move(w));
    }
    return worlds;
  };
  // F(eps) must produce the encoded start world.
  {
    Structure b0 = bridge_detail::encode_world(out.start);
    FMap inner = out.def.F;
    out.def.F = [inner, b0](const Evolution& e) -> std::optional<std::vector<Structure>> {
      if (e.empty()) return std::vector<Structure>{b0};
      return inner(e);
    };
  }

  // G: plays Abelard (via his solved strategy where it wins), and rubber-
  // stamps the unique candidate everywhere else.
  out.def.G = [ctx, decode, strategy_move](const Evolution& e, const std::vector<Structure>& w)
      -> std::optional<GChoice> {
    if (w.empty()) return GChoice::end();
    if (e.empty()) return GChoice::pick(w[0]);
    Evolution prefix;
    prefix.structures = e.structures;
    prefix.actions.assign(e.actions.begin(), e.actions.end() - 1);
    GamePosition pos = decode(prefix);
    Expansion exp = expand(*ctx, pos);
    if (exp.mover == Player::Abelard && !exp.terminal && !exp.successors.empty()) {
      if (auto k = strategy_move(pos, Player::Abelard, exp)) {
        Structure want = bridge_detail::encode_world(exp.successors[*k]);
        for (const auto& cand : w)
          if (cand == want) return GChoice::pick(cand);
      }
    }
    return GChoice::pick(w[0]);
  };

  return out;
}

// Reads the play status off a structure-ended bridge history.
inline PlayStatus bridge_play_status(const GameSystem& sys, const Evolution& e) {
  GamePosition pos = sys.decode(e);
  Expansion exp = expand(*sys.ctx, pos);
  PlayStatus out;
  if (exp.terminal) {
    out.ended = true;
    if (exp.verdict == Outcome::EloiseWins) out.winner = Player::Eloise;
    if (exp.verdict == Outcome::AbelardWins) out.winner = Player::Abelard;
    return out;
  }
  if (exp.successors.empty()) {
    out.ended = true;
    out.winner = opponent(exp.mover);  // the stuck mover loses
    return out;
  }
  return out;
}

}  // namespace structura
