#pragma once

// Terminal play of the semantic game. The machine plays the solved winning
// strategy where one is known and the first legal move otherwise; the human
// is prompted at each of their choice points. Every choice made at a
// branching node lands in the transcript, so a play replays exactly.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "structura/formula_print.hpp"
#include "structura/game.hpp"
#include "structura/structure_io.hpp"

namespace structura {

struct Transcript {
  std::vector<int> choices;  // successor indices at every branching node
  Outcome outcome = Outcome::Unknown;
  bool abandoned = false;
};

namespace play_detail {

inline std::string describe_successor(const GameContext& ctx, const GamePosition& from,
                                      const GamePosition& to) {
  std::string out = print_formula(ctx.formula.nodes[to.node].f);
  if (out.size() > 48) out = out.substr(0, 45) + "...";
  std::string bindings;
  for (const auto& [var, e] : to.assign.entries()) {
    auto old = from.assign.get(var);
    if (!old || *old != e) {
      if (!bindings.empty()) bindings += ", ";
      bindings += "x" + std::to_string(var) + "=" + element_name(e);
    }
  }
  if (!bindings.empty()) out += "   [" + bindings + "]";
  return out;
}

inline int machine_choice(const Solved* solved, const GamePosition& pos,
                          const Expansion& exp) {
  if (solved) {
    auto id = solved->find(pos);
    if (id && solved->winner_of(*id).has_value()) {
      int target = solved->strategy[*id];
      if (target >= 0) {
        const GamePosition& goal = solved->positions[target];
        for (std::size_t k = 0; k < exp.successors.size(); ++k)
          if (exp.successors[k] == goal) return static_cast<int>(k);
      }
    }
  }
  return 0;
}

}  // namespace play_detail

// Drives one play. Pass the transcript of an earlier play as `script` to
// replay it without prompting (both players scripted).
inline Transcript play_game(const Structure& s, const Formula& phi, Player human_role,
                            std::istream& in, std::ostream& out, Budget budget = {},
                            JumpConvention conv = JumpConvention::Free,
                            const std::vector<int>* script = nullptr, int max_steps = 5000) {
  Transcript t;
  Solved solved = solve(s, phi, budget, conv);
  const GameContext& ctx = solved.ctx;
  GamePosition pos{s, Assignment{}, 0, Player::Eloise, {}};
  std::size_t scripted = 0;

  for (int step = 0; step < max_steps; ++step) {
    Expansion exp = expand(ctx, pos);
    if (exp.terminal) {
      t.outcome = exp.verdict;
      if (t.outcome == Outcome::Neither)
        out << "the play ends with neither player winning\n";
      else
        out << (t.outcome == Outcome::EloiseWins ? "Eloise wins\n" : "Abelard wins\n");
      return t;
    }
    if (exp.successors.empty()) {
      Player winner = opponent(exp.mover);
      t.outcome = winner == Player::Eloise ? Outcome::EloiseWins : Outcome::AbelardWins;
      out << player_name(exp.mover) << " has no move; " << player_name(winner) << " wins\n";
      return t;
    }

    int choice = 0;
    if (exp.successors.size() > 1) {
      if (script) {
        if (scripted >= script->size()) throw error("transcript ended before the play did");
        choice = (*script)[scripted++];
      } else if (exp.mover == human_role) {
        out << player_name(exp.mover) << " to move at: "
            << play_detail::describe_successor(ctx, pos, pos) << "\n";
        for (std::size_t k = 0; k < exp.successors.size(); ++k)
          out << "  [" << k << "] "
              << play_detail::describe_successor(ctx, pos, exp.successors[k]) << "\n";
        out << "choice (or q to concede): " << std::flush;
        std::string token;
        if (!(in >> token) || token == "q" || token == "quit") {
          t.abandoned = true;
          out << "\nplay abandoned\n";
          return t;
        }
        try {
          choice = std::stoi(token);
        } catch (...) {
          choice = -1;
        }
        if (choice < 0 || choice >= static_cast<int>(exp.successors.size())) {
          out << "no such move, try again\n";
          continue;
        }
      } else {
        choice = play_detail::machine_choice(&solved, pos, exp);
        out << player_name(exp.mover) << " plays ["
            << choice << "] "
            << play_detail::describe_successor(ctx, pos, exp.successors[choice]) << "\n";
      }
      if (choice < 0 || choice >= static_cast<int>(exp.successors.size()))
        throw error("transcript contains an illegal move");
      t.choices.push_back(choice);
    }
    pos = exp.successors[choice];
  }
  out << "the play did not end within " << max_steps << " steps\n";
  t.outcome = Outcome::Unknown;
  return t;
}

inline Outcome replay_transcript(const Structure& s, const Formula& phi,
                                 const std::vector<int>& choices, Budget budget = {},
                                 JumpConvention conv = JumpConvention::Free,
                                 int max_steps = 5000) {
  std::istringstream in;
  std::ostringstream out;
  Transcript t = play_game(s, phi, Player::Eloise, in, out, budget, conv, &choices, max_steps);
  return t.outcome;
}

inline std::string print_transcript(const Transcript& t) {
  std::string out = "choices:";
  for (int c : t.choices) out += " " + std::to_string(c);
  out += "\n";
  if (t.abandoned)
    out += "abandoned\n";
  else
    out += std::string("outcome: ") + outcome_name(t.outcome) + "\n";
  return out;
}

inline Transcript parse_transcript(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ws(line);
    std::string head;
    if (!(ws >> head)) continue;
    if (head == "choices:") {
      int c;
      while (ws >> c) t.choices.push_back(c);
    } else if (head == "abandoned") {
      t.abandoned = true;
    } else if (head == "outcome:") {
      std::string o;
      ws >> o;
      for (Outcome v : {Outcome::EloiseWins, Outcome::AbelardWins, Outcome::Neither,
                        Outcome::Unknown})
        if (o == outcome_name(v)) t.outcome = v;
    }
  }
  return t;
}

}  // namespace structura
