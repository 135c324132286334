#pragma once

// Formula AST shared by the oracle, the game engine, the compiler and the
// modal evaluator. Nodes are immutable and shared; builders return
// shared_ptr values.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "structura/structure.hpp"

namespace structura {

enum class FKind {
  Atom,         // R(args) over the signature
  TapeAtom,     // X:k(args) over a tape symbol
  Eq,           // t1 = t2
  ClaimAtom,    // bare C_i
  Not,
  And,
  Or,
  Exists,       // Ex x_v. left
  Forall,       // All x_v. left
  InsertPoint,  // ins x_v. left
  InsertTuple,  // ins R(vars). left
  DeletePoint,  // del x_v. left
  DeleteTuple,  // del R(vars). left
  Claim,        // C_i left
  Compose,      // left ; right
  BoxMod,       // box[m] left
  DiaMod,       // dia[m] left
};

// Atom argument: a variable x<var> or a named constant (an element of some
// externally supplied universe, resolved at evaluation time).
struct AtomArg {
  bool is_var = true;
  int var = 0;
  std::string name;

  static AtomArg v(int var) { return AtomArg{true, var, {}}; }
  static AtomArg named(std::string n) { return AtomArg{false, 0, std::move(n)}; }

  bool operator==(const AtomArg&) const = default;
  auto operator<=>(const AtomArg&) const = default;
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct ModArg {
  enum Kind { FormulaArg, NameArg, IntArg } kind = NameArg;
  Formula formula;
  std::string name;
  long value = 0;
};

struct ModifierCall {
  std::string name;
  std::vector<ModArg> args;
};

struct FormulaNode {
  FKind kind;
  std::string rel;              // Atom/TapeAtom/InsertTuple/DeleteTuple
  int tape_arity = 0;           // TapeAtom, and tuple ops with target_tape
  bool target_tape = false;     // tuple ops aimed at a tape symbol
  std::vector<AtomArg> args;    // Atom/TapeAtom arguments; Eq uses args[0], args[1]
  int var = 0;                  // quantifier/point-op variable, or claim index
  std::vector<int> tuple_vars;  // InsertTuple/DeleteTuple variables
  Formula left, right;
  std::optional<ModifierCall> mod;
};

namespace fb {

inline Formula node(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }

inline Formula atom(std::string rel, std::vector<AtomArg> args) {
  FormulaNode n{FKind::Atom};
  n.rel = std::move(rel);
  n.args = std::move(args);
  return node(std::move(n));
}

inline Formula atomv(std::string rel, std::vector<int> vars) {
  std::vector<AtomArg> args;
  for (int v : vars) args.push_back(AtomArg::v(v));
  return atom(std::move(rel), std::move(args));
}

inline Formula tape_atom(std::string name, int arity, std::vector<AtomArg> args) {
  FormulaNode n{FKind::TapeAtom};
  n.rel = std::move(name);
  n.tape_arity = arity;
  n.args = std::move(args);
  return node(std::move(n));
}

inline Formula eq(AtomArg a, AtomArg b) {
  FormulaNode n{FKind::Eq};
  n.args = {std::move(a), std::move(b)};
  return node(std::move(n));
}

inline Formula eqv(int x, int y) { return eq(AtomArg::v(x), AtomArg::v(y)); }

inline Formula claim_atom(int i) {
  FormulaNode n{FKind::ClaimAtom};
  n.var = i;
  return node(std::move(n));
}

inline Formula unary(FKind k, Formula f) {
  FormulaNode n{k};
  n.left = std::move(f);
  return node(std::move(n));
}

inline Formula lnot(Formula f) { return unary(FKind::Not, std::move(f)); }

inline Formula binary(FKind k, Formula a, Formula b) {
  FormulaNode n{k};
  n.left = std::move(a);
  n.right = std::move(b);
  return node(std::move(n));
}

inline Formula land(Formula a, Formula b) { return binary(FKind::And, std::move(a), std::move(b)); }
inline Formula lor(Formula a, Formula b) { return binary(FKind::Or, std::move(a), std::move(b)); }
inline Formula compose(Formula a, Formula b) {
  return binary(FKind::Compose, std::move(a), std::move(b));
}

inline Formula quant(FKind k, int var, Formula f) {
  FormulaNode n{k};
  n.var = var;
  n.left = std::move(f);
  return node(std::move(n));
}

inline Formula exists(int v, Formula f) { return quant(FKind::Exists, v, std::move(f)); }
inline Formula forall(int v, Formula f) { return quant(FKind::Forall, v, std::move(f)); }
inline Formula ins_point(int v, Formula f) { return quant(FKind::InsertPoint, v, std::move(f)); }
inline Formula del_point(int v, Formula f) { return quant(FKind::DeletePoint, v, std::move(f)); }

inline Formula tuple_op(FKind k, std::string rel, std::vector<int> vars, Formula f,
                        bool tape = false, int tape_arity = 0) {
  FormulaNode n{k};
  n.rel = std::move(rel);
  n.tuple_vars = std::move(vars);
  n.target_tape = tape;
  n.tape_arity = tape ? tape_arity : static_cast<int>(n.tuple_vars.size());
  n.left = std::move(f);
  return node(std::move(n));
}

inline Formula ins_tuple(std::string rel, std::vector<int> vars, Formula f, bool tape = false) {
  int arity = static_cast<int>(vars.size());
  return tuple_op(FKind::InsertTuple, std::move(rel), std::move(vars), std::move(f), tape, arity);
}

inline Formula del_tuple(std::string rel, std::vector<int> vars, Formula f, bool tape = false) {
  int arity = static_cast<int>(vars.size());
  return tuple_op(FKind::DeleteTuple, std::move(rel), std::move(vars), std::move(f), tape, arity);
}

inline Formula claim(int i, Formula f) {
  FormulaNode n{FKind::Claim};
  n.var = i;
  n.left = std::move(f);
  return node(std::move(n));
}

inline Formula boxmod(ModifierCall m, Formula f) {
  FormulaNode n{FKind::BoxMod};
  n.mod = std::move(m);
  n.left = std::move(f);
  return node(std::move(n));
}

inline Formula diamod(ModifierCall m, Formula f) {
  FormulaNode n{FKind::DiaMod};
  n.mod = std::move(m);
  n.left = std::move(f);
  return node(std::move(n));
}

}  // namespace fb

inline bool equal_formula(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->rel != b->rel || a->tape_arity != b->tape_arity ||
      a->target_tape != b->target_tape || a->args != b->args || a->var != b->var ||
      a->tuple_vars != b->tuple_vars)
    return false;
  if (a->mod.has_value() != b->mod.has_value()) return false;
  if (a->mod) {
    if (a->mod->name != b->mod->name || a->mod->args.size() != b->mod->args.size())
      return false;
    for (std::size_t i = 0; i < a->mod->args.size(); ++i) {
      const ModArg& x = a->mod->args[i];
      const ModArg& y = b->mod->args[i];
      if (x.kind != y.kind || x.name != y.name || x.value != y.value) return false;
      if (x.kind == ModArg::FormulaArg && !equal_formula(x.formula, y.formula)) return false;
    }
  }
  return equal_formula(a->left, b->left) && equal_formula(a->right, b->right);
}

// Free variables under the usual FO reading. Quantifiers and the tuple
// operators bind their variables; the point-deletion operator reads its
// variable, so that variable counts as free.
inline void free_vars_into(const Formula& f, std::set<int>& bound, std::set<int>& out) {
  if (!f) return;
  switch (f->kind) {
    case FKind::Atom:
    case FKind::TapeAtom:
    case FKind::Eq:
      for (const auto& a : f->args)
        if (a.is_var && !bound.count(a.var)) out.insert(a.var);
      return;
    case FKind::ClaimAtom:
      return;
    case FKind::Exists:
    case FKind::Forall:
    case FKind::InsertPoint: {
      bool was = bound.count(f->var) > 0;
      bound.insert(f->var);
      free_vars_into(f->left, bound, out);
      if (!was) bound.erase(f->var);
      return;
    }
    case FKind::DeletePoint: {
      if (!bound.count(f->var)) out.insert(f->var);
      free_vars_into(f->left, bound, out);
      return;
    }
    case FKind::InsertTuple:
    case FKind::DeleteTuple: {
      std::set<int> added;
      for (int v : f->tuple_vars)
        if (bound.insert(v).second) added.insert(v);
      free_vars_into(f->left, bound, out);
      for (int v : added) bound.erase(v);
      return;
    }
    default:
      if (f->mod)
        for (const auto& a : f->mod->args)
          if (a.kind == ModArg::FormulaArg) {
            std::set<int> inner_bound;
            free_vars_into(a.formula, inner_bound, out);
          }
      free_vars_into(f->left, bound, out);
      free_vars_into(f->right, bound, out);
      return;
  }
}

inline std::vector<int> free_vars(const Formula& f) {
  std::set<int> bound, out;
  free_vars_into(f, bound, out);
  return {out.begin(), out.end()};  // strictly increasing subindices
}

inline int max_var_index(const Formula& f) {
  if (!f) return 0;
  int m = f->var;
  if (f->kind == FKind::ClaimAtom || f->kind == FKind::Claim) m = 0;
  for (const auto& a : f->args)
    if (a.is_var) m = std::max(m, a.var);
  for (int v : f->tuple_vars) m = std::max(m, v);
  if (f->mod)
    for (const auto& a : f->mod->args)
      if (a.kind == ModArg::FormulaArg) m = std::max(m, max_var_index(a.formula));
  return std::max({m, max_var_index(f->left), max_var_index(f->right)});
}

inline bool contains_names(const Formula& f) {
  if (!f) return false;
  for (const auto& a : f->args)
    if (!a.is_var) return true;
  if (f->mod)
    for (const auto& a : f->mod->args)
      if (a.kind == ModArg::FormulaArg && contains_names(a.formula)) return true;
  return contains_names(f->left) || contains_names(f->right);
}

// Pure first-order: the fragment where the semantic game is determined and
// the Tarskian oracle applies directly.
inline bool is_fo(const Formula& f, bool allow_names = false) {
  if (!f) return true;
  switch (f->kind) {
    case FKind::Atom:
    case FKind::Eq:
      if (!allow_names)
        for (const auto& a : f->args)
          if (!a.is_var) return false;
      return true;
    case FKind::Not:
      return is_fo(f->left, allow_names);
    case FKind::And:
    case FKind::Or:
      return is_fo(f->left, allow_names) && is_fo(f->right, allow_names);
    case FKind::Exists:
    case FKind::Forall:
      return is_fo(f->left, allow_names);
    default:
      return false;
  }
}

inline bool is_game_formula(const Formula& f) {
  if (!f) return true;
  if (f->kind == FKind::BoxMod || f->kind == FKind::DiaMod) return false;
  for (const auto& a : f->args)
    if (!a.is_var) return false;
  return is_game_formula(f->left) && is_game_formula(f->right);
}

// Claim indices occurring anywhere in the formula (as atom or prefix).
inline void claim_indices_into(const Formula& f, std::set<int>& out) {
  if (!f) return;
  if (f->kind == FKind::ClaimAtom || f->kind == FKind::Claim) out.insert(f->var);
  claim_indices_into(f->left, out);
  claim_indices_into(f->right, out);
}

inline std::set<int> claim_indices(const Formula& f) {
  std::set<int> out;
  claim_indices_into(f, out);
  return out;
}

// Rewrites Or and Forall into the core connectives. The game and oracle
// semantics of the native nodes agree with the desugared forms.
inline Formula desugar_or_forall(const Formula& f) {
  if (!f) return f;
  auto l = desugar_or_forall(f->left);
  auto r = desugar_or_forall(f->right);
  switch (f->kind) {
    case FKind::Or:
      return fb::lnot(fb::land(fb::lnot(l), fb::lnot(r)));
    case FKind::Forall:
      return fb::lnot(fb::exists(f->var, fb::lnot(l)));
    default: {
      if (l == f->left && r == f->right) return f;
      FormulaNode n = *f;
      n.left = l;
      n.right = r;
      return fb::node(std::move(n));
    }
  }
}

// Capture-avoiding substitution of a variable by another variable. Fresh
// replacement indices must exceed every index in the formula.
inline Formula subst_var(const Formula& f, int from, int to) {
  if (!f) return f;
  FormulaNode n = *f;
  switch (f->kind) {
    case FKind::Atom:
    case FKind::TapeAtom:
    case FKind::Eq:
      for (auto& a : n.args)
        if (a.is_var && a.var == from) a.var = to;
      return fb::node(std::move(n));
    case FKind::ClaimAtom:
      return f;
    case FKind::Exists:
    case FKind::Forall:
    case FKind::InsertPoint:
      if (f->var == from) return f;  // shadowed
      n.left = subst_var(f->left, from, to);
      return fb::node(std::move(n));
    case FKind::DeletePoint:
      // del binds nothing: its variable is read, and occurrences in the
      // body stay free, so all of them rename together.
      if (f->var == from) n.var = to;
      n.left = subst_var(f->left, from, to);
      return fb::node(std::move(n));
    case FKind::InsertTuple:
    case FKind::DeleteTuple: {
      bool shadows = false;
      for (int v : f->tuple_vars)
        if (v == from) shadows = true;
      if (!shadows) n.left = subst_var(f->left, from, to);
      return fb::node(std::move(n));
    }
    default:
      n.left = subst_var(f->left, from, to);
      n.right = subst_var(f->right, from, to);
      return fb::node(std::move(n));
  }
}

// A fixed root formula indexed into a node table. Tree positions (not
// shared subterm identities) are what game positions refer to, and jump
// targets are looked up here.
struct IndexedFormula {
  Formula root;
  struct Node {
    const FormulaNode* f = nullptr;
    int parent = -1;
    int child0 = -1;
    int child1 = -1;
  };
  std::vector<Node> nodes;                  // preorder; node 0 is the root
  std::map<int, std::vector<int>> claims;   // claim index -> Claim-prefix node ids

  static IndexedFormula build(Formula root) {
    IndexedFormula out;
    out.root = root;
    build_rec(out, root, -1);
    return out;
  }

  // All Claim(i, _) positions, in left-to-right (preorder) order.
  const std::vector<int>& occurrences(int claim_index) const {
    static const std::vector<int> kEmpty;
    auto it = claims.find(claim_index);
    return it == claims.end() ? kEmpty : it->second;
  }

 private:
  static int build_rec(IndexedFormula& out, const Formula& f, int parent) {
    if (!f) return -1;
    int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back({f.get(), parent, -1, -1});
    if (f->kind == FKind::Claim) out.claims[f->var].push_back(id);
    int c0 = build_rec(out, f->left, id);
    int c1 = build_rec(out, f->right, id);
    out.nodes[id].child0 = c0;
    out.nodes[id].child1 = c1;
    return id;
  }
};

}  // namespace structura
