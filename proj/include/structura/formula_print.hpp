#pragma once

// Canonical pretty-printer (round-trips through parse_formula) and the
// English reading of formulas.

#include <string>

#include "structura/formula.hpp"

namespace structura {

namespace print_detail {

// Precedence levels: compose=0, or=1, and=2, unary=3, atom=4.
inline int level(const FormulaNode& f) {
  switch (f.kind) {
    case FKind::Compose: return 0;
    case FKind::Or: return 1;
    case FKind::And: return 2;
    case FKind::Atom:
    case FKind::TapeAtom:
    case FKind::Eq:
    case FKind::ClaimAtom: return 4;
    default: return 3;
  }
}

inline std::string arg_text(const AtomArg& a) {
  return a.is_var ? "x" + std::to_string(a.var) : a.name;
}

inline std::string arg_list(const std::vector<AtomArg>& args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += arg_text(args[i]);
  }
  return out + ")";
}

inline std::string var_list(const std::vector<int>& vars) {
  std::string out = "(";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += "x" + std::to_string(vars[i]);
  }
  return out + ")";
}

inline std::string print_mod_call(const ModifierCall& m);

inline std::string print_rec(const Formula& f, int min_level) {
  const FormulaNode& n = *f;
  int lv = level(n);
  std::string out;
  switch (n.kind) {
    case FKind::Atom:
      out = n.rel + arg_list(n.args);
      break;
    case FKind::TapeAtom:
      out = n.rel + ":" + std::to_string(n.tape_arity) + arg_list(n.args);
      break;
    case FKind::Eq:
      out = arg_text(n.args[0]) + "=" + arg_text(n.args[1]);
      break;
    case FKind::ClaimAtom:
      out = "C" + std::to_string(n.var);
      break;
    case FKind::Not:
      out = "~" + print_rec(n.left, 3);
      break;
    case FKind::And:
      out = print_rec(n.left, 2) + " & " + print_rec(n.right, 3);
      break;
    case FKind::Or:
      out = print_rec(n.left, 1) + " | " + print_rec(n.right, 2);
      break;
    case FKind::Compose:
      out = print_rec(n.left, 0) + " ; " + print_rec(n.right, 1);
      break;
    case FKind::Exists:
      out = "Ex x" + std::to_string(n.var) + ". " + print_rec(n.left, 3);
      break;
    case FKind::Forall:
      out = "All x" + std::to_string(n.var) + ". " + print_rec(n.left, 3);
      break;
    case FKind::InsertPoint:
      out = "ins x" + std::to_string(n.var) + ". " + print_rec(n.left, 3);
      break;
    case FKind::DeletePoint:
      out = "del x" + std::to_string(n.var) + ". " + print_rec(n.left, 3);
      break;
    case FKind::InsertTuple:
    case FKind::DeleteTuple:
      out = (n.kind == FKind::InsertTuple ? "ins " : "del ") + n.rel +
            (n.target_tape ? ":" + std::to_string(n.tape_arity) : "") +
            var_list(n.tuple_vars) + ". " + print_rec(n.left, 3);
      break;
    case FKind::Claim:
      out = "C" + std::to_string(n.var) + " " + print_rec(n.left, 3);
      break;
    case FKind::BoxMod:
      out = "box[" + print_mod_call(*n.mod) + "] " + print_rec(n.left, 3);
      break;
    case FKind::DiaMod:
      out = "dia[" + print_mod_call(*n.mod) + "] " + print_rec(n.left, 3);
      break;
  }
  if (lv < min_level) return "(" + out + ")";
  return out;
}

inline std::string print_mod_call(const ModifierCall& m) {
  std::string out = m.name;
  if (!m.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < m.args.size(); ++i) {
      if (i) out += ",";
      const ModArg& a = m.args[i];
      switch (a.kind) {
        case ModArg::IntArg: out += std::to_string(a.value); break;
        case ModArg::NameArg: out += a.name; break;
        case ModArg::FormulaArg: out += print_rec(a.formula, 0); break;
      }
    }
    out += ")";
  }
  return out;
}

}  // namespace print_detail

inline std::string print_formula(const Formula& f) {
  return print_detail::print_rec(f, 0);
}

// For printing nodes of an indexed formula without owning them.
inline std::string print_formula(const FormulaNode* node) {
  return print_detail::print_rec(Formula(node, [](const FormulaNode*) {}), 0);
}

// English reading: truth replaced by verification. With `careful` set, the
// atoms get the explicit referent reading that stays meaningful when a
// variable has no value.
inline std::string translate_nl(const Formula& f, bool careful = false) {
  using print_detail::arg_text;
  const FormulaNode& n = *f;
  auto varname = [](int v) { return "x" + std::to_string(v); };
  switch (n.kind) {
    case FKind::Eq:
      if (careful)
        return "the referent of " + arg_text(n.args[0]) + " is equal to the referent of " +
               arg_text(n.args[1]);
      return arg_text(n.args[0]) + " equals " + arg_text(n.args[1]);
    case FKind::Atom:
    case FKind::TapeAtom: {
      if (careful) {
        std::string out = "the referents of ";
        for (std::size_t i = 0; i < n.args.size(); ++i) {
          if (i) out += ", ";
          out += arg_text(n.args[i]);
        }
        return out + " form a tuple in " + n.rel + " in the given order";
      }
      return print_formula(f);
    }
    case FKind::ClaimAtom:
      return "C" + std::to_string(n.var);
    case FKind::Exists:
      return "there exists an " + varname(n.var) + " such that " + translate_nl(n.left, careful);
    case FKind::Forall:
      return "for all " + varname(n.var) + ", " + translate_nl(n.left, careful);
    case FKind::And:
      return translate_nl(n.left, careful) + " and " + translate_nl(n.right, careful);
    case FKind::Or:
      return translate_nl(n.left, careful) + " or " + translate_nl(n.right, careful);
    case FKind::Not:
      return "it is falsifiable that " + translate_nl(n.left, careful);
    case FKind::InsertPoint:
      return "it is possible to insert a new element " + varname(n.var) + " such that " +
             translate_nl(n.left, careful);
    case FKind::InsertTuple:
      return "it is possible to insert a tuple " + print_detail::var_list(n.tuple_vars) +
             " into " + n.rel + " such that " + translate_nl(n.left, careful);
    case FKind::DeletePoint:
      return "it is possible to delete the element " + varname(n.var) + " such that " +
             translate_nl(n.left, careful);
    case FKind::DeleteTuple:
      return "it is possible to delete a tuple " + print_detail::var_list(n.tuple_vars) +
             " from " + n.rel + " such that " + translate_nl(n.left, careful);
    case FKind::Claim:
      return "it is possible to verify the claim C" + std::to_string(n.var) +
             " which states that " + translate_nl(n.left, careful);
    case FKind::Compose:
      return "first, " + translate_nl(n.left, careful) + "; then, " +
             translate_nl(n.right, careful);
    case FKind::BoxMod:
      return "after every " + n.mod->name + " modification, " + translate_nl(n.left, careful);
    case FKind::DiaMod:
      return "after some " + n.mod->name + " modification, " + translate_nl(n.left, careful);
  }
  return {};
}

}  // namespace structura
