#pragma once

// Finite relational structures: the evolving "board" every other component
// works on. Structures are immutable values; mutation primitives return new
// structures sharing nothing mutable with the original.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace structura {

using Element = std::int32_t;
using Tuple = std::vector<Element>;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parse_error : error {
  int line = 0;
  int col = 0;
  parse_error(const std::string& msg, int l, int c)
      : error(msg + " (line " + std::to_string(l) + ", col " + std::to_string(c) + ")"),
        line(l), col(c) {}
};

// Purely relational signature: named relations with fixed arities, no
// constants or function symbols.
struct Signature {
  std::vector<std::pair<std::string, int>> relations;

  Signature() = default;
  Signature(std::initializer_list<std::pair<std::string, int>> rels)
      : relations(rels) {
    validate();
  }
  explicit Signature(std::vector<std::pair<std::string, int>> rels)
      : relations(std::move(rels)) {
    validate();
  }

  void validate() const {
    for (std::size_t i = 0; i < relations.size(); ++i) {
      if (relations[i].second < 0)
        throw error("signature: negative arity for " + relations[i].first);
      for (std::size_t j = i + 1; j < relations.size(); ++j)
        if (relations[i].first == relations[j].first)
          throw error("signature: duplicate relation name " + relations[i].first);
    }
  }

  std::optional<int> arity_of(std::string_view name) const {
    for (const auto& [n, a] : relations)
      if (n == name) return a;
    return std::nullopt;
  }

  bool operator==(const Signature&) const = default;
  auto operator<=>(const Signature&) const = default;
};

// Auxiliary relation symbol outside the signature; starts empty and is only
// written during game plays. Identity is the (name, arity) pair.
struct TapeSymbol {
  std::string name;
  int arity = 1;

  bool operator==(const TapeSymbol&) const = default;
  auto operator<=>(const TapeSymbol&) const = default;
};

// Partial map from variable subindices (x1, x2, ...) to domain elements.
// Kept as a sorted flat vector; lookups may be undefined.
class Assignment {
 public:
  Assignment() = default;

  std::optional<Element> get(int var) const {
    for (const auto& [v, e] : entries_)
      if (v == var) return e;
    return std::nullopt;
  }

  bool defined(int var) const { return get(var).has_value(); }

  Assignment set(int var, Element e) const {
    Assignment out = *this;
    for (auto& [v, old] : out.entries_)
      if (v == var) {
        old = e;
        return out;
      }
    out.entries_.emplace_back(var, e);
    std::sort(out.entries_.begin(), out.entries_.end());
    return out;
  }

  // Removes every binding whose value is `e` (any variable pointing to a
  // deleted domain point loses its referent).
  Assignment erase_value(Element e) const {
    Assignment out;
    for (const auto& p : entries_)
      if (p.second != e) out.entries_.push_back(p);
    return out;
  }

  const std::vector<std::pair<int, Element>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;

 private:
  std::vector<std::pair<int, Element>> entries_;
};

// Finite relational first-order model plus tape-relation state. The empty
// structure (empty domain) is a perfectly good value, distinct from "no
// structure" (use std::optional where absence matters).
class Structure {
 public:
  Structure() : d_(empty_data()) {}

  static Structure make(Signature sig) {
    Data d;
    d.sig = std::make_shared<const Signature>(std::move(sig));
    for (const auto& [name, arity] : d.sig->relations) d.interp[name];
    return Structure(std::make_shared<const Data>(std::move(d)));
  }

  static Structure make(Signature sig, std::set<Element> domain,
                        std::map<std::string, std::set<Tuple>> interp,
                        std::map<TapeSymbol, std::set<Tuple>> tape = {}) {
    Data d;
    d.sig = std::make_shared<const Signature>(std::move(sig));
    d.domain = std::move(domain);
    d.interp = std::move(interp);
    for (const auto& [name, arity] : d.sig->relations) d.interp[name];
    for (const auto& [name, tuples] : d.interp) {
      auto a = d.sig->arity_of(name);
      if (!a) throw error("structure: unknown relation " + name);
      for (const auto& t : tuples) check_tuple(t, *a, d.domain, name);
    }
    for (auto it = tape.begin(); it != tape.end();) {
      if (it->first.arity < 1) throw error("tape symbol arity must be >= 1");
      if (d.sig->arity_of(it->first.name))
        throw error("tape symbol clashes with signature relation: " + it->first.name);
      for (const auto& t : it->second)
        check_tuple(t, it->first.arity, d.domain, it->first.name);
      if (it->second.empty())
        it = tape.erase(it);  // empty tape entries are never stored
      else
        ++it;
    }
    d.tape = std::move(tape);
    return Structure(std::make_shared<const Data>(std::move(d)));
  }

  const Signature& signature() const { return *d_->sig; }
  std::shared_ptr<const Signature> signature_ptr() const { return d_->sig; }
  const std::set<Element>& domain() const { return d_->domain; }
  const std::map<std::string, std::set<Tuple>>& interp() const { return d_->interp; }
  const std::map<TapeSymbol, std::set<Tuple>>& tape_interp() const { return d_->tape; }

  const std::set<Tuple>& tuples(std::string_view rel) const {
    auto it = d_->interp.find(std::string(rel));
    if (it == d_->interp.end()) throw error("unknown relation: " + std::string(rel));
    return it->second;
  }

  // Untouched tape symbols are interpreted as the empty relation.
  const std::set<Tuple>& tape_tuples(const TapeSymbol& sym) const {
    static const std::set<Tuple> kEmpty;
    auto it = d_->tape.find(sym);
    return it == d_->tape.end() ? kEmpty : it->second;
  }

  bool operator==(const Structure& o) const {
    if (d_ == o.d_) return true;
    return d_->domain == o.d_->domain && d_->interp == o.d_->interp &&
           d_->tape == o.d_->tape && *d_->sig == *o.d_->sig;
  }

  std::strong_ordering operator<=>(const Structure& o) const {
    if (d_ == o.d_) return std::strong_ordering::equal;
    if (auto c = d_->domain <=> o.d_->domain; c != 0) return c;
    if (auto c = d_->interp <=> o.d_->interp; c != 0) return c;
    if (auto c = d_->tape <=> o.d_->tape; c != 0) return c;
    return *d_->sig <=> *o.d_->sig;
  }

 private:
  struct Data {
    std::shared_ptr<const Signature> sig;
    std::set<Element> domain;
    std::map<std::string, std::set<Tuple>> interp;
    std::map<TapeSymbol, std::set<Tuple>> tape;
  };

  explicit Structure(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  static void check_tuple(const Tuple& t, int arity, const std::set<Element>& domain,
                          const std::string& rel) {
    if (static_cast<int>(t.size()) != arity)
      throw error("arity-mismatch: relation " + rel + " expects " +
                  std::to_string(arity) + " components, got " +
                  std::to_string(t.size()));
    for (Element e : t)
      if (!domain.count(e))
        throw error("element-not-in-domain: e" + std::to_string(e) + " in tuple of " + rel);
  }

  static std::shared_ptr<const Data> empty_data() {
    static const std::shared_ptr<const Data> d = [] {
      Data x;
      x.sig = std::make_shared<const Signature>();
      return std::make_shared<const Data>(std::move(x));
    }();
    return d;
  }

  std::shared_ptr<const Data> d_;

  friend std::pair<Structure, Element> insert_element(const Structure&);
  friend Structure delete_element(const Structure&, Element);
  friend Structure mutate_tuple_impl(const Structure&, std::string_view, int, bool,
                                     const Tuple&, bool);
};

// Either a signature relation or a tape symbol, resolved.
struct RelTarget {
  std::string name;
  int arity = 0;
  bool is_tape = false;

  bool operator==(const RelTarget&) const = default;
  auto operator<=>(const RelTarget&) const = default;
};

inline RelTarget resolve_relation(const Structure& s, std::string_view name) {
  auto a = s.signature().arity_of(name);
  if (!a) throw error("unknown-relation: " + std::string(name));
  return RelTarget{std::string(name), *a, false};
}

// Adds one fresh isolated element (max id + 1); no relation or tape tuple is
// touched, so the new point is disconnected from the original model.
inline std::pair<Structure, Element> insert_element(const Structure& s) {
  Element fresh = s.domain().empty() ? 0 : *s.domain().rbegin() + 1;
  auto d = std::make_shared<Structure::Data>(*s.d_);
  d->domain.insert(fresh);
  return {Structure(std::move(d)), fresh};
}

// Removes the element and purges every tuple containing it from every
// relation and tape relation, keeping the structure well-formed.
inline Structure delete_element(const Structure& s, Element e) {
  if (!s.domain().count(e))
    throw error("element-not-in-domain: e" + std::to_string(e));
  auto d = std::make_shared<Structure::Data>(*s.d_);
  d->domain.erase(e);
  auto purge = [e](std::set<Tuple>& tuples) {
    for (auto it = tuples.begin(); it != tuples.end();) {
      if (std::find(it->begin(), it->end(), e) != it->end())
        it = tuples.erase(it);
      else
        ++it;
    }
  };
  for (auto& [name, tuples] : d->interp) purge(tuples);
  for (auto it = d->tape.begin(); it != d->tape.end();) {
    purge(it->second);
    if (it->second.empty())
      it = d->tape.erase(it);
    else
      ++it;
  }
  return Structure(std::move(d));
}

inline Structure mutate_tuple_impl(const Structure& s, std::string_view name, int arity,
                                   bool is_tape, const Tuple& t, bool insert) {
  if (static_cast<int>(t.size()) != arity)
    throw error("arity-mismatch: " + std::string(name) + " expects " +
                std::to_string(arity) + " components, got " + std::to_string(t.size()));
  for (Element e : t)
    if (!s.domain().count(e))
      throw error("element-not-in-domain: e" + std::to_string(e));
  if (is_tape) {
    TapeSymbol sym{std::string(name), arity};
    const auto& cur = s.tape_tuples(sym);
    if (insert == (cur.count(t) > 0)) return s;  // idempotent / absent: unchanged
    auto d = std::make_shared<Structure::Data>(*s.d_);
    auto& set = d->tape[sym];
    if (insert)
      set.insert(t);
    else {
      set.erase(t);
      if (set.empty()) d->tape.erase(sym);
    }
    return Structure(std::move(d));
  }
  const auto& cur = s.tuples(name);
  if (insert == (cur.count(t) > 0)) return s;
  auto d = std::make_shared<Structure::Data>(*s.d_);
  auto& set = d->interp[std::string(name)];
  if (insert)
    set.insert(t);
  else
    set.erase(t);
  return Structure(std::move(d));
}

inline Structure insert_tuple(const Structure& s, const RelTarget& r, const Tuple& t) {
  return mutate_tuple_impl(s, r.name, r.arity, r.is_tape, t, true);
}

inline Structure delete_tuple(const Structure& s, const RelTarget& r, const Tuple& t) {
  return mutate_tuple_impl(s, r.name, r.arity, r.is_tape, t, false);
}

inline Structure insert_tuple(const Structure& s, std::string_view rel, const Tuple& t) {
  return insert_tuple(s, resolve_relation(s, rel), t);
}

inline Structure delete_tuple(const Structure& s, std::string_view rel, const Tuple& t) {
  return delete_tuple(s, resolve_relation(s, rel), t);
}

inline Structure insert_tape_tuple(const Structure& s, const TapeSymbol& sym, const Tuple& t) {
  if (s.signature().arity_of(sym.name))
    throw error("tape symbol clashes with signature relation: " + sym.name);
  return mutate_tuple_impl(s, sym.name, sym.arity, true, t, true);
}

inline Structure delete_tape_tuple(const Structure& s, const TapeSymbol& sym, const Tuple& t) {
  return mutate_tuple_impl(s, sym.name, sym.arity, true, t, false);
}

inline bool well_formed(const Structure& s) {
  for (const auto& [name, tuples] : s.interp()) {
    auto a = s.signature().arity_of(name);
    if (!a) return false;
    for (const auto& t : tuples) {
      if (static_cast<int>(t.size()) != *a) return false;
      for (Element e : t)
        if (!s.domain().count(e)) return false;
    }
  }
  for (const auto& [sym, tuples] : s.tape_interp()) {
    if (sym.arity < 1 || tuples.empty()) return false;
    for (const auto& t : tuples) {
      if (static_cast<int>(t.size()) != sym.arity) return false;
      for (Element e : t)
        if (!s.domain().count(e)) return false;
    }
  }
  return true;
}

// Brute-force isomorphism over domain bijections. Tape relations count: a
// bijection must preserve them exactly like signature relations.
inline bool is_isomorphic(const Structure& a, const Structure& b) {
  if (a.signature() != b.signature()) throw error("signature-mismatch in is_isomorphic");
  if (a.domain().size() != b.domain().size()) return false;
  for (const auto& [name, tuples] : a.interp())
    if (tuples.size() != b.tuples(name).size()) return false;
  {
    const auto& ta = a.tape_interp();
    const auto& tb = b.tape_interp();
    if (ta.size() != tb.size()) return false;
    for (const auto& [sym, tuples] : ta) {
      auto it = tb.find(sym);
      if (it == tb.end() || it->second.size() != tuples.size()) return false;
    }
  }
  std::vector<Element> av(a.domain().begin(), a.domain().end());
  std::vector<Element> bv(b.domain().begin(), b.domain().end());
  std::sort(bv.begin(), bv.end());
  auto preserves = [&](const std::set<Tuple>& src, const std::set<Tuple>& dst,
                       const std::map<Element, Element>& f) {
    for (const auto& t : src) {
      Tuple mapped(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) mapped[i] = f.at(t[i]);
      if (!dst.count(mapped)) return false;
    }
    return true;  // equal sizes make this a bijection on tuples
  };
  do {
    std::map<Element, Element> f;
    for (std::size_t i = 0; i < av.size(); ++i) f[av[i]] = bv[i];
    bool ok = true;
    for (const auto& [name, tuples] : a.interp())
      if (!preserves(tuples, b.tuples(name), f)) {
        ok = false;
        break;
      }
    if (ok)
      for (const auto& [sym, tuples] : a.tape_interp())
        if (!preserves(tuples, b.tape_tuples(sym), f)) {
          ok = false;
          break;
        }
    if (ok) return true;
  } while (std::next_permutation(bv.begin(), bv.end()));
  return false;
}

// Three-valued atom evaluation: a variable without a value means neither
// player can win at the atom.
enum class AtomEval { Holds, Fails, UndefinedVariable };

inline AtomEval eval_rel_atom(const Structure& s, const Assignment& f,
                              const RelTarget& r, const std::vector<int>& vars) {
  Tuple t;
  t.reserve(vars.size());
  for (int v : vars) {
    auto e = f.get(v);
    if (!e) return AtomEval::UndefinedVariable;
    t.push_back(*e);
  }
  const std::set<Tuple>& tuples =
      r.is_tape ? s.tape_tuples(TapeSymbol{r.name, r.arity}) : s.tuples(r.name);
  if (static_cast<int>(t.size()) != r.arity)
    throw error("arity-mismatch in atom " + r.name);
  return tuples.count(t) ? AtomEval::Holds : AtomEval::Fails;
}

inline AtomEval eval_eq_atom(const Assignment& f, int x, int y) {
  auto a = f.get(x);
  auto b = f.get(y);
  if (!a || !b) return AtomEval::UndefinedVariable;
  return *a == *b ? AtomEval::Holds : AtomEval::Fails;
}

}  // namespace structura
