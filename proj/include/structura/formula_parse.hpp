#pragma once

// Concrete grammar (loosest to tightest):
//
//   formula := implies (';' implies)*                    left-assoc
//   implies := or ('->' implies)?                        sugar for ~a | b
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '~' unary
//            | 'Ex' var '.' unary | 'All' var '.' unary
//            | 'Ex' ('>='|'=') k var '.' unary           counting sugar
//            | 'ins' var '.' unary | 'del' var '.' unary
//            | 'ins' relref '(' vars ')' '.' unary
//            | 'del' relref '(' vars ')' '.' unary
//            | C<i> unary                                claim prefix
//            | 'box' '[' modcall ']' unary
//            | 'dia' '[' modcall ']' unary
//            | primary
//   primary := C<i> | term '=' term | rel '(' terms? ')'
//            | tape ':' k '(' terms ')' | '(' formula ')'
//   term    := x<i> | name
//   relref  := rel | tape ':' k
//
// Variables are x1, x2, ...; C<i> is a claim; any other identifier in an
// atom argument is a named constant resolved by the evaluating layer.

#include <cctype>
#include <string>
#include <vector>

#include "structura/formula.hpp"

namespace structura {

namespace parse_detail {

enum class Tok {
  End, Ident, Var, Claim, Number,
  Tilde, Amp, Pipe, Semi, Eq, GreaterEq, Arrow,
  LParen, RParen, LBracket, RBracket, Dot, Comma, Colon,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, tok_.line, tok_.col);
  }

  struct Mark {
    std::size_t pos;
    int line, col;
    Token tok;
  };
  Mark mark() const { return {pos_, line_, col_, tok_}; }
  void rewind(const Mark& m) {
    pos_ = m.pos;
    line_ = m.line;
    col_ = m.col;
    tok_ = m.tok;
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_; ++line_; col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_; ++col_;
      } else {
        break;
      }
    }
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    auto punct = [&](Tok k, int n) {
      tok_.kind = k;
      tok_.text = std::string(text_.substr(pos_, n));
      pos_ += n; col_ += n;
    };
    switch (c) {
      case '~': return punct(Tok::Tilde, 1);
      case '&': return punct(Tok::Amp, 1);
      case '|': return punct(Tok::Pipe, 1);
      case ';': return punct(Tok::Semi, 1);
      case '(': return punct(Tok::LParen, 1);
      case ')': return punct(Tok::RParen, 1);
      case '[': return punct(Tok::LBracket, 1);
      case ']': return punct(Tok::RBracket, 1);
      case '.': return punct(Tok::Dot, 1);
      case ',': return punct(Tok::Comma, 1);
      case ':': return punct(Tok::Colon, 1);
      case '=': return punct(Tok::Eq, 1);
      case '>':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') return punct(Tok::GreaterEq, 2);
        throw parse_error("unexpected '>'", line_, col_);
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') return punct(Tok::Arrow, 2);
        break;  // falls through to identifier chars (names may contain '-')
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      tok_.kind = Tok::Number;
      tok_.text = std::string(text_.substr(start, pos_ - start));
      tok_.value = std::stol(tok_.text);
      col_ += static_cast<int>(pos_ - start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      std::size_t start = pos_;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '-')
          ++pos_;
        else
          break;
      }
      tok_.text = std::string(text_.substr(start, pos_ - start));
      col_ += static_cast<int>(pos_ - start);
      tok_.kind = classify(tok_.text);
      return;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", line_, col_);
  }

  Tok classify(const std::string& s) {
    if (s.size() >= 2 && (s[0] == 'x' || s[0] == 'C')) {
      bool digits = true;
      for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) digits = false;
      if (digits) {
        tok_.value = std::stol(s.substr(1));
        return s[0] == 'x' ? Tok::Var : Tok::Claim;
      }
    }
    return Tok::Ident;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, const Signature* sig) : lex_(text), sig_(sig) {}

  Formula parse() {
    Formula f = formula();
    if (lex_.peek().kind != Tok::End) lex_.fail("trailing input after formula");
    return f;
  }

 private:
  Formula formula() {
    Formula f = implies();
    while (lex_.peek().kind == Tok::Semi) {
      lex_.next();
      f = fb::compose(f, implies());
    }
    return f;
  }

  Formula implies() {
    Formula f = disj();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.next();
      return fb::lor(fb::lnot(f), implies());
    }
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.next();
      f = fb::lor(f, conj());
    }
    return f;
  }

  Formula conj() {
    Formula f = unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.next();
      f = fb::land(f, unary());
    }
    return f;
  }

  bool starts_formula(const Token& t) const {
    switch (t.kind) {
      case Tok::Tilde:
      case Tok::LParen:
      case Tok::Var:
      case Tok::Claim:
        return true;
      case Tok::Ident:
        return true;  // quantifier keywords, ins/del, box/dia, atoms, names
      default:
        return false;
    }
  }

  Formula unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Tilde) {
      lex_.next();
      return fb::lnot(unary());
    }
    if (t.kind == Tok::Claim) {
      Token c = lex_.next();
      if (starts_formula(lex_.peek()))
        return fb::claim(static_cast<int>(c.value), unary());
      return fb::claim_atom(static_cast<int>(c.value));
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "Ex" || t.text == "All") return quantifier(t.text == "Ex");
      if (t.text == "ins" || t.text == "del") return point_or_tuple_op(t.text == "ins");
      if (t.text == "box" || t.text == "dia") return modal(t.text == "box");
    }
    return primary();
  }

  Formula quantifier(bool existential) {
    Token kw = lex_.next();
    if (lex_.peek().kind == Tok::GreaterEq || lex_.peek().kind == Tok::Eq) {
      if (!existential) lex_.fail("counting form applies to Ex only");
      bool exact = lex_.peek().kind == Tok::Eq;
      lex_.next();
      Token k = expect(Tok::Number, "count");
      int var = static_cast<int>(expect(Tok::Var, "variable").value);
      expect(Tok::Dot, "'.'");
      Formula body = unary();
      return counting(static_cast<int>(k.value), exact, var, body, kw);
    }
    int var = static_cast<int>(expect(Tok::Var, "variable").value);
    expect(Tok::Dot, "'.'");
    Formula body = unary();
    return existential ? fb::exists(var, body) : fb::forall(var, body);
  }

  // Ex>=k desugars to k distinct witnesses; Ex=k to (>=k) & ~(>=k+1).
  Formula counting(int k, bool exact, int var, const Formula& body, const Token& at) {
    if (k < 0 || k > 12) throw parse_error("counting bound out of range", at.line, at.col);
    auto at_least = [&](int m) -> Formula {
      if (m == 0) {
        // trivially true, also on the empty domain
        return fb::lnot(fb::exists(var, fb::lnot(fb::eqv(var, var))));
      }
      int base = max_var_index(body) + 1;
      std::vector<int> fresh;
      for (int i = 0; i < m; ++i) fresh.push_back(base + i);
      // Distinctness sits right under each quantifier so that evaluation
      // prunes as soon as the domain runs out of fresh witnesses.
      Formula result = nullptr;
      for (int i = m - 1; i >= 0; --i) {
        Formula level = subst_var(body, var, fresh[i]);
        if (result) level = fb::land(level, result);
        for (int j = i - 1; j >= 0; --j)
          level = fb::land(fb::lnot(fb::eqv(fresh[j], fresh[i])), level);
        result = fb::exists(fresh[i], level);
      }
      return result;
    };
    if (!exact) return at_least(k);
    return fb::land(at_least(k), fb::lnot(at_least(k + 1)));
  }

  Formula point_or_tuple_op(bool insert) {
    lex_.next();
    if (lex_.peek().kind == Tok::Var) {
      int var = static_cast<int>(lex_.next().value);
      expect(Tok::Dot, "'.'");
      Formula body = unary();
      return insert ? fb::ins_point(var, body) : fb::del_point(var, body);
    }
    Token rel = expect(Tok::Ident, "relation name");
    bool tape = false;
    int tape_arity = 0;
    if (lex_.peek().kind == Tok::Colon) {
      lex_.next();
      tape = true;
      tape_arity = static_cast<int>(expect(Tok::Number, "tape arity").value);
    }
    expect(Tok::LParen, "'('");
    std::vector<int> vars;
    if (lex_.peek().kind != Tok::RParen) {
      vars.push_back(static_cast<int>(expect(Tok::Var, "variable").value));
      while (lex_.peek().kind == Tok::Comma) {
        lex_.next();
        vars.push_back(static_cast<int>(expect(Tok::Var, "variable").value));
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Dot, "'.'");
    check_arity(rel, tape, tape_arity, vars.size());
    Formula body = unary();
    return fb::tuple_op(insert ? FKind::InsertTuple : FKind::DeleteTuple, rel.text,
                        std::move(vars), body, tape, tape_arity);
  }

  Formula modal(bool box) {
    lex_.next();
    expect(Tok::LBracket, "'['");
    ModifierCall call;
    call.name = expect(Tok::Ident, "modifier name").text;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.next();
      if (lex_.peek().kind != Tok::RParen) {
        call.args.push_back(mod_arg());
        while (lex_.peek().kind == Tok::Comma) {
          lex_.next();
          call.args.push_back(mod_arg());
        }
      }
      expect(Tok::RParen, "')'");
    }
    expect(Tok::RBracket, "']'");
    Formula body = unary();
    return box ? fb::boxmod(std::move(call), body) : fb::diamod(std::move(call), body);
  }

  ModArg mod_arg() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Number) {
      ModArg a;
      a.kind = ModArg::IntArg;
      a.value = lex_.next().value;
      return a;
    }
    // A lone identifier is a relation-name argument; anything else is a
    // formula argument.
    if (t.kind == Tok::Ident) {
      auto mark = lex_.mark();
      Token id = lex_.next();
      Tok after = lex_.peek().kind;
      if (after == Tok::Comma || after == Tok::RParen) {
        ModArg a;
        a.kind = ModArg::NameArg;
        a.name = id.text;
        return a;
      }
      lex_.rewind(mark);
    }
    ModArg a;
    a.kind = ModArg::FormulaArg;
    a.formula = formula();
    return a;
  }

  Formula primary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.next();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Claim) {
      return fb::claim_atom(static_cast<int>(lex_.next().value));
    }
    if (t.kind == Tok::Var || t.kind == Tok::Ident) {
      Token head = lex_.next();
      if (head.kind == Tok::Var || lex_.peek().kind == Tok::Eq) {
        AtomArg lhs = head.kind == Tok::Var
                          ? AtomArg::v(static_cast<int>(head.value))
                          : AtomArg::named(head.text);
        expect(Tok::Eq, "'='");
        return fb::eq(lhs, term());
      }
      return atom_after_ident(head);
    }
    lex_.fail("expected a formula");
  }

  Formula atom_after_ident(const Token& head) {
    bool tape = false;
    int tape_arity = 0;
    if (lex_.peek().kind == Tok::Colon) {
      lex_.next();
      tape = true;
      tape_arity = static_cast<int>(expect(Tok::Number, "tape arity").value);
    }
    expect(Tok::LParen, "'('");
    std::vector<AtomArg> args;
    if (lex_.peek().kind != Tok::RParen) {
      args.push_back(term());
      while (lex_.peek().kind == Tok::Comma) {
        lex_.next();
        args.push_back(term());
      }
    }
    expect(Tok::RParen, "')'");
    check_arity(head, tape, tape_arity, args.size());
    if (tape) return fb::tape_atom(head.text, tape_arity, std::move(args));
    return fb::atom(head.text, std::move(args));
  }

  AtomArg term() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Var) return AtomArg::v(static_cast<int>(lex_.next().value));
    if (t.kind == Tok::Ident) return AtomArg::named(lex_.next().text);
    lex_.fail("expected a variable or element name");
  }

  void check_arity(const Token& rel, bool tape, int tape_arity, std::size_t n) {
    if (tape) {
      if (tape_arity < 1)
        throw parse_error("tape arity must be >= 1", rel.line, rel.col);
      if (static_cast<std::size_t>(tape_arity) != n)
        throw parse_error("arity-mismatch: " + rel.text + ":" + std::to_string(tape_arity),
                          rel.line, rel.col);
      if (sig_ && sig_->arity_of(rel.text))
        throw parse_error("tape symbol clashes with signature relation " + rel.text,
                          rel.line, rel.col);
      return;
    }
    if (sig_) {
      auto a = sig_->arity_of(rel.text);
      if (!a)
        throw parse_error("unknown relation " + rel.text, rel.line, rel.col);
      if (static_cast<std::size_t>(*a) != n)
        throw parse_error("arity-mismatch: " + rel.text + " expects " + std::to_string(*a) +
                              " arguments, got " + std::to_string(n),
                          rel.line, rel.col);
    }
  }

  Token expect(Tok k, const std::string& what) {
    if (lex_.peek().kind != k) lex_.fail("expected " + what);
    return lex_.next();
  }

  Lexer lex_;
  const Signature* sig_;
};

}  // namespace parse_detail

// Parses a formula. When a signature is supplied, atom arities are checked
// against it and unknown relations are rejected.
inline Formula parse_formula(std::string_view text, const Signature* sig = nullptr) {
  return parse_detail::Parser(text, sig).parse();
}

}  // namespace structura
