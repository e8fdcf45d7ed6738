// Copyright 2026 The wcdg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Boolean constraint expressions over candidate relations: AST, parser,
// printer and evaluator.
//
// Grammar (lowest precedence first):
//   iff     := implies ('<->' implies)?
//   implies := or ('->' implies)?
//   or      := and ('|' and)*
//   and     := not ('&' not)*
//   not     := '!' not | cmp
//   cmp     := set (('=' | '!=' | 'in' | '<') set)?
//   set     := primary ('cap' primary)*
//   primary := accessor '(' arg ')' | symbol | int | '{' symbols '}' |
//              'true' | 'false' | '(' iff ')'
// Unicode spellings (∧ ∨ ¬ → ↔ ≠ ∈ ∩) are accepted as well.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wcdg/errors.hpp"
#include "wcdg/lexicon.hpp"

namespace wcdg {

enum class Var { kX = 0, kY = 1, kZ = 2 };

inline char var_name(Var v) { return "XYZ"[static_cast<int>(v)]; }

enum class Kind { kBool, kInt, kNode, kSymbol, kSet };

enum class Op {
  kSymbol, kSet, kInt, kTrue, kFalse,
  // relation accessors, operand is `var`
  kDep, kDom, kSynDom, kSemDom, kLab, kSynLab, kSemLab,
  // node accessors, operand is args[0]
  kPos, kWord, kCat, kNum, kCase, kSemprop, kFeature,
  kEq, kNe, kIn, kLt, kNot, kAnd, kOr, kImplies, kIff, kIntersect,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::kTrue;
  Kind kind = Kind::kBool;
  Var var = Var::kX;
  std::string text;  // symbol literal or feature name
  SymbolSet set;
  int number = 0;
  std::vector<ExprPtr> args;
};

inline bool is_literal(Op op) {
  return op == Op::kSymbol || op == Op::kSet || op == Op::kInt ||
         op == Op::kTrue || op == Op::kFalse;
}

inline bool is_relation_accessor(Op op) {
  return op >= Op::kDep && op <= Op::kSemLab;
}

inline bool is_label_accessor(Op op) {
  return op == Op::kLab || op == Op::kSynLab || op == Op::kSemLab;
}

// Layer an accessor is restricted to, if any.
inline std::optional<Layer> accessor_layer(Op op) {
  switch (op) {
    case Op::kSynDom:
    case Op::kSynLab:
      return Layer::kSyn;
    case Op::kSemDom:
    case Op::kSemLab:
      return Layer::kSem;
    default:
      return std::nullopt;
  }
}

inline void visit(const Expr& e, const std::function<void(const Expr&)>& f) {
  f(e);
  for (const auto& a : e.args) visit(*a, f);
}

// Bit i set when variable i occurs.
inline unsigned vars_used(const Expr& e) {
  unsigned mask = 0;
  visit(e, [&](const Expr& n) {
    if (is_relation_accessor(n.op)) mask |= 1u << static_cast<int>(n.var);
  });
  return mask;
}

// --- evaluation ----------------------------------------------------------

struct Unspecified {
  friend bool operator==(Unspecified, Unspecified) { return true; }
};

// Nodes are identified by position; the reading only selects features.
struct NodeRef {
  int position = 0;
  int reading = 0;

  friend bool operator==(NodeRef a, NodeRef b) { return a.position == b.position; }
};

using Value = std::variant<Unspecified, bool, int, NodeRef, std::string, SymbolSet>;

using Bindings = std::array<const CandidateRelation*, 3>;

class Evaluator {
 public:
  Evaluator(const Sentence& sentence, const Bindings& bindings)
      : sentence_(sentence), bindings_(bindings) {}

  bool truth(const Expr& e) const { return std::get<bool>(eval(e)); }

  Value eval(const Expr& e) const {
    switch (e.op) {
      case Op::kSymbol: return e.text;
      case Op::kSet: return e.set;
      case Op::kInt: return e.number;
      case Op::kTrue: return true;
      case Op::kFalse: return false;

      case Op::kDep: return NodeRef{rel(e).dep, rel(e).reading};
      case Op::kDom:
      case Op::kSynDom:
      case Op::kSemDom: return NodeRef{rel(e).dom, 0};
      case Op::kLab:
      case Op::kSynLab:
      case Op::kSemLab: return rel(e).label;

      case Op::kPos: return node(e).position;
      case Op::kWord: return entry(e).form;
      case Op::kCat: {
        const auto& c = entry(e).cat;
        return c.empty() ? Value(Unspecified{}) : Value(c);
      }
      case Op::kNum:
        switch (entry(e).num) {
          case Number::kSg: return std::string("sg");
          case Number::kPl: return std::string("pl");
          default: return Unspecified{};
        }
      case Op::kCase: {
        const auto& c = entry(e).case_features;
        return c.empty() ? Value(Unspecified{}) : Value(c);
      }
      case Op::kSemprop: {
        const auto& s = entry(e).semprop;
        return s ? Value(*s) : Value(Unspecified{});
      }
      case Op::kFeature: {
        const auto& extra = entry(e).extra;
        auto it = extra.find(e.text);
        return it == extra.end() ? Value(Unspecified{}) : Value(it->second);
      }

      case Op::kEq: return equal(*e.args[0], *e.args[1]);
      case Op::kNe: return !equal(*e.args[0], *e.args[1]);
      case Op::kIn: return member(*e.args[0], *e.args[1]);
      case Op::kLt:
        return std::get<int>(eval(*e.args[0])) < std::get<int>(eval(*e.args[1]));
      case Op::kNot: return !truth(*e.args[0]);
      case Op::kAnd: return truth(*e.args[0]) && truth(*e.args[1]);
      case Op::kOr: return truth(*e.args[0]) || truth(*e.args[1]);
      case Op::kImplies: return !truth(*e.args[0]) || truth(*e.args[1]);
      case Op::kIff: return truth(*e.args[0]) == truth(*e.args[1]);
      case Op::kIntersect: {
        Value a = eval(*e.args[0]);
        Value b = eval(*e.args[1]);
        if (std::holds_alternative<Unspecified>(a)) return b;
        if (std::holds_alternative<Unspecified>(b)) return a;
        SymbolSet out;
        const auto& sa = std::get<SymbolSet>(a);
        const auto& sb = std::get<SymbolSet>(b);
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                              std::inserter(out, out.end()));
        return out;
      }
    }
    return false;
  }

 private:
  const CandidateRelation& rel(const Expr& e) const {
    const CandidateRelation* r = bindings_[static_cast<int>(e.var)];
    if (r == nullptr)
      throw AccessorScopeError(std::string("variable ") + var_name(e.var) +
                               " is not bound");
    if (auto layer = accessor_layer(e.op); layer && *layer != r->layer) {
      throw AccessorScopeError(std::string("accessor on ") + var_name(e.var) +
                               " requires the " +
                               std::string(layer_name(*layer)) +
                               " layer, relation is " + to_string(*r));
    }
    return *r;
  }

  NodeRef node(const Expr& e) const { return std::get<NodeRef>(eval(*e.args[0])); }

  const LexicalEntry& entry(const Expr& e) const {
    NodeRef n = node(e);
    return sentence_.entry(n.position, n.reading);
  }

  // Unspecified matches another feature read but never a literal.
  bool equal(const Expr& lhs, const Expr& rhs) const {
    Value a = eval(lhs);
    Value b = eval(rhs);
    bool ua = std::holds_alternative<Unspecified>(a);
    bool ub = std::holds_alternative<Unspecified>(b);
    if (ua && ub) return true;
    if (ua) return !is_literal(rhs.op);
    if (ub) return !is_literal(lhs.op);
    return a == b;
  }

  bool member(const Expr& lhs, const Expr& rhs) const {
    Value a = eval(lhs);
    Value b = eval(rhs);
    if (std::holds_alternative<Unspecified>(b)) return true;
    const auto& set = std::get<SymbolSet>(b);
    if (std::holds_alternative<Unspecified>(a)) return !is_literal(rhs.op);
    if (auto* s = std::get_if<std::string>(&a)) return set.count(*s) > 0;
    for (const auto& sym : std::get<SymbolSet>(a))
      if (set.count(sym)) return true;
    return false;
  }

  const Sentence& sentence_;
  Bindings bindings_;
};

// --- parsing -------------------------------------------------------------

namespace detail {

struct Lexeme {
  enum Type { kIdent, kQuoted, kInt, kPunct, kEnd } type = kEnd;
  std::string text;
};

inline constexpr std::pair<std::string_view, std::string_view> kUnicodeOps[] = {
    {"∧", "&"},   {"∨", "|"},  {"¬", "!"},
    {"→", "->"},  {"↔", "<->"}, {"≠", "!="},
    {"∈", "in"},  {"∩", "cap"}, {"⇒", "=>"},
};

inline std::vector<Lexeme> lex_expression(std::string_view s, int line) {
  std::vector<Lexeme> out;
  auto ident_char = [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || u >= 0x80;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    bool matched = false;
    for (auto [u, ascii] : kUnicodeOps) {
      if (s.substr(i, u.size()) == u) {
        out.push_back({Lexeme::kPunct, std::string(ascii)});
        i += u.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (std::string_view p : {"<->", "->", "!=", ":=", "=>"}) {
      if (s.substr(i, p.size()) == p) {
        out.push_back({Lexeme::kPunct, std::string(p)});
        i += p.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("=<&|!(){},").find(c) != std::string_view::npos) {
      out.push_back({Lexeme::kPunct, std::string(1, c)});
      ++i;
      continue;
    }
    if (c == '"') {
      auto end = s.find('"', i + 1);
      if (end == std::string_view::npos) throw SyntaxError(line, "unterminated quote");
      out.push_back({Lexeme::kQuoted, std::string(s.substr(i + 1, end - i - 1))});
      i = end + 1;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && ident_char(s[j]))
        throw SyntaxError(line, "malformed number near '" + std::string(s.substr(i)) + "'");
      out.push_back({Lexeme::kInt, std::string(s.substr(i, j - i))});
      i = j;
      continue;
    }
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < s.size()) {
        bool op_start = false;
        for (auto [u, ascii] : kUnicodeOps)
          if (s.substr(j, u.size()) == u) op_start = true;
        if (op_start) break;
        if (ident_char(s[j])) { ++j; continue; }
        // '-' joins identifiers such as PART-OF, but not '->'.
        if (s[j] == '-' && j + 1 < s.size() && s[j + 1] != '>' && ident_char(s[j + 1])) {
          ++j;
          continue;
        }
        break;
      }
      out.push_back({Lexeme::kIdent, std::string(s.substr(i, j - i))});
      i = j;
      continue;
    }
    throw SyntaxError(line, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Lexeme::kEnd, ""});
  return out;
}

inline std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::kBool: return "boolean";
    case Kind::kInt: return "integer";
    case Kind::kNode: return "node";
    case Kind::kSymbol: return "symbol";
    case Kind::kSet: return "set";
  }
  return "?";
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, int line)
      : lex_(lex_expression(text, line)), line_(line) {}

  ExprPtr parse() {
    ExprPtr e = parse_term();
    expect_kind(*e, Kind::kBool, "expression");
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = iff();
    if (peek().type != Lexeme::kEnd) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Lexeme& peek() const { return lex_[pos_]; }
  bool accept(std::string_view punct) {
    if (peek().type == Lexeme::kPunct && peek().text == punct) { ++pos_; return true; }
    if (peek().type == Lexeme::kIdent && peek().text == punct &&
        (punct == "in" || punct == "cap")) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "' before '" + peek().text + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_, msg); }

  void expect_kind(const Expr& e, Kind k, std::string_view what) const {
    if (e.kind != k)
      fail(std::string(what) + " must be " + std::string(kind_name(k)) + ", got " +
           std::string(kind_name(e.kind)));
  }

  static ExprPtr make(Op op, Kind kind, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->kind = kind;
    e->args = std::move(args);
    return e;
  }

  ExprPtr logical(Op op, ExprPtr a, ExprPtr b) {
    expect_kind(*a, Kind::kBool, "operand");
    expect_kind(*b, Kind::kBool, "operand");
    return make(op, Kind::kBool, {std::move(a), std::move(b)});
  }

  ExprPtr iff() {
    ExprPtr a = implies();
    if (accept("<->")) return logical(Op::kIff, a, implies());
    return a;
  }
  ExprPtr implies() {
    ExprPtr a = disj();
    if (accept("->")) return logical(Op::kImplies, a, implies());
    return a;
  }
  ExprPtr disj() {
    ExprPtr a = conj();
    while (accept("|")) a = logical(Op::kOr, a, conj());
    return a;
  }
  ExprPtr conj() {
    ExprPtr a = neg();
    while (accept("&")) a = logical(Op::kAnd, a, neg());
    return a;
  }
  ExprPtr neg() {
    if (accept("!")) {
      ExprPtr a = neg();
      expect_kind(*a, Kind::kBool, "operand of '!'");
      return make(Op::kNot, Kind::kBool, {a});
    }
    return cmp();
  }
  ExprPtr cmp() {
    ExprPtr a = inter();
    Op op;
    if (accept("=")) op = Op::kEq;
    else if (accept("!=")) op = Op::kNe;
    else if (accept("in")) op = Op::kIn;
    else if (accept("<")) op = Op::kLt;
    else return a;
    ExprPtr b = inter();
    switch (op) {
      case Op::kEq:
      case Op::kNe:
        if (a->kind != b->kind || a->kind == Kind::kBool)
          fail("cannot compare " + std::string(kind_name(a->kind)) + " with " +
               std::string(kind_name(b->kind)));
        break;
      case Op::kIn:
        if (a->kind != Kind::kSymbol && a->kind != Kind::kSet)
          fail("left operand of 'in' must be a symbol or set");
        expect_kind(*b, Kind::kSet, "right operand of 'in'");
        break;
      default:
        expect_kind(*a, Kind::kInt, "operand of '<'");
        expect_kind(*b, Kind::kInt, "operand of '<'");
    }
    return make(op, Kind::kBool, {a, b});
  }
  ExprPtr inter() {
    ExprPtr a = primary();
    while (accept("cap")) {
      ExprPtr b = primary();
      expect_kind(*a, Kind::kSet, "operand of 'cap'");
      expect_kind(*b, Kind::kSet, "operand of 'cap'");
      a = make(Op::kIntersect, Kind::kSet, {a, b});
    }
    return a;
  }

  std::string symbol() {
    const Lexeme& l = peek();
    if (l.type != Lexeme::kIdent && l.type != Lexeme::kQuoted)
      fail("expected symbol, got '" + l.text + "'");
    ++pos_;
    return l.text;
  }

  ExprPtr primary() {
    const Lexeme l = peek();
    if (accept("(")) {
      ExprPtr e = iff();
      expect(")");
      return e;
    }
    if (accept("{")) {
      auto e = std::make_shared<Expr>();
      e->op = Op::kSet;
      e->kind = Kind::kSet;
      if (!accept("}")) {
        do e->set.insert(symbol()); while (accept(","));
        expect("}");
      }
      return e;
    }
    if (l.type == Lexeme::kInt) {
      ++pos_;
      auto e = std::make_shared<Expr>();
      e->op = Op::kInt;
      e->kind = Kind::kInt;
      e->number = std::stoi(l.text);
      return e;
    }
    if (l.type == Lexeme::kQuoted) {
      ++pos_;
      auto e = std::make_shared<Expr>();
      e->op = Op::kSymbol;
      e->kind = Kind::kSymbol;
      e->text = l.text;
      return e;
    }
    if (l.type != Lexeme::kIdent) fail("unexpected '" + l.text + "'");
    ++pos_;
    if (!accept("(")) {
      auto e = std::make_shared<Expr>();
      if (l.text == "true") { e->op = Op::kTrue; return e; }
      if (l.text == "false") { e->op = Op::kFalse; return e; }
      e->op = Op::kSymbol;
      e->kind = Kind::kSymbol;
      e->text = l.text;
      return e;
    }
    return call(l.text);
  }

  ExprPtr call(const std::string& name) {
    static const std::pair<std::string_view, Op> kRelation[] = {
        {"dep", Op::kDep},       {"dom", Op::kDom},       {"syndom", Op::kSynDom},
        {"semdom", Op::kSemDom}, {"lab", Op::kLab},       {"synlab", Op::kSynLab},
        {"semlab", Op::kSemLab}};
    static const std::pair<std::string_view, Op> kNode[] = {
        {"pos", Op::kPos},   {"word", Op::kWord}, {"cat", Op::kCat},
        {"num", Op::kNum},   {"case", Op::kCase}, {"semprop", Op::kSemprop}};
    auto e = std::make_shared<Expr>();
    for (auto [n, op] : kRelation) {
      if (name != n) continue;
      std::string v = symbol();
      if (v != "X" && v != "Y" && v != "Z")
        fail(name + "() takes a relation variable X, Y or Z, got '" + v + "'");
      expect(")");
      e->op = op;
      e->var = static_cast<Var>(v[0] - 'X');
      e->kind = is_label_accessor(op) ? Kind::kSymbol : Kind::kNode;
      return e;
    }
    if (name == "feature") {
      e->op = Op::kFeature;
      e->kind = Kind::kSet;
      e->text = symbol();
      expect(",");
    } else {
      bool known = false;
      for (auto [n, op] : kNode) {
        if (name == n) { e->op = op; known = true; }
      }
      if (!known) fail("unknown accessor '" + name + "'");
      switch (e->op) {
        case Op::kPos: e->kind = Kind::kInt; break;
        case Op::kCase:
        case Op::kSemprop: e->kind = Kind::kSet; break;
        default: e->kind = Kind::kSymbol;
      }
    }
    ExprPtr arg = iff();
    expect_kind(*arg, Kind::kNode, "argument of " + name + "()");
    expect(")");
    e->args.push_back(arg);
    return e;
  }

  std::vector<Lexeme> lex_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace detail

inline ExprPtr parse_expression(std::string_view text, int line = 0) {
  return detail::ExpressionParser(text, line).parse();
}

// Like parse_expression but accepts any value kind.
inline ExprPtr parse_term(std::string_view text, int line = 0) {
  return detail::ExpressionParser(text, line).parse_term();
}

// --- printing --------------------------------------------------------------

namespace detail {

inline int precedence(Op op) {
  switch (op) {
    case Op::kIff: return 1;
    case Op::kImplies: return 2;
    case Op::kOr: return 3;
    case Op::kAnd: return 4;
    case Op::kNot: return 5;
    case Op::kEq:
    case Op::kNe:
    case Op::kIn:
    case Op::kLt: return 6;
    case Op::kIntersect: return 7;
    default: return 8;
  }
}

inline std::string quote_symbol(const std::string& s) {
  bool plain = !s.empty() && s != "in" && s != "cap" && s != "true" && s != "false" &&
               !std::isdigit(static_cast<unsigned char>(s[0]));
  for (std::size_t i = 0; plain && i < s.size(); ++i) {
    auto u = static_cast<unsigned char>(s[i]);
    if (std::isalnum(u) || s[i] == '_' || u >= 0x80) continue;
    if (s[i] == '-' && i > 0 && i + 1 < s.size() && s[i + 1] != '>') continue;
    plain = false;
  }
  for (auto [u, ascii] : kUnicodeOps)
    if (s.find(u) != std::string::npos) plain = false;
  return plain ? s : '"' + s + '"';
}

inline std::string print(const Expr& e, int min_prec) {
  static const std::string_view kRelNames[] = {"dep", "dom", "syndom", "semdom",
                                               "lab", "synlab", "semlab"};
  static const std::string_view kNodeNames[] = {"pos", "word", "cat", "num",
                                                "case", "semprop"};
  std::string s;
  int prec = precedence(e.op);
  auto bin = [&](std::string_view sym, int lmin, int rmin) {
    s = print(*e.args[0], lmin) + std::string(sym) + print(*e.args[1], rmin);
  };
  switch (e.op) {
    case Op::kSymbol: return quote_symbol(e.text);
    case Op::kInt: return std::to_string(e.number);
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    case Op::kSet: {
      s = "{";
      bool first = true;
      for (const auto& sym : e.set) {
        if (!first) s += ",";
        s += quote_symbol(sym);
        first = false;
      }
      return s + "}";
    }
    case Op::kFeature:
      return "feature(" + quote_symbol(e.text) + ", " + print(*e.args[0], 0) + ")";
    case Op::kIff: bin(" <-> ", prec + 1, prec + 1); break;
    case Op::kImplies: bin(" -> ", prec + 1, prec); break;
    case Op::kOr: bin(" | ", prec, prec + 1); break;
    case Op::kAnd: bin(" & ", prec, prec + 1); break;
    case Op::kNot: s = "!" + print(*e.args[0], prec); break;
    case Op::kEq: bin("=", prec + 1, prec + 1); break;
    case Op::kNe: bin("!=", prec + 1, prec + 1); break;
    case Op::kIn: bin(" in ", prec + 1, prec + 1); break;
    case Op::kLt: bin(" < ", prec + 1, prec + 1); break;
    case Op::kIntersect: bin(" cap ", prec, prec + 1); break;
    default:
      if (is_relation_accessor(e.op)) {
        return std::string(kRelNames[static_cast<int>(e.op) - static_cast<int>(Op::kDep)]) +
               "(" + var_name(e.var) + ")";
      }
      return std::string(kNodeNames[static_cast<int>(e.op) - static_cast<int>(Op::kPos)]) +
             "(" + print(*e.args[0], 0) + ")";
  }
  return prec < min_prec ? "(" + s + ")" : s;
}

}  // namespace detail

inline std::string to_string(const Expr& e) { return detail::print(e, 0); }

// Structural equality.
inline bool same_expression(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.var != b.var || a.text != b.text || a.set != b.set ||
      a.number != b.number || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_expression(*a.args[i], *b.args[i])) return false;
  return true;
}

}  // namespace wcdg
