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

// Penalty-weighted constraints, preference-induced constraints and the
// grammar file format.
//
//   categories N V DET
//   label-set syn SUBJ OBJ ROOT
//   label-set sem AG PAT TOP
//   root-label syn ROOT
//   threshold 10
//   constraint sy2 layer=syn arity=1 pf=0.1 :
//     lab(X)=SUBJ -> num(dep(X))=num(dom(X))
//   pinduced pss2 X=syn : lab(X)=DET =>
//     case(dom(X)) := case(dom(X)) cap case(dep(X))
//
// Indented lines continue the previous directive. `#` starts a comment.

#pragma once

#include <array>
#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wcdg/errors.hpp"
#include "wcdg/expression.hpp"
#include "wcdg/format.hpp"
#include "wcdg/lexicon.hpp"

namespace wcdg {

enum class Scope { kSyn, kSem, kCross };

inline std::string_view scope_name(Scope s) {
  switch (s) {
    case Scope::kSyn: return "syn";
    case Scope::kSem: return "sem";
    default: return "cross";
  }
}

enum class Verdict { kHolds, kViolated, kInapplicable };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kViolated: return "violated";
    default: return "inapplicable";
  }
}

// guard -> body over one or two relations. pf = 0 is strict.
struct Constraint {
  std::string id;
  Scope scope = Scope::kSyn;
  int arity = 1;
  double pf = 0.0;
  ExprPtr expr;
  int line = 0;

  // Layer the relation bound to `v` must live on.
  Layer layer_of(Var v) const {
    if (scope == Scope::kCross) return v == Var::kX ? Layer::kSyn : Layer::kSem;
    return scope == Scope::kSyn ? Layer::kSyn : Layer::kSem;
  }
};

struct TemplateConsequent {
  ExprPtr expr;
};

// feature(node) := value
struct ProjectionConsequent {
  ExprPtr target;
  ExprPtr value;
};

// trigger(X) =>_pf consequent, activated only once trigger is decided.
struct PreferenceInducedConstraint {
  std::string id;
  double pf = 0.0;
  std::array<std::optional<Layer>, 3> layers;
  ExprPtr trigger;
  std::variant<TemplateConsequent, ProjectionConsequent> consequent;
  int line = 0;

  bool is_projection() const {
    return std::holds_alternative<ProjectionConsequent>(consequent);
  }
  const TemplateConsequent& as_template() const {
    return std::get<TemplateConsequent>(consequent);
  }
  const ProjectionConsequent& as_projection() const {
    return std::get<ProjectionConsequent>(consequent);
  }

  // Y and/or Z occurring in a template consequent.
  std::vector<Var> free_vars() const {
    std::vector<Var> out;
    if (is_projection()) return out;
    unsigned mask = vars_used(*as_template().expr);
    if (mask & 2u) out.push_back(Var::kY);
    if (mask & 4u) out.push_back(Var::kZ);
    return out;
  }
};

struct Grammar {
  std::array<std::vector<std::string>, 2> labels;
  std::vector<std::string> categories;
  std::array<std::optional<std::string>, 2> root_labels;
  double threshold = 10.0;
  std::vector<Constraint> constraints;
  std::vector<PreferenceInducedConstraint> pinduced;

  const std::vector<std::string>& labels_of(Layer layer) const {
    return labels[static_cast<int>(layer)];
  }
  const std::optional<std::string>& root_label(Layer layer) const {
    return root_labels[static_cast<int>(layer)];
  }
  bool has_label(Layer layer, std::string_view label) const {
    for (const auto& l : labels_of(layer))
      if (l == label) return true;
    return false;
  }
  // An empty category list accepts every category.
  bool accepts_category(std::string_view cat) const {
    if (categories.empty()) return true;
    for (const auto& c : categories)
      if (c == cat) return true;
    return false;
  }
  const Constraint* find_constraint(std::string_view id) const {
    for (const auto& c : constraints)
      if (c.id == id) return &c;
    return nullptr;
  }
};

// --- evaluation ----------------------------------------------------------

namespace detail {

inline Verdict judge(const Expr& e, const Evaluator& ev) {
  if (e.op == Op::kImplies) {
    if (!ev.truth(*e.args[0])) return Verdict::kInapplicable;
    return ev.truth(*e.args[1]) ? Verdict::kHolds : Verdict::kViolated;
  }
  return ev.truth(e) ? Verdict::kHolds : Verdict::kViolated;
}

// Violated if any orientation is violated, inapplicable if all are.
inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::kViolated || b == Verdict::kViolated) return Verdict::kViolated;
  if (a == Verdict::kHolds || b == Verdict::kHolds) return Verdict::kHolds;
  return Verdict::kInapplicable;
}

}  // namespace detail

inline bool applies_unary(const Constraint& c, const CandidateRelation& x) {
  return c.arity == 1 && c.layer_of(Var::kX) == x.layer;
}

inline bool applies_binary(const Constraint& c, const CandidateRelation& x,
                           const CandidateRelation& y) {
  if (c.arity != 2) return false;
  if (c.scope == Scope::kCross) return x.layer != y.layer;
  return x.layer == c.layer_of(Var::kX) && y.layer == c.layer_of(Var::kX);
}

inline Verdict eval_unary(const Constraint& c, const CandidateRelation& x,
                          const Sentence& sentence) {
  if (c.arity != 1) throw Error("constraint " + c.id + " is not unary");
  if (x.layer != c.layer_of(Var::kX))
    throw AccessorScopeError("constraint " + c.id + " cannot judge " + to_string(x));
  Bindings b{&x, nullptr, nullptr};
  return detail::judge(*c.expr, Evaluator(sentence, b));
}

// Same-layer constraints are judged in both orientations; cross-layer ones
// bind the syntactic relation to X.
inline Verdict eval_binary(const Constraint& c, const CandidateRelation& x,
                           const CandidateRelation& y, const Sentence& sentence) {
  if (c.arity != 2) throw Error("constraint " + c.id + " is not binary");
  if (!applies_binary(c, x, y))
    throw AccessorScopeError("constraint " + c.id + " cannot judge " + to_string(x) +
                             " with " + to_string(y));
  if (c.scope == Scope::kCross) {
    const auto& syn = x.layer == Layer::kSyn ? x : y;
    const auto& sem = x.layer == Layer::kSyn ? y : x;
    Bindings b{&syn, &sem, nullptr};
    return detail::judge(*c.expr, Evaluator(sentence, b));
  }
  Bindings xy{&x, &y, nullptr};
  Bindings yx{&y, &x, nullptr};
  return detail::combine(detail::judge(*c.expr, Evaluator(sentence, xy)),
                         detail::judge(*c.expr, Evaluator(sentence, yx)));
}

inline bool trigger_holds(const PreferenceInducedConstraint& p,
                          const CandidateRelation& x, const Sentence& sentence) {
  if (p.layers[0] != x.layer) return false;
  Bindings b{&x, nullptr, nullptr};
  return Evaluator(sentence, b).truth(*p.trigger);
}

// Can `r` fill free variable `v` of the template?
inline bool fits(const PreferenceInducedConstraint& p, Var v,
                 const CandidateRelation& r) {
  return p.layers[static_cast<int>(v)] == r.layer;
}

// Judges a template consequent for trigger instance x. With one free
// variable only `a` is used; with two, (a, b) is tried in every orientation
// the declared layers allow.
inline Verdict eval_template(const PreferenceInducedConstraint& p,
                             const CandidateRelation& x, const CandidateRelation* a,
                             const CandidateRelation* b, const Sentence& sentence) {
  const Expr& e = *p.as_template().expr;
  auto vars = p.free_vars();
  if (vars.empty()) {
    Bindings bind{&x, nullptr, nullptr};
    return detail::judge(e, Evaluator(sentence, bind));
  }
  if (vars.size() == 1) {
    if (a == nullptr || !fits(p, vars[0], *a)) return Verdict::kInapplicable;
    Bindings bind{&x, nullptr, nullptr};
    bind[static_cast<int>(vars[0])] = a;
    return detail::judge(e, Evaluator(sentence, bind));
  }
  if (a == nullptr || b == nullptr) return Verdict::kInapplicable;
  Verdict v = Verdict::kInapplicable;
  if (fits(p, Var::kY, *a) && fits(p, Var::kZ, *b)) {
    Bindings bind{&x, a, b};
    v = detail::combine(v, detail::judge(e, Evaluator(sentence, bind)));
  }
  if (fits(p, Var::kY, *b) && fits(p, Var::kZ, *a)) {
    Bindings bind{&x, b, a};
    v = detail::combine(v, detail::judge(e, Evaluator(sentence, bind)));
  }
  return v;
}

struct ProjectionResult {
  int position = 0;
  std::optional<SymbolSet> value;  // nullopt: leave the feature alone
  bool empty_intersection = false;
};

inline ProjectionResult eval_projection(const PreferenceInducedConstraint& p,
                                        const CandidateRelation& x,
                                        const Sentence& sentence) {
  const auto& proj = p.as_projection();
  Bindings b{&x, nullptr, nullptr};
  Evaluator ev(sentence, b);
  ProjectionResult r;
  r.position = std::get<NodeRef>(ev.eval(*proj.target->args[0])).position;
  Value v = ev.eval(*proj.value);
  if (auto* set = std::get_if<SymbolSet>(&v)) {
    if (set->empty()) r.empty_intersection = true;
    else r.value = *set;
  }
  return r;
}

// Writes a projected value into every reading at `position`.
inline void apply_projection(const PreferenceInducedConstraint& p, int position,
                             const SymbolSet& value, Sentence& sentence) {
  const Expr& target = *p.as_projection().target;
  for (int r = 0; r < sentence.readings(position); ++r) {
    LexicalEntry& e = sentence.mutable_entry(position, r);
    switch (target.op) {
      case Op::kCase: e.case_features = value; break;
      case Op::kSemprop: e.semprop = value; break;
      default: e.extra[target.text] = value;
    }
  }
}

// Features written by any projection, as "case", "semprop" or "feature:<name>".
inline std::set<std::string> projected_features(const Grammar& g) {
  std::set<std::string> out;
  for (const auto& p : g.pinduced) {
    if (!p.is_projection()) continue;
    const Expr& t = *p.as_projection().target;
    out.insert(t.op == Op::kCase ? "case"
               : t.op == Op::kSemprop ? "semprop"
                                      : "feature:" + t.text);
  }
  return out;
}

inline bool reads_any(const Expr& e, const std::set<std::string>& features) {
  bool hit = false;
  visit(e, [&](const Expr& n) {
    if (n.op == Op::kCase && features.count("case")) hit = true;
    if (n.op == Op::kSemprop && features.count("semprop")) hit = true;
    if (n.op == Op::kFeature && features.count("feature:" + n.text)) hit = true;
  });
  return hit;
}

// --- parsing -------------------------------------------------------------

namespace detail {

struct LogicalLine {
  int line;
  std::string text;
};

inline std::vector<LogicalLine> logical_lines(std::string_view text) {
  std::vector<LogicalLine> out;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    std::string_view body = trim(strip_comment(raw));
    if (body.empty()) continue;
    bool continuation = !raw.empty() && std::isspace(static_cast<unsigned char>(raw[0]));
    if (continuation && !out.empty()) {
      out.back().text += ' ';
      out.back().text += body;
    } else {
      out.push_back({line_no, std::string(body)});
    }
  }
  return out;
}

inline std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// First ':' that is not part of ':='.
inline std::size_t header_colon(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == ':' && (i + 1 == s.size() || s[i + 1] != '=')) return i;
  return std::string_view::npos;
}

inline double parse_pf(const std::string& text, int line) {
  char* end = nullptr;
  double pf = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw SyntaxError(line, "pf is not a number: '" + text + "'");
  if (!(pf >= 0.0 && pf < 1.0))
    throw PfOutOfRange(line, "pf must lie in [0, 1), got " + text);
  return pf;
}

inline Layer layer_or_throw(const std::string& text, int line) {
  auto l = parse_layer(text);
  if (!l) throw SyntaxError(line, "unknown layer '" + text + "'");
  return *l;
}

inline void check_scope(const Expr& e, const std::array<std::optional<Layer>, 3>& layers,
                        int line) {
  visit(e, [&](const Expr& n) {
    if (!is_relation_accessor(n.op)) return;
    const auto& l = layers[static_cast<int>(n.var)];
    if (!l) {
      throw SyntaxError(line, std::string("variable ") + var_name(n.var) +
                                  " is not available here");
    }
    if (auto need = accessor_layer(n.op); need && *need != *l) {
      throw AccessorScopeError("line " + std::to_string(line) + ": " +
                               to_string(n) + " reads the " +
                               std::string(layer_name(*need)) + " layer but " +
                               var_name(n.var) + " is " + std::string(layer_name(*l)));
    }
  });
}

inline void check_labels(const Expr& e, const std::array<std::optional<Layer>, 3>& layers,
                         const Grammar& g, int line) {
  visit(e, [&](const Expr& n) {
    if (n.op != Op::kEq && n.op != Op::kNe && n.op != Op::kIn) return;
    for (int side = 0; side < 2; ++side) {
      const Expr& acc = *n.args[side];
      const Expr& lit = *n.args[1 - side];
      if (!is_label_accessor(acc.op) || !is_literal(lit.op)) continue;
      Layer layer = *layers[static_cast<int>(acc.var)];
      SymbolSet symbols = lit.op == Op::kSet ? lit.set : SymbolSet{lit.text};
      for (const auto& s : symbols) {
        if (!g.has_label(layer, s))
          throw UndeclaredLabel(line, "label " + s + " is not declared for layer " +
                                          std::string(layer_name(layer)));
      }
    }
  });
}

struct Header {
  std::string id;
  std::vector<std::pair<std::string, std::string>> attrs;
};

inline Header parse_header(const std::vector<std::string>& w, int line) {
  if (w.size() < 2) throw SyntaxError(line, "missing id after '" + w[0] + "'");
  Header h;
  h.id = w[1];
  for (std::size_t i = 2; i < w.size(); ++i) {
    auto eq = w[i].find('=');
    if (eq == std::string::npos || eq == 0)
      throw SyntaxError(line, "expected key=value, got '" + w[i] + "'");
    h.attrs.emplace_back(w[i].substr(0, eq), w[i].substr(eq + 1));
  }
  return h;
}

inline Constraint parse_constraint(const Header& h, std::string_view body, int line) {
  Constraint c;
  c.id = h.id;
  c.line = line;
  std::optional<std::string> layer, arity, pf;
  for (const auto& [k, v] : h.attrs) {
    if (k == "layer") layer = v;
    else if (k == "arity") arity = v;
    else if (k == "pf") pf = v;
    else throw SyntaxError(line, "unknown attribute '" + k + "'");
  }
  if (!pf) throw SyntaxError(line, "constraint " + c.id + " has no pf");
  c.pf = parse_pf(*pf, line);
  if (!layer) throw SyntaxError(line, "constraint " + c.id + " has no layer");
  if (*layer == "syn") c.scope = Scope::kSyn;
  else if (*layer == "sem") c.scope = Scope::kSem;
  else if (*layer == "cross") c.scope = Scope::kCross;
  else throw SyntaxError(line, "unknown layer '" + *layer + "'");
  if (!arity || (*arity != "1" && *arity != "2"))
    throw SyntaxError(line, "constraint " + c.id + " needs arity=1 or arity=2");
  c.arity = *arity == "1" ? 1 : 2;
  if (c.scope == Scope::kCross && c.arity != 2)
    throw SyntaxError(line, "cross-layer constraint " + c.id + " must be binary");
  c.expr = parse_expression(body, line);
  return c;
}

inline PreferenceInducedConstraint parse_pinduced(const Header& h, std::string_view body,
                                                  int line) {
  PreferenceInducedConstraint p;
  p.id = h.id;
  p.line = line;
  for (const auto& [k, v] : h.attrs) {
    if (k == "pf") p.pf = parse_pf(v, line);
    else if (k == "X" || k == "Y" || k == "Z") p.layers[k[0] - 'X'] = layer_or_throw(v, line);
    else throw SyntaxError(line, "unknown attribute '" + k + "'");
  }
  if (!p.layers[0]) throw SyntaxError(line, "pinduced " + p.id + " needs X=<layer>");
  std::string_view text = body;
  std::size_t arrow = text.find("=>");
  std::size_t arrow_len = 2;
  if (auto u = text.find("⇒"); u != std::string_view::npos && u < arrow) {
    arrow = u;
    arrow_len = std::string_view("⇒").size();
  }
  if (arrow == std::string_view::npos)
    throw SyntaxError(line, "pinduced " + p.id + " needs 'trigger => consequent'");
  std::string_view rest = text.substr(arrow + arrow_len);
  if (rest.find("=>") != std::string_view::npos || rest.find("⇒") != std::string_view::npos)
    throw SyntaxError(line, "nested preference-induced constraints are not supported");
  p.trigger = parse_expression(text.substr(0, arrow), line);
  if (vars_used(*p.trigger) & ~1u)
    throw SyntaxError(line, "trigger of " + p.id + " may only use X");
  if (auto assign = rest.find(":="); assign != std::string_view::npos) {
    ProjectionConsequent proj;
    proj.target = parse_term(rest.substr(0, assign), line);
    if (proj.target->op != Op::kCase && proj.target->op != Op::kSemprop &&
        proj.target->op != Op::kFeature)
      throw SyntaxError(line, "projection target must be case(), semprop() or feature()");
    proj.value = parse_term(rest.substr(assign + 2), line);
    if (proj.value->kind != Kind::kSet)
      throw SyntaxError(line, "projected value must be a set");
    if ((vars_used(*proj.target) | vars_used(*proj.value)) & ~1u)
      throw SyntaxError(line, "projection of " + p.id + " may only use X");
    p.consequent = proj;
  } else {
    p.consequent = TemplateConsequent{parse_expression(rest, line)};
  }
  return p;
}

}  // namespace detail

inline Grammar parse_grammar(std::string_view text) {
  Grammar g;
  std::set<std::string> ids;
  for (const auto& [line, content] : detail::logical_lines(text)) {
    std::size_t colon = detail::header_colon(content);
    std::string_view head = std::string_view(content).substr(0, colon);
    auto w = detail::words(head);
    if (w.empty()) throw SyntaxError(line, "missing directive");
    const std::string kw = w[0];
    if (kw == "constraint" || kw == "pinduced") {
      if (colon == std::string_view::npos)
        throw SyntaxError(line, kw + " needs ': <expression>'");
      auto h = detail::parse_header(w, line);
      if (!ids.insert(h.id).second) throw SyntaxError(line, "duplicate id " + h.id);
      std::string_view body = std::string_view(content).substr(colon + 1);
      if (kw == "constraint") g.constraints.push_back(detail::parse_constraint(h, body, line));
      else g.pinduced.push_back(detail::parse_pinduced(h, body, line));
      continue;
    }
    w = detail::words(content);
    if (kw == "label-set") {
      if (w.size() < 2) throw SyntaxError(line, "label-set needs a layer");
      auto& labels = g.labels[static_cast<int>(detail::layer_or_throw(w[1], line))];
      for (std::size_t i = 2; i < w.size(); ++i) {
        if (std::find(labels.begin(), labels.end(), w[i]) == labels.end())
          labels.push_back(w[i]);
      }
    } else if (kw == "categories") {
      for (std::size_t i = 1; i < w.size(); ++i) g.categories.push_back(w[i]);
    } else if (kw == "root-label") {
      if (w.size() != 3) throw SyntaxError(line, "usage: root-label <layer> <label>");
      g.root_labels[static_cast<int>(detail::layer_or_throw(w[1], line))] = w[2];
    } else if (kw == "threshold") {
      char* end = nullptr;
      if (w.size() != 2) throw SyntaxError(line, "usage: threshold <number>");
      double t = std::strtod(w[1].c_str(), &end);
      if (*end != '\0' || !(t > 0)) throw SyntaxError(line, "bad threshold '" + w[1] + "'");
      g.threshold = t;
    } else {
      throw SyntaxError(line, "unknown directive '" + kw + "'");
    }
  }
  if (!g.categories.empty()) g.categories.emplace_back(kRootCategory);
  for (Layer layer : kLayers) {
    const auto& root = g.root_label(layer);
    if (root && !g.has_label(layer, *root))
      throw UndeclaredLabel(0, "root label " + *root + " is not declared");
  }
  for (const auto& c : g.constraints) {
    std::array<std::optional<Layer>, 3> layers{c.layer_of(Var::kX), std::nullopt,
                                               std::nullopt};
    if (c.arity == 2) layers[1] = c.layer_of(Var::kY);
    detail::check_scope(*c.expr, layers, c.line);
    detail::check_labels(*c.expr, layers, g, c.line);
  }
  for (const auto& p : g.pinduced) {
    std::array<std::optional<Layer>, 3> trigger_layers{p.layers[0], std::nullopt,
                                                       std::nullopt};
    detail::check_scope(*p.trigger, trigger_layers, p.line);
    detail::check_labels(*p.trigger, trigger_layers, g, p.line);
    if (p.is_projection()) {
      detail::check_scope(*p.as_projection().target, trigger_layers, p.line);
      detail::check_scope(*p.as_projection().value, trigger_layers, p.line);
    } else {
      detail::check_scope(*p.as_template().expr, p.layers, p.line);
      detail::check_labels(*p.as_template().expr, p.layers, g, p.line);
    }
  }
  return g;
}

inline Grammar load_grammar(const std::string& path) {
  return parse_grammar(detail::read_file(path));
}

// Canonical text; parse_grammar(to_text(g)) is equivalent to g.
inline std::string to_text(const Grammar& g) {
  std::string out;
  if (!g.categories.empty()) {
    out += "categories";
    for (const auto& c : g.categories)
      if (c != kRootCategory) out += ' ' + c;
    out += '\n';
  }
  for (Layer layer : kLayers) {
    if (g.labels_of(layer).empty()) continue;
    out += "label-set " + std::string(layer_name(layer));
    for (const auto& l : g.labels_of(layer)) out += ' ' + l;
    out += '\n';
  }
  for (Layer layer : kLayers) {
    if (const auto& r = g.root_label(layer))
      out += "root-label " + std::string(layer_name(layer)) + ' ' + *r + '\n';
  }
  out += "threshold " + format_number(g.threshold) + '\n';
  for (const auto& c : g.constraints) {
    out += "constraint " + c.id + " layer=" + std::string(scope_name(c.scope)) +
           " arity=" + std::to_string(c.arity) + " pf=" + format_number(c.pf) + " : " +
           to_string(*c.expr) + '\n';
  }
  for (const auto& p : g.pinduced) {
    out += "pinduced " + p.id + " pf=" + format_number(p.pf);
    for (int v = 0; v < 3; ++v) {
      if (p.layers[v])
        out += std::string(" ") + "XYZ"[v] + "=" + std::string(layer_name(*p.layers[v]));
    }
    out += " : " + to_string(*p.trigger) + " => ";
    if (p.is_projection())
      out += to_string(*p.as_projection().target) + " := " +
             to_string(*p.as_projection().value);
    else
      out += to_string(*p.as_template().expr);
    out += '\n';
  }
  return out;
}

}  // namespace wcdg
