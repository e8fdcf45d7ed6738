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

// Word forms, lexica, sentences and candidate dependency relations.

#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wcdg/errors.hpp"

namespace wcdg {

using SymbolSet = std::set<std::string>;

enum class Layer { kSyn = 0, kSem = 1 };

inline constexpr Layer kLayers[] = {Layer::kSyn, Layer::kSem};

inline std::string_view layer_name(Layer layer) {
  return layer == Layer::kSyn ? "syn" : "sem";
}

inline std::optional<Layer> parse_layer(std::string_view text) {
  if (text == "syn") return Layer::kSyn;
  if (text == "sem") return Layer::kSem;
  return std::nullopt;
}

enum class Number { kUnspecified, kSg, kPl };

inline constexpr std::string_view kRootForm = "ROOT";
inline constexpr std::string_view kRootCategory = "ROOTCAT";

struct LexicalEntry {
  std::string form;
  std::string cat;
  Number num = Number::kUnspecified;
  // Empty means unconstrained.
  SymbolSet case_features;
  // nullopt is unspecified; an empty set is "no sort at all".
  std::optional<SymbolSet> semprop;
  std::map<std::string, SymbolSet> extra;

  friend bool operator==(const LexicalEntry&, const LexicalEntry&) = default;
};

// Entry used for forms missing from the lexicon: a noun with nothing known.
inline LexicalEntry unknown_entry(std::string form) {
  LexicalEntry e;
  e.form = std::move(form);
  e.cat = "N";
  return e;
}

// One hypothesis for one word on one layer: `dep` modifies `dom` with
// `label`. dom == 0 is the root pseudo-node. `reading` selects the lexical
// reading of the modifier when its form is ambiguous.
struct CandidateRelation {
  int dep = 1;
  Layer layer = Layer::kSyn;
  std::string label;
  int dom = 0;
  int reading = 0;

  friend auto operator<=>(const CandidateRelation&,
                          const CandidateRelation&) = default;
  friend bool operator==(const CandidateRelation&,
                         const CandidateRelation&) = default;
};

inline CandidateRelation make_relation(Layer layer, std::string label, int dep,
                                       int dom, int reading = 0) {
  if (dep < 1 || dom < 0 || dep == dom) {
    throw Error("invalid relation " + std::to_string(dep) + "->" +
                std::to_string(dom));
  }
  return CandidateRelation{dep, layer, std::move(label), dom, reading};
}

// "syn 1 SUBJ 2"
inline std::string to_string(const CandidateRelation& r) {
  std::string s(layer_name(r.layer));
  s += ' ' + std::to_string(r.dep) + ' ' + r.label + ' ' +
       std::to_string(r.dom);
  if (r.reading != 0) s += " r" + std::to_string(r.reading);
  return s;
}

struct Token {
  std::string form;
  std::vector<LexicalEntry> readings;
  bool known = true;
};

// Tokens at positions 1..n plus the root pseudo-node at position 0.
class Sentence {
 public:
  Sentence() { root_.form = kRootForm; root_.cat = kRootCategory; }
  explicit Sentence(std::vector<Token> tokens) : Sentence() {
    tokens_ = std::move(tokens);
  }

  int size() const { return static_cast<int>(tokens_.size()); }
  bool empty() const { return tokens_.empty(); }

  const Token& token(int position) const { return tokens_.at(position - 1); }

  int readings(int position) const {
    return position == 0 ? 1 : static_cast<int>(token(position).readings.size());
  }

  const LexicalEntry& entry(int position, int reading = 0) const {
    if (position == 0) return root_;
    return tokens_.at(position - 1).readings.at(reading);
  }
  LexicalEntry& mutable_entry(int position, int reading = 0) {
    if (position == 0) return root_;
    return tokens_.at(position - 1).readings.at(reading);
  }

  std::string text() const {
    std::string out;
    for (const Token& t : tokens_) {
      if (!out.empty()) out += ' ';
      out += t.form;
    }
    return out;
  }

 private:
  LexicalEntry root_;
  std::vector<Token> tokens_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

// Whitespace split that keeps "{a, b}" groups in one field.
inline std::vector<std::string> split_fields(std::string_view line,
                                             int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  int depth = 0;
  for (char c : line) {
    if (c == '{') ++depth;
    if (c == '}') {
      if (--depth < 0) throw SyntaxError(line_no, "unbalanced '}'");
    }
    if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) fields.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (depth != 0) throw SyntaxError(line_no, "unbalanced '{'");
  if (!cur.empty()) fields.push_back(std::move(cur));
  return fields;
}

inline SymbolSet parse_symbol_set(std::string_view text, int line_no) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw SyntaxError(line_no, "expected {..} set, got '" + std::string(text) + "'");
  SymbolSet out;
  std::string_view body = text.substr(1, text.size() - 2);
  while (!body.empty()) {
    auto comma = body.find(',');
    std::string_view item = trim(body.substr(0, comma));
    if (!item.empty()) out.emplace(item);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

}  // namespace detail

class Lexicon {
 public:
  void add(LexicalEntry entry) {
    entries_[entry.form].push_back(std::move(entry));
  }

  // All readings of form, in file order; empty when unknown.
  std::vector<LexicalEntry> lookup(std::string_view form) const {
    auto it = entries_.find(std::string(form));
    return it == entries_.end() ? std::vector<LexicalEntry>{} : it->second;
  }

  std::size_t size() const { return entries_.size(); }

  const std::map<std::string, std::vector<LexicalEntry>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::vector<LexicalEntry>> entries_;
};

// Format: `form key=value ...`, sets in braces, `#` comments.
inline Lexicon parse_lexicon(std::string_view text) {
  Lexicon lexicon;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    auto fields = detail::split_fields(detail::strip_comment(line), line_no);
    if (fields.empty()) continue;

    LexicalEntry e;
    e.form = fields[0];
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      auto eq = f.find('=');
      if (eq == std::string::npos || eq == 0)
        throw SyntaxError(line_no, "expected key=value, got '" + f + "'");
      std::string key = f.substr(0, eq);
      std::string value = f.substr(eq + 1);
      if (key == "cat") {
        e.cat = value;
      } else if (key == "num") {
        if (value == "sg") e.num = Number::kSg;
        else if (value == "pl") e.num = Number::kPl;
        else if (value == "unspecified") e.num = Number::kUnspecified;
        else throw SyntaxError(line_no, "num must be sg or pl, got '" + value + "'");
      } else if (key == "case") {
        e.case_features = detail::parse_symbol_set(value, line_no);
      } else if (key == "semprop") {
        e.semprop = detail::parse_symbol_set(value, line_no);
      } else if (!value.empty() && value.front() == '{') {
        e.extra[key] = detail::parse_symbol_set(value, line_no);
      } else {
        e.extra[key] = SymbolSet{value};
      }
    }
    if (e.cat.empty()) throw SyntaxError(line_no, "entry '" + e.form + "' has no cat");
    lexicon.add(std::move(e));
  }
  return lexicon;
}

inline Lexicon load_lexicon(const std::string& path) {
  return parse_lexicon(detail::read_file(path));
}

// Whitespace tokenization with surrounding punctuation stripped. Unknown
// forms become unknown_entry() readings.
inline Sentence make_sentence(std::string_view text, const Lexicon& lexicon) {
  static constexpr std::string_view kPunct = ".,;:!?\"'()";
  std::vector<Token> tokens;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    std::string_view w = word;
    while (!w.empty() && kPunct.find(w.front()) != std::string_view::npos)
      w.remove_prefix(1);
    while (!w.empty() && kPunct.find(w.back()) != std::string_view::npos)
      w.remove_suffix(1);
    if (w.empty()) continue;
    Token t;
    t.form = std::string(w);
    t.readings = lexicon.lookup(w);
    if (t.readings.empty()) {
      t.known = false;
      t.readings.push_back(unknown_entry(t.form));
    }
    tokens.push_back(std::move(t));
  }
  return Sentence(std::move(tokens));
}

}  // namespace wcdg
