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

// wcdp: parse sentences with a weighted constraint dependency grammar.
//
//   wcdp parse -g toy.gram -l toy.lex -s "Pferde fressen Gras"
//
// Exit status: 0 on success, 1 for grammar, lexicon or parse errors, 2 for
// I/O errors and unusable input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wcdg/wcdg.hpp"

namespace {

struct RunConfig {
  std::string grammar;
  std::string lexicon;
  std::string sentence;
  std::string input;  // file, or "-" for stdin
  std::string mode = "propagate";
  int top_k = 1;
  bool trace = false;
  bool diagnose = false;
  std::string format = "text";
};

std::vector<std::string> read_sentences(const RunConfig& cfg) {
  std::vector<std::string> out;
  if (!cfg.sentence.empty()) out.push_back(cfg.sentence);
  if (cfg.input.empty()) {
    if (out.empty()) throw wcdg::IoError("no input: give -s or -i");
    return out;
  }
  std::ifstream file;
  std::istream* in = &std::cin;
  if (cfg.input != "-") {
    file.open(cfg.input);
    if (!file) throw wcdg::IoError("cannot open " + cfg.input);
    in = &file;
  }
  std::string line;
  while (std::getline(*in, line)) {
    auto body = wcdg::detail::trim(wcdg::detail::strip_comment(line));
    if (!body.empty()) out.emplace_back(body);
  }
  return out;
}

std::string render(const wcdg::Analysis& a, const wcdg::Sentence& s, const RunConfig& cfg,
                   const wcdg::RecordExtras& extras) {
  return cfg.format == "json-lines" ? wcdg::to_json_line(a, s, extras)
                                    : wcdg::to_text(a, s, extras);
}

int run(const RunConfig& cfg) {
  wcdg::Grammar grammar;
  wcdg::Lexicon lexicon;
  try {
    grammar = wcdg::load_grammar(cfg.grammar);
    lexicon = wcdg::load_lexicon(cfg.lexicon);
  } catch (const wcdg::IoError& e) {
    std::cerr << "wcdp: " << e.what() << '\n';
    return 2;
  } catch (const wcdg::Error& e) {
    std::cerr << "wcdp: " << e.what() << '\n';
    return 1;
  }

  std::vector<std::string> sentences;
  try {
    sentences = read_sentences(cfg);
  } catch (const wcdg::Error& e) {
    std::cerr << "wcdp: " << e.what() << '\n';
    return 2;
  }

  int status = 0;
  for (const auto& text : sentences) {
    try {
      wcdg::Sentence s = wcdg::make_sentence(text, lexicon);
      if (cfg.mode == "oracle") {
        auto results = wcdg::best_k(s, grammar, cfg.top_k);
        for (std::size_t i = 0; i < results.size(); ++i) {
          wcdg::RecordExtras extras;
          extras.rank = static_cast<int>(i) + 1;
          std::cout << render(results[i], s, cfg, extras);
        }
      } else {
        auto result = wcdg::disambiguate_with_network(s, grammar);
        wcdg::DiagnosisReport report;
        wcdg::RecordExtras extras;
        if (cfg.trace) extras.trace = &result.network.trace();
        if (cfg.diagnose) {
          report = wcdg::diagnose(result.analysis, result.network);
          extras.diagnosis = &report;
        }
        std::cout << render(result.analysis, s, cfg, extras);
      }
    } catch (const wcdg::EmptySentence& e) {
      std::cerr << "wcdp: " << e.what() << '\n';
      status = std::max(status, 2);
    } catch (const wcdg::Error& e) {
      std::cerr << "wcdp: " << text << ": " << e.what() << '\n';
      status = std::max(status, 1);
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted constraint dependency parser"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto* parse = app.add_subcommand("parse", "Parse sentences");
  parse->add_option("-g,--grammar", cfg.grammar, "Grammar file")->required();
  parse->add_option("-l,--lexicon", cfg.lexicon, "Lexicon file")->required();
  parse->add_option("-s,--sentence", cfg.sentence, "Sentence to parse");
  parse->add_option("-i,--input", cfg.input, "File with one sentence per line, - for stdin");
  parse->add_option("--mode", cfg.mode, "propagate or oracle")
      ->check(CLI::IsMember({"propagate", "oracle"}));
  parse->add_option("--top-k", cfg.top_k, "Number of oracle analyses")
      ->check(CLI::PositiveNumber);
  parse->add_flag("--trace", cfg.trace, "Print pruning and activation events");
  parse->add_flag("--diagnose", cfg.diagnose, "Print violations and expectation violations");
  parse->add_option("--format", cfg.format, "text or json-lines")
      ->check(CLI::IsMember({"text", "json-lines"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  return run(cfg);
}
