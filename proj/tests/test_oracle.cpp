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

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace wcdg {
namespace {

using testing::sem;
using testing::sem_label;
using testing::syn;
using testing::syn_label;
using testing::toy;
using testing::toy_grammar;

std::vector<CandidateRelation> two_arg(const std::string& l1, const std::string& r1,
                                       const std::string& l3, const std::string& r3) {
  return {syn(1, l1, 2), sem(1, r1, 2), syn(2, "ROOT", 0), sem(2, "TOP", 0),
          syn(3, l3, 2), sem(3, r3, 2)};
}

TEST(Oracle, PreferredAssignmentOf2a) {
  auto r = score_analysis(two_arg("SUBJ", "AG", "OBJ", "PAT"), toy_grammar(),
                          toy("Pferde fressen Gras"));
  EXPECT_EQ(r.score, 1.0);
  EXPECT_TRUE(r.violations.empty());
}

TEST(Oracle, InvertedAssignmentOf2a) {
  auto r = score_analysis(two_arg("OBJ", "PAT", "SUBJ", "AG"), toy_grammar(),
                          toy("Pferde fressen Gras"));
  EXPECT_NEAR(r.score, 0.6 * 0.1 * 0.1 * 0.7, 1e-12);
  EXPECT_EQ(testing::violated_ids(r), (std::vector<std::string>{"se2", "se3", "sy2", "sy3"}));
  double product = 1.0;
  for (const auto& v : r.violations) product *= v.pf;
  EXPECT_EQ(product, r.score);
}

TEST(Oracle, ViolationsNameTheirRelations) {
  auto r = score_analysis(two_arg("SUBJ", "AG", "SUBJ", "PAT"), toy_grammar(),
                          toy("Pferde fressen Gras"));
  // sy4 (strict), sy2, sy3 on Gras, ss1 and ss2 on Gras' mismatched layers
  EXPECT_EQ(r.score, 0.0);
  bool found = false;
  for (const auto& v : r.violations) {
    if (v.constraint != "sy4") continue;
    found = true;
    EXPECT_EQ(v.relations, (std::vector<CandidateRelation>{syn(1, "SUBJ", 2), syn(3, "SUBJ", 2)}));
    EXPECT_EQ(v.pf, 0.0);
  }
  EXPECT_TRUE(found);
}

TEST(Oracle, EmptyGrammarScoresOne) {
  Grammar g = parse_grammar("label-set syn SUBJ OBJ ROOT\nlabel-set sem AG PAT TOP\n");
  auto r = score_analysis(two_arg("OBJ", "AG", "OBJ", "AG"), g, toy("Pferde fressen Gras"));
  EXPECT_EQ(r.score, 1.0);
  EXPECT_TRUE(r.violations.empty());
}

TEST(Oracle, AssignmentOrderDoesNotMatter) {
  auto a = two_arg("OBJ", "PAT", "SUBJ", "AG");
  std::reverse(a.begin(), a.end());
  auto r = score_analysis(a, toy_grammar(), toy("Pferde fressen Gras"));
  EXPECT_NEAR(r.score, 0.0042, 1e-12);
  EXPECT_EQ(r.relations.front(), syn(1, "OBJ", 2));
}

TEST(Oracle, IncompleteAssignment) {
  Sentence s = toy("Pferde fressen Gras");
  auto a = two_arg("SUBJ", "AG", "OBJ", "PAT");
  auto missing = a;
  missing.pop_back();
  EXPECT_THROW(score_analysis(missing, toy_grammar(), s), IncompleteAssignment);
  auto dup = missing;
  dup.push_back(sem(1, "PAT", 2));
  EXPECT_THROW(score_analysis(dup, toy_grammar(), s), IncompleteAssignment);
  auto far = a;
  far[0] = syn(1, "SUBJ", 7);
  EXPECT_THROW(score_analysis(far, toy_grammar(), s), IncompleteAssignment);
  EXPECT_THROW(score_analysis({}, toy_grammar(), s), IncompleteAssignment);
}

TEST(Oracle, Best1Of2a) {
  auto r = best_k(toy("Pferde fressen Gras"), toy_grammar(), 1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].score, 1.0);
  EXPECT_EQ(r[0].relations, (std::vector<CandidateRelation>{
                                syn(1, "SUBJ", 2), sem(1, "AG", 2), syn(2, "ROOT", 0),
                                sem(2, "TOP", 0), syn(3, "OBJ", 2), sem(3, "PAT", 2)}));
}

TEST(Oracle, Best2Of4a) {
  auto r = best_k(toy("Gräser fressen Pferd"), toy_grammar(), 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].score, 0.1 * 0.7, 1e-12);
  EXPECT_EQ(sem_label(r[0], 1), "AG");
  EXPECT_EQ(sem_label(r[0], 3), "PAT");
  EXPECT_NEAR(r[1].score, 0.6 * 0.1, 1e-12);
  EXPECT_EQ(sem_label(r[1], 3), "AG");
}

TEST(Oracle, Best2Of3c) {
  auto r = best_k(toy("Auto fressen Geld"), toy_grammar(), 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0].score, 0.1 * 0.1 * 0.7, 1e-12);
  EXPECT_EQ(sem_label(r[0], 1), "AG");
  EXPECT_NEAR(r[1].score, 0.6 * 0.1 * 0.1 * 0.7, 1e-12);
  EXPECT_EQ(sem_label(r[1], 3), "AG");
}

TEST(Oracle, RejectsBadK) {
  EXPECT_THROW(best_k(toy("Pferde"), toy_grammar(), 0), Error);
  EXPECT_THROW(best_k(toy(""), toy_grammar(), 1), EmptySentence);
}

TEST(Oracle, Budget) {
  OracleOptions tiny;
  tiny.budget = 5;
  EXPECT_THROW(best_k(toy("Pferde fressen Gras"), toy_grammar(), 1, tiny), SearchBudgetExceeded);
  EXPECT_NO_THROW(best_k(toy("Pferde fressen Gras"), toy_grammar(), 1));
}

TEST(Oracle, FewerAssignmentsThanK) {
  auto r = best_k(toy("Pferde"), toy_grammar(), 5);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].relations, (std::vector<CandidateRelation>{syn(1, "ROOT", 0), sem(1, "TOP", 0)}));
  // a lone noun has no verb to attach to
  EXPECT_EQ(r[0].score, 0.0);
  EXPECT_EQ(testing::violated_ids(r[0]), (std::vector<std::string>{"se-root", "se1", "sy-root", "sy1"}));
}

// Sorted scores of every assignment, computed without the oracle.
std::vector<double> naive_scores(const Sentence& s, const Grammar& g, bool unfiltered) {
  std::vector<double> out;
  testing::for_each_assignment(s, g, unfiltered, [&](const auto& a) {
    out.push_back(testing::naive_score(a, g, s));
  });
  std::sort(out.rbegin(), out.rend());
  return out;
}

TEST(Oracle, MatchesNaiveEnumeration) {
  struct Case {
    const char* text;
    bool unfiltered;
  };
  for (auto [text, unfiltered] :
       {Case{"Pferde fressen", true}, Case{"Gras Pferde", true}, Case{"fressen Geld", true},
        Case{"Pferde fressen Gras", false}, Case{"Gräser fressen Pferd", false},
        Case{"Geld Auto fressen", false}, Case{"fressen Pferd Gras", false}}) {
    Sentence s = toy(text);
    auto want = naive_scores(s, toy_grammar(), unfiltered);
    int k = static_cast<int>(std::min<std::size_t>(want.size(), 12));
    auto got = best_k(s, toy_grammar(), k);
    ASSERT_GE(got.size(), 1u) << text;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_NEAR(got[i].score, want[i], 1e-12) << text << " rank " << i + 1;
      EXPECT_NEAR(got[i].score, testing::naive_score(got[i].relations, toy_grammar(), s), 1e-12);
    }
    // positive-scored assignments are never cut
    std::size_t positive = std::count_if(want.begin(), want.end(), [](double x) { return x > 0; });
    EXPECT_GE(got.size(), std::min<std::size_t>(positive, k)) << text;
  }
}

TEST(Oracle, PrefixProperty) {
  for (const char* text : {"Pferde fressen Gras", "Gras fressen Pferd", "Geld fressen Autos",
                           "Pferd Gras fressen"}) {
    Sentence s = toy(text);
    std::vector<ScoredAssignment> prev;
    for (int k = 1; k <= 8; ++k) {
      auto cur = best_k(s, toy_grammar(), k);
      ASSERT_GE(cur.size(), prev.size());
      for (std::size_t i = 0; i < prev.size(); ++i) {
        EXPECT_EQ(cur[i].relations, prev[i].relations) << text << " k=" << k;
        EXPECT_EQ(cur[i].score, prev[i].score);
      }
      for (std::size_t i = 1; i < cur.size(); ++i) EXPECT_GE(cur[i - 1].score, cur[i].score);
      prev = cur;
    }
  }
}

TEST(Oracle, PrefilterIsResultNeutral) {
  OracleOptions raw;
  raw.prefilter = false;
  for (const char* text : {"Pferde fressen", "fressen Gras", "Gras Pferde", "Pferde"}) {
    Sentence s = toy(text);
    auto a = best_k(s, toy_grammar(), 3);
    auto b = best_k(s, toy_grammar(), 3, raw);
    ASSERT_FALSE(a.empty());
    EXPECT_EQ(a[0].score, b[0].score) << text;
    if (a[0].score > 0) {
      EXPECT_EQ(a[0].relations, b[0].relations) << text;
    }
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
      if (a[i].score > 0 || b[i].score > 0) {
        EXPECT_NEAR(a[i].score, b[i].score, 1e-12) << text;
      }
    }
  }
}

TEST(Oracle, ProjectionsApplyPerAssignment) {
  const Grammar& g = testing::pp_grammar();
  Sentence s = testing::pp("den Mann sieht der Hund");
  std::vector<CandidateRelation> wrong = {
      syn(1, "DET", 2), sem(1, "NIL", 0), syn(2, "SUBJ", 3), sem(2, "AG", 3),
      syn(3, "ROOT", 0), sem(3, "TOP", 0), syn(4, "DET", 5), sem(4, "NIL", 0),
      syn(5, "OBJ", 3), sem(5, "PAT", 3)};
  auto r = score_analysis(wrong, g, s);
  // Mann becomes accusative and Hund nominative, so both case checks fail
  EXPECT_NEAR(r.score, 0.2 * 0.2, 1e-12);
  EXPECT_EQ(testing::violated_ids(r), (std::vector<std::string>{"sy-acc", "sy-nom"}));
  // the caller's sentence is untouched
  EXPECT_EQ(s.entry(2).case_features, (SymbolSet{"acc", "dat", "nom"}));
  auto best = best_k(s, g, 1);
  EXPECT_EQ(syn_label(best[0], 5), "SUBJ");
  EXPECT_NEAR(best[0].score, 0.6, 1e-12);
}

TEST(Oracle, TemplatesChargeOncePerInstance) {
  const Grammar& g = testing::pp_grammar();
  Sentence s = testing::pp("Dann nehmen wir die erste Woche im Mai");
  auto best = best_k(s, g, 1);
  ASSERT_EQ(best.size(), 1u);
  auto high = best[0].relations;
  for (auto& r : high)
    if (r == syn(7, "PMOD", 6)) r = syn(7, "PMOD", 2);
  auto scored = score_analysis(high, g, s);
  // Mai stays PART-OF Woche, but the phrase now modifies the verb
  EXPECT_NEAR(scored.score, best[0].score * 0.1, 1e-12);
  EXPECT_EQ(std::count_if(scored.violations.begin(), scored.violations.end(),
                          [](const Violation& v) { return v.constraint == "pss1"; }),
            1);
}

}  // namespace
}  // namespace wcdg
