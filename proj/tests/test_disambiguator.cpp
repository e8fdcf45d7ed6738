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

using testing::pp;
using testing::pp_grammar;
using testing::sem;
using testing::sem_label;
using testing::syn;
using testing::syn_label;
using testing::toy;
using testing::toy_grammar;

int id_of(const ConstraintNetwork& net, const CandidateRelation& r) {
  auto id = net.find(r);
  if (!id) throw std::runtime_error("not in network: " + to_string(r));
  return *id;
}

bool traced(const ConstraintNetwork& net, const std::string& line) {
  const auto& t = net.trace();
  return std::find(t.begin(), t.end(), line) != t.end();
}

TEST(PruneCost, SquaredSupport) {
  auto raw = build_network(toy("Pferde fressen Gras"), toy_grammar(), false);
  EXPECT_EQ(prune_cost(raw, id_of(raw, sem(2, "AG", 1))), 0.0);
  Grammar empty = parse_grammar("label-set syn A\nlabel-set sem B\n");
  auto flat = build_network(toy("Pferde fressen Gras"), empty);
  EXPECT_EQ(prune_cost(flat, 0), 1.0);
  auto n = build_network(toy("Pferde fressen Gras"), toy_grammar());
  int obj = id_of(n, syn(1, "OBJ", 2));
  EXPECT_NEAR(prune_cost(n, obj), n.support(obj) * n.support(obj), 1e-15);
  for (int i = 0; i < n.num_candidates(); ++i) EXPECT_GE(prune_cost(n, i), 0.0);
}

TEST(PruneCost, SubjectReadingOfGrasIn2bIsCheaper) {
  auto n = build_network(toy("Gras fressen Pferde"), toy_grammar());
  EXPECT_LT(prune_cost(n, id_of(n, syn(1, "SUBJ", 2))), prune_cost(n, id_of(n, syn(1, "OBJ", 2))));
}

TEST(SelectVictim, FirstVictimOf2a) {
  auto n = build_network(toy("Pferde fressen Gras"), toy_grammar());
  auto v = select_victim(n);
  ASSERT_TRUE(v);
  std::vector<CandidateRelation> dispreferred = {syn(1, "OBJ", 2), syn(3, "SUBJ", 2),
                                                 sem(3, "AG", 2), sem(1, "PAT", 2)};
  const auto& c = n.candidate(v->candidate);
  EXPECT_NE(std::find(dispreferred.begin(), dispreferred.end(), c), dispreferred.end())
      << to_string(c);
  for (const auto& preferred : {syn(1, "SUBJ", 2), syn(3, "OBJ", 2), sem(1, "AG", 2),
                                sem(3, "PAT", 2)}) {
    int id = id_of(n, preferred);
    for (const auto& d : dispreferred)
      EXPECT_LT(prune_cost(n, id_of(n, d)), prune_cost(n, id)) << to_string(d);
  }
}

TEST(SelectVictim, DoneWhenAllSingletons) {
  auto n = build_network(toy("Pferde"), toy_grammar());
  EXPECT_FALSE(select_victim(n));
}

TEST(SelectVictim, TiesFallToMassThenCanonicalOrder) {
  Grammar empty = parse_grammar("label-set syn A B\nlabel-set sem C\n");
  auto n = build_network(toy("Pferde Gras"), empty);
  auto v = select_victim(n);
  ASSERT_TRUE(v);
  EXPECT_EQ(n.candidate(v->candidate), syn(1, "A", 0));
  n.remove(v->candidate, v->cost);
  // word 1 now has one rival fewer, so word 2's candidates carry less mass
  EXPECT_EQ(n.candidate(select_victim(n)->candidate), syn(2, "A", 0));
  // repeatable
  auto m = build_network(toy("Pferde Gras"), empty);
  EXPECT_EQ(select_victim(m)->candidate, select_victim(build_network(toy("Pferde Gras"), empty))->candidate);
}

TEST(SelectVictim, PrefersTheCandidateWithTheStrongerRival) {
  Grammar g = parse_grammar(
      "label-set syn A\nlabel-set sem C\n"
      "constraint s1 layer=sem arity=1 pf=0 : pos(dom(X))=0\n"
      "constraint u layer=syn arity=1 pf=0.5 : pos(dep(X))=2 -> pos(dom(X))=0\n"
      "constraint b layer=syn arity=2 pf=0.5 :\n"
      "  !(pos(dep(X))=1 & dom(X)=dep(Y) & pos(dom(Y))=0)\n"
      "constraint c1 layer=cross arity=2 pf=0.5 : !(dep(X)=dep(Y) & pos(dep(X))=1)\n"
      "constraint c2 layer=cross arity=2 pf=0.5 :\n"
      "  !(pos(dep(X))=2 & pos(dom(X))=1 & pos(dep(Y))=1)\n");
  auto n = build_network(toy("Pferde Gras"), g);
  // supports: A/0 0.5 and A/2 0.25 for word 1, A/0 1 and A/1 0.25 for
  // word 2. Both 0.25 candidates cost 0.0625; word 2's rival is stronger.
  EXPECT_NEAR(n.support(id_of(n, syn(1, "A", 0))), 0.5, 1e-12);
  EXPECT_NEAR(n.support(id_of(n, syn(1, "A", 2))), 0.25, 1e-12);
  EXPECT_NEAR(n.support(id_of(n, syn(2, "A", 0))), 1.0, 1e-12);
  EXPECT_NEAR(n.support(id_of(n, syn(2, "A", 1))), 0.25, 1e-12);
  auto v = select_victim(n);
  ASSERT_TRUE(v);
  EXPECT_NEAR(v->cost, 0.0625, 1e-12);
  EXPECT_EQ(n.candidate(v->candidate), syn(2, "A", 1));
}

TEST(SelectVictim, QuadraticMassBreaksRemainingTies) {
  // With se2 and se3 nearly strict, Graeser's SUBJ and OBJ readings have the
  // same support; SUBJ carries the smaller squared score mass and goes.
  Grammar g = toy_grammar();
  for (auto& c : g.constraints)
    if (c.id == "se2" || c.id == "se3") c.pf = 0.01;
  auto n = build_network(toy("Gräser fressen Pferd"), g);
  n.remove(id_of(n, sem(1, "AG", 2)), 0);
  n.remove(id_of(n, sem(3, "PAT", 2)), 0);
  int subj = id_of(n, syn(1, "SUBJ", 2)), obj = id_of(n, syn(1, "OBJ", 2));
  EXPECT_NEAR(prune_cost(n, subj), prune_cost(n, obj), 1e-15);
  // unary 1, four neutral partners, and its own PAT reading (ss1 * ss2)
  EXPECT_NEAR(quadratic_mass(n, subj), 1 + 4 + 0.06 * 0.06, 1e-12);
  EXPECT_NEAR(quadratic_mass(n, obj), 1 + 5, 1e-12);
  EXPECT_EQ(select_victim(n)->candidate, subj);
}

TEST(PruneStrict, RemovesZeroSupportOnly) {
  auto n = build_network(toy("Pferde fressen Gras Auto"), toy_grammar());
  int before = 0;
  for (int v = 0; v < n.num_variables(); ++v) before += n.domain(v).size();
  int removed = prune_strict(n);
  int after = 0;
  for (int v = 0; v < n.num_variables(); ++v) {
    after += n.domain(v).size();
    ASSERT_FALSE(n.domain(v).empty());
    bool any = false;
    for (int id : n.domain(v)) any |= n.support(id) > 0;
    if (!any) continue;
    for (int id : n.domain(v)) EXPECT_GT(n.support(id), 0) << to_string(n.candidate(id));
  }
  EXPECT_EQ(before - after, removed);
  for (const auto& line : n.trace()) EXPECT_NE(line.find("cost=0"), std::string::npos);
  EXPECT_EQ(prune_strict(n), 0);
}

TEST(Activation, NothingDecidedNothingChanges) {
  auto n = build_network(toy("Pferde fressen Gras"), toy_grammar());
  EXPECT_FALSE(activate_pinduced(n));
  Grammar g = parse_grammar(
      "label-set syn A B\nlabel-set sem C\n"
      "pinduced p pf=0.5 X=syn Y=sem : lab(X)=A => lab(Y)=C -> false\n");
  auto m = build_network(toy("Pferde"), g);
  // A/0 and B/0 are equally supported
  EXPECT_FALSE(decided(m, id_of(m, syn(1, "A", 0))));
  EXPECT_FALSE(activate_pinduced(m));
  EXPECT_TRUE(m.trace().empty());
  EXPECT_EQ(m.unary(id_of(m, sem(1, "C", 0))), 1.0);
}

TEST(Activation, Pss1TriggersOnMaiUnderIm) {
  auto d = disambiguate_with_network(pp("Dann nehmen wir die erste Woche im Mai."), pp_grammar());
  EXPECT_TRUE(traced(d.network, "ACTIVATE pss1 syn 8 PHEAD 7"));
  EXPECT_TRUE(d.network.activated(0, syn(8, "PHEAD", 7)));
  EXPECT_EQ(testing::rel(d.analysis, 7, Layer::kSyn), syn(7, "PMOD", 6));
  EXPECT_EQ(testing::rel(d.analysis, 8, Layer::kSem), sem(8, "PART-OF", 6));
  // activation happens once per trigger instance
  EXPECT_EQ(std::count(d.network.trace().begin(), d.network.trace().end(),
                       "ACTIVATE pss1 syn 8 PHEAD 7"),
            1);
  // the verb attachment of "im" was penalized and pruned
  EXPECT_FALSE(d.network.live(id_of(d.network, syn(7, "PMOD", 2))));
}

TEST(Activation, Pss2ProjectsNominative) {
  auto n = build_network(pp("der Mann sieht"), pp_grammar());
  prune_strict(n);
  ASSERT_TRUE(decided(n, id_of(n, syn(1, "DET", 2))));
  EXPECT_TRUE(activate_pinduced(n));
  EXPECT_EQ(n.sentence().entry(2).case_features, SymbolSet{"nom"});
  EXPECT_TRUE(traced(n, "PROJECT pss2 2 {nom}"));
  EXPECT_FALSE(activate_pinduced(n));  // at most once
}

TEST(Activation, ThresholdDecides) {
  Grammar g = parse_grammar(
      "label-set syn A B\nlabel-set sem C\nthreshold 4\n"
      "constraint a layer=syn arity=1 pf=0.2 : lab(X)=B\n");
  auto n = build_network(toy("Pferde"), g);
  // A/0 support 0.2, B/0 support 1: B dominates by 5 >= 4
  EXPECT_TRUE(decided(n, id_of(n, syn(1, "B", 0))));
  EXPECT_FALSE(decided(n, id_of(n, syn(1, "A", 0))));
  g.threshold = 6;
  auto m = build_network(toy("Pferde"), g);
  EXPECT_FALSE(decided(m, id_of(m, syn(1, "B", 0))));
  EXPECT_TRUE(decided(m, id_of(m, sem(1, "C", 0))));  // sole survivor
}

TEST(Activation, EmptyIntersectionIsReported) {
  Lexicon lex = parse_lexicon("der cat=DET case={nom}\nWoche cat=N case={acc}\nsieht cat=V num=sg\n");
  auto d = disambiguate_with_network(make_sentence("der Woche sieht", lex), pp_grammar());
  EXPECT_TRUE(traced(d.network, "EMPTY-INTERSECTION pss2 2"));
  EXPECT_EQ(d.network.sentence().entry(2).case_features, SymbolSet{"acc"});
  EXPECT_EQ(d.analysis.relations.size(), 6u);
}

TEST(Disambiguate, Example2a) {
  auto a = disambiguate(toy("Pferde fressen Gras."), toy_grammar());
  EXPECT_EQ(a.score, 1.0);
  EXPECT_EQ(testing::shape(a), "SUBJ/2 AG/2 | ROOT/0 TOP/0 | OBJ/2 PAT/2");
}

TEST(Disambiguate, Example3dSwitches) {
  auto a = disambiguate(toy("Geld fressen Auto."), toy_grammar());
  EXPECT_EQ(sem_label(a, 1), "AG");
  EXPECT_EQ(sem_label(a, 3), "PAT");
}

TEST(Disambiguate, Example4a) {
  auto a = disambiguate(toy("Gräser fressen Pferd."), toy_grammar());
  EXPECT_EQ(sem_label(a, 1), "AG");
  EXPECT_EQ(sem_label(a, 3), "PAT");
  EXPECT_NEAR(a.score, 0.07, 1e-12);
}

TEST(Disambiguate, StrongerSelectionFlips4a) {
  Grammar g = toy_grammar();
  for (auto& c : g.constraints)
    if (c.id == "se2" || c.id == "se3") c.pf = 0.01;
  Sentence s = toy("Gräser fressen Pferd");
  auto a = disambiguate(s, g);
  EXPECT_EQ(sem_label(a, 3), "AG");
  EXPECT_EQ(syn_label(a, 3), "SUBJ");
  EXPECT_EQ(a.relations, best_k(s, g, 1)[0].relations);
}

TEST(Disambiguate, ScoreMatchesOracleScoring) {
  for (const char* text : {"Pferde fressen Gras", "Gras Gras", "fressen", "Auto Geld fressen Pferd",
                           "Pferd fressen fressen Gras"}) {
    Sentence s = toy(text);
    auto a = disambiguate(s, toy_grammar());
    EXPECT_NEAR(a.score, score_analysis(a.relations, toy_grammar(), s).score, 1e-12) << text;
  }
}

TEST(Disambiguate, Deterministic) {
  Sentence s = pp("Dann nehmen wir die erste Woche im Mai");
  auto a = disambiguate_with_network(s, pp_grammar());
  auto b = disambiguate_with_network(s, pp_grammar());
  EXPECT_EQ(a.network.trace(), b.network.trace());
  EXPECT_EQ(to_json_line(a.analysis, s), to_json_line(b.analysis, s));
}

TEST(Diagnose, CleanSentenceHasNothingToReport) {
  auto d = disambiguate_with_network(toy("Pferde fressen Gras"), toy_grammar());
  auto r = diagnose(d.analysis, d.network);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(r.expectations.empty());
}

TEST(Diagnose, AgreementErrorIn2c) {
  auto d = disambiguate_with_network(toy("Pferd fressen Gras"), toy_grammar());
  auto r = diagnose(d.analysis, d.network);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].constraint, "sy2");
  EXPECT_EQ(r.violations[0].relations, std::vector<CandidateRelation>{syn(1, "SUBJ", 2)});
  EXPECT_EQ(sem_label(d.analysis, 1), "AG");
}

TEST(Diagnose, SelectionalViolationsIn4a) {
  auto d = disambiguate_with_network(toy("Gräser fressen Pferd"), toy_grammar());
  auto r = diagnose(d.analysis, d.network);
  std::vector<std::string> ids;
  for (const auto& v : r.violations) ids.push_back(v.constraint);
  EXPECT_EQ(ids, (std::vector<std::string>{"se2", "se3"}));
}

TEST(Diagnose, FlagsLocallyUnexpectedChoices) {
  // before the determiners project their case, Mann looks like the subject
  auto d = disambiguate_with_network(pp("den Mann sieht der Hund"), pp_grammar());
  auto r = diagnose(d.analysis, d.network);
  bool mann = false;
  for (const auto& e : r.expectations) {
    EXPECT_LT(e.chosen_support, e.expected_support);
    if (e.chosen == syn(2, "OBJ", 3)) {
      mann = true;
      EXPECT_EQ(e.expected, syn(2, "SUBJ", 3));
    }
  }
  EXPECT_TRUE(mann);
}

}  // namespace
}  // namespace wcdg
