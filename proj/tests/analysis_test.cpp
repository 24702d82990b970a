// Copyright 2026 The LVW Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "support.hpp"

namespace lvw {
namespace {

using testing::flat;

const MappingSelection kChaosOpen{Unmatched::Chaos, Realization::Open};
const MappingSelection kStutterOpen{Unmatched::Stutter, Realization::Open};

MachineBounds bounds(std::size_t states) {
  MachineBounds b;
  b.max_states = states;
  return b;
}

FlatAutomaton corpus_model(const std::string& file) {
  return flat(testing::slurp(testing::corpus_dir() / "statecharts" / "arrow" / file));
}

TEST(MachineProperties, EvaluatedOnReachableStates) {
  auto m = flat("statechart M { events z; initial state A; A - e / a -> A; }");
  auto alpha = derive_alphabet(m);
  // inputs: e, z; outputs: -, a
  auto stutters = Machine::from_steps(alpha, 1, 0, {{0, 0, 1, 0}, {0, 1, 0, 0}},
                                      RealizationTag::Other);
  auto noisy = Machine::from_steps(alpha, 1, 0, {{0, 0, 1, 0}, {0, 1, 1, 0}},
                                   RealizationTag::Other);
  // q1 misbehaves but is unreachable.
  auto hidden = Machine::from_steps(
      alpha, 2, 0, {{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {1, 0, 1, 1}, {1, 1, 1, 0}},
      RealizationTag::Other);
  const auto& stutter = machine_property("StutterOnUnmatched");
  const auto& det = machine_property("Deterministic");
  const auto& outs = machine_property("OutputsInModel");
  EXPECT_TRUE(stutter.holds(stutters, m));
  EXPECT_FALSE(stutter.holds(noisy, m));
  EXPECT_TRUE(outs.holds(noisy, m));
  EXPECT_TRUE(stutter.holds(hidden, m));
  EXPECT_TRUE(det.holds(hidden, m));
  EXPECT_THROW(machine_property("Live"), UnknownIdError);

  auto silent = flat("statechart M { events e; actions a; initial state A; }");
  auto emits = Machine::from_steps(derive_alphabet(silent), 1, 0, {{0, 0, 1, 0}},
                                   RealizationTag::Other);
  EXPECT_FALSE(outs.holds(emits, silent));
}

TEST(LanguageRefinement, StutterRefinesChaosPointwise) {
  auto corpus = testing::corpus_flat();
  auto r = check_language_refinement(kChaosOpen, kStutterOpen, corpus, bounds(2));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.proof_kind, "pointwise");
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.models_checked, corpus.size());
  EXPECT_GT(r.universe_size, 0u);
}

TEST(LanguageRefinement, ReverseDirectionHasAWitness) {
  auto corpus = testing::corpus_flat();
  auto r = check_language_refinement(kStutterOpen, kChaosOpen, corpus, bounds(2));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.proof_kind, "bounded");
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_EQ(r.counterexample->variant, "chaos,open");
  EXPECT_EQ(r.counterexample->witness.rfind("machine {", 0), 0u);
}

TEST(LanguageRefinement, FastPathNeverDisagreesWithEnumeration) {
  auto corpus = testing::corpus_flat();
  for (const auto& v1 : fully_set_selections()) {
    for (const auto& v2 : fully_set_selections()) {
      auto r = check_language_refinement(v1, v2, corpus, bounds(1));
      if (pointwise_refines(v2, v1)) {
        EXPECT_TRUE(r.pass) << v1.str() << " <- " << v2.str();
        EXPECT_EQ(r.proof_kind, "pointwise");
      } else {
        // The corpus has unmatched inputs and all tags, so every
        // non-implied pair is refuted.
        EXPECT_FALSE(r.pass) << v1.str() << " <- " << v2.str();
      }
    }
  }
}

TEST(LanguageRefinement, Preconditions) {
  EXPECT_THROW(check_language_refinement(MappingSelection{}, kChaosOpen,
                                         testing::corpus_flat(), bounds(1)),
               Error);
  EXPECT_THROW(check_language_refinement(kChaosOpen, kStutterOpen, {}, bounds(1)),
               Error);
}

TEST(PropertyPreservation, NeedsRefinementEvidence) {
  auto m = corpus_model("toggle.sc");
  AnalysisReport none;
  EXPECT_THROW(check_property_preservation("Deterministic", m, kChaosOpen,
                                           kStutterOpen, bounds(2), none),
               Error);
  auto failing = check_language_refinement(kStutterOpen, kChaosOpen,
                                           {corpus_model("sensor.sc")}, bounds(1));
  ASSERT_FALSE(failing.pass);
  EXPECT_THROW(check_property_preservation("Deterministic", m, kStutterOpen,
                                           kChaosOpen, bounds(2), failing),
               Error);
}

TEST(PropertyPreservation, HoldsAlongARefinement) {
  auto corpus = testing::corpus_flat();
  auto ref = check_language_refinement(kChaosOpen, kStutterOpen, corpus, bounds(2));
  ASSERT_TRUE(ref.pass);
  auto toggle = corpus_model("toggle.sc");
  auto r = check_property_preservation("Deterministic", toggle, kChaosOpen,
                                       kStutterOpen, bounds(2), ref);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.proof_kind, "bounded");
  EXPECT_EQ(r.param("premise"), "holds");
  EXPECT_EQ(r.param("conclusion"), "holds");

  auto sensor = corpus_model("sensor.sc");
  auto vac = check_property_preservation("StutterOnUnmatched", sensor, kChaosOpen,
                                         kStutterOpen, bounds(2), ref);
  EXPECT_TRUE(vac.pass);
  EXPECT_EQ(vac.proof_kind, "vacuous");
}

TEST(PropertyPreservation, UncheckedVariantFailsWithoutRefinement) {
  auto sensor = corpus_model("sensor.sc");
  auto r = check_property_preservation_unchecked("StutterOnUnmatched", sensor,
                                                 kStutterOpen, kChaosOpen, bounds(1));
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_EQ(r.counterexample->variant, "chaos,open");
}

TEST(Invariance, NotInvariantWithChaosWitness) {
  auto res = check_invariant_property("StutterOnUnmatched", "UnmatchedEvent",
                                      {corpus_model("sensor.sc")}, kStutterOpen,
                                      bounds(2));
  EXPECT_EQ(res.kind, InvariantResult::Kind::NotInvariant);
  ASSERT_TRUE(res.witness.has_value());
  EXPECT_EQ(res.witness->model, "Sensor");
  EXPECT_EQ(res.witness->variant, "chaos,open");
  EXPECT_FALSE(res.report.pass);
}

TEST(Invariance, LocallyInvariantListsModels) {
  auto res = check_invariant_property(
      "StutterOnUnmatched", "UnmatchedEvent",
      {corpus_model("toggle.sc"), corpus_model("sensor.sc")}, kStutterOpen, bounds(1));
  EXPECT_EQ(res.kind, InvariantResult::Kind::LocallyInvariant);
  EXPECT_EQ(res.holding_models, std::vector<std::string>{"Toggle"});
}

TEST(Invariance, GlobalImpliesLocalOnEveryModel) {
  std::vector<FlatAutomaton> matched;
  for (const auto& m : testing::corpus_flat()) {
    if (testing::fully_matched(m)) matched.push_back(m);
  }
  ASSERT_GE(matched.size(), 5u);
  auto global = check_invariant_property("OutputsInModel", "StateRealization",
                                         matched, kStutterOpen, bounds(2));
  EXPECT_EQ(global.kind, InvariantResult::Kind::GloballyInvariant);
  for (const auto& m : matched) {
    auto local = check_invariant_property("OutputsInModel", "StateRealization",
                                          {m}, kStutterOpen, bounds(2));
    EXPECT_EQ(local.kind, InvariantResult::Kind::GloballyInvariant) << m.name;
  }
}

TEST(Invariance, Preconditions) {
  auto m = corpus_model("toggle.sc");
  EXPECT_THROW(check_invariant_property("OutputsInModel", "Priority", {m},
                                        kStutterOpen, bounds(1)),
               UnknownIdError);
  EXPECT_THROW(check_invariant_property("OutputsInModel", "UnmatchedEvent", {m},
                                        MappingSelection{}, bounds(1)),
               Error);
}

TEST(FlatModelSpace, CountsAndShape) {
  auto one = enumerate_flat_models({1, 1, 1});
  EXPECT_EQ(one.size(), 4u);  // subsets of {S1-e1->S1, S1-e1/a1->S1}
  auto two = enumerate_flat_models({2, 1, 1});
  EXPECT_EQ(two.size(), 4u + 256u);
  for (const auto& m : two) EXPECT_TRUE(wellformed(to_statechart(m)).ok());
  EXPECT_THROW(enumerate_flat_models({3, 1, 1}), BoundsError);
}

TEST(Expressiveness, DetOnlyLosesNondeterminism) {
  auto r = check_expressiveness_preservation("DetOnly", {}, bounds(2), kStutterOpen);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.counterexample.has_value());
  auto witness = testing::model(r.counterexample->witness);
  EXPECT_FALSE(apply_constraint(witness, "DetOnly"));
  EXPECT_EQ(r.counterexample->model, "m4");
}

TEST(Expressiveness, FlatSpaceConstraintsLoseNothing) {
  for (const char* c : {"NoHierarchy", "MaxDepth2"}) {
    auto r = check_expressiveness_preservation(c, {}, bounds(2), kStutterOpen);
    EXPECT_TRUE(r.pass) << c;
    EXPECT_EQ(r.param("constrained_models"), std::to_string(r.models_checked));
  }
  EXPECT_THROW(check_expressiveness_preservation("Nope", {}, bounds(1), kStutterOpen),
               UnknownIdError);
}

TEST(Reports, DeterministicTextAndFiles) {
  auto corpus = testing::corpus_flat();
  auto a = check_language_refinement(kStutterOpen, kChaosOpen, corpus, bounds(1));
  auto b = check_language_refinement(kStutterOpen, kChaosOpen, corpus, bounds(1));
  EXPECT_EQ(a.to_text(), b.to_text());
  auto dir = std::filesystem::temp_directory_path() / "lvw_report_test";
  std::filesystem::remove_all(dir);
  auto path = write_report(a, dir, "r");
  EXPECT_EQ(a.evidence_path, path);
  EXPECT_EQ(testing::slurp(path), b.to_text());
  EXPECT_NE(a.to_text().find("verdict: FAIL\n"), std::string::npos);
  EXPECT_NE(a.to_text().find("bounds: max_states=1"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace lvw
