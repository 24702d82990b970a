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

using testing::model;

struct Edge {
  std::string source, event, target;
  std::optional<std::string> action;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

std::set<Edge> edges(const FlatAutomaton& f) {
  std::set<Edge> out;
  for (const auto& t : f.transitions) {
    out.insert({t.source, t.event, t.target, t.action});
  }
  return out;
}

std::vector<std::string> state_names(const FlatAutomaton& f) {
  std::vector<std::string> out;
  for (const auto& s : f.states) out.push_back(s.name);
  return out;
}

constexpr const char* kComposite = R"(statechart M {
  initial state C {
    initial state C1;
    state C2;
    C1 - e -> C2;
  }
  state A;
  C - f -> A;
  A - f -> C;
})";

constexpr const char* kConflict = R"(statechart M {
  initial state C {
    initial state C1;
    state C2;
    C1 - e -> C2;
  }
  state A;
  C - f -> A;
  C - e -> A;
  A - f -> C;
})";

TEST(MultiTrigger, ExpandsInOrder) {
  auto m = model("statechart M { initial state A; state B; A - e, f / x -> B; }");
  auto x = expand_multitrigger(m);
  ASSERT_EQ(x.transitions.size(), 2u);
  EXPECT_EQ(x.transitions[0].events, std::vector<std::string>{"e"});
  EXPECT_EQ(x.transitions[1].events, std::vector<std::string>{"f"});
  EXPECT_EQ(x.transitions[1].action, std::optional<std::string>("x"));
  EXPECT_EQ(expand_multitrigger(x), x);
  auto single = model("statechart M { initial state A; A - e -> A; }");
  EXPECT_EQ(expand_multitrigger(single), single);
}

TEST(Flatten, CompositeSourceIsReplicatedToLeaves) {
  for (auto p : {Priority::InnerFirst, Priority::OuterFirst}) {
    auto f = flatten(model(kComposite), p);
    EXPECT_EQ(f.initial, "C1");
    std::set<Edge> expected{{"C1", "e", "C2", {}},
                            {"C1", "f", "A", {}},
                            {"C2", "f", "A", {}},
                            {"A", "f", "C1", {}}};
    EXPECT_EQ(edges(f), expected);
  }
}

TEST(Flatten, InnerFirstKeepsTheDeeperTransition) {
  auto f = flatten(model(kConflict), Priority::InnerFirst);
  auto e = edges(f);
  EXPECT_TRUE(e.count({"C1", "e", "C2", {}}));
  EXPECT_FALSE(e.count({"C1", "e", "A", {}}));
  EXPECT_TRUE(e.count({"C2", "e", "A", {}}));
}

TEST(Flatten, OuterFirstKeepsTheShallowerTransition) {
  auto f = flatten(model(kConflict), Priority::OuterFirst);
  auto e = edges(f);
  EXPECT_FALSE(e.count({"C1", "e", "C2", {}}));
  EXPECT_TRUE(e.count({"C1", "e", "A", {}}));
  EXPECT_TRUE(e.count({"C2", "e", "A", {}}));
}

TEST(Flatten, PrioStereotypeForcesOuterAndIsConsumed) {
  std::string src = kConflict;
  src.replace(src.find("M {"), 3, "M <<prio:outer>> <<doc>> {");
  auto f = flatten(model(src), Priority::InnerFirst);
  EXPECT_EQ(edges(f), edges(flatten(model(kConflict), Priority::OuterFirst)));
  ASSERT_EQ(f.stereotypes.size(), 1u);
  EXPECT_EQ(f.stereotypes[0].name, "doc");
}

TEST(Flatten, TargetRedirectIsRecursive) {
  auto f = flatten(model(R"(statechart M {
    initial state X;
    state P { initial state Q { state R2; initial state R1; } state S; }
    X - go -> P;
  })"), Priority::InnerFirst);
  EXPECT_EQ(edges(f), (std::set<Edge>{{"X", "go", "R1", {}}}));
  EXPECT_EQ(state_names(f), (std::vector<std::string>{"R1", "R2", "S", "X"}));
}

TEST(Flatten, EqualDepthNondeterminismIsKept) {
  auto f = flatten(model(
      "statechart M { initial state A; A - e / a -> A; A - e / b -> A; }"),
                   Priority::InnerFirst);
  EXPECT_EQ(f.transitions.size(), 2u);
}

TEST(Flatten, RejectsIllFormedOrUnexpandedInput) {
  AbstractStatechart bad;
  bad.name = "M";
  EXPECT_THROW(flatten(bad, Priority::InnerFirst), Error);
  auto multi = model("statechart M { initial state A; A - e, f -> A; }");
  EXPECT_THROW(flatten(multi, Priority::InnerFirst), Error);
  EXPECT_NO_THROW(reduce(multi, Priority::InnerFirst));
}

TEST(Flatten, IdentityOnFlatCorpusModels) {
  std::size_t flat_models = 0;
  for (const auto& m : testing::corpus_models()) {
    if (!is_reduced(m)) continue;
    ++flat_models;
    for (auto p : {Priority::InnerFirst, Priority::OuterFirst}) {
      EXPECT_EQ(to_statechart(flatten(m, p)), m) << m.name;
    }
  }
  EXPECT_GE(flat_models, 5u);
}

TEST(Flatten, IdempotentOnCorpus) {
  for (const auto& m : testing::corpus_models()) {
    for (auto p : {Priority::InnerFirst, Priority::OuterFirst}) {
      auto once = reduce(m, p);
      EXPECT_TRUE(is_reduced(to_statechart(once)));
      EXPECT_EQ(reduce(to_statechart(once), p), once) << m.name;
    }
  }
}

TEST(Reduced, Classification) {
  EXPECT_TRUE(is_reduced(model("statechart M { initial state A; A - e -> A; }")));
  EXPECT_FALSE(is_reduced(model(kComposite)));
  EXPECT_FALSE(is_reduced(model("statechart M { initial state A; A - e, f -> A; }")));
  EXPECT_EQ(abbreviations_used(model(kComposite)),
            std::set<Abbreviation>{Abbreviation::Hierarchy});
}

TEST(Reduced, InterfaceAlphabetIncludesDeclarations) {
  auto f = testing::flat(
      "statechart M { events z; actions q; initial state A; A - e / a -> A; }");
  EXPECT_EQ(f.interface_events(), (std::vector<std::string>{"e", "z"}));
  EXPECT_EQ(f.interface_actions(), (std::vector<std::string>{"a", "q"}));
  EXPECT_EQ(f.events(), std::set<std::string>{"e"});
}

TEST(AbbreviationAgreement, FlatCorpusUnderHierarchyVariant) {
  std::vector<AbstractStatechart> flat;
  for (const auto& m : testing::corpus_models()) {
    if (is_reduced(m)) flat.push_back(m);
  }
  auto v = check_abbrev_agreement(flat, AbbreviationVariant{{}},
                                  AbbreviationVariant{{Abbreviation::Hierarchy}});
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.agreement_checked, flat.size());
}

TEST(AbbreviationAgreement, FullCorpusIsExpressible) {
  auto corpus = testing::corpus_models();
  auto v = check_abbrev_agreement(
      corpus, AbbreviationVariant{{}},
      AbbreviationVariant{{Abbreviation::Hierarchy, Abbreviation::MultiTrigger}});
  EXPECT_TRUE(v.pass) << v.detail;
  EXPECT_EQ(v.expressibility_checked, corpus.size());
}

TEST(AbbreviationAgreement, FaultInjectedTransformFails) {
  AbbreviationVariant broken{{Abbreviation::Hierarchy}};
  broken.transform = [](const AbstractStatechart& m) {
    auto f = reduce(m, Priority::InnerFirst);
    if (!f.transitions.empty()) f.transitions.pop_back();
    return f;
  };
  auto v = check_abbrev_agreement(testing::corpus_models(),
                                  AbbreviationVariant{{}}, broken);
  EXPECT_FALSE(v.pass);
  EXPECT_TRUE(v.witness.has_value());
}

}  // namespace
}  // namespace lvw
