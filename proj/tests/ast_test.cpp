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

StateNode leaf(std::string name, bool initial = false) {
  StateNode s;
  s.name = std::move(name);
  s.is_initial = initial;
  return s;
}

TransitionNode edge(std::string from, std::string event, std::string to) {
  TransitionNode t;
  t.source = std::move(from);
  t.events = {std::move(event)};
  t.target = std::move(to);
  return t;
}

AbstractStatechart two_states() {
  AbstractStatechart m;
  m.name = "M";
  m.states = {leaf("A", true), leaf("B")};
  m.transitions = {edge("A", "e", "B")};
  return m;
}

std::vector<std::string> messages(const WellFormedness& wf) {
  std::vector<std::string> out;
  for (const auto& v : wf.violations) out.push_back(v.message);
  return out;
}

TEST(Identifiers, ReservedWordsAreRejected) {
  EXPECT_TRUE(is_valid_identifier("Idle"));
  EXPECT_TRUE(is_valid_identifier("_x9"));
  EXPECT_FALSE(is_valid_identifier("9x"));
  EXPECT_FALSE(is_valid_identifier(""));
  EXPECT_FALSE(is_valid_identifier("a-b"));
  for (auto w : kReservedWords) EXPECT_FALSE(is_valid_identifier(w)) << w;
}

TEST(Stereotypes, PatternMatching) {
  EXPECT_TRUE(stereotype_matches({"*", std::nullopt}, {"prio", "outer"}));
  EXPECT_TRUE(stereotype_matches({"prio", std::nullopt}, {"prio", "outer"}));
  EXPECT_TRUE(stereotype_matches({"prio", "outer"}, {"prio", "outer"}));
  EXPECT_FALSE(stereotype_matches({"prio", "outer"}, {"prio", "inner"}));
  EXPECT_FALSE(stereotype_matches({"color", std::nullopt}, {"prio", "outer"}));
  EXPECT_EQ(parse_stereotype("prio:outer").str(), "prio:outer");
  EXPECT_FALSE(parse_stereotype("final").value.has_value());
}

TEST(Guards, LanguageTagsAndAdmission) {
  auto g = GuardExpr::And(GuardExpr::Var("x"), GuardExpr::Not(GuardExpr::Var("y")));
  EXPECT_EQ(g.str(), "x & !y");
  EXPECT_EQ(GuardExpr::True().language(), "GL0");
  EXPECT_EQ(g.language(), "GL1");
  EXPECT_TRUE(guard_language("GL0").admits(GuardExpr::True()));
  EXPECT_FALSE(guard_language("GL0").admits(GuardExpr::Var("x")));
  EXPECT_TRUE(guard_language("GL1").admits(g));
  EXPECT_TRUE(guard_language("GL1").admits(GuardExpr::True()));
  EXPECT_FALSE(guard_language("GL1").admits(GuardExpr::Not(g)));
  EXPECT_THROW(guard_language("GL9"), UnknownIdError);
}

TEST(Guards, EvaluationAgainstTruthTable) {
  auto g = GuardExpr::And(GuardExpr::Var("x"), GuardExpr::Not(GuardExpr::Var("y")));
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      Assignment a{{"x", x == 1}, {"y", y == 1}};
      EXPECT_EQ(guard_eval(g, a), x == 1 && y == 0);
    }
  }
  EXPECT_THROW(guard_eval(GuardExpr::Var("z"), Assignment{}), Error);
}

TEST(Guards, OverlapIsJointSatisfiability) {
  auto x = GuardExpr::Var("x");
  auto nx = GuardExpr::Not(GuardExpr::Var("x"));
  auto y = GuardExpr::Var("y");
  EXPECT_FALSE(guards_overlap(x, nx));
  EXPECT_TRUE(guards_overlap(x, y));
  EXPECT_TRUE(guards_overlap(GuardExpr::True(), nx));
  EXPECT_FALSE(guards_overlap(GuardExpr::And(x, y), GuardExpr::And(nx, y)));
}

TEST(StructuralEquality, IgnoresStateAndStereotypeOrder) {
  auto a = model(R"(statechart M <<a>> <<b>> { initial state A; state B <<x>> <<y>>; A - e -> B; })");
  auto b = model(R"(statechart M <<b>> <<a>> { state B <<y>> <<x>>; initial state A; A - e -> B; })");
  EXPECT_TRUE(structurally_equal(a, b));
  EXPECT_EQ(a, b);
}

TEST(StructuralEquality, TransitionOrderAndFieldsMatter) {
  auto a = model("statechart M { initial state A; state B; A - e -> B; B - e -> A; }");
  auto b = model("statechart M { initial state A; state B; B - e -> A; A - e -> B; }");
  auto c = model("statechart M { initial state A; state B; A - e / x -> B; B - e -> A; }");
  auto d = model("statechart N { initial state A; state B; A - e -> B; B - e -> A; }");
  EXPECT_FALSE(structurally_equal(a, b));
  EXPECT_FALSE(structurally_equal(a, c));
  EXPECT_FALSE(structurally_equal(a, d));
}

TEST(StructuralEquality, DeclaredAlphabetsCompareAsSets) {
  auto a = model("statechart M { events e, f; initial state A; }");
  auto b = model("statechart M { events f, e; initial state A; }");
  auto c = model("statechart M { events e; initial state A; }");
  EXPECT_TRUE(structurally_equal(a, b));
  EXPECT_FALSE(structurally_equal(a, c));
}

TEST(WellFormedness, AcceptsValidModel) {
  EXPECT_TRUE(wellformed(two_states()).ok());
}

TEST(WellFormedness, UnknownTargetAnchoredAtTransition) {
  auto m = two_states();
  m.transitions.push_back(edge("B", "e", "C"));
  auto wf = wellformed(m);
  ASSERT_EQ(wf.violations.size(), 1u);
  EXPECT_EQ(wf.violations[0].message, "unknown target C");
  EXPECT_EQ(wf.violations[0].anchor.kind, WfAnchor::Kind::Transition);
  EXPECT_EQ(wf.violations[0].anchor.transition, 1u);
}

TEST(WellFormedness, InitialStateRules) {
  auto none = two_states();
  none.states[0].is_initial = false;
  EXPECT_EQ(messages(wellformed(none)),
            std::vector<std::string>{"model has no initial state"});

  auto twice = two_states();
  twice.states[1].is_initial = true;
  EXPECT_EQ(messages(wellformed(twice)),
            std::vector<std::string>{"multiple initial states in top level"});

  auto composite = two_states();
  composite.states[1].children = {leaf("B1"), leaf("B2")};
  EXPECT_EQ(messages(wellformed(composite)),
            std::vector<std::string>{"composite B has no initial substate"});
}

TEST(WellFormedness, DuplicateNamesAcrossLevels) {
  auto m = two_states();
  m.states[1].children = {leaf("A", true)};
  EXPECT_EQ(messages(wellformed(m)),
            std::vector<std::string>{"duplicate state name A"});
}

TEST(WellFormedness, GuardVariablesMustBeDeclared) {
  auto m = two_states();
  m.transitions[0].guard = GuardExpr::Var("g");
  EXPECT_EQ(messages(wellformed(m)),
            std::vector<std::string>{"undeclared guard variable g"});
  m.guard_vars = {"g"};
  EXPECT_TRUE(wellformed(m).ok());
}

TEST(WellFormedness, ReservedWordsAsNames) {
  auto m = two_states();
  m.states[1].name = "goto";
  m.transitions[0].target = "goto";
  auto msgs = messages(wellformed(m));
  ASSERT_EQ(msgs.size(), 1u);
  EXPECT_EQ(msgs[0], "invalid state name 'goto'");
}

TEST(Traversal, PreorderDepthsAndTextualTransitionOrder) {
  auto m = model(R"(statechart M {
    initial state P { initial state Q { initial state R; } Q - b -> Q; }
    state S;
    P - a -> S;
  })");
  std::vector<std::pair<std::string, std::size_t>> seen;
  for_each_state(m, [&](const StateNode& s, const StateNode*, std::size_t d) {
    seen.emplace_back(s.name, d);
  });
  std::vector<std::pair<std::string, std::size_t>> expected{
      {"P", 1}, {"Q", 2}, {"R", 3}, {"S", 1}};
  EXPECT_EQ(seen, expected);
  std::vector<std::string> order;
  for_each_transition(m, [&](const TransitionNode& t, const StateNode*,
                             std::size_t) { order.push_back(t.events[0]); });
  EXPECT_EQ(order, (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(transition_count(m), 2u);
}

TEST(Constraints, DetOnly) {
  const auto& det = constraint("DetOnly");
  EXPECT_TRUE(det.holds(model("statechart M { initial state A; A - e / a -> A; }")));
  EXPECT_FALSE(det.holds(model(
      "statechart M { initial state A; A - e / a -> A; A - e / b -> A; }")));
  EXPECT_TRUE(det.holds(model(
      "statechart M { vars g; initial state A; A - e [g] -> A; A - e [!g] / a -> A; }")));
  // An ancestor's transition competes with the leaf's own.
  EXPECT_FALSE(det.holds(model(R"(statechart M {
    initial state C { initial state C1; C1 - e -> C1; }
    C - e -> C;
  })")));
}

TEST(Constraints, DepthAndHierarchy) {
  auto flat = model("statechart M { initial state A; }");
  auto two = model("statechart M { initial state A { initial state B; } }");
  auto three = model(
      "statechart M { initial state A { initial state B { initial state C; } } }");
  EXPECT_TRUE(apply_constraint(flat, "MaxDepth2"));
  EXPECT_TRUE(apply_constraint(two, "MaxDepth2"));
  EXPECT_FALSE(apply_constraint(three, "MaxDepth2"));
  EXPECT_TRUE(apply_constraint(flat, "NoHierarchy"));
  EXPECT_FALSE(apply_constraint(two, "NoHierarchy"));
  EXPECT_THROW(apply_constraint(flat, "Acyclic"), UnknownIdError);
}

TEST(Stereotypes, AllowListCoversStates) {
  auto m = model("statechart M <<prio:outer>> { initial state A <<color:red>>; }");
  EXPECT_TRUE(allowed_stereotypes(m, {{"*", std::nullopt}}));
  EXPECT_TRUE(allowed_stereotypes(m, {{"prio", "outer"}, {"color", std::nullopt}}));
  EXPECT_FALSE(allowed_stereotypes(m, {{"prio", "outer"}}));
}

}  // namespace
}  // namespace lvw
