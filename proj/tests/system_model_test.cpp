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

#include <functional>

#include "support.hpp"

namespace lvw {
namespace {

MiniSystemModel widened() {
  return parse_sm(testing::slurp(testing::corpus_dir() / "sysmodels" / "widened.smx"));
}

MiniSystemModel from(const std::string& body) {
  return parse_sm("systemmodel S { " + body + " }");
}

// Independent count of labeled models: acyclicity by depth-first search over
// all subsets of ordered class pairs, everything else by direct product.
std::uint64_t oracle_count(const SystemModelBounds& b) {
  auto acyclic = [](std::size_t n, std::uint64_t mask,
                    const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::vector<int>> adj(n);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if ((mask >> k) & 1u) adj[pairs[k].first].push_back(pairs[k].second);
    }
    std::vector<int> color(n, 0);
    std::function<bool(int)> dfs = [&](int v) {
      color[v] = 1;
      for (int w : adj[v]) {
        if (color[w] == 1 || (color[w] == 0 && !dfs(w))) return false;
      }
      color[v] = 2;
      return true;
    };
    for (std::size_t v = 0; v < n; ++v) {
      if (color[v] == 0 && !dfs(static_cast<int>(v))) return false;
    }
    return true;
  };
  std::uint64_t total = 0;
  for (std::size_t c = 1; c <= b.max_classes; ++c) {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        if (i != j) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
    std::uint64_t subs = 0;
    for (std::uint64_t m = 0; m < (1ull << pairs.size()); ++m) {
      subs += acyclic(c, m, pairs) ? 1 : 0;
    }
    for (std::size_t t = 1; t <= b.max_types; ++t) {
      std::uint64_t cars = 1;
      for (std::size_t i = 0; i < t; ++i) cars *= 1ull << b.max_value_tokens;
      for (std::size_t o = 1; o <= b.max_ops; ++o) {
        std::uint64_t one_op = c * o * (1ull << b.max_param_tokens) * t;
        std::uint64_t ops = 1;
        for (std::size_t i = 0; i < o; ++i) ops *= one_op;
        total += subs * cars * ops;
      }
    }
  }
  return total;
}

TEST(Predicates, VacuousWithoutSubclassing) {
  auto sm = from("classes A, B; type T1 = {v1}; op A.foo params {p1} : T1;");
  EXPECT_TRUE(valid_type_safe_ops(sm));
  EXPECT_TRUE(valid_type_safe_ops_strict(sm));
  EXPECT_TRUE(single_inheritance(sm));
}

TEST(Predicates, WidenedParameters) {
  auto sm = widened();
  EXPECT_TRUE(valid_type_safe_ops(sm));
  EXPECT_FALSE(valid_type_safe_ops_strict(sm));
}

TEST(Predicates, MissingOverride) {
  auto sm = from("classes A, B; sub B < A; type T1 = {v1}; op A.foo params {p1} : T1;");
  EXPECT_FALSE(valid_type_safe_ops(sm));
  EXPECT_FALSE(valid_type_safe_ops_strict(sm));
}

TEST(Predicates, IdenticalSignaturesAreStrict) {
  auto sm = from("classes A, B; sub B < A; type T1 = {v1, v2}; type T2 = {v2, v1}; "
                 "op A.foo params {p1} : T1; op B.foo params {p1} : T2;");
  EXPECT_TRUE(valid_type_safe_ops_strict(sm));
  EXPECT_TRUE(valid_type_safe_ops(sm));
}

TEST(Predicates, ResultCarriersAreContravariant) {
  auto narrower = from("classes A, B; sub B < A; type T1 = {v1, v2}; type T2 = {v1}; "
                       "op A.foo params {} : T1; op B.foo params {} : T2;");
  auto wider = from("classes A, B; sub B < A; type T1 = {v1}; type T2 = {v1, v2}; "
                    "op A.foo params {} : T1; op B.foo params {} : T2;");
  EXPECT_TRUE(valid_type_safe_ops(narrower));
  EXPECT_FALSE(valid_type_safe_ops(wider));
}

TEST(Predicates, SingleInheritance) {
  EXPECT_TRUE(single_inheritance(from("classes A, B; sub B < A;")));
  EXPECT_FALSE(single_inheritance(from("classes A, B, C; sub C < A; sub C < B;")));
}

TEST(Predicates, ReflexiveReadingAddsSelfOverride) {
  // With a reflexive sub, every operation must override itself, which it
  // trivially does; a missing subclass override still fails.
  auto sm = from("classes A; type T1 = {v1}; op A.foo params {p1} : T1;");
  EXPECT_TRUE(valid_type_safe_ops(sm, SubReading::Reflexive));
  EXPECT_TRUE(sm.sub_closure(SubReading::Reflexive).count({"A", "A"}));
  EXPECT_FALSE(sm.sub_closure().count({"A", "A"}));
}

TEST(Closure, IsTransitive) {
  auto sm = from("classes A, B, C; sub C < B; sub B < A;");
  auto cl = sm.sub_closure();
  EXPECT_TRUE(cl.count({"C", "A"}));
  EXPECT_EQ(cl.size(), 3u);
}

TEST(ParseSm, Errors) {
  EXPECT_THROW(from("classes A; sub A < A;"), SyntaxError);
  EXPECT_THROW(from("classes A; type T1 = {}; op B.foo params {} : T1;"), Error);
  EXPECT_THROW(from("classes A; op A.foo params {} : T9;"), Error);
  EXPECT_THROW(from("classes A, B; sub A < B; sub B < A;"), Error);
  EXPECT_THROW(from("classes A; sub A < Z;"), Error);
}

TEST(ParseSm, RoundTrip) {
  auto sm = widened();
  EXPECT_EQ(parse_sm(to_smx(sm)), sm);
}

TEST(Enumeration, HandCountAtBoundsOne) {
  SystemModelBounds one{1, 1, 1, 1, 1};
  std::uint64_t n = enumerate_system_models(one, [](const MiniSystemModel&) {});
  EXPECT_EQ(n, 4u);
  EXPECT_EQ(system_model_space(one), 4u);
}

TEST(Enumeration, TwoClassesIncludeBothSubDirections) {
  SystemModelBounds b{2, 1, 1, 1, 1};
  std::set<std::vector<std::pair<std::string, std::string>>> subs;
  enumerate_system_models(b, [&](const MiniSystemModel& sm) {
    if (sm.classes.size() == 2) subs.insert(sm.sub);
  });
  using P = std::pair<std::string, std::string>;
  EXPECT_EQ(subs, (std::set<std::vector<P>>{{}, {P{"A", "B"}}, {P{"B", "A"}}}));
}

TEST(Enumeration, CountMatchesFormulaAndOracle) {
  for (std::size_t c = 1; c <= 2; ++c) {
    for (std::size_t o = 1; o <= 2; ++o) {
      for (std::size_t t = 1; t <= 2; ++t) {
        SystemModelBounds b{c, o, t, 2, 2};
        std::uint64_t n = enumerate_system_models(b, [](const MiniSystemModel&) {});
        EXPECT_EQ(n, system_model_space(b)) << b.str();
        EXPECT_EQ(n, oracle_count(b)) << b.str();
      }
    }
  }
}

TEST(Enumeration, ModelsAreValidAndDistinct) {
  std::set<std::string> seen;
  std::uint64_t n = enumerate_system_models(SystemModelBounds{}, [&](MiniSystemModel sm) {
    EXPECT_NO_THROW(validate(sm));
    sm.name = "X";
    seen.insert(to_smx(sm));
  });
  EXPECT_EQ(seen.size(), n);
}

TEST(Enumeration, RefusesBoundsAboveCap) {
  try {
    enumerate_system_models(SystemModelBounds{3, 2, 2, 2, 2},
                            [](const MiniSystemModel&) {});
    FAIL() << "expected a bounds error";
  } catch (const BoundsError& e) {
    EXPECT_NE(std::string(e.what()).find("labeled models"), std::string::npos);
  }
  EXPECT_THROW(enumerate_system_models(SystemModelBounds{0, 1, 1, 1, 1},
                                       [](const MiniSystemModel&) {}),
               BoundsError);
}

TEST(DomainRefinement, StrictImpliesWeak) {
  auto v = check_domain_refinement("TypeSafeOpsStrict", "TypeSafeOps",
                                   SystemModelBounds{});
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.counterexamples, 0u);
  EXPECT_EQ(v.models_checked, system_model_space(SystemModelBounds{}));
}

TEST(DomainRefinement, WeakDoesNotImplyStrict) {
  auto v = check_domain_refinement("TypeSafeOps", "TypeSafeOpsStrict",
                                   SystemModelBounds{});
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.first_counterexample.has_value());
  const auto& sm = *v.first_counterexample;
  EXPECT_TRUE(valid_type_safe_ops(sm));
  EXPECT_FALSE(valid_type_safe_ops_strict(sm));
}

TEST(DomainRefinement, ReflexiveAndUnknownIds) {
  EXPECT_TRUE(check_domain_refinement("SingleInheritance", "SingleInheritance",
                                      SystemModelBounds{1, 1, 1, 1, 1})
                  .pass);
  EXPECT_TRUE(check_domain_refinement("TypeSafeOpsStrict", "TypeSafeOps",
                                      SystemModelBounds{}, SubReading::Reflexive)
                  .pass);
  EXPECT_THROW(check_domain_refinement("Nope", "TypeSafeOps", SystemModelBounds{}),
               UnknownIdError);
}

}  // namespace
}  // namespace lvw
