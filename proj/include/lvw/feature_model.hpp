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

#pragma once

// Feature diagrams documenting the variation points of a language, and the
// configurations (variant selections) they admit.
//
// File format (".fm"):
//
//   featuremodel NAME {
//     root NAME {
//       [optional] group NAME { ... }
//       [optional] xor NAME { ... }
//       [optional] feature NAME;
//     }
//     requires A -> B;
//     refines A -> B "reports/evidence.txt";
//   }

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvw/ast.hpp"
#include "lvw/error.hpp"
#include "lvw/lexer.hpp"
#include "lvw/variants.hpp"

namespace lvw {

struct Feature {
  enum class Kind { AndGroup, XorGroup, Leaf };

  std::string name;
  Kind kind = Kind::Leaf;
  bool optional = false;
  std::vector<Feature> children;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct RefinesEdge {
  std::string from;  // the refining (stronger) variant
  std::string to;
  std::string evidence;

  friend bool operator==(const RefinesEdge&, const RefinesEdge&) = default;
};

struct FeatureModel {
  std::string name;
  Feature root;
  std::vector<std::pair<std::string, std::string>> requires_;
  std::vector<RefinesEdge> refines;

  const Feature* find(std::string_view feature) const {
    const Feature* hit = nullptr;
    visit([&](const Feature& f, const Feature*) {
      if (!hit && f.name == feature) hit = &f;
    });
    return hit;
  }

  const Feature* parent_of(std::string_view feature) const {
    const Feature* hit = nullptr;
    visit([&](const Feature& f, const Feature* parent) {
      if (!hit && f.name == feature) hit = parent;
    });
    return hit;
  }

  // Preorder over all features with their parent (null for the root).
  template <class F>
  void visit(F&& fn) const {
    auto rec = [&](auto&& self, const Feature& f, const Feature* parent) -> void {
      fn(f, parent);
      for (const auto& c : f.children) self(self, c, &f);
    };
    rec(rec, root, nullptr);
  }

  friend bool operator==(const FeatureModel&, const FeatureModel&) = default;
};

// A configuration of all variation points. Fields left at their Unset/empty
// value denote a variation point left open; for syntactic variation points
// that means the base language.
struct VariantSelection {
  std::set<std::string> selected;

  std::set<Notation> presentation;  // Arrow is always available
  std::set<Abbreviation> abbreviations;
  std::vector<Stereotype> stereotype_allow;
  std::optional<std::string> guard_language;  // unset = GL0
  std::set<std::string> constraints;
  std::optional<Priority> priority;
  Unmatched unmatched = Unmatched::Unset;
  Realization realization = Realization::Unset;

  bool enables(Notation n) const {
    return n == Notation::Arrow || presentation.count(n) > 0;
  }
  bool enables(Abbreviation a) const { return abbreviations.count(a) > 0; }
  std::string effective_guard_language() const {
    return guard_language.value_or("GL0");
  }
  Priority effective_priority() const {
    return priority.value_or(Priority::InnerFirst);
  }

  // Every syntactic extension enabled, any stereotype allowed, GL1 guards.
  static VariantSelection permissive() {
    VariantSelection v;
    v.presentation = {Notation::Keyword};
    v.abbreviations = {Abbreviation::Hierarchy, Abbreviation::MultiTrigger};
    v.stereotype_allow = {{"*", std::nullopt}};
    v.guard_language = "GL1";
    return v;
  }
};

namespace detail {

// How a selected feature resolves onto the variation-point views. Features
// without an entry are recorded in `selected` only.
inline void apply_feature(VariantSelection& v, const std::string& f) {
  using Fn = std::function<void(VariantSelection&)>;
  static const std::map<std::string, Fn, std::less<>> kViews = {
      {"Keyword", [](auto& s) { s.presentation.insert(Notation::Keyword); }},
      {"Hierarchy",
       [](auto& s) { s.abbreviations.insert(Abbreviation::Hierarchy); }},
      {"MultiTrigger",
       [](auto& s) { s.abbreviations.insert(Abbreviation::MultiTrigger); }},
      {"PrioOuter",
       [](auto& s) { s.stereotype_allow.push_back({"prio", "outer"}); }},
      {"GL0", [](auto& s) { s.guard_language = "GL0"; }},
      {"GL1", [](auto& s) { s.guard_language = "GL1"; }},
      {"DetOnly", [](auto& s) { s.constraints.insert("DetOnly"); }},
      {"MaxDepth2", [](auto& s) { s.constraints.insert("MaxDepth2"); }},
      {"NoHierarchy", [](auto& s) { s.constraints.insert("NoHierarchy"); }},
      {"InnerFirst", [](auto& s) { s.priority = Priority::InnerFirst; }},
      {"OuterFirst", [](auto& s) { s.priority = Priority::OuterFirst; }},
      {"Chaos", [](auto& s) { s.unmatched = Unmatched::Chaos; }},
      {"Stutter", [](auto& s) { s.unmatched = Unmatched::Stutter; }},
      {"Open", [](auto& s) { s.realization = Realization::Open; }},
      {"Enum", [](auto& s) { s.realization = Realization::Enum; }},
      {"Pattern", [](auto& s) { s.realization = Realization::Pattern; }},
  };
  auto it = kViews.find(f);
  if (it != kViews.end()) it->second(v);
}

inline Feature parse_feature_body(text::Cursor& cur, Feature group) {
  cur.expect("{");
  while (!cur.accept("}")) {
    Feature f;
    f.optional = cur.accept("optional");
    const auto& kw = cur.peek();
    if (cur.accept("feature")) {
      f.kind = Feature::Kind::Leaf;
      f.name = cur.expect_ident("feature name").text;
      cur.expect(";");
    } else if (cur.accept("group") || cur.accept("xor")) {
      f.kind = kw.text == "xor" ? Feature::Kind::XorGroup
                                : Feature::Kind::AndGroup;
      f.name = cur.expect_ident("group name").text;
      f = parse_feature_body(cur, std::move(f));
      if (f.kind == Feature::Kind::XorGroup && f.children.size() < 2) {
        throw SyntaxError(kw.line, kw.column,
                          "xor group " + f.name + " needs at least 2 children");
      }
    } else {
      text::Cursor::fail(kw, "expected 'feature', 'group' or 'xor'");
    }
    group.children.push_back(std::move(f));
  }
  return group;
}

inline void check_refines_edge(const FeatureModel& fm, const std::string& from,
                               const std::string& to) {
  for (const auto& n : {from, to}) {
    if (!fm.find(n)) throw Error("refines references unknown feature " + n);
  }
  const Feature* p1 = fm.parent_of(from);
  const Feature* p2 = fm.parent_of(to);
  if (from == to || p1 != p2 || !p1 || p1->kind != Feature::Kind::XorGroup) {
    throw Error("refines edge " + from + " -> " + to +
                " must connect two siblings of one xor group");
  }
}

}  // namespace detail

inline FeatureModel parse_fm(std::string_view src) {
  text::Cursor cur(text::tokenize(src));
  FeatureModel fm;
  cur.expect("featuremodel");
  fm.name = cur.expect_ident("model name").text;
  cur.expect("{");
  cur.expect("root");
  fm.root.kind = Feature::Kind::AndGroup;
  fm.root.name = cur.expect_ident("root name").text;
  fm.root = detail::parse_feature_body(cur, std::move(fm.root));

  std::set<std::string> names;
  fm.visit([&](const Feature& f, const Feature*) {
    if (!names.insert(f.name).second) {
      throw Error("duplicate feature name " + f.name);
    }
  });

  while (!cur.accept("}")) {
    const auto& at = cur.peek();
    if (cur.accept("requires")) {
      std::string a = cur.expect_ident().text;
      cur.expect("->");
      std::string b = cur.expect_ident().text;
      cur.expect(";");
      for (const auto& n : {a, b}) {
        if (!names.count(n)) {
          throw SyntaxError(at.line, at.column,
                            "requires references unknown feature " + n);
        }
      }
      fm.requires_.emplace_back(a, b);
    } else if (cur.accept("refines")) {
      RefinesEdge e;
      e.from = cur.expect_ident().text;
      cur.expect("->");
      e.to = cur.expect_ident().text;
      e.evidence = cur.expect_string().text;
      cur.expect(";");
      try {
        detail::check_refines_edge(fm, e.from, e.to);
      } catch (const Error& err) {
        throw SyntaxError(at.line, at.column, err.what());
      }
      if (e.evidence.empty()) {
        throw SyntaxError(at.line, at.column, "refines edge needs evidence");
      }
      fm.refines.push_back(std::move(e));
    } else {
      text::Cursor::fail(at, "expected 'requires', 'refines' or '}'");
    }
  }
  if (!cur.at_end()) text::Cursor::fail(cur.peek(), "expected end of input");
  return fm;
}

inline std::string export_fm(const FeatureModel& fm) {
  std::ostringstream out;
  auto rec = [&](auto&& self, const Feature& f, int indent) -> void {
    std::string pad(indent * 2, ' ');
    for (const auto& c : f.children) {
      out << pad << (c.optional ? "optional " : "");
      if (c.kind == Feature::Kind::Leaf) {
        out << "feature " << c.name << ";\n";
      } else {
        out << (c.kind == Feature::Kind::XorGroup ? "xor " : "group ")
            << c.name << " {\n";
        self(self, c, indent + 1);
        out << pad << "}\n";
      }
    }
  };
  out << "featuremodel " << fm.name << " {\n";
  out << "  root " << fm.root.name << " {\n";
  rec(rec, fm.root, 2);
  out << "  }\n";
  for (const auto& [a, b] : fm.requires_) {
    out << "  requires " << a << " -> " << b << ";\n";
  }
  for (const auto& e : fm.refines) {
    out << "  refines " << e.from << " -> " << e.to << " \"" << e.evidence
        << "\";\n";
  }
  out << "}\n";
  return out.str();
}

struct ConfigResult {
  std::optional<VariantSelection> selection;
  std::vector<std::string> violations;

  bool ok() const { return selection.has_value(); }
};

// Checks that every selected feature exists, that no xor group has two
// selected children, and that every requires edge is honored. An empty
// selection is always valid: every variation point stays open.
inline ConfigResult validate_config(const FeatureModel& fm,
                                    const std::set<std::string>& sel) {
  ConfigResult result;
  for (const auto& f : sel) {
    if (!fm.find(f)) result.violations.push_back("unknown feature " + f);
  }
  fm.visit([&](const Feature& f, const Feature*) {
    if (f.kind != Feature::Kind::XorGroup) return;
    std::vector<std::string> chosen;
    for (const auto& c : f.children) {
      if (sel.count(c.name)) chosen.push_back(c.name);
    }
    if (chosen.size() > 1) {
      std::string list;
      for (const auto& c : chosen) list += (list.empty() ? "" : ", ") + c;
      result.violations.push_back("exclusive alternatives in " + f.name +
                                  ": " + list);
    }
  });
  for (const auto& [a, b] : fm.requires_) {
    if (sel.count(a) && !sel.count(b)) {
      result.violations.push_back(a + " requires " + b);
    }
  }
  if (result.violations.empty()) {
    VariantSelection v;
    v.selected = sel;
    for (const auto& f : sel) detail::apply_feature(v, f);
    result.selection = std::move(v);
  }
  return result;
}

inline FeatureModel add_refinement_edge(FeatureModel fm, const std::string& from,
                                        const std::string& to,
                                        const std::string& evidence) {
  detail::check_refines_edge(fm, from, to);
  if (evidence.empty()) {
    throw Error("refines edge " + from + " -> " + to + " needs evidence");
  }
  fm.refines.push_back({from, to, evidence});
  return fm;
}

// Every group below the root becomes a labeled cluster; optional features get
// an open-circle arrowhead, requires edges are bold, refines edges dashed.
inline std::string export_dot(const FeatureModel& fm) {
  std::ostringstream out;
  auto q = [](const std::string& s) { return "\"" + s + "\""; };
  out << "digraph " << q(fm.name) << " {\n";
  out << "  node [shape=box];\n";
  out << "  " << q(fm.root.name) << ";\n";
  auto nodes = [&](auto&& self, const Feature& f, int indent) -> void {
    std::string pad(indent * 2, ' ');
    for (const auto& c : f.children) {
      if (c.kind == Feature::Kind::Leaf) {
        out << pad << q(c.name) << ";\n";
        continue;
      }
      bool x = c.kind == Feature::Kind::XorGroup;
      out << pad << "subgraph " << q("cluster_" + c.name) << " {\n";
      out << pad << "  label=" << q(x ? c.name + " (xor)" : c.name) << ";\n";
      out << pad << "  " << q(c.name) << (x ? " [shape=diamond]" : "")
          << ";\n";
      self(self, c, indent + 1);
      out << pad << "}\n";
    }
  };
  nodes(nodes, fm.root, 1);
  fm.visit([&](const Feature& f, const Feature* parent) {
    if (!parent) return;
    out << "  " << q(parent->name) << " -> " << q(f.name)
        << (f.optional ? " [arrowhead=odot]" : "") << ";\n";
  });
  for (const auto& [a, b] : fm.requires_) {
    out << "  " << q(a) << " -> " << q(b)
        << " [style=bold, color=blue, label=\"requires\"];\n";
  }
  for (const auto& e : fm.refines) {
    out << "  " << q(e.from) << " -> " << q(e.to)
        << " [style=dashed, label=\"refines\", tooltip=" << q(e.evidence)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

// Variation points of the statechart language. Presentation variability
// (notations and abbreviations) shares one group.
inline constexpr std::string_view kStatechartLanguageFm =
    R"(featuremodel StatechartLang {
  root StatechartLang {
    optional group Presentation {
      optional feature Keyword;
      optional feature Hierarchy;
      optional feature MultiTrigger;
    }
    optional group Stereotypes {
      optional feature PrioOuter;
    }
    optional xor GuardLanguage {
      feature GL0;
      feature GL1;
    }
    optional group Constraints {
      optional feature DetOnly;
      optional feature MaxDepth2;
      optional feature NoHierarchy;
    }
    optional xor Priority {
      feature InnerFirst;
      feature OuterFirst;
    }
    optional xor UnmatchedEvent {
      feature Chaos;
      feature Stutter;
    }
    optional xor StateRealization {
      feature Open;
      feature Enum;
      feature Pattern;
    }
  }
  requires PrioOuter -> OuterFirst;
}
)";

// Semantic-domain variation points of the object system model.
inline constexpr std::string_view kSystemModelFm =
    R"(featuremodel SystemModel {
  root SystemModel {
    optional xor TypeSafeOverriding {
      feature TypeSafeOps;
      feature TypeSafeOpsStrict;
    }
    optional group Inheritance {
      optional feature SingleInheritance;
    }
  }
}
)";

}  // namespace lvw
