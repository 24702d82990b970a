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

// Abstract syntax of the statechart language: the tree every concrete
// notation parses to, the well-formedness predicate, stereotype allow-lists,
// named syntactic constraints, and guard evaluation.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvw/error.hpp"

namespace lvw {

inline constexpr std::string_view kReservedWords[] = {
    "statechart", "vars", "events", "actions", "state", "initial",
    "from",       "on",   "do",     "goto",    "true"};

inline bool is_reserved(std::string_view s) {
  return std::find(std::begin(kReservedWords), std::end(kReservedWords), s) !=
         std::end(kReservedWords);
}

// [A-Za-z_][A-Za-z0-9_]* and not a reserved word.
inline bool is_valid_identifier(std::string_view s) {
  if (s.empty() || is_reserved(s)) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [&](char c) { return alpha(c) || digit(c); });
}

// <<name>> or <<name:value>>. As an allow-list pattern, a missing value
// matches any value and the name "*" matches every stereotype.
struct Stereotype {
  std::string name;
  std::optional<std::string> value;

  std::string str() const { return value ? name + ":" + *value : name; }

  friend auto operator<=>(const Stereotype&, const Stereotype&) = default;
};

inline Stereotype parse_stereotype(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos) return {std::string(s), std::nullopt};
  return {std::string(s.substr(0, colon)), std::string(s.substr(colon + 1))};
}

inline bool stereotype_matches(const Stereotype& pattern, const Stereotype& s) {
  if (pattern.name == "*") return true;
  if (pattern.name != s.name) return false;
  return !pattern.value || pattern.value == s.value;
}

// Propositional guard over declared boolean variables.
class GuardExpr {
 public:
  enum class Kind { True, Var, Not, And };

  GuardExpr() = default;

  static GuardExpr True() { return GuardExpr(); }
  static GuardExpr Var(std::string name) {
    GuardExpr g;
    g.kind_ = Kind::Var;
    g.name_ = std::move(name);
    return g;
  }
  static GuardExpr Not(GuardExpr operand) {
    GuardExpr g;
    g.kind_ = Kind::Not;
    g.ops_.push_back(std::move(operand));
    return g;
  }
  static GuardExpr And(GuardExpr lhs, GuardExpr rhs) {
    GuardExpr g;
    g.kind_ = Kind::And;
    g.ops_.push_back(std::move(lhs));
    g.ops_.push_back(std::move(rhs));
    return g;
  }

  Kind kind() const { return kind_; }
  bool is_true() const { return kind_ == Kind::True; }
  const std::string& name() const { return name_; }
  const GuardExpr& operand(std::size_t i = 0) const { return ops_.at(i); }

  // Originating guard language: "true" belongs to every language and is
  // tagged with the trivial one.
  std::string_view language() const { return is_true() ? "GL0" : "GL1"; }

  void collect_vars(std::set<std::string>& out) const {
    if (kind_ == Kind::Var) out.insert(name_);
    for (const auto& op : ops_) op.collect_vars(out);
  }
  std::set<std::string> vars() const {
    std::set<std::string> out;
    collect_vars(out);
    return out;
  }

  std::string str() const {
    switch (kind_) {
      case Kind::True:
        return "true";
      case Kind::Var:
        return name_;
      case Kind::Not:
        return "!" + ops_[0].str();
      case Kind::And:
        return ops_[0].str() + " & " + ops_[1].str();
    }
    return {};
  }

  friend bool operator==(const GuardExpr&, const GuardExpr&) = default;

 private:
  Kind kind_ = Kind::True;
  std::string name_;
  std::vector<GuardExpr> ops_;
};

using Assignment = std::map<std::string, bool, std::less<>>;

inline bool guard_eval(const GuardExpr& g, const Assignment& assignment) {
  switch (g.kind()) {
    case GuardExpr::Kind::True:
      return true;
    case GuardExpr::Kind::Var: {
      auto it = assignment.find(g.name());
      if (it == assignment.end()) {
        throw Error("guard variable '" + g.name() + "' has no value");
      }
      return it->second;
    }
    case GuardExpr::Kind::Not:
      return !guard_eval(g.operand(), assignment);
    case GuardExpr::Kind::And:
      return guard_eval(g.operand(0), assignment) &&
             guard_eval(g.operand(1), assignment);
  }
  return false;
}

// True iff some assignment to the variables of both guards satisfies both.
inline bool guards_overlap(const GuardExpr& a, const GuardExpr& b) {
  std::set<std::string> vs = a.vars();
  b.collect_vars(vs);
  std::vector<std::string> names(vs.begin(), vs.end());
  for (std::size_t bits = 0; bits < (std::size_t{1} << names.size()); ++bits) {
    Assignment asg;
    for (std::size_t k = 0; k < names.size(); ++k) {
      asg[names[k]] = (bits >> k) & 1u;
    }
    if (guard_eval(a, asg) && guard_eval(b, asg)) return true;
  }
  return false;
}

// Registered guard sublanguages (the language parameter of transitions).
struct GuardLanguageDef {
  std::string_view id;
  std::string_view description;
  bool (*admits)(const GuardExpr&);
};

namespace detail {

inline bool is_literal(const GuardExpr& g) {
  return g.kind() == GuardExpr::Kind::Var ||
         (g.kind() == GuardExpr::Kind::Not &&
          g.operand().kind() == GuardExpr::Kind::Var);
}

// Left-nested conjunction of literals, the shape the parser produces.
inline bool is_literal_conjunction(const GuardExpr& g) {
  if (is_literal(g)) return true;
  return g.kind() == GuardExpr::Kind::And &&
         is_literal_conjunction(g.operand(0)) && is_literal(g.operand(1));
}

}  // namespace detail

inline const std::vector<GuardLanguageDef>& guard_languages() {
  static const std::vector<GuardLanguageDef> kLanguages = {
      {"GL0", "only the constant true",
       [](const GuardExpr& g) { return g.is_true(); }},
      {"GL1", "conjunctions of possibly negated variables",
       [](const GuardExpr& g) {
         return g.is_true() || detail::is_literal_conjunction(g);
       }},
  };
  return kLanguages;
}

inline const GuardLanguageDef& guard_language(std::string_view id) {
  for (const auto& def : guard_languages()) {
    if (def.id == id) return def;
  }
  throw UnknownIdError("unknown guard language '" + std::string(id) + "'");
}

struct TransitionNode {
  std::string source;
  std::vector<std::string> events;
  GuardExpr guard;
  std::optional<std::string> action;
  std::string target;

  friend bool operator==(const TransitionNode&,
                         const TransitionNode&) = default;
};

struct StateNode {
  std::string name;
  bool is_initial = false;
  std::vector<Stereotype> stereotypes;
  std::vector<StateNode> children;
  // Transitions declared inside this state's body.
  std::vector<TransitionNode> transitions;

  bool is_leaf() const { return children.empty(); }
};

// A statechart in abstract syntax. Declared events and actions extend the
// interface alphabet beyond the labels used on transitions.
struct AbstractStatechart {
  std::string name;
  std::vector<Stereotype> stereotypes;
  std::vector<std::string> guard_vars;
  std::vector<std::string> declared_events;
  std::vector<std::string> declared_actions;
  std::vector<StateNode> states;
  std::vector<TransitionNode> transitions;
};

namespace detail {

inline void canonicalize(std::vector<Stereotype>& ss) {
  std::sort(ss.begin(), ss.end());
}

inline void canonicalize(std::vector<StateNode>& states) {
  for (auto& s : states) {
    canonicalize(s.stereotypes);
    canonicalize(s.children);
  }
  std::sort(states.begin(), states.end(),
            [](const StateNode& a, const StateNode& b) {
              return a.name < b.name;
            });
}

inline bool states_equal(const std::vector<StateNode>& a,
                         const std::vector<StateNode>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.name != y.name || x.is_initial != y.is_initial ||
        x.stereotypes != y.stereotypes || x.transitions != y.transitions ||
        !states_equal(x.children, y.children)) {
      return false;
    }
  }
  return true;
}

inline std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace detail

// Sorts states (recursively) and stereotypes by name. Transition order is
// significant and left alone.
inline AbstractStatechart canonical(AbstractStatechart m) {
  detail::canonicalize(m.stereotypes);
  detail::canonicalize(m.states);
  return m;
}

// Equality of abstract trees up to state declaration order and stereotype
// order; alphabet declarations compare as sets.
inline bool structurally_equal(const AbstractStatechart& a,
                               const AbstractStatechart& b) {
  AbstractStatechart ca = canonical(a);
  AbstractStatechart cb = canonical(b);
  return ca.name == cb.name && ca.stereotypes == cb.stereotypes &&
         ca.guard_vars == cb.guard_vars &&
         detail::sorted(ca.declared_events) ==
             detail::sorted(cb.declared_events) &&
         detail::sorted(ca.declared_actions) ==
             detail::sorted(cb.declared_actions) &&
         ca.transitions == cb.transitions &&
         detail::states_equal(ca.states, cb.states);
}

inline bool operator==(const AbstractStatechart& a,
                       const AbstractStatechart& b) {
  return structurally_equal(a, b);
}

// Visits every state in preorder with its depth (top level = 1) and parent.
template <class F>
void for_each_state(const AbstractStatechart& m, F&& fn) {
  auto rec = [&](auto&& self, const std::vector<StateNode>& states,
                 const StateNode* parent, std::size_t depth) -> void {
    for (const auto& s : states) {
      fn(s, parent, depth);
      self(self, s.children, &s, depth + 1);
    }
  };
  rec(rec, m.states, nullptr, 1);
}

// Visits every transition in textual order: a scope's nested states first,
// then the scope's own transitions. `owner` is null for the top scope.
template <class F>
void for_each_transition(const AbstractStatechart& m, F&& fn) {
  std::size_t index = 0;
  auto rec = [&](auto&& self, const std::vector<StateNode>& states,
                 const std::vector<TransitionNode>& transitions,
                 const StateNode* owner) -> void {
    for (const auto& s : states) self(self, s.children, s.transitions, &s);
    for (const auto& t : transitions) fn(t, owner, index++);
  };
  rec(rec, m.states, m.transitions, nullptr);
}

inline std::size_t transition_count(const AbstractStatechart& m) {
  std::size_t n = 0;
  for_each_transition(m, [&](const auto&, const auto*, std::size_t) { ++n; });
  return n;
}

// Which syntax element a well-formedness violation points at.
struct WfAnchor {
  enum class Kind { Model, State, Transition };
  Kind kind = Kind::Model;
  std::string state;               // Kind::State
  std::size_t transition = 0;      // Kind::Transition, textual ordinal
};

struct WfViolation {
  std::string message;
  WfAnchor anchor;
};

struct WellFormedness {
  std::vector<WfViolation> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
};

// Reports every violation of:
//  - identifiers are valid and not reserved words,
//  - state names are unique across the whole model,
//  - every sibling scope (top level included) has exactly one initial state,
//  - transition sources and targets name declared states,
//  - guard variables are declared (once) and guards fit their language,
//  - transitions carry at least one event.
inline WellFormedness wellformed(const AbstractStatechart& m) {
  WellFormedness wf;
  auto model_error = [&](std::string msg) {
    wf.violations.push_back({std::move(msg), {}});
  };
  auto state_error = [&](const std::string& state, std::string msg) {
    wf.violations.push_back(
        {std::move(msg), {WfAnchor::Kind::State, state, 0}});
  };
  auto trans_error = [&](std::size_t idx, std::string msg) {
    wf.violations.push_back(
        {std::move(msg), {WfAnchor::Kind::Transition, {}, idx}});
  };

  if (!is_valid_identifier(m.name)) {
    model_error("invalid model name '" + m.name + "'");
  }
  auto check_decls = [&](const std::vector<std::string>& names,
                         std::string_view what) {
    std::set<std::string> seen;
    for (const auto& n : names) {
      if (!is_valid_identifier(n)) {
        model_error("invalid " + std::string(what) + " name '" + n + "'");
      }
      if (!seen.insert(n).second) {
        model_error("duplicate " + std::string(what) + " '" + n + "'");
      }
    }
  };
  check_decls(m.guard_vars, "guard variable");
  check_decls(m.declared_events, "event");
  check_decls(m.declared_actions, "action");

  std::set<std::string> declared;
  for_each_state(m, [&](const StateNode& s, const StateNode*, std::size_t) {
    if (!is_valid_identifier(s.name)) {
      state_error(s.name, "invalid state name '" + s.name + "'");
    }
    if (!declared.insert(s.name).second) {
      state_error(s.name, "duplicate state name " + s.name);
    }
  });

  auto check_scope = [&](const std::vector<StateNode>& siblings,
                         const std::string& scope_name) {
    std::size_t initials = 0;
    for (const auto& s : siblings) initials += s.is_initial ? 1 : 0;
    if (initials == 0) {
      if (scope_name.empty()) {
        model_error("model has no initial state");
      } else {
        state_error(scope_name, "composite " + scope_name +
                                    " has no initial substate");
      }
    } else if (initials > 1) {
      std::string where = scope_name.empty() ? "top level" : scope_name;
      for (const auto& s : siblings) {
        if (s.is_initial) {
          state_error(s.name, "multiple initial states in " + where);
          break;
        }
      }
    }
  };
  check_scope(m.states, "");
  for_each_state(m, [&](const StateNode& s, const StateNode*, std::size_t) {
    if (!s.is_leaf()) check_scope(s.children, s.name);
  });

  const std::set<std::string> vars(m.guard_vars.begin(), m.guard_vars.end());
  for_each_transition(m, [&](const TransitionNode& t, const StateNode*,
                             std::size_t idx) {
    if (!declared.count(t.source)) trans_error(idx, "unknown source " + t.source);
    if (!declared.count(t.target)) trans_error(idx, "unknown target " + t.target);
    if (t.events.empty()) trans_error(idx, "transition without event");
    for (const auto& e : t.events) {
      if (!is_valid_identifier(e)) trans_error(idx, "invalid event '" + e + "'");
    }
    if (t.action && !is_valid_identifier(*t.action)) {
      trans_error(idx, "invalid action '" + *t.action + "'");
    }
    for (const auto& v : t.guard.vars()) {
      if (!vars.count(v)) trans_error(idx, "undeclared guard variable " + v);
    }
    if (!guard_language(t.guard.language()).admits(t.guard)) {
      trans_error(idx, "guard '" + t.guard.str() + "' is not a " +
                           std::string(t.guard.language()) + " expression");
    }
  });
  return wf;
}

// Every stereotype on the model or on any state matches the allow-list.
inline bool allowed_stereotypes(const AbstractStatechart& m,
                                const std::vector<Stereotype>& allow) {
  auto allowed = [&](const Stereotype& s) {
    return std::any_of(allow.begin(), allow.end(), [&](const Stereotype& p) {
      return stereotype_matches(p, s);
    });
  };
  bool ok = std::all_of(m.stereotypes.begin(), m.stereotypes.end(), allowed);
  for_each_state(m, [&](const StateNode& s, const StateNode*, std::size_t) {
    ok = ok && std::all_of(s.stereotypes.begin(), s.stereotypes.end(), allowed);
  });
  return ok;
}

namespace detail {

inline bool constraint_det_only(const AbstractStatechart& m) {
  // A transition applies to every leaf at or below its source.
  std::vector<std::string> leaves;
  std::map<std::string, const StateNode*> parent_of;
  for_each_state(m, [&](const StateNode& s, const StateNode* parent,
                        std::size_t) {
    parent_of[s.name] = parent;
    if (s.is_leaf()) leaves.push_back(s.name);
  });
  struct Entry {
    std::size_t transition;
    std::string event;
    const GuardExpr* guard;
  };
  std::map<std::string, std::vector<Entry>> by_source;
  for_each_transition(m, [&](const TransitionNode& t, const StateNode*,
                             std::size_t idx) {
    for (const auto& e : t.events) by_source[t.source].push_back({idx, e, &t.guard});
  });
  for (const auto& leaf : leaves) {
    std::vector<Entry> applicable;
    for (std::string name = leaf;;) {
      auto it = by_source.find(name);
      if (it != by_source.end()) {
        applicable.insert(applicable.end(), it->second.begin(),
                          it->second.end());
      }
      const StateNode* parent = parent_of[name];
      if (!parent) break;
      name = parent->name;
    }
    for (std::size_t i = 0; i < applicable.size(); ++i) {
      for (std::size_t j = i + 1; j < applicable.size(); ++j) {
        const auto& a = applicable[i];
        const auto& b = applicable[j];
        if (a.event == b.event && guards_overlap(*a.guard, *b.guard)) {
          return false;
        }
      }
    }
  }
  return true;
}

inline bool constraint_max_depth2(const AbstractStatechart& m) {
  std::size_t max_depth = 0;
  for_each_state(m, [&](const StateNode&, const StateNode*, std::size_t d) {
    max_depth = std::max(max_depth, d);
  });
  return max_depth <= 2;
}

inline bool constraint_no_hierarchy(const AbstractStatechart& m) {
  return std::all_of(m.states.begin(), m.states.end(),
                     [](const StateNode& s) { return s.is_leaf(); });
}

}  // namespace detail

struct ConstraintDef {
  std::string_view id;
  std::string_view description;
  bool (*holds)(const AbstractStatechart&);
};

inline const std::vector<ConstraintDef>& constraints() {
  static const std::vector<ConstraintDef> kConstraints = {
      {"DetOnly",
       "no leaf has two applicable transitions on one event with jointly "
       "satisfiable guards",
       detail::constraint_det_only},
      {"MaxDepth2", "state nesting depth is at most 2",
       detail::constraint_max_depth2},
      {"NoHierarchy", "all states are leaves", detail::constraint_no_hierarchy},
  };
  return kConstraints;
}

inline const ConstraintDef& constraint(std::string_view id) {
  for (const auto& c : constraints()) {
    if (c.id == id) return c;
  }
  throw UnknownIdError("unknown constraint '" + std::string(id) + "'");
}

inline bool apply_constraint(const AbstractStatechart& m, std::string_view id) {
  return constraint(id).holds(m);
}

}  // namespace lvw
