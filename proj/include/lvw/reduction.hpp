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

// Reduction of well-formed statecharts to flat automata: multi-trigger
// expansion followed by hierarchy flattening.
//
// Flattening rules (a reconstruction; the source material does not spell out
// an algorithm):
//  - the states of the result are the leaves of the input;
//  - the initial state is the initial leaf reached by following initial
//    substates from the top-level initial state;
//  - a transition targeting a composite is redirected to that composite's
//    initial leaf;
//  - a transition leaving a composite is replicated once per leaf below it;
//  - when transitions sourced at different nesting depths share a (leaf,
//    event) pair, InnerFirst keeps only the deepest-sourced ones and
//    OuterFirst only the shallowest. Equal-depth transitions all survive.
//  - a model-level <<prio:outer>> forces OuterFirst and is consumed when the
//    model is hierarchical.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lvw/ast.hpp"
#include "lvw/error.hpp"
#include "lvw/variants.hpp"

namespace lvw {

struct FlatTransition {
  std::string source;
  std::string event;
  GuardExpr guard;
  std::optional<std::string> action;
  std::string target;

  friend bool operator==(const FlatTransition&,
                         const FlatTransition&) = default;
};

struct FlatState {
  std::string name;
  std::vector<Stereotype> stereotypes;
};

// Reduced abstract syntax: no composite states, one event per transition.
struct FlatAutomaton {
  std::string name;
  std::vector<Stereotype> stereotypes;
  std::vector<std::string> guard_vars;
  std::vector<std::string> declared_events;
  std::vector<std::string> declared_actions;
  std::vector<FlatState> states;
  std::string initial;
  std::vector<FlatTransition> transitions;

  // Labels used on transitions.
  std::set<std::string> events() const {
    std::set<std::string> out;
    for (const auto& t : transitions) out.insert(t.event);
    return out;
  }
  std::set<std::string> actions() const {
    std::set<std::string> out;
    for (const auto& t : transitions) {
      if (t.action) out.insert(*t.action);
    }
    return out;
  }

  // Interface alphabet: declared labels plus the ones used.
  std::vector<std::string> interface_events() const {
    std::set<std::string> out = events();
    out.insert(declared_events.begin(), declared_events.end());
    return {out.begin(), out.end()};
  }
  std::vector<std::string> interface_actions() const {
    std::set<std::string> out = actions();
    out.insert(declared_actions.begin(), declared_actions.end());
    return {out.begin(), out.end()};
  }

  std::size_t state_index(const std::string& s) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].name == s) return i;
    }
    throw Error("no state " + s + " in automaton " + name);
  }
};

inline AbstractStatechart to_statechart(const FlatAutomaton& f) {
  AbstractStatechart m;
  m.name = f.name;
  m.stereotypes = f.stereotypes;
  m.guard_vars = f.guard_vars;
  m.declared_events = f.declared_events;
  m.declared_actions = f.declared_actions;
  for (const auto& s : f.states) {
    StateNode n;
    n.name = s.name;
    n.is_initial = s.name == f.initial;
    n.stereotypes = s.stereotypes;
    m.states.push_back(std::move(n));
  }
  for (const auto& t : f.transitions) {
    m.transitions.push_back({t.source, {t.event}, t.guard, t.action, t.target});
  }
  return m;
}

inline bool operator==(const FlatAutomaton& a, const FlatAutomaton& b) {
  return structurally_equal(to_statechart(a), to_statechart(b));
}

inline bool has_hierarchy(const AbstractStatechart& m) {
  return std::any_of(m.states.begin(), m.states.end(),
                     [](const StateNode& s) { return !s.is_leaf(); });
}

inline bool has_multitrigger(const AbstractStatechart& m) {
  bool found = false;
  for_each_transition(m, [&](const TransitionNode& t, const StateNode*,
                             std::size_t) { found |= t.events.size() > 1; });
  return found;
}

// Extended constructs used by a model.
inline std::set<Abbreviation> abbreviations_used(const AbstractStatechart& m) {
  std::set<Abbreviation> out;
  if (has_hierarchy(m)) out.insert(Abbreviation::Hierarchy);
  if (has_multitrigger(m)) out.insert(Abbreviation::MultiTrigger);
  return out;
}

inline bool is_reduced(const AbstractStatechart& m) {
  return !has_hierarchy(m) && !has_multitrigger(m);
}

// Reads a reduced model as a flat automaton.
inline FlatAutomaton as_flat(const AbstractStatechart& m) {
  if (!is_reduced(m)) throw Error("model " + m.name + " is not reduced");
  FlatAutomaton f;
  f.name = m.name;
  f.stereotypes = m.stereotypes;
  f.guard_vars = m.guard_vars;
  f.declared_events = m.declared_events;
  f.declared_actions = m.declared_actions;
  for (const auto& s : m.states) {
    f.states.push_back({s.name, s.stereotypes});
    if (s.is_initial) f.initial = s.name;
  }
  for (const auto& t : m.transitions) {
    f.transitions.push_back(
        {t.source, t.events.front(), t.guard, t.action, t.target});
  }
  return f;
}

// Replaces every k-event transition by k single-event transitions, in event
// order, at the same position.
inline AbstractStatechart expand_multitrigger(AbstractStatechart m) {
  auto expand = [](std::vector<TransitionNode>& ts) {
    std::vector<TransitionNode> out;
    for (auto& t : ts) {
      for (const auto& e : t.events) {
        TransitionNode single = t;
        single.events = {e};
        out.push_back(std::move(single));
      }
    }
    ts = std::move(out);
  };
  auto rec = [&](auto&& self, std::vector<StateNode>& states) -> void {
    for (auto& s : states) {
      expand(s.transitions);
      self(self, s.children);
    }
  };
  expand(m.transitions);
  rec(rec, m.states);
  return m;
}

inline FlatAutomaton flatten(const AbstractStatechart& input,
                             Priority priority) {
  if (!wellformed(input)) {
    throw Error("flatten requires a well-formed model: " +
                wellformed(input).violations.front().message);
  }
  if (has_multitrigger(input)) {
    throw Error("flatten requires multi-triggers to be expanded first");
  }
  const AbstractStatechart m = canonical(input);
  const Stereotype prio_outer{"prio", "outer"};
  const bool hierarchical = has_hierarchy(m);
  const bool forced_outer =
      std::find(m.stereotypes.begin(), m.stereotypes.end(), prio_outer) !=
      m.stereotypes.end();
  if (forced_outer) priority = Priority::OuterFirst;

  struct Info {
    const StateNode* node;
    std::size_t depth;
    std::vector<std::string> leaves;
  };
  std::map<std::string, Info> info;
  std::vector<const StateNode*> leaf_order;
  auto index = [&](auto&& self, const StateNode& s,
                   std::size_t depth) -> std::vector<std::string> {
    Info in{&s, depth, {}};
    if (s.is_leaf()) {
      in.leaves.push_back(s.name);
      leaf_order.push_back(&s);
    }
    for (const auto& c : s.children) {
      auto sub = self(self, c, depth + 1);
      in.leaves.insert(in.leaves.end(), sub.begin(), sub.end());
    }
    auto leaves = in.leaves;
    info.emplace(s.name, std::move(in));
    return leaves;
  };
  for (const auto& s : m.states) index(index, s, 1);

  auto initial_of = [](const std::vector<StateNode>& scope) -> const StateNode& {
    return *std::find_if(scope.begin(), scope.end(),
                         [](const StateNode& s) { return s.is_initial; });
  };
  auto initial_leaf = [&](const std::string& name) {
    const StateNode* s = info.at(name).node;
    while (!s->is_leaf()) s = &initial_of(s->children);
    return s->name;
  };

  struct Candidate {
    FlatTransition t;
    std::size_t depth;
    bool replica;
  };
  std::vector<Candidate> cands;
  for_each_transition(m, [&](const TransitionNode& t, const StateNode*,
                             std::size_t) {
    const Info& src = info.at(t.source);
    const std::string target = initial_leaf(t.target);
    for (const auto& leaf : src.leaves) {
      cands.push_back({{leaf, t.events.front(), t.guard, t.action, target},
                       src.depth, !src.node->is_leaf()});
    }
  });

  std::map<std::pair<std::string, std::string>, std::size_t> winner;
  for (const auto& c : cands) {
    auto key = std::make_pair(c.t.source, c.t.event);
    auto [it, fresh] = winner.emplace(key, c.depth);
    if (!fresh) {
      it->second = priority == Priority::InnerFirst
                       ? std::max(it->second, c.depth)
                       : std::min(it->second, c.depth);
    }
  }

  FlatAutomaton out;
  out.name = m.name;
  for (const auto& s : m.stereotypes) {
    if (!(hierarchical && s == prio_outer)) out.stereotypes.push_back(s);
  }
  out.guard_vars = m.guard_vars;
  out.declared_events = m.declared_events;
  out.declared_actions = m.declared_actions;
  for (const auto* s : leaf_order) out.states.push_back({s->name, s->stereotypes});
  out.initial = initial_leaf(initial_of(m.states).name);

  std::vector<const Candidate*> kept;
  for (const auto& c : cands) {
    if (winner.at({c.t.source, c.t.event}) != c.depth) continue;
    bool dup = std::any_of(kept.begin(), kept.end(), [&](const Candidate* k) {
      return (k->replica || c.replica) && k->t == c.t;
    });
    if (dup) continue;
    kept.push_back(&c);
    out.transitions.push_back(c.t);
  }
  return out;
}

// The reduction t: multi-trigger expansion, then flattening.
inline FlatAutomaton reduce(const AbstractStatechart& m, Priority priority) {
  return flatten(expand_multitrigger(m), priority);
}

using ReducerFn = std::function<FlatAutomaton(const AbstractStatechart&)>;

inline ReducerFn default_reducer(Priority priority = Priority::InnerFirst) {
  return [priority](const AbstractStatechart& m) { return reduce(m, priority); };
}

// A reduction variant: the extended constructs it accepts and its
// transformation.
struct AbbreviationVariant {
  std::set<Abbreviation> constructs;
  ReducerFn transform = default_reducer();

  bool in_domain(const AbstractStatechart& m) const {
    auto used = abbreviations_used(m);
    return std::includes(constructs.begin(), constructs.end(), used.begin(),
                         used.end());
  }
};

struct AbbreviationVerdict {
  bool pass = true;
  std::size_t agreement_checked = 0;
  std::size_t expressibility_checked = 0;
  std::optional<std::string> witness;  // model name
  std::string detail;
};

// Agreement: models in both domains are transformed equally. Expressibility:
// each model in the extended domain is re-expressed by its own flat result,
// which must lie in the base domain and be a fixpoint of the base transform.
inline AbbreviationVerdict check_abbrev_agreement(
    const std::vector<AbstractStatechart>& corpus,
    const AbbreviationVariant& base, const AbbreviationVariant& ext) {
  AbbreviationVerdict v;
  auto fail = [&](const AbstractStatechart& m, std::string why) {
    v.pass = false;
    v.witness = m.name;
    v.detail = std::move(why);
  };
  for (const auto& m : corpus) {
    if (base.in_domain(m) && ext.in_domain(m)) {
      ++v.agreement_checked;
      if (!(ext.transform(m) == base.transform(m))) {
        fail(m, "base and extended reductions of " + m.name + " differ");
        return v;
      }
    }
  }
  for (const auto& m : corpus) {
    if (!ext.in_domain(m)) continue;
    ++v.expressibility_checked;
    FlatAutomaton flat = ext.transform(m);
    AbstractStatechart witness = to_statechart(flat);
    if (!base.in_domain(witness)) {
      fail(m, "reduction of " + m.name + " leaves the base domain");
      return v;
    }
    if (!(base.transform(witness) == flat)) {
      fail(m, "reduction of " + m.name + " is not a base fixpoint");
      return v;
    }
  }
  return v;
}

}  // namespace lvw
