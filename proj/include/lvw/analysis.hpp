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

// Checkers relating semantic variants: language refinement, property
// preservation, invariant properties, and expressiveness of constrained
// sublanguages. Every check is bounded; a refinement whose clauses imply each
// other pointwise is additionally labeled "pointwise", which holds for all
// machines, not just the enumerated ones.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lvw/ast.hpp"
#include "lvw/error.hpp"
#include "lvw/reduction.hpp"
#include "lvw/semantics.hpp"
#include "lvw/syntax.hpp"
#include "lvw/variants.hpp"

namespace lvw {

namespace detail {

inline std::vector<char> reachable_states(const Machine& s) {
  std::vector<char> seen(s.num_states(), 0);
  std::vector<std::size_t> todo{s.init()};
  seen[s.init()] = 1;
  while (!todo.empty()) {
    std::size_t q = todo.back();
    todo.pop_back();
    for (std::size_t i = 0; i < s.alphabet().inputs.size(); ++i) {
      s.for_each_move(q, i, [&](std::size_t, std::size_t to) {
        if (!seen[to]) {
          seen[to] = 1;
          todo.push_back(to);
        }
      });
    }
  }
  return seen;
}

inline bool outputs_in_model(const Machine& s, const FlatAutomaton& m) {
  const auto actions = m.actions();
  const auto& outs = s.alphabet().outputs;
  const auto reach = reachable_states(s);
  for (std::size_t q = 0; q < s.num_states(); ++q) {
    if (!reach[q]) continue;
    for (std::size_t i = 0; i < s.alphabet().inputs.size(); ++i) {
      bool ok = true;
      s.for_each_move(q, i, [&](std::size_t o, std::size_t) {
        ok = ok && (!outs[o] || actions.count(*outs[o]));
      });
      if (!ok) return false;
    }
  }
  return true;
}

inline bool stutter_on_unmatched(const Machine& s, const FlatAutomaton& m) {
  const auto used = m.events();
  const auto reach = reachable_states(s);
  for (std::size_t i = 0; i < s.alphabet().inputs.size(); ++i) {
    if (used.count(s.alphabet().inputs[i].event)) continue;
    for (std::size_t q = 0; q < s.num_states(); ++q) {
      if (!reach[q]) continue;
      bool ok = true;
      s.for_each_move(q, i, [&](std::size_t o, std::size_t to) {
        ok = ok && o == 0 && to == q;
      });
      if (!ok) return false;
    }
  }
  return true;
}

inline bool deterministic(const Machine& s, const FlatAutomaton&) {
  const auto reach = reachable_states(s);
  for (std::size_t q = 0; q < s.num_states(); ++q) {
    if (!reach[q]) continue;
    for (std::size_t i = 0; i < s.alphabet().inputs.size(); ++i) {
      if (std::popcount(s.cell(q, i)) != 1) return false;
    }
  }
  return true;
}

}  // namespace detail

// Decidable machine predicates, evaluated over reachable states.
struct MachinePropertyDef {
  std::string_view id;
  std::string_view description;
  bool (*holds)(const Machine&, const FlatAutomaton&);
};

inline const std::vector<MachinePropertyDef>& machine_properties() {
  static const std::vector<MachinePropertyDef> kProps = {
      {"OutputsInModel",
       "every reachable move emits nothing or an action used by the model",
       detail::outputs_in_model},
      {"StutterOnUnmatched",
       "on events no transition mentions, reachable states emit nothing and "
       "stay",
       detail::stutter_on_unmatched},
      {"Deterministic", "every reachable state has one move per input",
       detail::deterministic},
  };
  return kProps;
}

inline const MachinePropertyDef& machine_property(std::string_view id) {
  for (const auto& p : machine_properties()) {
    if (p.id == id) return p;
  }
  throw UnknownIdError("unknown property '" + std::string(id) + "'");
}

// Joins the trimmed non-empty lines of a multi-line rendering with spaces.
inline std::string one_line(const std::string& text) {
  std::string flat;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    auto start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    flat += (flat.empty() ? "" : " ") + line.substr(start);
  }
  return flat;
}

struct Counterexample {
  std::string model;
  std::string witness;  // serialized machine, model or system model
  std::string variant;
};

struct AnalysisReport {
  std::string check;
  bool pass = true;
  std::string proof_kind = "bounded";
  std::vector<std::pair<std::string, std::string>> params;
  std::string bounds;
  std::uint64_t models_checked = 0;
  std::uint64_t universe_size = 0;
  std::uint64_t violations = 0;
  std::optional<Counterexample> counterexample;
  std::vector<std::string> notes;
  std::string evidence_path;

  std::string param(std::string_view key) const {
    for (const auto& [k, v] : params) {
      if (k == key) return v;
    }
    return {};
  }

  // Deterministic rendering; the evidence path is not part of it.
  std::string to_text() const {
    std::ostringstream out;
    out << "check: " << check << "\n";
    out << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    out << "proof: " << proof_kind << "\n";
    for (const auto& [k, v] : params) out << k << ": " << v << "\n";
    if (!bounds.empty()) out << "bounds: " << bounds << "\n";
    out << "models_checked: " << models_checked << "\n";
    out << "universe_size: " << universe_size << "\n";
    out << "violations: " << violations << "\n";
    if (counterexample) {
      out << "counterexample.model: " << counterexample->model << "\n";
      if (!counterexample->variant.empty()) {
        out << "counterexample.variant: " << counterexample->variant << "\n";
      }
      out << "counterexample.witness: " << counterexample->witness << "\n";
    } else {
      out << "counterexample: none\n";
    }
    for (const auto& n : notes) out << "note: " << n << "\n";
    return out.str();
  }
};

// Writes the report to dir/stem.txt and records the path as its evidence.
inline std::string write_report(AnalysisReport& report,
                                const std::filesystem::path& dir,
                                const std::string& stem) {
  std::filesystem::create_directories(dir);
  auto path = dir / (stem + ".txt");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report " + path.string());
  out << report.to_text();
  report.evidence_path = path.generic_string();
  return report.evidence_path;
}

// Whether every clause of `strong` implies the matching clause of `weak` for
// any machine and model: Stutter implies Chaos, Enum and Pattern imply Open.
inline bool pointwise_refines(const MappingSelection& strong,
                              const MappingSelection& weak) {
  bool unmatched = strong.unmatched == weak.unmatched ||
                   (strong.unmatched == Unmatched::Stutter &&
                    weak.unmatched == Unmatched::Chaos);
  bool realization = strong.realization == weak.realization ||
                     weak.realization == Realization::Open;
  return unmatched && realization;
}

namespace detail {

inline void require_fully_set(const MappingSelection& sel) {
  if (!sel.fully_set()) {
    throw Error("selection " + sel.str() + " leaves a variation point unset");
  }
}

}  // namespace detail

// v2 refines v1 iff sem_v1(m) contains sem_v2(m) for every model. Checked
// exhaustively on the corpus within bounds; labeled "pointwise" when the
// clause implication also applies.
inline AnalysisReport check_language_refinement(
    const MappingSelection& v1, const MappingSelection& v2,
    const std::vector<FlatAutomaton>& corpus, const MachineBounds& bounds) {
  detail::require_fully_set(v1);
  detail::require_fully_set(v2);
  if (corpus.empty()) throw Error("language refinement needs a corpus");
  AnalysisReport r;
  r.check = "language-refinement";
  r.params = {{"v1", v1.str()}, {"v2", v2.str()}};
  r.bounds = bounds.str();
  const bool pointwise = pointwise_refines(v2, v1);
  for (const auto& m : corpus) {
    ConformanceChecker checker(m);
    MachineSpace space = enumerate_machines(checker, bounds);
    auto [first, count] = space.find_all([&](const Machine& s) {
      return checker.conforms(s, v2) && !checker.conforms(s, v1);
    });
    ++r.models_checked;
    r.universe_size += space.size();
    r.violations += count;
    if (first && !r.counterexample) {
      r.counterexample = Counterexample{m.name, first->str(), v2.str()};
    }
  }
  r.pass = r.violations == 0;
  if (r.pass && pointwise) {
    r.proof_kind = "pointwise";
    r.notes.push_back("clauses of v2 imply those of v1 for every machine");
  } else if (pointwise) {
    r.notes.push_back("pointwise implication contradicted by enumeration");
  }
  return r;
}

namespace detail {

inline AnalysisReport preservation(const MachinePropertyDef& phi,
                                   const FlatAutomaton& m,
                                   const MappingSelection& v1,
                                   const MappingSelection& v2,
                                   const MachineBounds& bounds) {
  detail::require_fully_set(v1);
  detail::require_fully_set(v2);
  AnalysisReport r;
  r.check = "property-preservation";
  r.params = {{"property", std::string(phi.id)},
              {"model", m.name},
              {"v1", v1.str()},
              {"v2", v2.str()}};
  r.bounds = bounds.str();
  ConformanceChecker checker(m);
  MachineSpace space = enumerate_machines(checker, bounds);
  auto violators = [&](const MappingSelection& sel) {
    return space.find_all([&](const Machine& s) {
      return checker.conforms(s, sel) && !phi.holds(s, m);
    });
  };
  auto [premise_witness, premise_bad] = violators(v1);
  auto [conclusion_witness, conclusion_bad] = violators(v2);
  r.models_checked = 1;
  r.universe_size = space.size();
  const bool premise = premise_bad == 0;
  const bool conclusion = conclusion_bad == 0;
  r.params.emplace_back("premise", premise ? "holds" : "fails");
  r.params.emplace_back("conclusion", conclusion ? "holds" : "fails");
  r.pass = !premise || conclusion;
  r.proof_kind = premise ? "bounded" : "vacuous";
  if (!r.pass) {
    r.violations = conclusion_bad;
    r.counterexample =
        Counterexample{m.name, conclusion_witness->str(), v2.str()};
  }
  return r;
}

}  // namespace detail

// If phi holds for every machine of sem_v1(m), it holds for every machine of
// sem_v2(m). Requires a passing refinement report for (v1, v2).
inline AnalysisReport check_property_preservation(
    std::string_view phi, const FlatAutomaton& m, const MappingSelection& v1,
    const MappingSelection& v2, const MachineBounds& bounds,
    const AnalysisReport& refinement) {
  if (refinement.check != "language-refinement" || !refinement.pass ||
      refinement.param("v1") != v1.str() || refinement.param("v2") != v2.str()) {
    throw Error("missing refinement evidence for v1=" + v1.str() +
                " v2=" + v2.str());
  }
  AnalysisReport r =
      detail::preservation(machine_property(phi), m, v1, v2, bounds);
  if (!refinement.evidence_path.empty()) {
    r.params.emplace_back("evidence", refinement.evidence_path);
  }
  return r;
}

// The same implication without requiring refinement evidence. Without the
// refinement it can fail.
inline AnalysisReport check_property_preservation_unchecked(
    std::string_view phi, const FlatAutomaton& m, const MappingSelection& v1,
    const MappingSelection& v2, const MachineBounds& bounds) {
  return detail::preservation(machine_property(phi), m, v1, v2, bounds);
}

// Variants of a semantic variation point, with the other point taken from
// `base`.
inline std::vector<MappingSelection> variation_point_variants(
    std::string_view vp, const MappingSelection& base) {
  std::vector<MappingSelection> out;
  if (vp == "UnmatchedEvent") {
    if (base.realization == Realization::Unset) {
      throw Error("UnmatchedEvent analysis needs a fixed realization");
    }
    for (auto u : {Unmatched::Chaos, Unmatched::Stutter}) {
      out.push_back({u, base.realization});
    }
  } else if (vp == "StateRealization") {
    if (base.unmatched == Unmatched::Unset) {
      throw Error("StateRealization analysis needs a fixed unmatched variant");
    }
    for (auto r : {Realization::Open, Realization::Enum, Realization::Pattern}) {
      out.push_back({base.unmatched, r});
    }
  } else {
    throw UnknownIdError("unknown variation point '" + std::string(vp) + "'");
  }
  return out;
}

struct InvariantResult {
  enum class Kind { GloballyInvariant, LocallyInvariant, NotInvariant };

  Kind kind = Kind::GloballyInvariant;
  std::vector<std::string> holding_models;
  std::optional<Counterexample> witness;  // first model where phi fails
  AnalysisReport report;
};

inline std::string_view to_string(InvariantResult::Kind k) {
  switch (k) {
    case InvariantResult::Kind::GloballyInvariant:
      return "GloballyInvariant";
    case InvariantResult::Kind::LocallyInvariant:
      return "LocallyInvariant";
    case InvariantResult::Kind::NotInvariant:
      break;
  }
  return "NotInvariant";
}

// phi is invariant for a model w.r.t. vp if it holds on every machine of the
// union of sem over vp's variants. Global: for every model in scope; local:
// for the listed ones.
inline InvariantResult check_invariant_property(
    std::string_view phi_id, std::string_view vp,
    const std::vector<FlatAutomaton>& scope, const MappingSelection& base,
    const MachineBounds& bounds) {
  const auto& phi = machine_property(phi_id);
  const auto variants = variation_point_variants(vp, base);
  InvariantResult res;
  AnalysisReport& r = res.report;
  r.check = "invariant-property";
  r.params = {{"property", std::string(phi.id)},
              {"variation_point", std::string(vp)},
              {"base", base.str()}};
  r.bounds = bounds.str();
  for (const auto& m : scope) {
    ConformanceChecker checker(m);
    MachineSpace space = enumerate_machines(checker, bounds);
    auto [first, count] = space.find_all([&](const Machine& s) {
      if (phi.holds(s, m)) return false;
      return std::any_of(variants.begin(), variants.end(),
                         [&](const auto& v) { return checker.conforms(s, v); });
    });
    ++r.models_checked;
    r.universe_size += space.size();
    r.violations += count;
    if (!first) {
      res.holding_models.push_back(m.name);
    } else if (!res.witness) {
      const auto& v = *std::find_if(
          variants.begin(), variants.end(),
          [&](const auto& v) { return checker.conforms(*first, v); });
      res.witness = Counterexample{m.name, first->str(), v.str()};
    }
  }
  if (res.holding_models.size() == scope.size()) {
    res.kind = InvariantResult::Kind::GloballyInvariant;
  } else if (!res.holding_models.empty()) {
    res.kind = InvariantResult::Kind::LocallyInvariant;
  } else {
    res.kind = InvariantResult::Kind::NotInvariant;
  }
  r.pass = res.kind == InvariantResult::Kind::GloballyInvariant;
  r.proof_kind = "bounded";
  r.params.emplace_back("result", std::string(to_string(res.kind)));
  std::string holding;
  for (const auto& n : res.holding_models) {
    holding += (holding.empty() ? "" : ",") + n;
  }
  r.params.emplace_back("holding_models", holding.empty() ? "-" : holding);
  r.counterexample = res.witness;
  return res;
}

struct FlatModelBounds {
  std::size_t max_states = 2;
  std::size_t max_events = 1;
  std::size_t max_actions = 1;

  static constexpr std::size_t kStateCap = 2;
  static constexpr std::size_t kEventCap = 1;
  static constexpr std::size_t kActionCap = 1;

  std::string str() const {
    return "model_states<=" + std::to_string(max_states) +
           " events=" + std::to_string(max_events) +
           " actions=" + std::to_string(max_actions);
  }
};

// Every flat model with 1..max_states states S1.. (S1 initial), the full
// event and action pools e1.., a1.. declared, no guards, and any subset of
// the possible transitions (ordered by source, event, output, target).
inline std::vector<FlatAutomaton> enumerate_flat_models(
    const FlatModelBounds& b) {
  if (b.max_states < 1 || b.max_states > FlatModelBounds::kStateCap ||
      b.max_events < 1 || b.max_events > FlatModelBounds::kEventCap ||
      b.max_actions > FlatModelBounds::kActionCap) {
    throw BoundsError("flat-model bounds " + b.str() + " outside caps " +
                      FlatModelBounds{FlatModelBounds::kStateCap,
                                      FlatModelBounds::kEventCap,
                                      FlatModelBounds::kActionCap}
                          .str());
  }
  std::vector<std::string> events, actions;
  for (std::size_t i = 0; i < b.max_events; ++i) {
    events.push_back("e" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < b.max_actions; ++i) {
    actions.push_back("a" + std::to_string(i + 1));
  }
  std::vector<Output> outputs{std::nullopt};
  outputs.insert(outputs.end(), actions.begin(), actions.end());

  std::vector<FlatAutomaton> out;
  for (std::size_t n = 1; n <= b.max_states; ++n) {
    std::vector<std::string> states;
    for (std::size_t i = 0; i < n; ++i) states.push_back("S" + std::to_string(i + 1));
    std::vector<FlatTransition> possible;
    for (const auto& src : states) {
      for (const auto& e : events) {
        for (const auto& o : outputs) {
          for (const auto& tgt : states) {
            possible.push_back({src, e, GuardExpr::True(), o, tgt});
          }
        }
      }
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << possible.size());
         ++mask) {
      FlatAutomaton m;
      m.name = "m" + std::to_string(out.size() + 1);
      m.declared_events = events;
      m.declared_actions = actions;
      for (const auto& s : states) m.states.push_back({s, {}});
      m.initial = states.front();
      for (std::size_t k = 0; k < possible.size(); ++k) {
        if ((mask >> k) & 1u) m.transitions.push_back(possible[k]);
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

// Compares the constrained sublanguage (models satisfying constraint c) with
// the full flat language at the given bounds. The forward direction (every
// constrained model has an equivalent full-language model) holds by taking
// the model itself and is only counted. The converse detects loss: the check
// fails on the first model whose bounded semantics no constrained model
// matches.
inline AnalysisReport check_expressiveness_preservation(
    std::string_view c, const FlatModelBounds& model_bounds,
    const MachineBounds& machine_bounds, const MappingSelection& sel) {
  const auto& constraint_def = constraint(c);
  detail::require_fully_set(sel);
  auto models = enumerate_flat_models(model_bounds);

  AnalysisReport r;
  r.check = "expressiveness";
  r.params = {{"constraint", std::string(constraint_def.id)},
              {"selection", sel.str()},
              {"model_bounds", model_bounds.str()}};
  r.bounds = machine_bounds.str();

  // All enumerated models share one alphabet, hence one machine space.
  ConformanceChecker first(models.front());
  MachineSpace space = enumerate_machines(first, machine_bounds);
  const auto machines = space.to_vector();
  r.universe_size = space.size();

  using SemKey = std::vector<std::uint64_t>;
  struct KeyHash {
    std::size_t operator()(const SemKey& k) const {
      std::size_t h = 1469598103934665603ull;
      for (auto w : k) h = (h ^ w) * 1099511628211ull;
      return h;
    }
  };
  std::vector<SemKey> keys;
  std::vector<char> constrained;
  for (const auto& m : models) {
    ConformanceChecker checker(m, first.alphabet());
    SemKey key((machines.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < machines.size(); ++i) {
      if (checker.conforms(machines[i], sel)) key[i / 64] |= 1ull << (i % 64);
    }
    keys.push_back(std::move(key));
    constrained.push_back(constraint_def.holds(to_statechart(m)));
  }
  std::unordered_set<SemKey, KeyHash> constrained_sems;
  std::uint64_t n_constrained = 0;
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (constrained[k]) {
      constrained_sems.insert(keys[k]);
      ++n_constrained;
    }
  }
  r.models_checked = models.size();
  r.params.emplace_back("constrained_models", std::to_string(n_constrained));
  r.params.emplace_back("forward_direction",
                        "holds (" + std::to_string(n_constrained) +
                            " constrained models, each its own witness)");
  for (std::size_t k = 0; k < models.size(); ++k) {
    if (constrained_sems.count(keys[k])) continue;
    ++r.violations;
    if (!r.counterexample) {
      std::string text =
          one_line(unparse(to_statechart(models[k]), Notation::Arrow).source);
      r.counterexample = Counterexample{models[k].name, text, sel.str()};
    }
  }
  r.pass = r.violations == 0;
  r.notes.push_back(
      "converse direction: every full-language model needs a constrained "
      "model with equal bounded semantics");
  return r;
}

}  // namespace lvw
