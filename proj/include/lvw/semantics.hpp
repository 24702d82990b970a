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

// Semantic domain and set-valued semantic mapping for flat statecharts.
//
// A machine is a total, possibly nondeterministic input/output machine with a
// realization tag. A flat automaton denotes the set of machines that conform
// to it: there must be a relation R between machine states and automaton
// states, containing the two initial states, such that for every related pair
// (q, x) and input (e, b):
//  - if x has transitions on e whose guard holds under b, every move of q on
//    that input emits the action of one of them and lands in a state related
//    to its target;
//  - otherwise the unmatched-event variant applies: Stutter demands the move
//    emit nothing and stay put, Chaos accepts any move.
// The realization variant constrains the tag (Open accepts any).

#include <algorithm>
#include <bit>
#include <compare>
#include <iterator>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvw/ast.hpp"
#include "lvw/error.hpp"
#include "lvw/parallel.hpp"
#include "lvw/reduction.hpp"
#include "lvw/variants.hpp"

namespace lvw {

struct Input {
  std::string event;
  Assignment guard_assignment;

  std::string str() const {
    std::string s = event;
    if (!guard_assignment.empty()) {
      s += "{";
      bool first = true;
      for (const auto& [var, val] : guard_assignment) {
        s += (first ? "" : ",") + var + (val ? "=1" : "=0");
        first = false;
      }
      s += "}";
    }
    return s;
  }

  friend auto operator<=>(const Input&, const Input&) = default;
};

// An emitted action; nullopt is the empty output.
using Output = std::optional<std::string>;

inline std::string output_str(const Output& o) { return o ? *o : "-"; }

struct MachineAlphabet {
  std::vector<Input> inputs;
  std::vector<Output> outputs;  // outputs[0] is the empty output

  friend bool operator==(const MachineAlphabet&,
                         const MachineAlphabet&) = default;
};

using AlphabetPtr = std::shared_ptr<const MachineAlphabet>;

// Inputs: interface events (sorted) times every assignment to the guard
// variables, first variable most significant. Outputs: empty, then interface
// actions (sorted).
inline AlphabetPtr derive_alphabet(const FlatAutomaton& m) {
  auto alpha = std::make_shared<MachineAlphabet>();
  const std::size_t nv = m.guard_vars.size();
  for (const auto& e : m.interface_events()) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << nv); ++bits) {
      Input in{e, {}};
      for (std::size_t k = 0; k < nv; ++k) {
        in.guard_assignment[m.guard_vars[k]] = (bits >> (nv - 1 - k)) & 1u;
      }
      alpha->inputs.push_back(std::move(in));
    }
  }
  alpha->outputs.push_back(std::nullopt);
  for (const auto& a : m.interface_actions()) alpha->outputs.push_back(a);
  return alpha;
}

struct Step {
  std::size_t from;
  std::size_t input;
  std::size_t output;
  std::size_t to;

  friend auto operator<=>(const Step&, const Step&) = default;
};

// One element of the semantic domain. States are q0..q{n-1}; the moves of
// state q on input i are stored as a bit mask over (output, successor) with
// bit index output * n + successor.
class Machine {
 public:
  Machine(AlphabetPtr alphabet, std::size_t num_states, std::size_t init,
          std::vector<std::uint32_t> cells, RealizationTag tag)
      : alphabet_(std::move(alphabet)),
        num_states_(num_states),
        init_(init),
        cells_(std::move(cells)),
        tag_(tag) {
    if (num_states_ == 0 || init_ >= num_states_) {
      throw Error("machine needs an initial state among its states");
    }
    if (alphabet_->outputs.size() * num_states_ > 32) {
      throw BoundsError("machine too large for its move encoding");
    }
    if (cells_.size() != num_states_ * alphabet_->inputs.size()) {
      throw Error("machine cell table has the wrong size");
    }
    for (auto c : cells_) {
      if (c == 0) throw Error("machine step relation is not total");
    }
  }

  static Machine from_steps(AlphabetPtr alphabet, std::size_t num_states,
                            std::size_t init, const std::vector<Step>& steps,
                            RealizationTag tag) {
    const std::size_t ni = alphabet->inputs.size();
    std::vector<std::uint32_t> cells(num_states * ni, 0);
    for (const auto& s : steps) {
      if (s.from >= num_states || s.to >= num_states || s.input >= ni ||
          s.output >= alphabet->outputs.size()) {
        throw Error("machine step out of range");
      }
      cells[s.from * ni + s.input] |= std::uint32_t{1}
                                      << (s.output * num_states + s.to);
    }
    return Machine(std::move(alphabet), num_states, init, std::move(cells),
                   tag);
  }

  const MachineAlphabet& alphabet() const { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const { return alphabet_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t init() const { return init_; }
  RealizationTag tag() const { return tag_; }
  std::uint32_t cell(std::size_t q, std::size_t i) const {
    return cells_[q * alphabet_->inputs.size() + i];
  }

  // Calls fn(output, successor) for every move of q on input i.
  template <class Fn>
  void for_each_move(std::size_t q, std::size_t i, Fn&& fn) const {
    for (std::uint32_t m = cell(q, i); m; m &= m - 1) {
      auto bit = static_cast<std::size_t>(std::countr_zero(m));
      fn(bit / num_states_, bit % num_states_);
    }
  }

  std::vector<Step> steps() const {
    std::vector<Step> out;
    for (std::size_t q = 0; q < num_states_; ++q) {
      for (std::size_t i = 0; i < alphabet_->inputs.size(); ++i) {
        for_each_move(q, i, [&](std::size_t o, std::size_t to) {
          out.push_back({q, i, o, to});
        });
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::string str() const {
    std::ostringstream out;
    auto tag = to_string(tag_);
    out << "machine { states ";
    for (std::size_t q = 0; q < num_states_; ++q) out << (q ? "," : "") << "q" << q;
    out << "; init q" << init_ << "; tag " << tag << ";";
    for (const auto& s : steps()) {
      out << " step q" << s.from << " " << alphabet_->inputs[s.input].str()
          << " / " << output_str(alphabet_->outputs[s.output]) << " -> q"
          << s.to << ";";
    }
    out << " }";
    return out.str();
  }

  friend bool operator==(const Machine& a, const Machine& b) {
    return a.num_states_ == b.num_states_ && a.init_ == b.init_ &&
           a.tag_ == b.tag_ && a.cells_ == b.cells_ &&
           (a.alphabet_ == b.alphabet_ || *a.alphabet_ == *b.alphabet_);
  }
  // Orders machines over one alphabet; the alphabet itself is not compared.
  friend auto operator<=>(const Machine& a, const Machine& b) {
    if (auto c = a.num_states_ <=> b.num_states_; c != 0) return c;
    if (auto c = a.init_ <=> b.init_; c != 0) return c;
    if (auto c = a.cells_ <=> b.cells_; c != 0) return c;
    return a.tag_ <=> b.tag_;
  }

 private:
  AlphabetPtr alphabet_;
  std::size_t num_states_;
  std::size_t init_;
  std::vector<std::uint32_t> cells_;
  RealizationTag tag_;
};

using MachineSet = std::set<Machine>;

struct MappingSelection {
  Unmatched unmatched = Unmatched::Unset;
  Realization realization = Realization::Unset;

  bool fully_set() const {
    return unmatched != Unmatched::Unset && realization != Realization::Unset;
  }
  std::string str() const {
    return std::string(to_string(unmatched)) + "," +
           std::string(to_string(realization));
  }

  friend bool operator==(const MappingSelection&,
                         const MappingSelection&) = default;
};

// "stutter,open", "chaos", "" ...; omitted fields stay Unset.
inline MappingSelection parse_mapping_selection(std::string_view s) {
  MappingSelection sel;
  auto comma = s.find(',');
  sel.unmatched = parse_unmatched(s.substr(0, comma));
  if (comma != std::string_view::npos) {
    sel.realization = parse_realization(s.substr(comma + 1));
  }
  return sel;
}

// Every selection that fixes both semantic variation points.
inline const std::vector<MappingSelection>& fully_set_selections() {
  static const std::vector<MappingSelection> kAll = [] {
    std::vector<MappingSelection> out;
    for (auto u : {Unmatched::Chaos, Unmatched::Stutter}) {
      for (auto r : {Realization::Open, Realization::Enum, Realization::Pattern}) {
        out.push_back({u, r});
      }
    }
    return out;
  }();
  return kAll;
}

// Precomputed matching structure of one flat automaton, reused across many
// conformance queries.
class ConformanceChecker {
 public:
  explicit ConformanceChecker(FlatAutomaton m)
      : ConformanceChecker(std::move(m), nullptr) {}

  // Reuses `shared` as the alphabet when it equals the model's own, so that
  // machines enumerated for another model over the same alphabet are checked
  // without comparing alphabets by value.
  ConformanceChecker(FlatAutomaton m, AlphabetPtr shared)
      : model_(std::move(m)), alphabet_(derive_alphabet(model_)) {
    if (shared && *shared == *alphabet_) alphabet_ = std::move(shared);
    const auto& alpha = *alphabet_;
    const std::size_t nx = model_.states.size();
    options_.resize(nx * alpha.inputs.size());
    for (const auto& t : model_.transitions) {
      const std::size_t x = model_.state_index(t.source);
      const std::size_t target = model_.state_index(t.target);
      const auto o = static_cast<std::size_t>(
          std::find(alpha.outputs.begin(), alpha.outputs.end(), t.action) -
          alpha.outputs.begin());
      for (std::size_t i = 0; i < alpha.inputs.size(); ++i) {
        const Input& in = alpha.inputs[i];
        if (in.event == t.event && guard_eval(t.guard, in.guard_assignment)) {
          options_[x * alpha.inputs.size() + i].push_back({o, target});
        }
      }
    }
    initial_ = model_.state_index(model_.initial);
  }

  const FlatAutomaton& model() const { return model_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }

  // Transitions of state x enabled by input i, as (output, target) pairs.
  const std::vector<std::pair<std::size_t, std::size_t>>& enabled(
      std::size_t x, std::size_t i) const {
    return options_[x * alphabet_->inputs.size() + i];
  }

  bool conforms(const Machine& s, const MappingSelection& sel) const {
    if (!sel.fully_set()) {
      throw Error("conformance needs a fully set mapping selection, got " +
                  sel.str());
    }
    check_alphabet(s);
    switch (sel.realization) {
      case Realization::Enum:
        if (s.tag() != RealizationTag::Enum) return false;
        break;
      case Realization::Pattern:
        if (s.tag() != RealizationTag::Pattern) return false;
        break;
      default:
        break;
    }
    const std::size_t ns = s.num_states();
    const std::size_t nx = model_.states.size();
    const std::size_t ni = alphabet_->inputs.size();
    const bool stutter = sel.unmatched == Unmatched::Stutter;
    std::vector<char> rel(ns * nx, 1);
    auto pair_ok = [&](std::size_t q, std::size_t x) {
      for (std::size_t i = 0; i < ni; ++i) {
        const auto& opts = enabled(x, i);
        bool ok = true;
        if (opts.empty()) {
          if (!stutter) continue;
          s.for_each_move(q, i, [&](std::size_t o, std::size_t to) {
            ok = ok && o == 0 && to == q;
          });
        } else {
          s.for_each_move(q, i, [&](std::size_t o, std::size_t to) {
            if (!ok) return;
            ok = std::any_of(opts.begin(), opts.end(), [&](const auto& t) {
              return t.first == o && rel[to * nx + t.second];
            });
          });
        }
        if (!ok) return false;
      }
      return true;
    };
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t q = 0; q < ns; ++q) {
        for (std::size_t x = 0; x < nx; ++x) {
          if (rel[q * nx + x] && !pair_ok(q, x)) {
            rel[q * nx + x] = 0;
            changed = true;
          }
        }
      }
    }
    return rel[s.init() * nx + initial_];
  }

  // Membership in the inner semantics: some fully set selection accepts s.
  bool inner_member(const Machine& s) const {
    const auto& all = fully_set_selections();
    return std::any_of(all.begin(), all.end(), [&](const MappingSelection& sel) {
      return conforms(s, sel);
    });
  }

  void check_alphabet(const Machine& s) const {
    if (s.alphabet_ptr() != alphabet_ && s.alphabet() != *alphabet_) {
      throw Error("machine alphabet does not match the alphabet of " +
                  model_.name);
    }
  }

 private:
  FlatAutomaton model_;
  AlphabetPtr alphabet_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> options_;
  std::size_t initial_ = 0;
};

inline bool conforms(const Machine& s, const FlatAutomaton& m,
                     const MappingSelection& sel) {
  return ConformanceChecker(m).conforms(s, sel);
}

inline bool inner_member(const Machine& s, const FlatAutomaton& m) {
  return ConformanceChecker(m).inner_member(s);
}

struct MachineBounds {
  std::size_t max_states = 2;
  std::vector<RealizationTag> tags = {kAllTags.begin(), kAllTags.end()};
  std::size_t jobs = 1;

  static constexpr std::size_t kStateCap = 2;
  static constexpr std::size_t kMaxEvents = 2;
  static constexpr std::size_t kMaxGuardVars = 1;
  static constexpr std::uint64_t kMaxMachines = 4'000'000;

  std::string str() const {
    std::string s = "max_states=" + std::to_string(max_states) + " tags=";
    for (std::size_t k = 0; k < tags.size(); ++k) {
      s += (k ? "," : "") + std::string(to_string(tags[k]));
    }
    return s;
  }
};

// The bounded universe of machines over one alphabet, addressable by index.
// Machines are enumerated by state count 1..max_states, then every total step
// relation (cell masks read as mixed-radix digits, first cell least
// significant), then tag. The initial state is always q0, which loses nothing
// up to state renaming.
class MachineSpace {
 public:
  MachineSpace(AlphabetPtr alphabet, MachineBounds bounds)
      : alphabet_(std::move(alphabet)), bounds_(std::move(bounds)) {
    if (bounds_.max_states < 1) {
      throw BoundsError("max_states must be at least 1");
    }
    if (bounds_.max_states > MachineBounds::kStateCap) {
      throw BoundsError("max_states " + std::to_string(bounds_.max_states) +
                        " exceeds cap " +
                        std::to_string(MachineBounds::kStateCap));
    }
    if (bounds_.tags.empty()) throw BoundsError("no realization tags given");
    const std::size_t ni = alphabet_->inputs.size();
    const std::size_t no = alphabet_->outputs.size();
    long double estimate = 0;
    for (std::size_t k = 1; k <= bounds_.max_states; ++k) {
      if (no * k > 32) {
        throw BoundsError("output alphabet too large for enumeration");
      }
      long double per_cell = static_cast<long double>((1ull << (no * k)) - 1);
      long double rel = 1;
      for (std::size_t c = 0; c < k * ni; ++c) rel *= per_cell;
      estimate += rel * bounds_.tags.size();
    }
    if (estimate > static_cast<long double>(MachineBounds::kMaxMachines)) {
      std::ostringstream msg;
      msg.precision(3);
      msg << "machine space of about " << estimate << " machines exceeds limit "
          << MachineBounds::kMaxMachines << " (" << ni << " inputs, " << no
          << " outputs, " << bounds_.str() << ")";
      throw BoundsError(msg.str());
    }
    for (std::size_t k = 1; k <= bounds_.max_states; ++k) {
      std::uint64_t per_cell = (std::uint64_t{1} << (no * k)) - 1;
      std::uint64_t rel = 1;
      for (std::size_t c = 0; c < k * ni; ++c) rel *= per_cell;
      blocks_.push_back({k, per_cell, rel * bounds_.tags.size()});
      size_ += blocks_.back().size;
    }
  }

  std::uint64_t size() const { return size_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }
  const MachineBounds& bounds() const { return bounds_; }

  Machine at(std::uint64_t index) const {
    for (const auto& b : blocks_) {
      if (index >= b.size) {
        index -= b.size;
        continue;
      }
      const std::size_t ntags = bounds_.tags.size();
      RealizationTag tag = bounds_.tags[index % ntags];
      std::uint64_t rel = index / ntags;
      std::vector<std::uint32_t> cells(b.states * alphabet_->inputs.size());
      for (auto& c : cells) {
        c = static_cast<std::uint32_t>(rel % b.per_cell + 1);
        rel /= b.per_cell;
      }
      return Machine(alphabet_, b.states, 0, std::move(cells), tag);
    }
    throw Error("machine index out of range");
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t i = 0; i < size_; ++i) fn(at(i));
  }

  std::vector<Machine> to_vector() const {
    std::vector<Machine> out;
    out.reserve(size_);
    for_each([&](Machine m) { out.push_back(std::move(m)); });
    return out;
  }

  // Machines for which `keep` holds, in index order, computed on
  // bounds().jobs threads.
  template <class Pred>
  std::vector<Machine> filter(Pred&& keep) const {
    auto parts = parallel_chunks(size_, bounds_.jobs,
                                 [&](std::uint64_t b, std::uint64_t e) {
                                   std::vector<Machine> part;
                                   for (auto i = b; i < e; ++i) {
                                     Machine m = at(i);
                                     if (keep(m)) part.push_back(std::move(m));
                                   }
                                   return part;
                                 });
    std::vector<Machine> out;
    for (auto& p : parts) {
      out.insert(out.end(), std::make_move_iterator(p.begin()),
                 std::make_move_iterator(p.end()));
    }
    return out;
  }

  // First machine (in index order) satisfying `pred`, plus how many do.
  template <class Pred>
  std::pair<std::optional<Machine>, std::uint64_t> find_all(Pred&& pred) const {
    struct Part {
      std::optional<Machine> first;
      std::uint64_t count = 0;
    };
    auto parts = parallel_chunks(size_, bounds_.jobs,
                                 [&](std::uint64_t b, std::uint64_t e) {
                                   Part part;
                                   for (auto i = b; i < e; ++i) {
                                     Machine m = at(i);
                                     if (pred(m)) {
                                       ++part.count;
                                       if (!part.first) part.first = std::move(m);
                                     }
                                   }
                                   return part;
                                 });
    std::pair<std::optional<Machine>, std::uint64_t> out{std::nullopt, 0};
    for (auto& p : parts) {
      out.second += p.count;
      if (!out.first && p.first) out.first = std::move(p.first);
    }
    return out;
  }

 private:
  struct Block {
    std::size_t states;
    std::uint64_t per_cell;
    std::uint64_t size;
  };

  AlphabetPtr alphabet_;
  MachineBounds bounds_;
  std::vector<Block> blocks_;
  std::uint64_t size_ = 0;
};

// Enumeration is limited to small interfaces: at most two events and one guard
// variable, so at most four inputs.
inline void check_enumerable(const FlatAutomaton& m) {
  if (m.interface_events().size() > MachineBounds::kMaxEvents) {
    throw BoundsError("model " + m.name + " has " +
                      std::to_string(m.interface_events().size()) +
                      " events; enumeration supports at most " +
                      std::to_string(MachineBounds::kMaxEvents));
  }
  if (m.guard_vars.size() > MachineBounds::kMaxGuardVars) {
    throw BoundsError("model " + m.name + " has " +
                      std::to_string(m.guard_vars.size()) +
                      " guard variables; enumeration supports at most " +
                      std::to_string(MachineBounds::kMaxGuardVars));
  }
}

inline MachineSpace enumerate_machines(const FlatAutomaton& m,
                                       const MachineBounds& bounds) {
  check_enumerable(m);
  return MachineSpace(derive_alphabet(m), bounds);
}

// Enumerates over the checker's alphabet so conformance checks share it.
inline MachineSpace enumerate_machines(const ConformanceChecker& checker,
                                       const MachineBounds& bounds) {
  check_enumerable(checker.model());
  return MachineSpace(checker.alphabet(), bounds);
}

inline MachineSet sem_bounded(const FlatAutomaton& m,
                              const MappingSelection& sel,
                              const MachineBounds& bounds) {
  if (!sel.fully_set()) {
    throw Error("sem_bounded needs a fully set selection, got " + sel.str());
  }
  ConformanceChecker checker(m);
  MachineSpace space = enumerate_machines(checker, bounds);
  auto kept = space.filter(
      [&](const Machine& s) { return checker.conforms(s, sel); });
  return {std::make_move_iterator(kept.begin()),
          std::make_move_iterator(kept.end())};
}

// Union of sem_bounded over every fully set selection.
inline MachineSet inner_sem_bounded(const FlatAutomaton& m,
                                    const MachineBounds& bounds) {
  ConformanceChecker checker(m);
  MachineSpace space = enumerate_machines(checker, bounds);
  auto kept =
      space.filter([&](const Machine& s) { return checker.inner_member(s); });
  return {std::make_move_iterator(kept.begin()),
          std::make_move_iterator(kept.end())};
}

// Integrated semantics of several models over one alphabet.
inline MachineSet intersect_sem(const std::vector<MachineSet>& sets) {
  if (sets.empty()) return {};
  const MachineAlphabet* alpha = nullptr;
  for (const auto& set : sets) {
    for (const auto& s : set) {
      if (!alpha) alpha = &s.alphabet();
      if (s.alphabet() != *alpha) {
        throw Error("intersect_sem over machine sets with different alphabets");
      }
    }
  }
  MachineSet out = sets.front();
  for (std::size_t k = 1; k < sets.size(); ++k) {
    MachineSet next;
    std::set_intersection(out.begin(), out.end(), sets[k].begin(),
                          sets[k].end(), std::inserter(next, next.end()));
    out = std::move(next);
  }
  return out;
}

struct ModelRefinementVerdict {
  bool pass = true;
  std::uint64_t machines_checked = 0;
  std::uint64_t violations = 0;
  std::optional<Machine> witness;  // in sem(refined) but not sem(abstract)
};

// sem(refined) is a subset of sem(abstract) within the bounds.
inline ModelRefinementVerdict model_refines(const FlatAutomaton& refined,
                                            const FlatAutomaton& abstract,
                                            const MappingSelection& sel,
                                            const MachineBounds& bounds) {
  if (!sel.fully_set()) {
    throw Error("model_refines needs a fully set selection, got " + sel.str());
  }
  ConformanceChecker fine(refined);
  ConformanceChecker coarse(abstract, fine.alphabet());
  if (fine.alphabet() != coarse.alphabet()) {
    throw Error("models " + refined.name + " and " + abstract.name +
                " have different alphabets");
  }
  MachineSpace space = enumerate_machines(fine, bounds);
  auto [first, count] = space.find_all([&](const Machine& s) {
    return fine.conforms(s, sel) && !coarse.conforms(s, sel);
  });
  ModelRefinementVerdict v;
  v.machines_checked = space.size();
  v.violations = count;
  v.witness = std::move(first);
  v.pass = count == 0;
  return v;
}

}  // namespace lvw
