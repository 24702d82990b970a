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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lvw/lvw.hpp"

namespace lvw::testing {

inline std::filesystem::path corpus_dir() { return LVW_CORPUS_DIR; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::filesystem::path> sc_files(const std::string& notation) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(
           corpus_dir() / "statecharts" / notation)) {
    if (e.path().extension() == ".sc") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<ConcreteText> corpus_texts(const std::string& notation) {
  std::vector<ConcreteText> out;
  for (const auto& p : sc_files(notation)) out.push_back(make_text(slurp(p)));
  return out;
}

// Parses with every syntactic extension enabled; fails the test on rejection.
inline AbstractStatechart model(const std::string& source) {
  ParseResult r = parse(make_text(source), VariantSelection::permissive());
  if (!r) {
    std::string all;
    for (const auto& d : r.diagnostics) all += d.str() + "\n";
    ADD_FAILURE() << "model rejected:\n" << all << source;
    return {};
  }
  return *r.model;
}

inline FlatAutomaton flat(const std::string& source) {
  return reduce(model(source), Priority::InnerFirst);
}

inline std::vector<AbstractStatechart> corpus_models(
    const std::string& notation = "arrow") {
  std::vector<AbstractStatechart> out;
  for (const auto& p : sc_files(notation)) out.push_back(model(slurp(p)));
  return out;
}

inline std::vector<FlatAutomaton> corpus_flat(
    const std::string& notation = "arrow") {
  std::vector<FlatAutomaton> out;
  for (const auto& m : corpus_models(notation)) {
    out.push_back(reduce(m, Priority::InnerFirst));
  }
  return out;
}

// Every state has an enabled transition for every event and assignment.
inline bool fully_matched(const FlatAutomaton& m) {
  const auto events = m.interface_events();
  const std::size_t nv = m.guard_vars.size();
  for (const auto& st : m.states) {
    for (const auto& e : events) {
      for (std::size_t bits = 0; bits < (std::size_t{1} << nv); ++bits) {
        Assignment a;
        for (std::size_t v = 0; v < nv; ++v) a[m.guard_vars[v]] = (bits >> v) & 1u;
        bool any = std::any_of(
            m.transitions.begin(), m.transitions.end(), [&](const auto& t) {
              return t.source == st.name && t.event == e && guard_eval(t.guard, a);
            });
        if (!any) return false;
      }
    }
  }
  return true;
}

}  // namespace lvw::testing
