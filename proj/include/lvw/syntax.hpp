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

// Concrete textual syntax of statecharts in two notations.
//
// Arrow notation:
//   statechart M <<prio:outer>> {
//     vars g1, g2;            // guard variables
//     events e, f;            // extra interface events (optional)
//     actions a;              // extra interface actions (optional)
//     initial state A;
//     state C { initial state C1; state C2; C1 - e -> C2; }
//     A - e, f [g1 & !g2] / a -> C;
//   }
//
// Keyword notation writes "*state A;" for an initial state and
// "from A on e, f [g1 & !g2] do a goto C;" for a transition. A selection that
// enables Keyword accepts both notations.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "lvw/ast.hpp"
#include "lvw/error.hpp"
#include "lvw/feature_model.hpp"
#include "lvw/lexer.hpp"
#include "lvw/variants.hpp"

namespace lvw {

struct ConcreteText {
  std::string source;
  Notation syntax_variant = Notation::Arrow;
};

struct ParseDiagnostic {
  enum class Kind { SyntaxError, WellFormednessError, VariantViolation };

  std::size_t line = 1;
  std::size_t column = 1;
  std::string message;
  Kind kind = Kind::SyntaxError;

  std::string str() const {
    static constexpr std::string_view kNames[] = {
        "syntax error", "well-formedness error", "variant violation"};
    return std::to_string(line) + ":" + std::to_string(column) + ": " +
           std::string(kNames[static_cast<int>(kind)]) + ": " + message;
  }
};

struct ParseResult {
  std::optional<AbstractStatechart> model;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
  explicit operator bool() const { return ok(); }
};

namespace detail {

struct Pos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class StatechartParser {
 public:
  StatechartParser(std::vector<text::Token> toks, const VariantSelection& sel)
      : cur_(std::move(toks)), sel_(sel) {}

  AbstractStatechart parse_model() {
    AbstractStatechart m;
    cur_.expect("statechart");
    const auto& name = cur_.expect_ident("model name");
    model_pos_ = {name.line, name.column};
    m.name = name.text;
    m.stereotypes = parse_stereotypes();
    cur_.expect("{");
    std::set<std::string> seen_decls;
    while (cur_.peek().is("vars") || cur_.peek().is("events") ||
           cur_.peek().is("actions")) {
      const auto& kw = cur_.next();
      if (!seen_decls.insert(kw.text).second) {
        text::Cursor::fail(kw, "repeated '" + kw.text + "' declaration");
      }
      auto& list = kw.text == "vars"     ? m.guard_vars
                   : kw.text == "events" ? m.declared_events
                                         : m.declared_actions;
      list = parse_ident_list();
      cur_.expect(";");
    }
    parse_scope_body(m.states, m.transitions);
    if (!cur_.at_end()) text::Cursor::fail(cur_.peek(), "expected end of input");
    return m;
  }

  Pos model_pos() const { return model_pos_; }
  const std::map<std::string, Pos>& state_pos() const { return state_pos_; }
  const std::vector<Pos>& transition_pos() const { return transition_pos_; }
  const std::vector<ParseDiagnostic>& violations() const { return violations_; }

 private:
  void violation(const text::Token& at, std::string msg) {
    violations_.push_back({at.line, at.column, std::move(msg),
                           ParseDiagnostic::Kind::VariantViolation});
  }

  std::vector<std::string> parse_ident_list() {
    std::vector<std::string> out;
    out.push_back(cur_.expect_ident().text);
    while (cur_.accept(",")) out.push_back(cur_.expect_ident().text);
    return out;
  }

  std::vector<Stereotype> parse_stereotypes() {
    std::vector<Stereotype> out;
    while (cur_.peek().is("<<")) {
      const auto& open = cur_.next();
      Stereotype s;
      s.name = cur_.expect_ident("stereotype name").text;
      if (cur_.accept(":")) s.value = cur_.expect_ident("stereotype value").text;
      cur_.expect(">>");
      bool allowed = std::any_of(
          sel_.stereotype_allow.begin(), sel_.stereotype_allow.end(),
          [&](const Stereotype& p) { return stereotype_matches(p, s); });
      if (!allowed) {
        violation(open, "stereotype <<" + s.str() + ">> is not allowed");
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  bool at_state_decl() const {
    const auto& t = cur_.peek();
    return t.is("state") || t.is("initial") ||
           (t.is("*") && cur_.peek(1).is("state"));
  }

  void parse_scope_body(std::vector<StateNode>& states,
                        std::vector<TransitionNode>& transitions) {
    while (at_state_decl()) states.push_back(parse_state());
    while (!cur_.peek().is("}")) {
      if (at_state_decl()) {
        text::Cursor::fail(cur_.peek(),
                           "state declarations must precede transitions");
      }
      transitions.push_back(parse_transition());
    }
    cur_.expect("}");
  }

  StateNode parse_state() {
    StateNode s;
    const auto& first = cur_.peek();
    if (cur_.accept("*")) {
      if (!sel_.enables(Notation::Keyword)) {
        violation(first, "keyword notation '*state' is not enabled");
      }
      s.is_initial = true;
    } else if (cur_.accept("initial")) {
      s.is_initial = true;
    }
    cur_.expect("state");
    const auto& name = cur_.expect_ident("state name");
    s.name = name.text;
    state_pos_.emplace(s.name, Pos{name.line, name.column});
    s.stereotypes = parse_stereotypes();
    if (cur_.accept(";")) return s;
    const auto& brace = cur_.expect("{");
    if (!sel_.enables(Abbreviation::Hierarchy)) {
      violation(brace, "hierarchical state " + s.name + " is not enabled");
    }
    parse_scope_body(s.children, s.transitions);
    return s;
  }

  GuardExpr parse_guard() {
    const auto& open = cur_.peek();
    if (cur_.accept("true")) return GuardExpr::True();
    auto literal = [&]() {
      if (cur_.accept("!")) {
        return GuardExpr::Not(GuardExpr::Var(cur_.expect_ident("variable").text));
      }
      return GuardExpr::Var(cur_.expect_ident("variable").text);
    };
    GuardExpr g = literal();
    while (cur_.accept("&")) g = GuardExpr::And(std::move(g), literal());
    const std::string lang = sel_.effective_guard_language();
    if (!guard_language(lang).admits(g)) {
      violation(open, "guard '" + g.str() + "' is not admitted by " + lang);
    }
    return g;
  }

  void parse_events(TransitionNode& t) {
    const auto& first = cur_.peek();
    t.events = parse_ident_list();
    if (t.events.size() > 1 && !sel_.enables(Abbreviation::MultiTrigger)) {
      violation(first, "multi-trigger transition is not enabled");
    }
  }

  TransitionNode parse_transition() {
    TransitionNode t;
    const auto& first = cur_.peek();
    transition_pos_.push_back({first.line, first.column});
    if (cur_.accept("from")) {
      if (!sel_.enables(Notation::Keyword)) {
        violation(first, "keyword transition notation is not enabled");
      }
      t.source = cur_.expect_ident("source state").text;
      cur_.expect("on");
      parse_events(t);
      if (cur_.accept("[")) {
        t.guard = parse_guard();
        cur_.expect("]");
      }
      if (cur_.accept("do")) t.action = cur_.expect_ident("action").text;
      cur_.expect("goto");
    } else {
      t.source = cur_.expect_ident("source state").text;
      cur_.expect("-");
      parse_events(t);
      if (cur_.accept("[")) {
        t.guard = parse_guard();
        cur_.expect("]");
      }
      if (cur_.accept("/")) t.action = cur_.expect_ident("action").text;
      cur_.expect("->");
    }
    t.target = cur_.expect_ident("target state").text;
    cur_.expect(";");
    return t;
  }

  text::Cursor cur_;
  const VariantSelection& sel_;
  Pos model_pos_;
  std::map<std::string, Pos> state_pos_;
  std::vector<Pos> transition_pos_;
  std::vector<ParseDiagnostic> violations_;
};

}  // namespace detail

// The partial parse mapping. On success the model is well-formed and lies in
// the language variant described by `sel` (notations, abbreviations,
// stereotypes, guard language and constraints).
inline ParseResult parse(const ConcreteText& text, const VariantSelection& sel) {
  ParseResult result;
  auto fail = [&](std::size_t line, std::size_t col, std::string msg,
                  ParseDiagnostic::Kind kind) {
    result.diagnostics.push_back({line, col, std::move(msg), kind});
  };

  bool blank = std::all_of(text.source.begin(), text.source.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
  if (blank) {
    fail(1, 1, "empty input", ParseDiagnostic::Kind::SyntaxError);
    return result;
  }

  std::optional<detail::StatechartParser> parser;
  AbstractStatechart m;
  try {
    parser.emplace(text::tokenize(text.source), sel);
    m = parser->parse_model();
  } catch (const SyntaxError& e) {
    std::string msg = e.what();
    msg = msg.substr(msg.find(": ") + 2);
    fail(e.line(), e.column(), std::move(msg),
         ParseDiagnostic::Kind::SyntaxError);
    return result;
  }

  result.diagnostics = parser->violations();
  WellFormedness wf = wellformed(m);
  for (const auto& v : wf.violations) {
    detail::Pos at = parser->model_pos();
    switch (v.anchor.kind) {
      case WfAnchor::Kind::Model:
        break;
      case WfAnchor::Kind::State: {
        auto it = parser->state_pos().find(v.anchor.state);
        if (it != parser->state_pos().end()) at = it->second;
        break;
      }
      case WfAnchor::Kind::Transition:
        at = parser->transition_pos().at(v.anchor.transition);
        break;
    }
    fail(at.line, at.column, v.message,
         ParseDiagnostic::Kind::WellFormednessError);
  }
  if (wf.ok()) {
    for (const auto& c : sel.constraints) {
      if (!apply_constraint(m, c)) {
        fail(parser->model_pos().line, parser->model_pos().column,
             "model violates constraint " + c,
             ParseDiagnostic::Kind::VariantViolation);
      }
    }
  }
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const ParseDiagnostic& a, const ParseDiagnostic& b) {
                     return std::tie(a.line, a.column) <
                            std::tie(b.line, b.column);
                   });
  if (result.diagnostics.empty()) result.model = std::move(m);
  return result;
}

// Guesses the notation a text is written in from its first notation-specific
// token.
inline Notation detect_notation(std::string_view source) {
  try {
    auto toks = text::tokenize(source);
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      if (toks[i].is("from") || (toks[i].is("*") && toks[i + 1].is("state"))) {
        return Notation::Keyword;
      }
    }
  } catch (const SyntaxError&) {
  }
  return Notation::Arrow;
}

inline ConcreteText make_text(std::string source) {
  Notation n = detect_notation(source);
  return {std::move(source), n};
}

// Renders a well-formed model in the requested notation. parse(unparse(m, n))
// is structurally equal to m under any selection that admits m.
inline ConcreteText unparse(const AbstractStatechart& m, Notation notation) {
  std::ostringstream out;
  const bool kw = notation == Notation::Keyword;
  auto stereos = [&](const std::vector<Stereotype>& ss) {
    for (const auto& s : ss) out << " <<" << s.str() << ">>";
  };
  auto list = [&](const std::vector<std::string>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? ", " : "") << xs[i];
  };
  auto transition = [&](const TransitionNode& t, const std::string& pad) {
    out << pad;
    if (kw) {
      out << "from " << t.source << " on ";
      list(t.events);
      if (!t.guard.is_true()) out << " [" << t.guard.str() << "]";
      if (t.action) out << " do " << *t.action;
      out << " goto " << t.target << ";\n";
    } else {
      out << t.source << " - ";
      list(t.events);
      if (!t.guard.is_true()) out << " [" << t.guard.str() << "]";
      if (t.action) out << " / " << *t.action;
      out << " -> " << t.target << ";\n";
    }
  };
  auto scope = [&](auto&& self, const std::vector<StateNode>& states,
                   const std::vector<TransitionNode>& transitions,
                   int indent) -> void {
    std::string pad(indent * 2, ' ');
    for (const auto& s : states) {
      out << pad;
      if (s.is_initial) out << (kw ? "*" : "initial ");
      out << "state " << s.name;
      stereos(s.stereotypes);
      if (s.is_leaf()) {
        out << ";\n";
      } else {
        out << " {\n";
        self(self, s.children, s.transitions, indent + 1);
        out << pad << "}\n";
      }
    }
    for (const auto& t : transitions) transition(t, pad);
  };

  out << "statechart " << m.name;
  stereos(m.stereotypes);
  out << " {\n";
  if (!m.guard_vars.empty()) {
    out << "  vars ";
    list(m.guard_vars);
    out << ";\n";
  }
  if (!m.declared_events.empty()) {
    out << "  events ";
    list(m.declared_events);
    out << ";\n";
  }
  if (!m.declared_actions.empty()) {
    out << "  actions ";
    list(m.declared_actions);
    out << ";\n";
  }
  scope(scope, m.states, m.transitions, 1);
  out << "}\n";
  return {out.str(), notation};
}

using StatechartParserFn =
    std::function<ParseResult(const ConcreteText&, const VariantSelection&)>;
using StatechartUnparserFn =
    std::function<ConcreteText(const AbstractStatechart&, Notation)>;

inline const StatechartParserFn& default_parser() {
  static const StatechartParserFn kParse = [](const ConcreteText& t,
                                              const VariantSelection& s) {
    return parse(t, s);
  };
  return kParse;
}

inline const StatechartUnparserFn& default_unparser() {
  static const StatechartUnparserFn kUnparse =
      [](const AbstractStatechart& m, Notation n) { return unparse(m, n); };
  return kUnparse;
}

struct PresentationVerdict {
  bool pass = true;
  std::size_t checked = 0;         // texts that entered the comparison
  std::size_t skipped = 0;         // texts outside the compared domain
  std::map<Notation, std::size_t> per_notation;
  std::optional<ConcreteText> witness;
  std::string detail;
};

// On every text accepted by both the base and the variant parser, the two
// abstract trees agree. Texts rejected by either parser are skipped.
inline PresentationVerdict check_presentation_agreement(
    const std::vector<ConcreteText>& corpus, const VariantSelection& base,
    const VariantSelection& variant,
    const StatechartParserFn& variant_parser = default_parser(),
    const StatechartParserFn& base_parser = default_parser()) {
  PresentationVerdict v;
  for (const auto& text : corpus) {
    ParseResult pb = base_parser(text, base);
    ParseResult pv = variant_parser(text, variant);
    if (!pb || !pv) {
      ++v.skipped;
      continue;
    }
    ++v.checked;
    ++v.per_notation[text.syntax_variant];
    if (!structurally_equal(*pb.model, *pv.model)) {
      v.pass = false;
      v.witness = text;
      v.detail = "base and variant parse of model " + pb.model->name +
                 " differ";
      return v;
    }
  }
  return v;
}

// Every text accepted by the variant parser can be re-expressed in base
// notation: unparse in Arrow, re-parse with the base parser, and compare.
inline PresentationVerdict check_presentation_expressibility(
    const std::vector<ConcreteText>& corpus, const VariantSelection& base,
    const VariantSelection& variant,
    const StatechartParserFn& variant_parser = default_parser(),
    const StatechartParserFn& base_parser = default_parser(),
    const StatechartUnparserFn& unparser = default_unparser()) {
  PresentationVerdict v;
  for (const auto& text : corpus) {
    ParseResult pv = variant_parser(text, variant);
    if (!pv) {
      ++v.skipped;
      continue;
    }
    ++v.checked;
    ++v.per_notation[text.syntax_variant];
    ConcreteText rendered = unparser(*pv.model, Notation::Arrow);
    ParseResult pb = base_parser(rendered, base);
    if (!pb || !structurally_equal(*pb.model, *pv.model)) {
      v.pass = false;
      v.witness = text;
      v.detail = pb ? "re-parsed base rendering differs"
                    : "base parser rejects rendering: " +
                          pb.diagnostics.front().str();
      return v;
    }
  }
  return v;
}

namespace detail {

inline std::vector<std::string> token_texts(const std::string& source) {
  std::vector<std::string> out;
  for (const auto& t : text::tokenize(source)) {
    if (t.kind != text::TokenKind::End) out.push_back(t.text);
  }
  return out;
}

}  // namespace detail

// Two texts that differ as token sequences (whitespace and comments do not
// count) yet parse to structurally equal models.
inline std::optional<std::pair<ConcreteText, ConcreteText>>
exists_presentation_option(
    const std::vector<ConcreteText>& corpus, const VariantSelection& sel,
    const StatechartParserFn& parser = default_parser()) {
  if (!sel.enables(Notation::Keyword)) {
    throw Error("selection enables no presentation option");
  }
  std::vector<std::optional<AbstractStatechart>> parsed;
  std::vector<std::vector<std::string>> tokens;
  for (const auto& t : corpus) {
    ParseResult r = parser(t, sel);
    parsed.push_back(r.model);
    tokens.push_back(r ? detail::token_texts(t.source)
                       : std::vector<std::string>{});
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!parsed[i]) continue;
    for (std::size_t j = i + 1; j < corpus.size(); ++j) {
      if (!parsed[j] || tokens[i] == tokens[j]) continue;
      if (structurally_equal(*parsed[i], *parsed[j])) {
        return std::make_pair(corpus[i], corpus[j]);
      }
    }
  }
  return std::nullopt;
}

}  // namespace lvw
