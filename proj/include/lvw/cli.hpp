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

// Command-line driver. run() returns 0 on success or a passing check, 1 when a
// check fails, and 2 on usage, input or bounds errors.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lvw/analysis.hpp"
#include "lvw/ast.hpp"
#include "lvw/error.hpp"
#include "lvw/feature_model.hpp"
#include "lvw/reduction.hpp"
#include "lvw/semantics.hpp"
#include "lvw/syntax.hpp"
#include "lvw/system_model.hpp"

namespace lvw::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Files given directly plus every .sc file below the given directories, in
// path order.
inline std::vector<std::filesystem::path> collect_sc(
    const std::vector<std::string>& files,
    const std::vector<std::string>& dirs) {
  std::vector<std::filesystem::path> out(files.begin(), files.end());
  for (const auto& d : dirs) {
    if (!std::filesystem::is_directory(d)) throw Error("not a directory: " + d);
    std::vector<std::filesystem::path> found;
    for (const auto& e : std::filesystem::recursive_directory_iterator(d)) {
      if (e.is_regular_file() && e.path().extension() == ".sc") {
        found.push_back(e.path());
      }
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  if (out.empty()) throw Error("no statechart files given");
  return out;
}

inline AbstractStatechart load_model(const std::filesystem::path& p,
                                     const VariantSelection& sel) {
  ParseResult r = parse(make_text(read_file(p)), sel);
  if (!r) {
    std::string msg = p.generic_string() + ": rejected";
    for (const auto& d : r.diagnostics) msg += "\n  " + d.str();
    throw Error(msg);
  }
  return *r.model;
}

inline std::vector<FlatAutomaton> load_flat_corpus(
    const std::vector<std::string>& files,
    const std::vector<std::string>& dirs) {
  std::vector<FlatAutomaton> out;
  for (const auto& p : collect_sc(files, dirs)) {
    out.push_back(reduce(load_model(p, VariantSelection::permissive()),
                         Priority::InnerFirst));
  }
  return out;
}

inline FeatureModel load_fm(const std::string& path, const std::string& builtin) {
  if (!path.empty()) return parse_fm(read_file(path));
  if (builtin == "SystemModel") return parse_fm(kSystemModelFm);
  if (builtin.empty() || builtin == "StatechartLang") {
    return parse_fm(kStatechartLanguageFm);
  }
  throw UnknownIdError("unknown built-in feature model '" + builtin + "'");
}

inline VariantSelection syntax_selection(const std::string& select,
                                         const FeatureModel& fm) {
  if (select.empty()) return VariantSelection::permissive();
  auto features = split_list(select);
  ConfigResult r = validate_config(fm, {features.begin(), features.end()});
  if (!r.ok()) {
    std::string msg = "invalid selection:";
    for (const auto& v : r.violations) msg += "\n  " + v;
    throw Error(msg);
  }
  return *r.selection;
}

inline MappingSelection full_selection(const std::string& s) {
  MappingSelection sel = parse_mapping_selection(s);
  if (!sel.fully_set()) {
    throw Error("selection '" + s + "' must fix both unmatched and realization");
  }
  return sel;
}

inline std::string stem_part(std::string s) {
  std::replace(s.begin(), s.end(), ',', '-');
  return s;
}

inline SystemModelBounds parse_sm_bounds(const std::string& s) {
  SystemModelBounds b;
  if (s == "default") return b;
  auto parts = split_list(s);
  auto num = [&](const std::string& v) -> std::size_t {
    try {
      std::size_t used = 0;
      auto n = std::stoul(v, &used);
      if (used == v.size()) return n;
    } catch (const std::exception&) {
    }
    throw Error("bad bound '" + v + "'");
  };
  if (parts.size() == 1) {
    std::size_t n = num(parts[0]);
    return {n, n, n, n, n};
  }
  if (parts.size() != 5) {
    throw Error("--bounds takes 'default', N, or classes,ops,types,params,values");
  }
  return {num(parts[0]), num(parts[1]), num(parts[2]), num(parts[3]),
          num(parts[4])};
}

struct MachineOpts {
  std::size_t max_states = 2;
  std::string tags;
  std::size_t jobs = 1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-states", max_states, "machine state bound (1..2)");
    cmd->add_option("--tags", tags, "realization tags, e.g. enum,other");
    cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }

  MachineBounds bounds() const {
    MachineBounds b;
    b.max_states = max_states;
    b.jobs = jobs;
    if (!tags.empty()) {
      b.tags.clear();
      for (const auto& t : split_list(tags)) b.tags.push_back(parse_tag(t));
    }
    return b;
  }
};

inline int emit_report(AnalysisReport& r, const std::string& dir,
                       const std::string& stem, std::ostream& out) {
  out << r.to_text();
  out << "report: " << write_report(r, dir, stem) << "\n";
  return r.pass ? kExitPass : kExitFail;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  using namespace detail;
  CLI::App app{"Language variability workbench for statechart variants"};
  app.name("lvw");
  app.require_subcommand(1);
  std::string reports = "reports";
  app.add_option("--reports", reports, "directory for evidence reports");

  std::function<int()> action;

  // parse
  std::string file, select, fm_path, fm_builtin, emit = "none";
  auto* cmd_parse = app.add_subcommand("parse", "parse and check a statechart");
  cmd_parse->add_option("file", file)->required();
  cmd_parse->add_option("--select", select, "feature selection (comma list)");
  cmd_parse->add_option("--fm", fm_path, "feature model file");
  cmd_parse->add_option("--emit", emit, "print the model: none, arrow, keyword")
      ->check(CLI::IsMember({"none", "arrow", "keyword"}));
  cmd_parse->callback([&] {
    action = [&] {
      auto sel = syntax_selection(select, load_fm(fm_path, ""));
      ParseResult r = parse(make_text(read_file(file)), sel);
      if (!r) {
        for (const auto& d : r.diagnostics) err << file << ":" << d.str() << "\n";
        return kExitError;
      }
      out << "ok " << r.model->name << ": " << transition_count(*r.model)
          << " transitions\n";
      if (emit != "none") {
        out << unparse(*r.model, emit == "arrow" ? Notation::Arrow
                                                 : Notation::Keyword)
                   .source;
      }
      return kExitPass;
    };
  });

  // reduce
  std::string priority = "inner", notation = "arrow";
  auto* cmd_reduce = app.add_subcommand("reduce", "flatten to a reduced model");
  cmd_reduce->add_option("file", file)->required();
  cmd_reduce->add_option("--priority", priority, "inner or outer")
      ->check(CLI::IsMember({"inner", "outer"}));
  cmd_reduce->add_option("--notation", notation, "arrow or keyword")
      ->check(CLI::IsMember({"arrow", "keyword"}));
  cmd_reduce->callback([&] {
    action = [&] {
      auto m = load_model(file, VariantSelection::permissive());
      auto flat = reduce(m, parse_priority(priority));
      out << unparse(to_statechart(flat), notation == "arrow" ? Notation::Arrow
                                                              : Notation::Keyword)
                 .source;
      return kExitPass;
    };
  });

  // config validate
  auto* cmd_config = app.add_subcommand("config", "feature configurations");
  cmd_config->require_subcommand(1);
  auto* cmd_validate = cmd_config->add_subcommand("validate", "validate a selection");
  cmd_validate->add_option("--fm", fm_path, "feature model file");
  cmd_validate->add_option("--builtin", fm_builtin,
                           "StatechartLang or SystemModel");
  cmd_validate->add_option("--select", select, "feature selection (comma list)");
  cmd_validate->callback([&] {
    action = [&] {
      auto fm = load_fm(fm_path, fm_builtin);
      auto features = split_list(select);
      ConfigResult r = validate_config(fm, {features.begin(), features.end()});
      if (r.ok()) {
        out << "valid\n";
        return kExitPass;
      }
      for (const auto& v : r.violations) out << "violation: " << v << "\n";
      return kExitFail;
    };
  });

  // sem
  MachineOpts mopts;
  bool inner = false, list = false;
  std::string mapping;
  auto* cmd_sem = app.add_subcommand("sem", "enumerate bounded semantics");
  cmd_sem->add_option("file", file)->required();
  cmd_sem->add_option("--select", mapping, "unmatched,realization");
  cmd_sem->add_flag("--inner", inner,
                    "union over every completion of the selection");
  cmd_sem->add_flag("--list", list, "print every machine");
  mopts.add_to(cmd_sem);
  cmd_sem->callback([&] {
    action = [&] {
      auto flat = reduce(load_model(file, VariantSelection::permissive()),
                         Priority::InnerFirst);
      MachineSet set;
      if (inner) {
        MappingSelection partial;
        if (!mapping.empty()) partial = parse_mapping_selection(mapping);
        ConformanceChecker checker(flat);
        std::vector<MappingSelection> completions;
        for (const auto& s : fully_set_selections()) {
          if ((partial.unmatched == Unmatched::Unset ||
               partial.unmatched == s.unmatched) &&
              (partial.realization == Realization::Unset ||
               partial.realization == s.realization)) {
            completions.push_back(s);
          }
        }
        for (auto& s : enumerate_machines(checker, mopts.bounds())
                           .filter([&](const Machine& x) {
                             for (const auto& c : completions) {
                               if (checker.conforms(x, c)) return true;
                             }
                             return false;
                           })) {
          set.insert(std::move(s));
        }
      } else {
        if (mapping.empty()) throw Error("sem needs --select or --inner");
        set = sem_bounded(flat, full_selection(mapping), mopts.bounds());
      }
      out << "model: " << flat.name << "\n";
      out << "bounds: " << mopts.bounds().str() << "\n";
      out << "machines: " << set.size() << "\n";
      if (list) {
        for (const auto& s : set) out << s.str() << "\n";
      }
      return kExitPass;
    };
  });

  // refine
  std::string v1, v2, property;
  std::vector<std::string> files, corpus_dirs;
  auto* cmd_refine =
      app.add_subcommand("refine", "check that v2 refines v1 on a corpus");
  cmd_refine->add_option("--v1", v1, "refined-from selection")->required();
  cmd_refine->add_option("--v2", v2, "refining selection")->required();
  cmd_refine->add_option("--corpus", corpus_dirs, "directory of .sc files");
  cmd_refine->add_option("files", files, ".sc files");
  cmd_refine->add_option("--property", property,
                         "also check preservation of this property");
  mopts.add_to(cmd_refine);
  cmd_refine->callback([&] {
    action = [&] {
      auto sel1 = full_selection(v1), sel2 = full_selection(v2);
      auto corpus = load_flat_corpus(files, corpus_dirs);
      auto r = check_language_refinement(sel1, sel2, corpus, mopts.bounds());
      int code = emit_report(
          r, reports, "refine_" + stem_part(v1) + "_to_" + stem_part(v2), out);
      if (code != kExitPass || property.empty()) return code;
      for (const auto& m : corpus) {
        auto p = check_property_preservation(property, m, sel1, sel2,
                                             mopts.bounds(), r);
        code = std::max(code, emit_report(p, reports,
                                          "preserve_" + property + "_" + m.name +
                                              "_" + stem_part(v1) + "_to_" +
                                              stem_part(v2),
                                          out));
      }
      return code;
    };
  });

  // invariant
  std::string vp, base = "stutter,open";
  auto* cmd_inv = app.add_subcommand(
      "invariant", "check a property across the variants of a variation point");
  cmd_inv->add_option("--property", property)->required();
  cmd_inv->add_option("--vp", vp, "UnmatchedEvent or StateRealization")
      ->required();
  cmd_inv->add_option("--base", base, "selection fixing the other point");
  cmd_inv->add_option("--corpus", corpus_dirs, "directory of .sc files");
  cmd_inv->add_option("files", files, ".sc files");
  mopts.add_to(cmd_inv);
  cmd_inv->callback([&] {
    action = [&] {
      auto corpus = load_flat_corpus(files, corpus_dirs);
      auto res = check_invariant_property(property, vp, corpus,
                                          parse_mapping_selection(base),
                                          mopts.bounds());
      return emit_report(res.report, reports,
                         "invariant_" + property + "_" + vp, out);
    };
  });

  // express
  std::string constraint_id;
  FlatModelBounds model_bounds;
  std::string express_mapping = "stutter,open";
  auto* cmd_express = app.add_subcommand(
      "express", "compare a constrained sublanguage with the flat language");
  cmd_express->add_option("--constraint", constraint_id)->required();
  cmd_express->add_option("--mapping", express_mapping,
                           "unmatched,realization");
  cmd_express->add_option("--model-states", model_bounds.max_states,
                          "state bound of enumerated models (1..2)");
  mopts.add_to(cmd_express);
  cmd_express->callback([&] {
    action = [&] {
      auto r = check_expressiveness_preservation(
          constraint_id, model_bounds, mopts.bounds(),
          full_selection(express_mapping));
      return emit_report(r, reports,
                         "express_" + constraint_id + "_" +
                             stem_part(express_mapping),
                         out);
    };
  });

  // presopt
  auto* cmd_presopt = app.add_subcommand(
      "presopt", "check the keyword notation against the arrow base");
  cmd_presopt->add_option("--corpus", corpus_dirs, "directory of .sc files");
  cmd_presopt->add_option("files", files, ".sc files");
  cmd_presopt->callback([&] {
    action = [&] {
      std::vector<ConcreteText> texts;
      for (const auto& p : collect_sc(files, corpus_dirs)) {
        texts.push_back(make_text(read_file(p)));
      }
      VariantSelection base_sel = VariantSelection::permissive();
      base_sel.presentation.clear();
      VariantSelection variant = VariantSelection::permissive();
      auto agree = check_presentation_agreement(texts, base_sel, variant);
      auto expr = check_presentation_expressibility(texts, base_sel, variant);
      auto option = exists_presentation_option(texts, variant);
      auto show = [&](const char* what, const PresentationVerdict& v) {
        out << what << ": " << (v.pass ? "PASS" : "FAIL") << " checked "
            << v.checked << " skipped " << v.skipped << "\n";
        if (!v.pass) out << "  " << v.detail << "\n";
      };
      show("agreement", agree);
      show("expressibility", expr);
      if (option) {
        out << "presentation option: " << one_line(option->first.source)
            << " <=> " << one_line(option->second.source) << "\n";
      } else {
        out << "presentation option: none\n";
      }
      return agree.pass && expr.pass && option ? kExitPass : kExitFail;
    };
  });

  // sysmodel
  bool sub_reflexive = false;
  std::string strong, weak, bounds_text = "default";
  auto* cmd_sm = app.add_subcommand("sysmodel", "mini system models");
  cmd_sm->require_subcommand(1);
  auto reading = [&] {
    return sub_reflexive ? SubReading::Reflexive : SubReading::Irreflexive;
  };
  auto* cmd_sm_check = cmd_sm->add_subcommand("check", "evaluate a property");
  cmd_sm_check->add_option("file", file)->required();
  cmd_sm_check->add_option("--property", property)->required();
  cmd_sm_check->add_flag("--sub-reflexive", sub_reflexive);
  cmd_sm_check->callback([&] {
    action = [&] {
      auto sm = parse_sm(read_file(file));
      bool holds = domain_property(property).holds(sm, reading());
      out << property << "(" << sm.name << "): " << (holds ? "holds" : "fails")
          << "\n";
      return holds ? kExitPass : kExitFail;
    };
  });
  auto* cmd_sm_refine = cmd_sm->add_subcommand(
      "refine", "check that strong implies weak on every bounded model");
  cmd_sm_refine->add_option("--strong", strong)->required();
  cmd_sm_refine->add_option("--weak", weak)->required();
  cmd_sm_refine->add_option("--bounds", bounds_text,
                            "'default', N, or classes,ops,types,params,values");
  cmd_sm_refine->add_flag("--sub-reflexive", sub_reflexive);
  cmd_sm_refine->callback([&] {
    action = [&] {
      auto b = parse_sm_bounds(bounds_text);
      auto v = check_domain_refinement(strong, weak, b, reading());
      AnalysisReport r;
      r.check = "domain-refinement";
      r.pass = v.pass;
      r.params = {{"strong", strong},
                  {"weak", weak},
                  {"sub", sub_reflexive ? "reflexive" : "irreflexive"}};
      r.bounds = b.str();
      r.models_checked = v.models_checked;
      r.universe_size = system_model_space(b);
      r.violations = v.counterexamples;
      if (v.first_counterexample) {
        r.counterexample = Counterexample{v.first_counterexample->name,
                                          one_line(to_smx(*v.first_counterexample)),
                                          ""};
      }
      return emit_report(r, reports,
                         "sysmodel_refine_" + strong + "_to_" + weak, out);
    };
  });
  auto* cmd_sm_enum =
      cmd_sm->add_subcommand("enumerate", "count bounded system models");
  cmd_sm_enum->add_option("--bounds", bounds_text);
  cmd_sm_enum->callback([&] {
    action = [&] {
      auto b = parse_sm_bounds(bounds_text);
      std::uint64_t n = enumerate_system_models(b, [](const MiniSystemModel&) {});
      out << "bounds: " << b.str() << "\nmodels: " << n << "\n";
      return kExitPass;
    };
  });

  // featmodel
  std::string format = "dot", from, to, evidence, output;
  auto* cmd_fm = app.add_subcommand("featmodel", "feature model files");
  cmd_fm->require_subcommand(1);
  auto* cmd_fm_export = cmd_fm->add_subcommand("export", "print a feature model");
  cmd_fm_export->add_option("--fm", fm_path, "feature model file");
  cmd_fm_export->add_option("--builtin", fm_builtin,
                            "StatechartLang or SystemModel");
  cmd_fm_export->add_option("--format", format, "dot or fm")
      ->check(CLI::IsMember({"dot", "fm"}));
  cmd_fm_export->callback([&] {
    action = [&] {
      auto fm = load_fm(fm_path, fm_builtin);
      out << (format == "dot" ? export_dot(fm) : export_fm(fm));
      return kExitPass;
    };
  });
  auto* cmd_fm_add = cmd_fm->add_subcommand(
      "add-refines", "record a refines edge backed by a passing report");
  cmd_fm_add->add_option("--fm", fm_path, "feature model file");
  cmd_fm_add->add_option("--builtin", fm_builtin,
                         "StatechartLang or SystemModel");
  cmd_fm_add->add_option("--from", from)->required();
  cmd_fm_add->add_option("--to", to)->required();
  cmd_fm_add->add_option("--evidence", evidence, "report file")->required();
  cmd_fm_add->add_option("-o,--output", output, "write the result here");
  cmd_fm_add->callback([&] {
    action = [&] {
      std::string text = read_file(evidence);
      if (text.find("verdict: PASS\n") == std::string::npos) {
        throw Error("evidence " + evidence + " is not a passing report");
      }
      auto fm = add_refinement_edge(load_fm(fm_path, fm_builtin), from, to,
                                    evidence);
      std::string rendered = export_fm(fm);
      if (output.empty()) {
        out << rendered;
      } else {
        std::ofstream f(output, std::ios::binary);
        if (!f) throw Error("cannot write " + output);
        f << rendered;
        out << "wrote " << output << "\n";
      }
      return kExitPass;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitError;
  }
  try {
    return action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

inline int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace lvw::cli
