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

// A finite fragment of the object system model: classes with a subclass
// relation, operations with parameter sets and result types, and types with
// carrier sets. Hosts the semantic-domain variation points on type-safe
// overriding and the bounded enumeration that checks implications between
// them.
//
// File format (".smx"):
//
//   systemmodel NAME {
//     classes A, B;
//     sub B < A;
//     type T1 = { v1, v2 };
//     op A.foo params {p1} : T1;
//     op B.foo params {p1, p2} : T1;
//   }

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvw/error.hpp"
#include "lvw/lexer.hpp"

namespace lvw {

struct Operation {
  std::string owner;  // classOf
  std::string name;   // nameOf
  std::set<std::string> params;
  std::string result;  // resType

  friend bool operator==(const Operation&, const Operation&) = default;
};

// Whether the closure of the stored subclass pairs also relates every class to
// itself.
enum class SubReading { Irreflexive, Reflexive };

struct MiniSystemModel {
  std::string name;
  std::vector<std::string> classes;
  // Stored (subclass, superclass) pairs; irreflexive and acyclic.
  std::vector<std::pair<std::string, std::string>> sub;
  std::vector<std::string> types;
  std::map<std::string, std::set<std::string>> car;
  std::vector<Operation> ops;

  // Transitive closure of `sub`, plus the diagonal under the reflexive
  // reading.
  std::set<std::pair<std::string, std::string>> sub_closure(
      SubReading reading = SubReading::Irreflexive) const {
    std::set<std::pair<std::string, std::string>> r(sub.begin(), sub.end());
    for (bool grew = true; grew;) {
      grew = false;
      for (const auto& [a, b] : std::vector(r.begin(), r.end())) {
        for (const auto& [c, d] : std::vector(r.begin(), r.end())) {
          if (b == c && r.emplace(a, d).second) grew = true;
        }
      }
    }
    if (reading == SubReading::Reflexive) {
      for (const auto& c : classes) r.emplace(c, c);
    }
    return r;
  }

  friend bool operator==(const MiniSystemModel&,
                         const MiniSystemModel&) = default;
};

// Throws Error on: duplicate class or type names, references to undeclared
// classes or types, reflexive or cyclic subclass pairs.
inline void validate(const MiniSystemModel& sm) {
  std::set<std::string> classes;
  for (const auto& c : sm.classes) {
    if (!classes.insert(c).second) throw Error("duplicate class " + c);
  }
  std::set<std::string> types;
  for (const auto& t : sm.types) {
    if (!types.insert(t).second) throw Error("duplicate type " + t);
    if (!sm.car.count(t)) throw Error("type " + t + " has no carrier");
  }
  for (const auto& [t, vals] : sm.car) {
    if (!types.count(t)) throw Error("carrier for undeclared type " + t);
  }
  for (const auto& [a, b] : sm.sub) {
    if (!classes.count(a) || !classes.count(b)) {
      throw Error("sub " + a + " < " + b + " references an undeclared class");
    }
    if (a == b) throw Error("reflexive sub pair " + a + " < " + b);
  }
  for (const auto& [a, b] : sm.sub_closure()) {
    if (a == b) throw Error("cyclic subclass relation through " + a);
  }
  for (const auto& op : sm.ops) {
    if (!classes.count(op.owner)) {
      throw Error("operation " + op.name + " belongs to undeclared class " +
                  op.owner);
    }
    if (!types.count(op.result)) {
      throw Error("operation " + op.owner + "." + op.name +
                  " has undeclared result type " + op.result);
    }
  }
}

namespace detail {

// For every operation op1 and every class c below classOf(op1) there is an
// operation op2 of c with the same name whose signature relates to op1's as
// `compatible` demands.
template <class Compatible>
bool overriding_holds(const MiniSystemModel& sm, SubReading reading,
                      Compatible&& compatible) {
  const auto closure = sm.sub_closure(reading);
  for (const auto& op1 : sm.ops) {
    for (const auto& c : sm.classes) {
      if (!closure.count({c, op1.owner})) continue;
      bool found = std::any_of(sm.ops.begin(), sm.ops.end(),
                               [&](const Operation& op2) {
                                 return op2.owner == c && op2.name == op1.name &&
                                        compatible(op1, op2);
                               });
      if (!found) return false;
    }
  }
  return true;
}

inline bool subset(const std::set<std::string>& a,
                   const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

// Co-variant parameter extension and contra-variant result restriction.
inline bool valid_type_safe_ops(const MiniSystemModel& sm,
                                SubReading reading = SubReading::Irreflexive) {
  return detail::overriding_holds(
      sm, reading, [&](const Operation& op1, const Operation& op2) {
        return detail::subset(op1.params, op2.params) &&
               detail::subset(sm.car.at(op2.result), sm.car.at(op1.result));
      });
}

// Overriding operations keep parameters and result carriers unchanged.
inline bool valid_type_safe_ops_strict(
    const MiniSystemModel& sm, SubReading reading = SubReading::Irreflexive) {
  return detail::overriding_holds(
      sm, reading, [&](const Operation& op1, const Operation& op2) {
        return op1.params == op2.params &&
               sm.car.at(op1.result) == sm.car.at(op2.result);
      });
}

// At most one direct superclass per class among the stored pairs.
inline bool single_inheritance(const MiniSystemModel& sm,
                               SubReading = SubReading::Irreflexive) {
  std::map<std::string, int> supers;
  for (const auto& [a, b] : sm.sub) {
    if (++supers[a] > 1) return false;
  }
  return true;
}

struct DomainPropertyDef {
  std::string_view id;
  bool (*holds)(const MiniSystemModel&, SubReading);
};

inline const std::vector<DomainPropertyDef>& domain_properties() {
  static const std::vector<DomainPropertyDef> kProps = {
      {"TypeSafeOps", valid_type_safe_ops},
      {"TypeSafeOpsStrict", valid_type_safe_ops_strict},
      {"SingleInheritance", single_inheritance},
  };
  return kProps;
}

inline const DomainPropertyDef& domain_property(std::string_view id) {
  for (const auto& p : domain_properties()) {
    if (p.id == id) return p;
  }
  throw UnknownIdError("unknown system-model property '" + std::string(id) +
                       "'");
}

struct SystemModelBounds {
  std::size_t max_classes = 2;
  std::size_t max_ops = 2;
  std::size_t max_types = 2;
  std::size_t max_param_tokens = 2;
  std::size_t max_value_tokens = 2;

  static constexpr std::size_t kCap = 2;

  std::string str() const {
    std::ostringstream out;
    out << "classes<=" << max_classes << " ops<=" << max_ops
        << " types<=" << max_types << " params<=" << max_param_tokens
        << " values<=" << max_value_tokens;
    return out.str();
  }
};

namespace detail {

inline std::string pool_name(std::string_view prefix, std::size_t i) {
  return std::string(prefix) + std::to_string(i + 1);
}

inline std::string class_name(std::size_t i) {
  return std::string(1, static_cast<char>('A' + i));
}

inline std::string op_name(std::size_t i) {
  static constexpr std::string_view kNames[] = {"foo", "bar", "baz", "qux"};
  return i < 4 ? std::string(kNames[i]) : pool_name("op", i);
}

inline std::set<std::string> subset_of_pool(std::string_view prefix,
                                            std::uint64_t mask) {
  std::set<std::string> out;
  for (std::size_t i = 0; mask >> i; ++i) {
    if ((mask >> i) & 1u) out.insert(pool_name(prefix, i));
  }
  return out;
}

inline std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Irreflexive, acyclic relations over n classes, as pair lists, ordered by
// bitmask over the ordered pair list.
inline std::vector<std::vector<std::pair<std::string, std::string>>>
acyclic_sub_relations(std::size_t n) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) pairs.emplace_back(class_name(i), class_name(j));
    }
  }
  std::vector<std::vector<std::pair<std::string, std::string>>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size());
       ++mask) {
    MiniSystemModel probe;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if ((mask >> k) & 1u) probe.sub.push_back(pairs[k]);
    }
    auto closure = probe.sub_closure();
    bool cyclic = std::any_of(closure.begin(), closure.end(),
                              [](const auto& p) { return p.first == p.second; });
    if (!cyclic) out.push_back(std::move(probe.sub));
  }
  return out;
}

}  // namespace detail

// Number of labeled models within bounds, by closed formula.
inline std::uint64_t system_model_space(const SystemModelBounds& b) {
  using detail::ipow;
  std::uint64_t total = 0;
  for (std::size_t c = 1; c <= b.max_classes; ++c) {
    std::uint64_t subs = detail::acyclic_sub_relations(c).size();
    for (std::size_t t = 1; t <= b.max_types; ++t) {
      std::uint64_t cars = ipow(ipow(2, b.max_value_tokens), t);
      for (std::size_t o = 1; o <= b.max_ops; ++o) {
        std::uint64_t per_op = c * o * ipow(2, b.max_param_tokens) * t;
        total += subs * cars * ipow(per_op, o);
      }
    }
  }
  return total;
}

// Calls `fn` on every labeled model within bounds: 1..max classes (A, B, ...)
// under every irreflexive acyclic sub relation, 1..max types (T1, ...) with
// every carrier over {v1, ...}, and 1..max operations, each with an owner, a
// name from {foo, bar, ...} (as many names as operations), a parameter subset
// of {p1, ...} and a result type. Returns the number of models visited.
template <class Fn>
std::uint64_t enumerate_system_models(const SystemModelBounds& b, Fn&& fn) {
  const std::size_t bounds[] = {b.max_classes, b.max_ops, b.max_types,
                                b.max_param_tokens, b.max_value_tokens};
  for (std::size_t v : bounds) {
    if (v < 1 || v > SystemModelBounds::kCap) {
      throw BoundsError("system-model bounds " + b.str() +
                        " outside 1.." +
                        std::to_string(SystemModelBounds::kCap) +
                        "; state space would hold " +
                        std::to_string(system_model_space(b)) +
                        " labeled models");
    }
  }
  using detail::ipow;
  std::uint64_t count = 0;
  const std::uint64_t param_masks = ipow(2, b.max_param_tokens);
  const std::uint64_t value_masks = ipow(2, b.max_value_tokens);
  for (std::size_t c = 1; c <= b.max_classes; ++c) {
    const auto subs = detail::acyclic_sub_relations(c);
    for (std::size_t t = 1; t <= b.max_types; ++t) {
      for (std::size_t o = 1; o <= b.max_ops; ++o) {
        const std::uint64_t per_op = c * o * param_masks * t;
        for (const auto& sub : subs) {
          for (std::uint64_t cars = 0; cars < ipow(value_masks, t); ++cars) {
            for (std::uint64_t opc = 0; opc < ipow(per_op, o); ++opc) {
              MiniSystemModel sm;
              sm.name = "sm" + std::to_string(count + 1);
              for (std::size_t i = 0; i < c; ++i) {
                sm.classes.push_back(detail::class_name(i));
              }
              sm.sub = sub;
              std::uint64_t rest = cars;
              for (std::size_t i = 0; i < t; ++i) {
                std::string ty = detail::pool_name("T", i);
                sm.types.push_back(ty);
                sm.car[ty] = detail::subset_of_pool("v", rest % value_masks);
                rest /= value_masks;
              }
              rest = opc;
              for (std::size_t i = 0; i < o; ++i) {
                std::uint64_t digit = rest % per_op;
                rest /= per_op;
                Operation op;
                op.owner = detail::class_name(digit % c);
                digit /= c;
                op.name = detail::op_name(digit % o);
                digit /= o;
                op.params = detail::subset_of_pool("p", digit % param_masks);
                digit /= param_masks;
                op.result = detail::pool_name("T", digit);
                sm.ops.push_back(std::move(op));
              }
              ++count;
              fn(sm);
            }
          }
        }
      }
    }
  }
  return count;
}

struct DomainRefinementVerdict {
  bool pass = true;
  std::uint64_t models_checked = 0;
  std::uint64_t counterexamples = 0;
  std::optional<MiniSystemModel> first_counterexample;
};

// strong(sm) implies weak(sm) on every enumerated model.
inline DomainRefinementVerdict check_domain_refinement(
    std::string_view strong, std::string_view weak,
    const SystemModelBounds& bounds,
    SubReading reading = SubReading::Irreflexive) {
  const auto& s = domain_property(strong);
  const auto& w = domain_property(weak);
  DomainRefinementVerdict v;
  v.models_checked = enumerate_system_models(bounds, [&](const MiniSystemModel& sm) {
    if (s.holds(sm, reading) && !w.holds(sm, reading)) {
      ++v.counterexamples;
      if (!v.first_counterexample) v.first_counterexample = sm;
    }
  });
  v.pass = v.counterexamples == 0;
  return v;
}

inline MiniSystemModel parse_sm(std::string_view src) {
  text::Cursor cur(text::tokenize(src));
  MiniSystemModel sm;
  cur.expect("systemmodel");
  sm.name = cur.expect_ident("model name").text;
  cur.expect("{");
  auto ident_set = [&]() {
    std::set<std::string> out;
    cur.expect("{");
    if (!cur.accept("}")) {
      do {
        out.insert(cur.expect_ident().text);
      } while (cur.accept(","));
      cur.expect("}");
    }
    return out;
  };
  while (!cur.accept("}")) {
    const auto& at = cur.peek();
    try {
      if (cur.accept("classes")) {
        do {
          sm.classes.push_back(cur.expect_ident("class name").text);
        } while (cur.accept(","));
      } else if (cur.accept("sub")) {
        std::string a = cur.expect_ident("class name").text;
        cur.expect("<");
        std::string b = cur.expect_ident("class name").text;
        if (a == b) throw Error("reflexive sub pair " + a + " < " + b);
        sm.sub.emplace_back(a, b);
      } else if (cur.accept("type")) {
        std::string t = cur.expect_ident("type name").text;
        cur.expect("=");
        sm.types.push_back(t);
        if (!sm.car.emplace(t, ident_set()).second) {
          throw Error("duplicate type " + t);
        }
      } else if (cur.accept("op")) {
        Operation op;
        op.owner = cur.expect_ident("class name").text;
        cur.expect(".");
        op.name = cur.expect_ident("operation name").text;
        cur.expect("params");
        op.params = ident_set();
        cur.expect(":");
        op.result = cur.expect_ident("type name").text;
        sm.ops.push_back(std::move(op));
      } else {
        text::Cursor::fail(at, "expected 'classes', 'sub', 'type' or 'op'");
      }
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      throw SyntaxError(at.line, at.column, e.what());
    }
    cur.expect(";");
  }
  if (!cur.at_end()) text::Cursor::fail(cur.peek(), "expected end of input");
  validate(sm);
  return sm;
}

inline std::string to_smx(const MiniSystemModel& sm) {
  std::ostringstream out;
  auto set = [&](const std::set<std::string>& xs) {
    out << "{";
    bool first = true;
    for (const auto& x : xs) {
      out << (first ? "" : ", ") << x;
      first = false;
    }
    out << "}";
  };
  out << "systemmodel " << sm.name << " {\n";
  out << "  classes ";
  for (std::size_t i = 0; i < sm.classes.size(); ++i) {
    out << (i ? ", " : "") << sm.classes[i];
  }
  out << ";\n";
  for (const auto& [a, b] : sm.sub) out << "  sub " << a << " < " << b << ";\n";
  for (const auto& t : sm.types) {
    out << "  type " << t << " = ";
    set(sm.car.at(t));
    out << ";\n";
  }
  for (const auto& op : sm.ops) {
    out << "  op " << op.owner << "." << op.name << " params ";
    set(op.params);
    out << " : " << op.result << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace lvw
