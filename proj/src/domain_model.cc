// Copyright 2026 The UAST Harness Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uast/domain_model.h"

#include <cctype>
#include <set>

#include "uast/error.h"
#include "uast/text.h"

namespace uast {

namespace {

constexpr std::string_view kStereotypes[] = {
    "UAV",           "Attitude",      "LocationLocal", "LocationGlobal",
    "LocationGlobalRelative", "RangeFinder", "Velocity", "Battery",
    "Engine",        "Accelerometer", "Gyroscope",     "Barometer",
    "Magnetometer",  "GPS",
};

constexpr std::string_view kTupleQuantities[] = {
    "altitude", "airspeed", "groundspeed", "roll",     "pitch",
    "yaw",      "heading",  "battery",     "distance",
};

std::string DefaultRole(const std::string& class_name) {
  std::string role = class_name;
  role[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(role[0])));
  return role;
}

std::vector<std::string> SplitBar(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = s.find('|', start);
    out.emplace_back(s.substr(start, bar == std::string_view::npos
                                         ? std::string_view::npos
                                         : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

}  // namespace

bool IsStructuralStereotype(std::string_view name) {
  for (auto s : kStereotypes) {
    if (s == name) return true;
  }
  return false;
}

std::string_view TupleQuantity(int k) { return kTupleQuantities[k - 1]; }

DomainSchema::DomainSchema(std::vector<ClassDef> classes)
    : classes_(std::move(classes)) {
  for (auto& c : classes_) {
    for (auto& f : c.fields) {
      f.path = c.role.empty() ? f.name : c.role + "." + f.name;
      if (by_path_.count(f.path)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "duplicate field path '" + f.path + "'");
      }
      by_path_[f.path] = fields_.size();
      fields_.push_back(f);
      if (f.tuple_slot != 0) {
        if (tuple_[f.tuple_slot - 1]) {
          throw Error(ErrorCode::kInvalidArgument,
                      "tuple slot s" + std::to_string(f.tuple_slot) +
                          " is assigned twice");
        }
        tuple_[f.tuple_slot - 1] = fields_.size() - 1;
      }
      for (std::size_t i = 0; i < f.enum_values.size(); ++i) {
        auto [it, inserted] =
            enum_codes_.emplace(f.enum_values[i], static_cast<double>(i));
        if (!inserted && it->second != static_cast<double>(i)) {
          throw Error(ErrorCode::kInvalidArgument,
                      "enumeration literal '" + f.enum_values[i] +
                          "' has conflicting codes");
        }
      }
    }
  }
}

std::optional<std::size_t> DomainSchema::FindSlot(std::string_view path) const {
  auto it = by_path_.find(path);
  if (it == by_path_.end()) return std::nullopt;
  return it->second;
}

std::size_t DomainSchema::SlotOf(std::string_view path) const {
  auto slot = FindSlot(path);
  if (!slot) {
    throw Error(ErrorCode::kNotFound,
                "unknown field path '" + std::string(path) + "'");
  }
  return *slot;
}

bool DomainSchema::IsContext(std::string_view name) const {
  for (const auto& c : classes_) {
    if (c.name == name) return true;
    if (c.role.empty() && c.stereotype == name) return true;
  }
  return false;
}

std::optional<double> DomainSchema::EnumCode(std::string_view literal) const {
  auto it = enum_codes_.find(literal);
  if (it == enum_codes_.end()) return std::nullopt;
  return it->second;
}

DomainSchema ParseDomainSchema(std::string_view text) {
  std::vector<ClassDef> classes;
  std::set<std::string> class_names;
  std::set<std::string> roles;
  bool have_root = false;
  int line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    auto tokens = Tokenize(StripComment(raw, "#"));
    if (tokens.empty()) continue;
    auto fail = [&](int column, const std::string& msg) {
      throw ParseError(line_no, column, msg);
    };
    std::string_view kw = tokens[0].text;
    if (kw == "class") {
      if (tokens.size() < 2) fail(0, "expected class name");
      ClassDef c;
      c.name = std::string(tokens[1].text);
      if (!IsIdentifier(c.name) || c.name.find('.') != std::string::npos) {
        fail(tokens[1].column, "invalid class name '" + c.name + "'");
      }
      std::optional<std::string> role;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        std::string_view a = tokens[i].text;
        if (a.rfind("stereotype=", 0) == 0) {
          c.stereotype = std::string(a.substr(11));
          if (!IsStructuralStereotype(c.stereotype)) {
            fail(tokens[i].column + 11,
                 "unknown stereotype '" + c.stereotype + "'");
          }
        } else if (a.rfind("role=", 0) == 0) {
          role = std::string(a.substr(5));
          if (!IsIdentifier(*role) || role->find('.') != std::string::npos) {
            fail(tokens[i].column + 5, "invalid role '" + *role + "'");
          }
        } else {
          fail(tokens[i].column,
               "unexpected attribute '" + std::string(a) + "'");
        }
      }
      if (c.stereotype.empty()) fail(0, "class '" + c.name + "' has no stereotype");
      if (!class_names.insert(c.name).second) {
        fail(tokens[1].column, "duplicate class '" + c.name + "'");
      }
      if (c.stereotype == "UAV") {
        if (have_root) fail(tokens[1].column, "second class with stereotype UAV");
        if (role) fail(0, "the UAV class cannot declare a role");
        have_root = true;
      } else {
        c.role = role ? *role : DefaultRole(c.name);
        if (!roles.insert(c.role).second) {
          fail(0, "duplicate role '" + c.role + "'");
        }
      }
      classes.push_back(std::move(c));
    } else if (kw == "field") {
      if (classes.empty()) fail(tokens[0].column, "field outside a class");
      if (tokens.size() < 2) fail(0, "expected field name");
      FieldDef f;
      f.name = std::string(tokens[1].text);
      if (!IsIdentifier(f.name) || f.name.find('.') != std::string::npos) {
        fail(tokens[1].column, "invalid field name '" + f.name + "'");
      }
      bool have_kind = false;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        std::string_view a = tokens[i].text;
        std::size_t eq = a.find('=');
        if (eq == std::string_view::npos) {
          fail(tokens[i].column,
               "unexpected attribute '" + std::string(a) + "'");
        }
        std::string_view key = a.substr(0, eq);
        std::string_view value = a.substr(eq + 1);
        int vcol = tokens[i].column + static_cast<int>(eq) + 1;
        if (key == "kind") {
          if (value == "num") {
            f.kind = FieldKind::kNumeric;
          } else if (value == "enum") {
            f.kind = FieldKind::kEnum;
          } else {
            fail(vcol, "field kind must be 'num' or 'enum'");
          }
          have_kind = true;
        } else if (key == "units") {
          f.units = std::string(value);
        } else if (key == "tuple") {
          auto k = value.size() == 2 && value[0] == 's'
                       ? ParseInt(value.substr(1))
                       : std::nullopt;
          if (!k || *k < 1 || *k > 9) fail(vcol, "tuple slot must be s1..s9");
          f.tuple_slot = static_cast<int>(*k);
        } else if (key == "source") {
          if (!IsIdentifier(value)) fail(vcol, "invalid source quantity");
          f.source = std::string(value);
        } else if (key == "range") {
          std::size_t colon = value.find(':');
          auto lo = colon == std::string_view::npos
                        ? std::nullopt
                        : ParseDouble(value.substr(0, colon));
          auto hi = colon == std::string_view::npos
                        ? std::nullopt
                        : ParseDouble(value.substr(colon + 1));
          if (!lo || !hi || !(*lo < *hi)) {
            fail(vcol, "range must be <lo>:<hi> with lo < hi");
          }
          f.range = std::make_pair(*lo, *hi);
        } else if (key == "values") {
          f.enum_values = SplitBar(value);
          for (const auto& v : f.enum_values) {
            if (!IsIdentifier(v)) fail(vcol, "invalid enumeration literal '" + v + "'");
          }
        } else {
          fail(tokens[i].column, "unknown attribute '" + std::string(key) + "'");
        }
      }
      if (!have_kind) fail(0, "field '" + f.name + "' has no kind");
      if (f.kind == FieldKind::kEnum && f.enum_values.empty()) {
        fail(0, "enum field '" + f.name + "' declares no values");
      }
      if (f.kind == FieldKind::kNumeric && !f.enum_values.empty()) {
        fail(0, "numeric field '" + f.name + "' cannot declare values");
      }
      for (const auto& other : classes.back().fields) {
        if (other.name == f.name) {
          fail(tokens[1].column, "duplicate field '" + f.name + "' in class '" +
                                     classes.back().name + "'");
        }
      }
      classes.back().fields.push_back(std::move(f));
    } else {
      fail(tokens[0].column, "unknown declaration '" + std::string(kw) + "'");
    }
  }
  if (classes.empty()) throw ParseError(1, 0, "no classes declared");
  try {
    return DomainSchema(std::move(classes));
  } catch (const Error& e) {
    throw ParseError(line_no, 0, e.what());
  }
}

double Snapshot::Get(std::string_view path) const {
  return values.at(schema->SlotOf(path));
}

void Snapshot::Set(std::string_view path, double value) {
  values.at(schema->SlotOf(path)) = value;
}

Snapshot MakeSnapshot(std::shared_ptr<const DomainSchema> schema,
                      std::string initial_state) {
  Snapshot s;
  s.values.assign(schema->field_count(), 0.0);
  if (auto battery = schema->TupleSlot(8)) s.values[*battery] = 100.0;
  s.schema = std::move(schema);
  s.flight_state = std::move(initial_state);
  return s;
}

Snapshot Populate(const Snapshot& snapshot,
                  const std::map<std::string, double>& telemetry,
                  std::string flight_state, std::int64_t tick) {
  if (tick < snapshot.tick) {
    throw Error(ErrorCode::kInvalidArgument,
                "tick " + std::to_string(tick) + " precedes snapshot tick " +
                    std::to_string(snapshot.tick));
  }
  Snapshot out = snapshot;
  for (const auto& [path, value] : telemetry) {
    auto slot = snapshot.schema->FindSlot(path);
    if (!slot) {
      throw Error(ErrorCode::kNotFound,
                  "telemetry path '" + path + "' is not in the schema");
    }
    out.values[*slot] = value;
  }
  out.flight_state = std::move(flight_state);
  out.tick = tick;
  return out;
}

StateTuple ToStateTuple(const Snapshot& snapshot) {
  StateTuple t;
  t.flight_state = snapshot.flight_state;
  for (int k = 1; k <= 9; ++k) {
    auto slot = snapshot.schema->TupleSlot(k);
    if (!slot) {
      throw Error(ErrorCode::kNotFound,
                  "schema has no field annotated tuple=s" + std::to_string(k) +
                      " (" + std::string(TupleQuantity(k)) + ")");
    }
    t.values[k - 1] = snapshot.values[*slot];
  }
  return t;
}

}  // namespace uast
