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

// Domain schema (observation space) and telemetry snapshots.
//
// Schema file format:
//
//   class <Name> stereotype=<Stereotype> [role=<role>]
//     field <name> kind=<num|enum> units=<u> [tuple=s1..s9] [source=<q>]
//                  [range=<lo>:<hi>] [values=A|B|C]
//
// The class with stereotype UAV is the root; its fields are addressed by bare
// name ("airspeed"). Fields of every other class are addressed through the
// class role ("location.altitude_AGL"). The role defaults to the class name
// with a lowercase first letter.

#ifndef UAST_DOMAIN_MODEL_H_
#define UAST_DOMAIN_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uast {

enum class FieldKind { kNumeric, kEnum };

struct FieldDef {
  std::string name;
  std::string path;  // dotted address used by constraints and telemetry
  FieldKind kind = FieldKind::kNumeric;
  std::string units;
  int tuple_slot = 0;  // 1..9 for s1..s9, 0 when not part of the tuple
  std::string source;  // simulator quantity feeding this field, may be empty
  std::optional<std::pair<double, double>> range;
  std::vector<std::string> enum_values;  // code = index
};

struct ClassDef {
  std::string name;
  std::string stereotype;
  std::string role;  // empty for the root class
  std::vector<FieldDef> fields;
};

bool IsStructuralStereotype(std::string_view name);

class DomainSchema {
 public:
  DomainSchema() = default;
  explicit DomainSchema(std::vector<ClassDef> classes);

  const std::vector<ClassDef>& classes() const { return classes_; }
  std::size_t field_count() const { return fields_.size(); }
  // All fields in declaration order; index = slot index in a Snapshot.
  const std::vector<FieldDef>& fields() const { return fields_; }
  const FieldDef& field(std::size_t slot) const { return fields_[slot]; }

  std::optional<std::size_t> FindSlot(std::string_view path) const;
  std::size_t SlotOf(std::string_view path) const;  // throws kNotFound

  // True if `name` is a class name or the stereotype of the root class.
  bool IsContext(std::string_view name) const;

  // Slot index feeding tuple position s<k>, k in 1..9.
  std::optional<std::size_t> TupleSlot(int k) const { return tuple_[k - 1]; }

  // Integer code of an enumeration literal, searched across all enum fields.
  std::optional<double> EnumCode(std::string_view literal) const;

 private:
  std::vector<ClassDef> classes_;
  std::vector<FieldDef> fields_;
  std::map<std::string, std::size_t, std::less<>> by_path_;
  std::map<std::string, double, std::less<>> enum_codes_;
  std::array<std::optional<std::size_t>, 9> tuple_{};
};

DomainSchema ParseDomainSchema(std::string_view text);

// Populated instance of the schema at one tick.
struct Snapshot {
  std::shared_ptr<const DomainSchema> schema;
  std::vector<double> values;  // one per schema field
  std::int64_t tick = 0;
  std::string flight_state;

  double Get(std::string_view path) const;
  void Set(std::string_view path, double value);
  bool operator==(const Snapshot& other) const {
    return values == other.values && tick == other.tick &&
           flight_state == other.flight_state;
  }
};

// Zero in every slot except the battery slot (tuple s8), which starts at 100.
Snapshot MakeSnapshot(std::shared_ptr<const DomainSchema> schema,
                      std::string initial_state = "");

// Copy of `snapshot` with the given slots overwritten. Throws kNotFound for a
// path that is not in the schema and kInvalidArgument if tick goes backwards.
Snapshot Populate(const Snapshot& snapshot,
                  const std::map<std::string, double>& telemetry,
                  std::string flight_state, std::int64_t tick);

// <flight state, altitude, airspeed, groundspeed, roll, pitch, yaw, heading,
// battery, distance>
struct StateTuple {
  std::string flight_state;
  std::array<double, 9> values{};  // s1..s9

  double s(int k) const { return values[k - 1]; }
  bool operator==(const StateTuple& other) const = default;
};

StateTuple ToStateTuple(const Snapshot& snapshot);

// Quantity name conventionally carried by tuple position s<k>.
std::string_view TupleQuantity(int k);

}  // namespace uast

#endif  // UAST_DOMAIN_MODEL_H_
