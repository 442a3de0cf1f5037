//
// Copyright 2026 The SCG Authors
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
//
#ifndef SCG_SCHEMA_H_
#define SCG_SCHEMA_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scg/value.h"

namespace scg {

inline constexpr int kMaxSchemaDepth = 8;

// One node of a recursive input specification.
struct ValueSpec {
  enum class Kind { kInteger, kFloat, kString, kBoolean, kList, kTuple };

  Kind kind = Kind::kInteger;
  std::int64_t int_lo = 0;
  std::int64_t int_hi = 0;
  double float_lo = 0.0;
  double float_hi = 0.0;
  std::string alphabet;     // kString: allowed bytes
  std::size_t min_len = 0;  // kString, kList
  std::size_t max_len = 0;
  std::vector<ValueSpec> children;  // kList: exactly one; kTuple: items

  static ValueSpec Integer(std::int64_t lo, std::int64_t hi);
  static ValueSpec Float(double lo, double hi);
  static ValueSpec String(std::string alphabet, std::size_t min_len,
                          std::size_t max_len);
  static ValueSpec Boolean();
  static ValueSpec List(ValueSpec element, std::size_t min_len,
                        std::size_t max_len);
  static ValueSpec Tuple(std::vector<ValueSpec> items);
};

// One stdin line: items rendered as text and joined by the separator. A list
// may only appear as the last item of its line.
struct LineTemplate {
  std::vector<ValueSpec> items;
  std::string separator = " ";
};

// How to build an input state for a problem. Typed-argument inputs encode as
// an array with one entry per parameter; stdio inputs encode as one string
// holding the whole standard input.
struct InputSchema {
  enum class Kind { kTypedArguments, kStdioLines };

  Kind kind = Kind::kTypedArguments;
  std::vector<ValueSpec> params;
  std::vector<LineTemplate> lines;
};

// Throws InputError on empty ranges, bad alphabets, or depth > 8.
void ValidateSchema(const InputSchema& schema);

// True when the encoded value could have been produced by the schema.
bool Conforms(const InputSchema& schema, const Value& value);
bool Conforms(const ValueSpec& spec, const Value& value);

// Stdio rendering of a single value (lists and tuples flatten).
std::string RenderStdioItem(const Value& value, const std::string& separator);

// JSON round trip. ParseSchema validates.
InputSchema ParseSchema(const Value& json);
Value SchemaToJson(const InputSchema& schema);

std::uint64_t SchemaHash(const InputSchema& schema);

}  // namespace scg

#endif  // SCG_SCHEMA_H_
