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
#ifndef SCG_VALUE_H_
#define SCG_VALUE_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

namespace scg {

// Encoded input/output states. Integers, floats, strings, booleans, null and
// (possibly nested) arrays; tuples travel as arrays.
using Value = nlohmann::json;

// Compact text with sorted object keys and shortest round-trip floats, so
// that byte equality of encodings is value equality.
std::string EncodeValue(const Value& value);

// Throws InputError on malformed text.
Value DecodeValue(std::string_view text);

// 64-bit FNV-1a, used for content hashes in bank metadata.
std::uint64_t Fnv1a64(std::string_view bytes);

}  // namespace scg

#endif  // SCG_VALUE_H_
