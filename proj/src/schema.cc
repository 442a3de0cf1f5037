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
#include "scg/schema.h"

#include <cmath>
#include <charconv>
#include <string_view>
#include <utility>

#include "scg/errors.h"

namespace scg {

ValueSpec ValueSpec::Integer(std::int64_t lo, std::int64_t hi) {
  ValueSpec spec;
  spec.kind = Kind::kInteger;
  spec.int_lo = lo;
  spec.int_hi = hi;
  return spec;
}

ValueSpec ValueSpec::Float(double lo, double hi) {
  ValueSpec spec;
  spec.kind = Kind::kFloat;
  spec.float_lo = lo;
  spec.float_hi = hi;
  return spec;
}

ValueSpec ValueSpec::String(std::string alphabet, std::size_t min_len,
                            std::size_t max_len) {
  ValueSpec spec;
  spec.kind = Kind::kString;
  spec.alphabet = std::move(alphabet);
  spec.min_len = min_len;
  spec.max_len = max_len;
  return spec;
}

ValueSpec ValueSpec::Boolean() {
  ValueSpec spec;
  spec.kind = Kind::kBoolean;
  return spec;
}

ValueSpec ValueSpec::List(ValueSpec element, std::size_t min_len,
                          std::size_t max_len) {
  ValueSpec spec;
  spec.kind = Kind::kList;
  spec.min_len = min_len;
  spec.max_len = max_len;
  spec.children.push_back(std::move(element));
  return spec;
}

ValueSpec ValueSpec::Tuple(std::vector<ValueSpec> items) {
  ValueSpec spec;
  spec.kind = Kind::kTuple;
  spec.children = std::move(items);
  return spec;
}

namespace {

using Kind = ValueSpec::Kind;

void ValidateSpec(const ValueSpec& spec, int depth, bool stdio) {
  if (depth > kMaxSchemaDepth) {
    throw InputError("schema nesting exceeds depth " +
                     std::to_string(kMaxSchemaDepth));
  }
  switch (spec.kind) {
    case Kind::kInteger:
      if (spec.int_lo > spec.int_hi) throw InputError("integer range is empty");
      break;
    case Kind::kFloat:
      if (!std::isfinite(spec.float_lo) || !std::isfinite(spec.float_hi) ||
          spec.float_lo > spec.float_hi) {
        throw InputError("float range is empty or non-finite");
      }
      break;
    case Kind::kString:
      if (spec.alphabet.empty()) throw InputError("string alphabet is empty");
      if (spec.min_len > spec.max_len) {
        throw InputError("string length range is empty");
      }
      if (stdio && spec.min_len == 0) {
        throw InputError("stdio strings need min_len >= 1");
      }
      break;
    case Kind::kBoolean:
      break;
    case Kind::kList:
      if (spec.children.size() != 1) {
        throw InputError("list spec needs exactly one element spec");
      }
      if (spec.min_len > spec.max_len) {
        throw InputError("list length range is empty");
      }
      if (stdio && spec.children[0].kind == Kind::kList) {
        throw InputError("stdio lists cannot nest lists");
      }
      ValidateSpec(spec.children[0], depth + 1, stdio);
      break;
    case Kind::kTuple:
      for (const ValueSpec& item : spec.children) {
        if (stdio && item.kind == Kind::kList) {
          throw InputError("stdio tuples cannot contain lists");
        }
        ValidateSpec(item, depth + 1, stdio);
      }
      break;
  }
}

void CheckAlphabetAgainst(const ValueSpec& spec, const std::string& sep) {
  if (spec.kind == Kind::kString) {
    for (char c : spec.alphabet) {
      if (c == '\n' || sep.find(c) != std::string::npos) {
        throw InputError("stdio string alphabet overlaps the separator");
      }
    }
  }
  for (const ValueSpec& child : spec.children) CheckAlphabetAgainst(child, sep);
}

bool StringConforms(const ValueSpec& spec, const std::string& s) {
  if (s.size() < spec.min_len || s.size() > spec.max_len) return false;
  for (char c : s) {
    if (spec.alphabet.find(c) == std::string::npos) return false;
  }
  return true;
}

// Stdio token parsing. Returns false on any mismatch.
bool ParseInt(std::string_view token, std::int64_t* out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), *out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool ScalarTokenConforms(const ValueSpec& spec, std::string_view token) {
  switch (spec.kind) {
    case Kind::kInteger: {
      std::int64_t v = 0;
      return ParseInt(token, &v) && v >= spec.int_lo && v <= spec.int_hi;
    }
    case Kind::kFloat: {
      Value v;
      try {
        v = Value::parse(token.begin(), token.end());
      } catch (const nlohmann::json::parse_error&) {
        return false;
      }
      if (!v.is_number()) return false;
      const double d = v.get<double>();
      return d >= spec.float_lo && d <= spec.float_hi;
    }
    case Kind::kString:
      return StringConforms(spec, std::string(token));
    case Kind::kBoolean:
      return token == "true" || token == "false";
    default:
      return false;
  }
}

bool ConsumeTokens(const ValueSpec& spec, const std::vector<std::string>& tokens,
                   std::size_t* pos, bool last_item) {
  switch (spec.kind) {
    case Kind::kTuple:
      for (const ValueSpec& item : spec.children) {
        if (!ConsumeTokens(item, tokens, pos, false)) return false;
      }
      return true;
    case Kind::kList: {
      if (!last_item) return false;
      const ValueSpec& elem = spec.children[0];
      std::size_t count = 0;
      while (*pos < tokens.size()) {
        if (!ConsumeTokens(elem, tokens, pos, false)) return false;
        ++count;
      }
      return count >= spec.min_len && count <= spec.max_len;
    }
    default:
      if (*pos >= tokens.size()) return false;
      return ScalarTokenConforms(spec, tokens[(*pos)++]);
  }
}

std::vector<std::string> SplitLine(const std::string& line,
                                   const std::string& sep) {
  std::vector<std::string> tokens;
  if (line.empty()) return tokens;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = line.find(sep, start);
    if (at == std::string::npos) {
      tokens.push_back(line.substr(start));
      return tokens;
    }
    tokens.push_back(line.substr(start, at - start));
    start = at + sep.size();
  }
}

bool StdioConforms(const InputSchema& schema, const Value& value) {
  if (!value.is_string()) return false;
  const std::string& text = value.get_ref<const std::string&>();
  std::size_t start = 0;
  for (const LineTemplate& line : schema.lines) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string::npos) return false;
    const std::vector<std::string> tokens =
        SplitLine(text.substr(start, end - start), line.separator);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < line.items.size(); ++i) {
      if (!ConsumeTokens(line.items[i], tokens, &pos,
                         i + 1 == line.items.size())) {
        return false;
      }
    }
    if (pos != tokens.size()) return false;
    start = end + 1;
  }
  return start == text.size();
}

const char* KindName(Kind kind) {
  switch (kind) {
    case Kind::kInteger: return "int";
    case Kind::kFloat: return "float";
    case Kind::kString: return "str";
    case Kind::kBoolean: return "bool";
    case Kind::kList: return "list";
    case Kind::kTuple: return "tuple";
  }
  return "?";
}

ValueSpec ParseSpec(const Value& json, int depth) {
  if (depth > kMaxSchemaDepth) {
    throw InputError("schema nesting exceeds depth " +
                     std::to_string(kMaxSchemaDepth));
  }
  if (!json.is_object() || !json.contains("type")) {
    throw InputError("value spec must be an object with a \"type\"");
  }
  try {
    const std::string type = json.at("type").get<std::string>();
    if (type == "int") {
      return ValueSpec::Integer(json.at("lo").get<std::int64_t>(),
                                json.at("hi").get<std::int64_t>());
    }
    if (type == "float") {
      return ValueSpec::Float(json.at("lo").get<double>(),
                              json.at("hi").get<double>());
    }
    if (type == "str") {
      return ValueSpec::String(json.at("alphabet").get<std::string>(),
                               json.value("min_len", std::size_t{0}),
                               json.at("max_len").get<std::size_t>());
    }
    if (type == "bool") return ValueSpec::Boolean();
    if (type == "list") {
      return ValueSpec::List(ParseSpec(json.at("of"), depth + 1),
                             json.value("min_len", std::size_t{0}),
                             json.at("max_len").get<std::size_t>());
    }
    if (type == "tuple") {
      std::vector<ValueSpec> items;
      for (const Value& item : json.at("items")) {
        items.push_back(ParseSpec(item, depth + 1));
      }
      return ValueSpec::Tuple(std::move(items));
    }
    throw InputError("unknown value spec type \"" + type + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed value spec: ") + e.what());
  }
}

Value SpecToJson(const ValueSpec& spec) {
  Value json;
  json["type"] = KindName(spec.kind);
  switch (spec.kind) {
    case Kind::kInteger:
      json["lo"] = spec.int_lo;
      json["hi"] = spec.int_hi;
      break;
    case Kind::kFloat:
      json["lo"] = spec.float_lo;
      json["hi"] = spec.float_hi;
      break;
    case Kind::kString:
      json["alphabet"] = spec.alphabet;
      json["min_len"] = spec.min_len;
      json["max_len"] = spec.max_len;
      break;
    case Kind::kBoolean:
      break;
    case Kind::kList:
      json["of"] = SpecToJson(spec.children[0]);
      json["min_len"] = spec.min_len;
      json["max_len"] = spec.max_len;
      break;
    case Kind::kTuple:
      json["items"] = Value::array();
      for (const ValueSpec& item : spec.children) {
        json["items"].push_back(SpecToJson(item));
      }
      break;
  }
  return json;
}

void AppendTokens(const Value& value, std::vector<std::string>* tokens) {
  if (value.is_array()) {
    for (const Value& v : value) AppendTokens(v, tokens);
  } else if (value.is_string()) {
    tokens->push_back(value.get<std::string>());
  } else if (value.is_boolean()) {
    tokens->push_back(value.get<bool>() ? "true" : "false");
  } else {
    tokens->push_back(EncodeValue(value));
  }
}

}  // namespace

void ValidateSchema(const InputSchema& schema) {
  if (schema.kind == InputSchema::Kind::kTypedArguments) {
    for (const ValueSpec& param : schema.params) ValidateSpec(param, 1, false);
    return;
  }
  for (const LineTemplate& line : schema.lines) {
    if (line.separator.empty()) throw InputError("stdio separator is empty");
    for (std::size_t i = 0; i < line.items.size(); ++i) {
      const ValueSpec& item = line.items[i];
      if (item.kind == Kind::kList && i + 1 != line.items.size()) {
        throw InputError("a stdio list must be the last item on its line");
      }
      ValidateSpec(item, 1, true);
      CheckAlphabetAgainst(item, line.separator);
    }
  }
}

bool Conforms(const ValueSpec& spec, const Value& value) {
  switch (spec.kind) {
    case Kind::kInteger: {
      if (!value.is_number_integer()) return false;
      if (value.is_number_unsigned() &&
          value.get<std::uint64_t>() >
              static_cast<std::uint64_t>(INT64_MAX)) {
        return false;
      }
      const std::int64_t v = value.get<std::int64_t>();
      return v >= spec.int_lo && v <= spec.int_hi;
    }
    case Kind::kFloat: {
      if (!value.is_number_float()) return false;
      const double v = value.get<double>();
      return v >= spec.float_lo && v <= spec.float_hi;
    }
    case Kind::kString:
      return value.is_string() && StringConforms(spec, value.get<std::string>());
    case Kind::kBoolean:
      return value.is_boolean();
    case Kind::kList: {
      if (!value.is_array()) return false;
      if (value.size() < spec.min_len || value.size() > spec.max_len) {
        return false;
      }
      for (const Value& v : value) {
        if (!Conforms(spec.children[0], v)) return false;
      }
      return true;
    }
    case Kind::kTuple: {
      if (!value.is_array() || value.size() != spec.children.size()) {
        return false;
      }
      for (std::size_t i = 0; i < spec.children.size(); ++i) {
        if (!Conforms(spec.children[i], value[i])) return false;
      }
      return true;
    }
  }
  return false;
}

bool Conforms(const InputSchema& schema, const Value& value) {
  if (schema.kind == InputSchema::Kind::kStdioLines) {
    return StdioConforms(schema, value);
  }
  if (!value.is_array() || value.size() != schema.params.size()) return false;
  for (std::size_t i = 0; i < schema.params.size(); ++i) {
    if (!Conforms(schema.params[i], value[i])) return false;
  }
  return true;
}

std::string RenderStdioItem(const Value& value, const std::string& separator) {
  std::vector<std::string> tokens;
  AppendTokens(value, &tokens);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += separator;
    out += tokens[i];
  }
  return out;
}

InputSchema ParseSchema(const Value& json) {
  InputSchema schema;
  try {
    const std::string kind = json.at("kind").get<std::string>();
    if (kind == "arguments") {
      schema.kind = InputSchema::Kind::kTypedArguments;
      for (const Value& p : json.at("params")) {
        schema.params.push_back(ParseSpec(p, 1));
      }
    } else if (kind == "stdio") {
      schema.kind = InputSchema::Kind::kStdioLines;
      for (const Value& l : json.at("lines")) {
        LineTemplate line;
        line.separator = l.value("sep", std::string(" "));
        for (const Value& item : l.at("items")) {
          line.items.push_back(ParseSpec(item, 1));
        }
        schema.lines.push_back(std::move(line));
      }
    } else {
      throw InputError("unknown schema kind \"" + kind + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed input schema: ") + e.what());
  }
  ValidateSchema(schema);
  return schema;
}

Value SchemaToJson(const InputSchema& schema) {
  Value json;
  if (schema.kind == InputSchema::Kind::kTypedArguments) {
    json["kind"] = "arguments";
    json["params"] = Value::array();
    for (const ValueSpec& p : schema.params) json["params"].push_back(SpecToJson(p));
  } else {
    json["kind"] = "stdio";
    json["lines"] = Value::array();
    for (const LineTemplate& line : schema.lines) {
      Value l;
      l["sep"] = line.separator;
      l["items"] = Value::array();
      for (const ValueSpec& item : line.items) l["items"].push_back(SpecToJson(item));
      json["lines"].push_back(std::move(l));
    }
  }
  return json;
}

std::uint64_t SchemaHash(const InputSchema& schema) {
  return Fnv1a64(EncodeValue(SchemaToJson(schema)));
}

}  // namespace scg
