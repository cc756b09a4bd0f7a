// Copyright 2026 The cpar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>

#include "cpar/cli.h"

namespace cpar::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_name(std::string_view s) {
  if (s.empty()) return false;
  auto start = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!start(s.front())) return false;
  for (char c : s) {
    if (!start(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Location parse_location(std::string_view text) {
  std::string_view s = trim(text);
  auto open = s.find('[');
  if (open == std::string_view::npos) {
    if (!is_name(s)) {
      throw PredicateError("bad location '" + std::string(text) + "'");
    }
    return Location::var(std::string(s));
  }
  std::string_view name = trim(s.substr(0, open));
  if (!is_name(name) || s.back() != ']') {
    throw PredicateError("bad location '" + std::string(text) + "'");
  }
  auto index = parse_int(trim(s.substr(open + 1, s.size() - open - 2)));
  if (!index) {
    throw PredicateError("bad array index in '" + std::string(text) + "'");
  }
  return Location::elem(std::string(name), *index);
}

Value parse_value(std::string_view text) {
  std::string_view s = trim(text);
  if (auto i = parse_int(s)) return *i;
  if (is_name(s)) return Symbol{std::string(s)};
  throw PredicateError("bad value '" + std::string(text) + "'");
}

std::vector<std::string_view> split_clauses(std::string_view text) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    char c = i < text.size() ? text[i] : ',';
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) {
    throw PredicateError("unbalanced brackets in '" + std::string(text) + "'");
  }
  if (parts.size() == 1 && parts.front().empty()) parts.clear();
  return parts;
}

std::optional<std::string_view> unwrap(std::string_view s,
                                       std::string_view fn) {
  if (s.size() > fn.size() + 1 && s.substr(0, fn.size()) == fn) {
    std::string_view rest = trim(s.substr(fn.size()));
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') {
      return rest.substr(1, rest.size() - 2);
    }
  }
  return std::nullopt;
}

StoreClause parse_clause(std::string_view s) {
  if (s.empty()) throw PredicateError("empty clause");
  if (auto inner = unwrap(s, "undefined")) {
    return {StoreClause::Kind::kUndefined, parse_location(*inner), {}};
  }
  if (auto inner = unwrap(s, "defined")) {
    return {StoreClause::Kind::kDefined, parse_location(*inner), {}};
  }
  auto eq = s.find('=');
  if (eq == std::string_view::npos) {
    throw PredicateError("expected loc=value, defined(loc) or undefined(loc), "
                         "got '" + std::string(s) + "'");
  }
  return {StoreClause::Kind::kEquals, parse_location(s.substr(0, eq)),
          parse_value(s.substr(eq + 1))};
}

}  // namespace

bool StoreClause::holds(const Store& store) const {
  auto it = store.find(loc);
  switch (kind) {
    case Kind::kDefined: return it != store.end();
    case Kind::kUndefined: return it == store.end();
    case Kind::kEquals: return it != store.end() && it->second == *value;
  }
  return false;
}

std::string StoreClause::to_string() const {
  switch (kind) {
    case Kind::kDefined: return "defined(" + cpar::to_string(loc) + ")";
    case Kind::kUndefined: return "undefined(" + cpar::to_string(loc) + ")";
    case Kind::kEquals:
      return cpar::to_string(loc) + "=" + cpar::to_string(*value);
  }
  return {};
}

bool StorePredicate::holds(const Store& store) const {
  for (const auto& c : clauses) {
    if (!c.holds(store)) return false;
  }
  return true;
}

StorePredicate parse_predicate(std::string_view text) {
  StorePredicate p;
  for (auto part : split_clauses(text)) p.clauses.push_back(parse_clause(part));
  return p;
}

Store parse_bindings(std::string_view text) {
  Store store;
  for (auto part : split_clauses(text)) {
    StoreClause c = parse_clause(part);
    if (c.kind != StoreClause::Kind::kEquals) {
      throw PredicateError("expected loc=value binding, got '" +
                           std::string(part) + "'");
    }
    store.insert_or_assign(c.loc, *c.value);
  }
  return store;
}

}  // namespace cpar::cli
