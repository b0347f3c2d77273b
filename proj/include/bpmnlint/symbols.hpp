#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bpmnlint {

using ConceptId = uint32_t;
using RoleId = uint32_t;
using DataRoleId = uint32_t;
using IndividualId = uint32_t;

constexpr uint32_t kNoId = UINT32_MAX;

enum class Datatype { String, Boolean, Integer, PositiveInteger, Date };

std::string_view datatype_name(Datatype dt);
std::optional<Datatype> datatype_from_name(std::string_view name);

/// A typed literal. Dates are kept in their ISO-8601 text form; booleans and
/// integers carry parsed values alongside the canonical text.
struct Literal {
  Datatype type = Datatype::String;
  std::string text;     // canonical form ("true"/"false", decimal digits, raw string)
  int64_t num = 0;      // valid for Integer / PositiveInteger
  bool flag = false;    // valid for Boolean

  static Literal string(std::string s);
  static Literal boolean(bool b);
  static Literal integer(int64_t v, Datatype t = Datatype::Integer);
  static Literal date(std::string iso);

  bool operator==(const Literal& o) const { return type == o.type && text == o.text; }
  bool operator<(const Literal& o) const {
    if (type != o.type) return type < o.type;
    return text < o.text;
  }
};

/// True for YYYY-MM-DD with in-range month/day (Gregorian, leap-aware).
bool valid_iso_date(std::string_view s);

/// True for the identifier shape shared by every symbol table.
bool valid_identifier(std::string_view s);

/// One name space (concepts, object roles, data roles, or individuals).
/// Ids are dense and assigned in first-seen order.
class SymbolTable {
 public:
  uint32_t intern(std::string_view name);
  std::optional<uint32_t> find(std::string_view name) const;
  const std::string& name(uint32_t id) const { return names_.at(id); }
  uint32_t size() const { return static_cast<uint32_t>(names_.size()); }
  const std::vector<std::string>& all() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint32_t> index_;
};

}  // namespace bpmnlint
