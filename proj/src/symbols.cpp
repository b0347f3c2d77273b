#include "bpmnlint/symbols.hpp"

namespace bpmnlint {

std::string_view datatype_name(Datatype dt) {
  switch (dt) {
    case Datatype::String: return "string";
    case Datatype::Boolean: return "boolean";
    case Datatype::Integer: return "integer";
    case Datatype::PositiveInteger: return "positive_integer";
    case Datatype::Date: return "date";
  }
  return "string";
}

std::optional<Datatype> datatype_from_name(std::string_view name) {
  if (name == "string") return Datatype::String;
  if (name == "boolean") return Datatype::Boolean;
  if (name == "integer") return Datatype::Integer;
  if (name == "positive_integer") return Datatype::PositiveInteger;
  if (name == "date") return Datatype::Date;
  return std::nullopt;
}

Literal Literal::string(std::string s) {
  Literal l;
  l.type = Datatype::String;
  l.text = std::move(s);
  return l;
}

Literal Literal::boolean(bool b) {
  Literal l;
  l.type = Datatype::Boolean;
  l.flag = b;
  l.text = b ? "true" : "false";
  return l;
}

Literal Literal::integer(int64_t v, Datatype t) {
  Literal l;
  l.type = t;
  l.num = v;
  l.text = std::to_string(v);
  return l;
}

Literal Literal::date(std::string iso) {
  Literal l;
  l.type = Datatype::Date;
  l.text = std::move(iso);
  return l;
}

bool valid_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  int year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
  int month = (s[5] - '0') * 10 + (s[6] - '0');
  int day = (s[8] - '0') * 10 + (s[9] - '0');
  if (month < 1 || month > 12 || day < 1) return false;
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = days[month - 1];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) max_day = 29;
  return day <= max_day;
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
  return true;
}

uint32_t SymbolTable::intern(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it != index_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), id);
  return id;
}

std::optional<uint32_t> SymbolTable::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace bpmnlint
