#pragma once

#include <string>
#include <vector>

#include "bpmnlint/symbols.hpp"

namespace bpmnlint {

class Tbox;

/// Reference to an object role or a data role, disambiguated by `is_data`.
struct PropertyRef {
  bool is_data = false;
  uint32_t id = kNoId;

  bool operator==(const PropertyRef& o) const { return is_data == o.is_data && id == o.id; }
};

/// A datatype, optionally restricted to an explicit value set.
struct DataRange {
  Datatype type = Datatype::String;
  std::vector<Literal> values;  // empty: the whole datatype

  bool contains(const Literal& lit) const;
};

enum class ExprKind {
  Atom,        // named concept
  Nominals,    // {a, b, ...}
  Not,
  And,
  Or,
  Exists,      // some r C
  ForAll,      // all r C
  MinCard,     // >= n r        (unqualified; r may be a data role)
  MaxCard,
  ExactCard,
  DataExists,  // some r over a data range
  DataForAll,
};

/// Concept expression AST. One node type covers all variants; unused fields
/// stay at their defaults.
struct ConceptExpr {
  ExprKind kind = ExprKind::Atom;
  ConceptId atom = kNoId;
  std::vector<IndividualId> individuals;  // Nominals
  std::vector<ConceptExpr> children;      // Not/And/Or; filler for Exists/ForAll
  PropertyRef prop;                       // restrictions and cardinalities
  uint32_t n = 0;                         // cardinalities
  DataRange range;                        // DataExists/DataForAll

  static ConceptExpr make_atom(ConceptId c);
  static ConceptExpr make_nominals(std::vector<IndividualId> inds);
  static ConceptExpr make_not(ConceptExpr e);
  static ConceptExpr make_and(std::vector<ConceptExpr> kids);
  static ConceptExpr make_or(std::vector<ConceptExpr> kids);
  static ConceptExpr make_exists(RoleId r, ConceptExpr filler);
  static ConceptExpr make_forall(RoleId r, ConceptExpr filler);
  static ConceptExpr make_card(ExprKind kind, uint32_t n, PropertyRef prop);
  static ConceptExpr make_data_some(DataRoleId r, DataRange range);
  static ConceptExpr make_data_all(DataRoleId r, DataRange range);
};

/// Prefix s-expression rendering, identical to the TBox file syntax.
std::string to_sexpr(const ConceptExpr& e, const Tbox& tbox);
std::string literal_token(const Literal& lit);

}  // namespace bpmnlint
