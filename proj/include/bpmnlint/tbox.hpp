#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bpmnlint/expr.hpp"
#include "bpmnlint/symbols.hpp"

namespace bpmnlint {

enum class Severity { Warning, Error };
std::string_view severity_name(Severity s);

enum class EquivFlavor { Definition, Coverage, Enumeration };

struct SubConceptAxiom {
  ConceptId lhs = kNoId;
  ConceptExpr rhs;
};
struct EquivAxiom {
  ConceptId lhs = kNoId;
  ConceptExpr rhs;
  EquivFlavor flavor = EquivFlavor::Definition;
};
struct DisjointAxiom {
  ConceptId a = kNoId, b = kNoId;
};
struct DomainAxiom {
  PropertyRef prop;
  ConceptId domain = kNoId;
};
struct RangeAxiom {
  PropertyRef prop;
  ConceptExpr concept_range;         // object roles (atom or union of atoms)
  DataRange data_range;              // data roles
};
struct SubRoleAxiom {
  RoleId sub = kNoId, super = kNoId;
};
struct InverseRoleAxiom {
  RoleId inverse = kNoId, base = kNoId;  // inverse == base^-1
};
struct DistinctAxiom {
  IndividualId a = kNoId, b = kNoId;
};
struct NativeAxiom {
  std::string check;  // registered native check name
};

using AxiomBody = std::variant<SubConceptAxiom, EquivAxiom, DisjointAxiom, DomainAxiom,
                               RangeAxiom, SubRoleAxiom, InverseRoleAxiom, DistinctAxiom,
                               NativeAxiom>;

struct Axiom {
  std::string id;
  Severity severity = Severity::Error;
  std::string trace;  // short citation from the BPMN 1.1 text
  AxiomBody body;
};

/// The full ontology: symbol tables, axiom list (document order), enumeration
/// memberships, and optional severity overrides. Immutable once built.
class Tbox {
 public:
  SymbolTable concepts;
  SymbolTable roles;
  SymbolTable data_roles;
  SymbolTable individuals;
  std::vector<Datatype> data_role_type;                    // by DataRoleId
  std::vector<ConceptId> individual_enum;                  // by IndividualId
  std::map<ConceptId, std::vector<IndividualId>> enum_members;
  std::vector<Axiom> axioms;
  std::map<std::string, Severity> severity_overrides;
  std::string source_digest;  // hex digest of the document bytes

  const Axiom* find_axiom(std::string_view id) const;
  bool disjoint(ConceptId a, ConceptId b) const;
  Severity effective_severity(const Axiom& ax) const;

  void rebuild_indexes();

 private:
  std::map<std::string, size_t> axiom_index_;
  std::set<std::pair<ConceptId, ConceptId>> disjoint_pairs_;
};

/// A structural defect reported by well_formed().
struct SchemaFinding {
  std::string code;     // stable finding code, e.g. "negation-cycle"
  std::string message;
  std::vector<std::string> names;  // offending symbols, sorted
};

/// Transitive role hierarchy plus inverse partners.
struct RoleTable {
  std::vector<std::vector<RoleId>> supers;        // by RoleId, strict (no self), sorted
  std::vector<std::optional<RoleId>> inverse_of;  // by RoleId
};

class TboxError : public std::runtime_error {
 public:
  explicit TboxError(const std::string& what) : std::runtime_error(what) {}
};

class TboxParseError : public TboxError {
 public:
  TboxParseError(size_t line, const std::string& what)
      : TboxError("line " + std::to_string(line) + ": " + what), line(line) {}
  size_t line;
};

Tbox parse_tbox(std::string_view document);
std::string serialize_tbox(const Tbox& tbox);

/// True when a `native` axiom names a check the checker implements.
bool native_check_registered(std::string_view name);

std::vector<SchemaFinding> well_formed(const Tbox& tbox);
RoleTable role_closure(const Tbox& tbox);

/// The TBox text compiled into the binary (same bytes as data/bpmn-1.1.tbox).
std::string_view bundled_tbox_text();

std::string sha256_hex(std::string_view bytes);

}  // namespace bpmnlint
