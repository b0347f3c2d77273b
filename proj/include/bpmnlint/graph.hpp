#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bpmnlint/tbox.hpp"

namespace bpmnlint {

using NodeId = uint32_t;

/// One ABox individual: asserted concept atoms, data literals, object edges.
/// Filler lists are sorted and duplicate-free.
struct Individual {
  std::string name;
  std::vector<ConceptId> asserted;                 // sorted
  std::map<DataRoleId, std::vector<Literal>> data;
  std::map<RoleId, std::vector<NodeId>> edges;

  bool has_atom(ConceptId c) const;
};

/// The diagram as an instance graph. Node order is by name, so identical
/// documents load to identical graphs.
class InstanceGraph {
 public:
  std::vector<Individual> nodes;
  std::unordered_map<std::string, NodeId> index;
  std::vector<NodeId> nominal_node;  // by IndividualId
  bool materialized = false;
  std::string source_digest;

  NodeId require(const std::string& name) const;
  const std::vector<NodeId>& fillers(NodeId n, RoleId r) const;
  const std::vector<Literal>& literals(NodeId n, DataRoleId r) const;
  size_t edge_count() const;
};

/// Expansion recipe for one leaf diagram kind, derived from the nominal-typed
/// definition axioms (kind "task" => assert activity, add the type edge).
struct KindExpansion {
  std::vector<ConceptId> atoms;                          // base atoms to assert
  std::vector<std::pair<RoleId, IndividualId>> type_edges;
  std::vector<ConceptId> implied;  // every defined concept the kind passes through
};

using KindTable = std::map<std::string, KindExpansion>;

KindTable derive_kind_table(const Tbox& tbox);

class DiagramError : public std::runtime_error {
 public:
  explicit DiagramError(const std::string& what) : std::runtime_error(what) {}
};

/// Raw element record as read from the diagram document, before defaults.
struct RawElement {
  std::string id;
  std::string kind;                       // empty when only atoms given
  std::vector<std::string> atoms;
  std::map<std::string, std::vector<Literal>> data;   // data role name -> literals
  std::map<std::string, std::vector<std::string>> refs;  // role name -> target ids
};

/// Fills every documented default the element is missing. Supplied values are
/// never overwritten; iterates because a default type edge can imply further
/// defaults (gateway -> exclusive -> data-based exclusive).
RawElement apply_defaults(RawElement element, const Tbox& tbox);

InstanceGraph load_diagram(std::string_view document, const Tbox& tbox);

/// Adds inverse and super-role edges to fixpoint. Idempotent; only adds.
void materialize_roles(InstanceGraph& graph, const RoleTable& roles);

}  // namespace bpmnlint
