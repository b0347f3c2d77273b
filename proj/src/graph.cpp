#include "bpmnlint/graph.hpp"

#include <algorithm>

namespace bpmnlint {

bool Individual::has_atom(ConceptId c) const {
  return std::binary_search(asserted.begin(), asserted.end(), c);
}

NodeId InstanceGraph::require(const std::string& name) const {
  auto it = index.find(name);
  if (it == index.end()) throw DiagramError("unknown individual '" + name + "'");
  return it->second;
}

const std::vector<NodeId>& InstanceGraph::fillers(NodeId n, RoleId r) const {
  static const std::vector<NodeId> empty;
  const auto& edges = nodes[n].edges;
  auto it = edges.find(r);
  return it == edges.end() ? empty : it->second;
}

const std::vector<Literal>& InstanceGraph::literals(NodeId n, DataRoleId r) const {
  static const std::vector<Literal> empty;
  const auto& data = nodes[n].data;
  auto it = data.find(r);
  return it == data.end() ? empty : it->second;
}

size_t InstanceGraph::edge_count() const {
  size_t total = 0;
  for (const auto& node : nodes)
    for (const auto& [role, targets] : node.edges) total += targets.size();
  return total;
}

KindTable derive_kind_table(const Tbox& tbox) {
  // nominal-typed definitions: lhs == base ^ (some r {a}) ^ ...
  struct Recipe {
    ConceptId base;
    std::vector<std::pair<RoleId, IndividualId>> edges;
  };
  std::map<ConceptId, Recipe> recipes;
  for (const auto& ax : tbox.axioms) {
    const auto* e = std::get_if<EquivAxiom>(&ax.body);
    if (!e || e->flavor != EquivFlavor::Definition) continue;
    if (e->rhs.kind != ExprKind::And || e->rhs.children.empty()) continue;
    if (e->rhs.children.front().kind != ExprKind::Atom) continue;
    Recipe recipe{e->rhs.children.front().atom, {}};
    bool simple = true;
    for (size_t i = 1; i < e->rhs.children.size(); ++i) {
      const auto& k = e->rhs.children[i];
      if (k.kind == ExprKind::Exists && k.children[0].kind == ExprKind::Nominals &&
          k.children[0].individuals.size() == 1) {
        recipe.edges.emplace_back(k.prop.id, k.children[0].individuals[0]);
      } else {
        simple = false;
        break;
      }
    }
    if (simple && !recipe.edges.empty()) recipes.emplace(e->lhs, std::move(recipe));
  }

  KindTable table;
  for (const auto& [lhs, recipe] : recipes) {
    KindExpansion exp;
    exp.implied.push_back(lhs);
    ConceptId base = recipe.base;
    exp.type_edges = recipe.edges;
    // follow the base chain (service_task -> task -> activity)
    std::set<ConceptId> guard{lhs};
    while (true) {
      auto it = recipes.find(base);
      if (it == recipes.end() || guard.count(base)) break;
      guard.insert(base);
      exp.implied.push_back(base);
      for (auto& edge : it->second.edges) exp.type_edges.push_back(edge);
      base = it->second.base;
    }
    exp.atoms.push_back(base);
    std::sort(exp.type_edges.begin(), exp.type_edges.end());
    table.emplace(tbox.concepts.name(lhs), std::move(exp));
  }
  return table;
}

void materialize_roles(InstanceGraph& graph, const RoleTable& roles) {
  struct Edge {
    NodeId from;
    RoleId role;
    NodeId to;
  };
  std::vector<Edge> queue;
  for (NodeId n = 0; n < graph.nodes.size(); ++n)
    for (const auto& [role, targets] : graph.nodes[n].edges)
      for (NodeId t : targets) queue.push_back({n, role, t});

  auto add_edge = [&](NodeId from, RoleId role, NodeId to) {
    auto& fillers = graph.nodes[from].edges[role];
    auto it = std::lower_bound(fillers.begin(), fillers.end(), to);
    if (it != fillers.end() && *it == to) return;
    fillers.insert(it, to);
    queue.push_back({from, role, to});
  };

  while (!queue.empty()) {
    Edge e = queue.back();
    queue.pop_back();
    for (RoleId super : roles.supers[e.role]) add_edge(e.from, super, e.to);
    if (roles.inverse_of[e.role]) add_edge(e.to, *roles.inverse_of[e.role], e.from);
  }
  graph.materialized = true;
}

}  // namespace bpmnlint
