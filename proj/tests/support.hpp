#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "bpmnlint/check.hpp"

namespace testsupport {

using namespace bpmnlint;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline const Tbox& bundled() {
  static Tbox tbox = parse_tbox(bundled_tbox_text());
  return tbox;
}

inline const RoleTable& bundled_roles() {
  static RoleTable table = role_closure(bundled());
  return table;
}

/// Empty graph with the nominal individuals pre-seeded, mirroring the loader.
inline InstanceGraph empty_graph(const Tbox& tbox) {
  InstanceGraph g;
  std::vector<std::string> names = tbox.individuals.all();
  std::sort(names.begin(), names.end());
  g.nodes.resize(names.size());
  for (NodeId i = 0; i < names.size(); ++i) {
    g.nodes[i].name = names[i];
    g.index.emplace(names[i], i);
  }
  g.nominal_node.resize(tbox.individuals.size());
  for (uint32_t i = 0; i < tbox.individuals.size(); ++i)
    g.nominal_node[i] = g.index.at(tbox.individuals.name(i));
  g.source_digest = sha256_hex("synthetic");
  return g;
}

inline NodeId add_node(InstanceGraph& g, const std::string& name) {
  // test graphs append; node order is insertion order, deterministic enough
  NodeId id = static_cast<NodeId>(g.nodes.size());
  Individual node;
  node.name = name;
  g.nodes.push_back(std::move(node));
  g.index.emplace(name, id);
  return id;
}

inline void add_atom(InstanceGraph& g, const Tbox& t, NodeId n, const std::string& concept_name) {
  auto id = t.concepts.find(concept_name);
  auto& atoms = g.nodes[n].asserted;
  atoms.insert(std::lower_bound(atoms.begin(), atoms.end(), *id), *id);
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

inline void add_edge(InstanceGraph& g, const Tbox& t, NodeId from, const std::string& role,
                     NodeId to) {
  auto rid = t.roles.find(role);
  auto& fillers = g.nodes[from].edges[*rid];
  auto it = std::lower_bound(fillers.begin(), fillers.end(), to);
  if (it == fillers.end() || *it != to) fillers.insert(it, to);
}

inline void add_literal(InstanceGraph& g, const Tbox& t, NodeId n, const std::string& role,
                        Literal lit) {
  auto rid = t.data_roles.find(role);
  auto& lits = g.nodes[n].data[*rid];
  auto it = std::lower_bound(lits.begin(), lits.end(), lit);
  if (it == lits.end() || !(*it == lit)) lits.insert(it, lit);
}

// ------------------------------------------------------------------ oracles

/// Naive global fixpoint: recompute the full consequence of the previous pass
/// until two successive states agree. Independent of the stratified engine.
inline Membership naive_classify(const InstanceGraph& g, const Tbox& t) {
  Membership state(g.nodes.size(), t.concepts.size());
  for (NodeId n = 0; n < g.nodes.size(); ++n)
    for (ConceptId c : g.nodes[n].asserted) state.add(n, c);

  for (int pass = 0; pass < 1000; ++pass) {
    Membership next(g.nodes.size(), t.concepts.size());
    for (NodeId n = 0; n < g.nodes.size(); ++n)
      for (ConceptId c : g.nodes[n].asserted) next.add(n, c);
    for (const auto& ax : t.axioms) {
      const auto* e = std::get_if<EquivAxiom>(&ax.body);
      if (!e) continue;
      switch (e->flavor) {
        case EquivFlavor::Enumeration:
          for (IndividualId i : e->rhs.individuals) next.add(g.nominal_node[i], e->lhs);
          break;
        case EquivFlavor::Coverage:
          for (const auto& k : e->rhs.children)
            if (k.kind == ExprKind::Atom)
              for (NodeId n = 0; n < g.nodes.size(); ++n)
                if (state.has(n, k.atom)) next.add(n, e->lhs);
          break;
        case EquivFlavor::Definition:
          for (NodeId n = 0; n < g.nodes.size(); ++n)
            if (eval_expr(e->rhs, n, g, state)) next.add(n, e->lhs);
          break;
      }
    }
    if (next == state) return state;
    state = std::move(next);
  }
  throw std::runtime_error("naive classification did not stabilize");
}

/// Brute-force axiom check: full scan of every individual, no indexes.
inline std::vector<std::pair<std::string, std::string>> brute_check(
    const Axiom& ax, const InstanceGraph& g, const Tbox& t, const Membership& m) {
  std::vector<std::pair<std::string, std::string>> out;
  auto violate = [&](NodeId n) { out.emplace_back(ax.id, g.nodes[n].name); };

  if (const auto* s = std::get_if<SubConceptAxiom>(&ax.body)) {
    for (NodeId n = 0; n < g.nodes.size(); ++n)
      if (m.has(n, s->lhs) && !eval_expr(s->rhs, n, g, m)) violate(n);
  } else if (const auto* e = std::get_if<EquivAxiom>(&ax.body)) {
    for (NodeId n = 0; n < g.nodes.size(); ++n)
      if (m.has(n, e->lhs) && !eval_expr(e->rhs, n, g, m)) violate(n);
  } else if (const auto* d = std::get_if<DisjointAxiom>(&ax.body)) {
    for (NodeId n = 0; n < g.nodes.size(); ++n)
      if (m.has(n, d->a) && m.has(n, d->b)) violate(n);
  } else if (const auto* dom = std::get_if<DomainAxiom>(&ax.body)) {
    for (NodeId n = 0; n < g.nodes.size(); ++n) {
      bool used = dom->prop.is_data ? !g.literals(n, dom->prop.id).empty()
                                    : !g.fillers(n, dom->prop.id).empty();
      if (used && !m.has(n, dom->domain)) violate(n);
    }
  } else if (const auto* rng = std::get_if<RangeAxiom>(&ax.body)) {
    for (NodeId n = 0; n < g.nodes.size(); ++n) {
      if (rng->prop.is_data) {
        for (const auto& lit : g.literals(n, rng->prop.id))
          if (!rng->data_range.contains(lit)) violate(n);
      } else {
        for (NodeId f : g.fillers(n, rng->prop.id))
          if (!eval_expr(rng->concept_range, f, g, m)) violate(n);
      }
    }
  }
  return out;
}

// ----------------------------------------------------- random generation

struct RandomGraphConfig {
  size_t max_nodes = 12;
  size_t max_atoms = 3;
  size_t max_edges = 18;
  size_t max_literals = 4;
};

inline InstanceGraph random_graph(const Tbox& t, std::mt19937& rng,
                                  const RandomGraphConfig& cfg = {}) {
  InstanceGraph g = empty_graph(t);
  std::uniform_int_distribution<size_t> node_count(1, cfg.max_nodes);
  size_t n_nodes = node_count(rng);
  std::vector<NodeId> mine;
  for (size_t i = 0; i < n_nodes; ++i) mine.push_back(add_node(g, "n" + std::to_string(i)));

  auto pick = [&](uint32_t bound) {
    return std::uniform_int_distribution<uint32_t>(0, bound - 1)(rng);
  };
  std::uniform_int_distribution<size_t> atom_count(0, cfg.max_atoms);
  for (NodeId n : mine) {
    size_t k = atom_count(rng);
    for (size_t i = 0; i < k; ++i) {
      ConceptId c = pick(t.concepts.size());
      auto& atoms = g.nodes[n].asserted;
      atoms.insert(std::lower_bound(atoms.begin(), atoms.end(), c), c);
      atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    }
  }
  std::uniform_int_distribution<size_t> edge_count(0, cfg.max_edges);
  size_t k = edge_count(rng);
  for (size_t i = 0; i < k; ++i) {
    NodeId from = mine[pick(static_cast<uint32_t>(mine.size()))];
    // half the targets are nominal individuals so type properties can fire
    NodeId to = (rng() & 1) && !g.nominal_node.empty()
                    ? g.nominal_node[pick(static_cast<uint32_t>(g.nominal_node.size()))]
                    : mine[pick(static_cast<uint32_t>(mine.size()))];
    RoleId role = pick(t.roles.size());
    auto& fillers = g.nodes[from].edges[role];
    auto it = std::lower_bound(fillers.begin(), fillers.end(), to);
    if (it == fillers.end() || *it != to) fillers.insert(it, to);
  }
  std::uniform_int_distribution<size_t> lit_count(0, cfg.max_literals);
  static const char* kStrings[] = {"None", "Expression", "Default", "true", "x>1", "Parallel"};
  k = lit_count(rng);
  for (size_t i = 0; i < k; ++i) {
    NodeId n = mine[pick(static_cast<uint32_t>(mine.size()))];
    DataRoleId r = pick(t.data_roles.size());
    Literal lit;
    switch (t.data_role_type[r]) {
      case Datatype::String: lit = Literal::string(kStrings[pick(6)]); break;
      case Datatype::Boolean: lit = Literal::boolean(rng() & 1); break;
      case Datatype::Integer: lit = Literal::integer(static_cast<int64_t>(pick(5))); break;
      case Datatype::PositiveInteger:
        lit = Literal::integer(1 + pick(4), Datatype::PositiveInteger);
        break;
      case Datatype::Date: lit = Literal::date("2008-01-17"); break;
    }
    auto& lits = g.nodes[n].data[r];
    auto it = std::lower_bound(lits.begin(), lits.end(), lit);
    if (it == lits.end() || !(*it == lit)) lits.insert(it, lit);
  }
  return g;
}

inline ConceptExpr random_expr(const Tbox& t, std::mt19937& rng, int depth = 3) {
  auto pick = [&](uint32_t bound) {
    return std::uniform_int_distribution<uint32_t>(0, bound - 1)(rng);
  };
  uint32_t choice = depth <= 0 ? pick(2) : pick(10);
  switch (choice) {
    case 0:
      return ConceptExpr::make_atom(pick(t.concepts.size()));
    case 1: {
      std::vector<IndividualId> inds;
      size_t k = 1 + pick(3);
      for (size_t i = 0; i < k; ++i) inds.push_back(pick(t.individuals.size()));
      std::sort(inds.begin(), inds.end());
      inds.erase(std::unique(inds.begin(), inds.end()), inds.end());
      return ConceptExpr::make_nominals(std::move(inds));
    }
    case 2:
      return ConceptExpr::make_not(random_expr(t, rng, depth - 1));
    case 3:
    case 4: {
      std::vector<ConceptExpr> kids;
      size_t k = 2 + pick(2);
      for (size_t i = 0; i < k; ++i) kids.push_back(random_expr(t, rng, depth - 1));
      return choice == 3 ? ConceptExpr::make_and(std::move(kids))
                         : ConceptExpr::make_or(std::move(kids));
    }
    case 5:
      return ConceptExpr::make_exists(pick(t.roles.size()), random_expr(t, rng, depth - 1));
    case 6:
      return ConceptExpr::make_forall(pick(t.roles.size()), random_expr(t, rng, depth - 1));
    case 7: {
      bool data = rng() & 1;
      PropertyRef prop{data, data ? pick(t.data_roles.size()) : pick(t.roles.size())};
      ExprKind k = ExprKind::MinCard;
      uint32_t which = pick(3);
      if (which == 1) k = ExprKind::MaxCard;
      if (which == 2) k = ExprKind::ExactCard;
      return ConceptExpr::make_card(k, pick(4), prop);
    }
    case 8:
    case 9: {
      DataRoleId r = pick(t.data_roles.size());
      DataRange range;
      range.type = t.data_role_type[r];
      if (range.type == Datatype::String && (rng() & 1)) {
        range.values = {Literal::string("None"), Literal::string("Expression")};
      } else if (range.type == Datatype::Boolean && (rng() & 1)) {
        range.values = {Literal::boolean(true)};
      }
      return choice == 8 ? ConceptExpr::make_data_some(r, std::move(range))
                         : ConceptExpr::make_data_all(r, std::move(range));
    }
  }
  return ConceptExpr::make_atom(0);
}

}  // namespace testsupport
