#include "bpmnlint/classify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace bpmnlint {

Membership::Membership(size_t nodes, size_t concepts)
    : stride_((concepts + 63) / 64), bits_(nodes * stride_, 0) {}

std::vector<ConceptId> Membership::atoms_of(NodeId n, size_t concept_count) const {
  std::vector<ConceptId> out;
  for (ConceptId c = 0; c < concept_count; ++c)
    if (has(n, c)) out.push_back(c);
  return out;
}

size_t StratumPlan::layer_of(ConceptId c) const {
  for (size_t i = 0; i < layers.size(); ++i)
    if (std::find(layers[i].begin(), layers[i].end(), c) != layers[i].end()) return i;
  return layers.size();
}

bool eval_expr(const ConceptExpr& e, NodeId subject, const InstanceGraph& graph,
               const Membership& membership) {
  switch (e.kind) {
    case ExprKind::Atom:
      return membership.has(subject, e.atom);
    case ExprKind::Nominals:
      for (IndividualId i : e.individuals)
        if (graph.nominal_node[i] == subject) return true;
      return false;
    case ExprKind::Not:
      return !eval_expr(e.children[0], subject, graph, membership);
    case ExprKind::And:
      for (const auto& k : e.children)
        if (!eval_expr(k, subject, graph, membership)) return false;
      return true;
    case ExprKind::Or:
      for (const auto& k : e.children)
        if (eval_expr(k, subject, graph, membership)) return true;
      return false;
    case ExprKind::Exists:
      for (NodeId f : graph.fillers(subject, e.prop.id))
        if (eval_expr(e.children[0], f, graph, membership)) return true;
      return false;
    case ExprKind::ForAll:
      for (NodeId f : graph.fillers(subject, e.prop.id))
        if (!eval_expr(e.children[0], f, graph, membership)) return false;
      return true;
    case ExprKind::MinCard:
    case ExprKind::MaxCard:
    case ExprKind::ExactCard: {
      size_t count = e.prop.is_data ? graph.literals(subject, e.prop.id).size()
                                    : graph.fillers(subject, e.prop.id).size();
      if (e.kind == ExprKind::MinCard) return count >= e.n;
      if (e.kind == ExprKind::MaxCard) return count <= e.n;
      return count == e.n;
    }
    case ExprKind::DataExists:
      for (const auto& lit : graph.literals(subject, e.prop.id))
        if (e.range.contains(lit)) return true;
      return false;
    case ExprKind::DataForAll:
      for (const auto& lit : graph.literals(subject, e.prop.id))
        if (!e.range.contains(lit)) return false;
      return true;
  }
  return false;
}

namespace {

// Polarity-tracking walk over a definition body: which concepts does it read,
// and does any read sit under an odd number of negations?
void collect_deps(const ConceptExpr& e, bool negative,
                  std::vector<std::pair<ConceptId, bool>>& out) {
  switch (e.kind) {
    case ExprKind::Atom:
      out.emplace_back(e.atom, negative);
      return;
    case ExprKind::Not:
      collect_deps(e.children[0], !negative, out);
      return;
    case ExprKind::And:
    case ExprKind::Or:
      for (const auto& k : e.children) collect_deps(k, negative, out);
      return;
    case ExprKind::Exists:
    case ExprKind::ForAll:
      collect_deps(e.children[0], negative, out);
      return;
    default:
      return;  // nominals, cardinalities, data restrictions: no concept reads
  }
}

struct DerivationRule {
  ConceptId lhs;
  const EquivAxiom* axiom;
};

}  // namespace

StratumPlan stratify(const Tbox& tbox) {
  // derived concepts and their dependency edges
  std::set<ConceptId> derived;
  std::vector<StratumPlan::Dep> deps;
  for (const auto& ax : tbox.axioms) {
    const auto* e = std::get_if<EquivAxiom>(&ax.body);
    if (!e) continue;
    derived.insert(e->lhs);
    std::vector<std::pair<ConceptId, bool>> reads;
    if (e->flavor == EquivFlavor::Definition) {
      collect_deps(e->rhs, false, reads);
    } else if (e->flavor == EquivFlavor::Coverage) {
      // derivation direction: disjunct membership implies lhs
      if (e->rhs.kind == ExprKind::Or)
        for (const auto& k : e->rhs.children)
          if (k.kind == ExprKind::Atom) reads.emplace_back(k.atom, false);
    }
    for (auto [to, neg] : reads) deps.push_back({e->lhs, to, neg});
  }
  // only edges between derived concepts constrain the layering
  std::vector<StratumPlan::Dep> internal;
  for (const auto& d : deps)
    if (derived.count(d.to)) internal.push_back(d);

  // Tarjan SCC over the dependency graph
  std::map<ConceptId, std::vector<size_t>> out_edges;  // node -> dep indexes
  for (size_t i = 0; i < internal.size(); ++i) out_edges[internal[i].from].push_back(i);

  std::map<ConceptId, int> index, low, comp;
  std::vector<ConceptId> stack;
  std::set<ConceptId> on_stack;
  int next_index = 0, next_comp = 0;
  std::function<void(ConceptId)> strongconnect = [&](ConceptId v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack.insert(v);
    auto it = out_edges.find(v);
    if (it != out_edges.end()) {
      for (size_t dep_idx : it->second) {
        ConceptId w = internal[dep_idx].to;
        if (!index.count(w)) {
          strongconnect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        ConceptId w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp[w] = next_comp;
        if (w == v) break;
      }
      ++next_comp;
    }
  };
  for (ConceptId c : derived)
    if (!index.count(c)) strongconnect(c);

  // a negative edge inside one component is unstratifiable
  for (const auto& d : internal) {
    if (d.negative && comp[d.from] == comp[d.to]) {
      std::set<std::string> names;
      for (auto [c, cc] : comp)
        if (cc == comp[d.from]) names.insert(tbox.concepts.name(c));
      throw StratifyError("negation cycle among defined concepts",
                          {names.begin(), names.end()});
    }
  }

  // layer per concept: positive deps may share, negative deps go strictly up
  std::map<ConceptId, size_t> layer;
  for (ConceptId c : derived) layer[c] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& d : internal) {
      size_t need = layer[d.to] + (d.negative ? 1 : 0);
      if (layer[d.from] < need) {
        layer[d.from] = need;
        changed = true;
      }
    }
  }

  StratumPlan plan;
  plan.deps = deps;
  size_t max_layer = 0;
  for (auto [c, l] : layer) max_layer = std::max(max_layer, l);
  plan.layers.assign(derived.empty() ? 0 : max_layer + 1, {});
  for (auto [c, l] : layer) plan.layers[l].push_back(c);
  for (auto& layer_concepts : plan.layers)
    std::sort(layer_concepts.begin(), layer_concepts.end(),
              [&](ConceptId a, ConceptId b) { return tbox.concepts.name(a) < tbox.concepts.name(b); });
  return plan;
}

Membership classify(const InstanceGraph& graph, const Tbox& tbox, const StratumPlan& plan) {
  Membership m(graph.nodes.size(), tbox.concepts.size());
  for (NodeId n = 0; n < graph.nodes.size(); ++n)
    for (ConceptId c : graph.nodes[n].asserted) m.add(n, c);

  // derivation rules grouped by layer
  std::vector<std::vector<const EquivAxiom*>> by_layer(plan.layers.size());
  for (const auto& ax : tbox.axioms) {
    const auto* e = std::get_if<EquivAxiom>(&ax.body);
    if (!e) continue;
    size_t l = plan.layer_of(e->lhs);
    if (l < by_layer.size()) by_layer[l].push_back(e);
  }

  for (const auto& rules : by_layer) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const EquivAxiom* e : rules) {
        switch (e->flavor) {
          case EquivFlavor::Enumeration:
            for (IndividualId i : e->rhs.individuals)
              changed |= m.add(graph.nominal_node[i], e->lhs);
            break;
          case EquivFlavor::Coverage:
            if (e->rhs.kind == ExprKind::Or) {
              for (const auto& k : e->rhs.children) {
                if (k.kind != ExprKind::Atom) continue;
                for (NodeId n = 0; n < graph.nodes.size(); ++n)
                  if (m.has(n, k.atom)) changed |= m.add(n, e->lhs);
              }
            }
            break;
          case EquivFlavor::Definition:
            for (NodeId n = 0; n < graph.nodes.size(); ++n)
              if (!m.has(n, e->lhs) && eval_expr(e->rhs, n, graph, m))
                changed |= m.add(n, e->lhs);
            break;
        }
      }
    }
  }
  return m;
}

}  // namespace bpmnlint
