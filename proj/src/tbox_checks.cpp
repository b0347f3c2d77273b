#include <algorithm>
#include <functional>
#include <set>

#include "bpmnlint/classify.hpp"
#include "bpmnlint/tbox.hpp"

namespace bpmnlint {

namespace {

void collect_bad_refs(const ConceptExpr& e, const Tbox& t, std::set<std::string>& bad) {
  switch (e.kind) {
    case ExprKind::Atom:
      if (e.atom >= t.concepts.size()) bad.insert("concept#" + std::to_string(e.atom));
      break;
    case ExprKind::Nominals:
      for (auto i : e.individuals)
        if (i >= t.individuals.size()) bad.insert("individual#" + std::to_string(i));
      break;
    case ExprKind::Exists:
    case ExprKind::ForAll:
      if (e.prop.id >= t.roles.size()) bad.insert("role#" + std::to_string(e.prop.id));
      break;
    case ExprKind::MinCard:
    case ExprKind::MaxCard:
    case ExprKind::ExactCard:
      if (e.prop.is_data ? e.prop.id >= t.data_roles.size() : e.prop.id >= t.roles.size())
        bad.insert("property#" + std::to_string(e.prop.id));
      break;
    case ExprKind::DataExists:
    case ExprKind::DataForAll:
      if (e.prop.id >= t.data_roles.size()) bad.insert("datarole#" + std::to_string(e.prop.id));
      break;
    default:
      break;
  }
  for (const auto& k : e.children) collect_bad_refs(k, t, bad);
}

}  // namespace

std::vector<SchemaFinding> well_formed(const Tbox& tbox) {
  std::vector<SchemaFinding> findings;

  // a name may sit in only one symbol table
  {
    std::set<std::string> seen, dup;
    for (const auto* table : {&tbox.concepts, &tbox.roles, &tbox.data_roles, &tbox.individuals})
      for (const auto& n : table->all())
        if (!seen.insert(n).second) dup.insert(n);
    if (!dup.empty())
      findings.push_back({"shared-name", "name declared in more than one symbol table",
                          {dup.begin(), dup.end()}});
  }

  for (const auto& ax : tbox.axioms) {
    std::set<std::string> bad;
    if (const auto* s = std::get_if<SubConceptAxiom>(&ax.body)) {
      if (s->lhs >= tbox.concepts.size()) bad.insert("lhs");
      collect_bad_refs(s->rhs, tbox, bad);
    } else if (const auto* e = std::get_if<EquivAxiom>(&ax.body)) {
      if (e->lhs >= tbox.concepts.size()) bad.insert("lhs");
      collect_bad_refs(e->rhs, tbox, bad);
      if (e->flavor == EquivFlavor::Definition &&
          !(e->rhs.kind == ExprKind::And && !e->rhs.children.empty() &&
            e->rhs.children.front().kind == ExprKind::Atom))
        findings.push_back({"definition-shape",
                            "definition rhs must be a conjunction led by its base atom",
                            {ax.id}});
    } else if (const auto* d = std::get_if<DisjointAxiom>(&ax.body)) {
      if (d->a == d->b)
        findings.push_back(
            {"self-disjoint", "concept declared disjoint with itself", {tbox.concepts.name(d->a)}});
    } else if (const auto* n = std::get_if<NativeAxiom>(&ax.body)) {
      if (!native_check_registered(n->check))
        findings.push_back(
            {"unknown-native-check", "axiom " + ax.id + " names an unregistered native check",
             {n->check}});
    }
    if (!bad.empty())
      findings.push_back({"dangling-name", "axiom " + ax.id + " references unknown symbols",
                          {bad.begin(), bad.end()}});
  }

  // enumeration axioms must agree with the declared memberships, and every
  // pair of enumeration individuals needs an explicit distinctness axiom
  std::set<std::pair<IndividualId, IndividualId>> distinct;
  for (const auto& ax : tbox.axioms)
    if (const auto* d = std::get_if<DistinctAxiom>(&ax.body))
      distinct.insert(d->a < d->b ? std::make_pair(d->a, d->b) : std::make_pair(d->b, d->a));

  for (const auto& ax : tbox.axioms) {
    const auto* e = std::get_if<EquivAxiom>(&ax.body);
    if (!e || e->flavor != EquivFlavor::Enumeration) continue;
    std::vector<IndividualId> listed = e->rhs.individuals;
    std::sort(listed.begin(), listed.end());
    if (std::adjacent_find(listed.begin(), listed.end()) != listed.end())
      findings.push_back({"enum-duplicate", "enumeration lists an individual twice", {ax.id}});
    auto it = tbox.enum_members.find(e->lhs);
    std::vector<IndividualId> declared = it == tbox.enum_members.end()
                                             ? std::vector<IndividualId>{}
                                             : it->second;
    std::sort(declared.begin(), declared.end());
    if (listed != declared)
      findings.push_back({"enum-membership",
                          "enumeration axiom disagrees with declared members",
                          {tbox.concepts.name(e->lhs)}});
    std::vector<std::string> missing;
    for (size_t i = 0; i < listed.size(); ++i)
      for (size_t j = i + 1; j < listed.size(); ++j)
        if (!distinct.count({std::min(listed[i], listed[j]), std::max(listed[i], listed[j])}))
          missing.push_back(tbox.individuals.name(listed[i]) + "/" +
                            tbox.individuals.name(listed[j]));
    if (!missing.empty())
      findings.push_back({"enum-distinctness",
                          "enumeration " + tbox.concepts.name(e->lhs) +
                              " lacks pairwise distinctness axioms",
                          missing});
  }

  try {
    stratify(tbox);
  } catch (const StratifyError& err) {
    findings.push_back({"negation-cycle", err.what(), err.cycle});
  }

  // keeps the contract that a clean tbox always has a role closure
  try {
    role_closure(tbox);
  } catch (const TboxError& err) {
    findings.push_back({"role-table", err.what(), {}});
  }

  return findings;
}

RoleTable role_closure(const Tbox& tbox) {
  const uint32_t n = tbox.roles.size();
  std::vector<std::vector<RoleId>> direct(n);
  for (const auto& ax : tbox.axioms)
    if (const auto* s = std::get_if<SubRoleAxiom>(&ax.body)) direct[s->sub].push_back(s->super);

  RoleTable table;
  table.supers.assign(n, {});
  table.inverse_of.assign(n, std::nullopt);

  // transitive closure with cycle detection
  std::vector<int> state(n, 0);  // 0 unvisited, 1 in progress, 2 done
  std::vector<RoleId> stack;
  std::function<void(RoleId)> visit = [&](RoleId r) {
    if (state[r] == 2) return;
    if (state[r] == 1) {
      auto it = std::find(stack.begin(), stack.end(), r);
      std::string msg = "role-hierarchy cycle:";
      for (; it != stack.end(); ++it) msg += " " + tbox.roles.name(*it);
      throw TboxError(msg);
    }
    state[r] = 1;
    stack.push_back(r);
    std::set<RoleId> acc;
    for (RoleId s : direct[r]) {
      visit(s);
      acc.insert(s);
      acc.insert(table.supers[s].begin(), table.supers[s].end());
    }
    table.supers[r].assign(acc.begin(), acc.end());
    stack.pop_back();
    state[r] = 2;
  };
  for (RoleId r = 0; r < n; ++r) visit(r);

  for (const auto& ax : tbox.axioms) {
    if (const auto* inv = std::get_if<InverseRoleAxiom>(&ax.body)) {
      for (auto [a, b] : {std::pair{inv->inverse, inv->base}, std::pair{inv->base, inv->inverse}}) {
        if (table.inverse_of[a] && *table.inverse_of[a] != b)
          throw TboxError("role " + tbox.roles.name(a) + " declared with two distinct inverses: " +
                          tbox.roles.name(*table.inverse_of[a]) + " and " + tbox.roles.name(b));
        table.inverse_of[a] = b;
      }
    }
  }
  return table;
}

}  // namespace bpmnlint
