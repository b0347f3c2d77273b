#include <algorithm>
#include <set>

#include <json.hpp>

#include "bpmnlint/graph.hpp"

namespace bpmnlint {

namespace {

using nlohmann::json;

// Documented attribute defaults: once an element is known to fall under
// `concept`, a missing `property` receives `token`. Tokens name a nominal
// individual for object roles and parse as a literal for data roles.
struct DefaultRule {
  const char* concept_name;
  const char* property;
  const char* token;
};

constexpr DefaultRule kDefaults[] = {
    {"activity", "has_activity_start_quantity", "1"},
    {"activity", "has_activity_completion_quantity", "1"},
    {"gateway", "has_gateway_gateway_type", "exclusive"},
    {"exclusive_gateway", "has_exclusive_gateway_exclusive_type", "data_exclusive_type"},
    {"data_based_exclusive_gateway", "has_data_based_exclusive_gateway_marker_visible", "false"},
    {"sub_process", "has_sub_process_sub_process_type", "embedded"},
    {"sequence_flow", "has_sequence_flow_condition_type", "None"},
    {"embedded_sub_process", "has_embedded_sub_process_ad_hoc", "false"},
    {"embedded_sub_process", "has_embedded_sub_process_ad_hoc_ordering", "Parallel"},
    {"process", "has_process_ad_hoc", "false"},
    {"process", "has_process_ad_hoc_ordering", "Parallel"},
    {"process", "has_process_process_type", "None"},
    {"transaction", "has_transaction_transaction_method", "Compensate"},
    {"association", "has_association_direction", "None"},
    {"artifact_input", "has_artifact_input_required_for_start", "true"},
    {"artifact_output", "has_artifact_output_produce_at_completion", "true"},
    {"business_process_diagram", "has_business_process_diagram_language", "English"},
    {"service_task", "has_service_task_implementation", "Web_Service"},
    {"receive_task", "has_receive_task_implementation", "Web_Service"},
    {"send_task", "has_send_task_implementation", "Web_Service"},
    {"user_task", "has_user_task_implementation", "Web_Service"},
    {"message_event_detail", "has_message_event_implementation", "Web_Service"},
};

Literal literal_from_token(std::string_view token, Datatype dt) {
  switch (dt) {
    case Datatype::Boolean:
      return Literal::boolean(token == "true");
    case Datatype::Integer:
    case Datatype::PositiveInteger:
      return Literal::integer(std::stoll(std::string(token)), dt);
    case Datatype::Date:
      return Literal::date(std::string(token));
    case Datatype::String:
      break;
  }
  return Literal::string(std::string(token));
}

// Nominal-typed definition recipes, used to grow the element's implied
// concept set while defaults are applied.
struct DefRecipe {
  ConceptId lhs;
  ConceptId base;
  std::vector<std::pair<std::string, std::string>> edges;  // role name -> individual name
};

struct DefaultsContext {
  std::vector<DefRecipe> definitions;
  std::vector<std::pair<ConceptId, std::vector<ConceptId>>> coverages;  // lhs, disjuncts
  const Tbox* tbox;
};

DefaultsContext make_defaults_context(const Tbox& tbox) {
  DefaultsContext ctx;
  ctx.tbox = &tbox;
  for (const auto& ax : tbox.axioms) {
    const auto* e = std::get_if<EquivAxiom>(&ax.body);
    if (!e) continue;
    if (e->flavor == EquivFlavor::Coverage) {
      std::vector<ConceptId> disjuncts;
      if (e->rhs.kind == ExprKind::Or)
        for (const auto& k : e->rhs.children)
          if (k.kind == ExprKind::Atom) disjuncts.push_back(k.atom);
      ctx.coverages.emplace_back(e->lhs, std::move(disjuncts));
      continue;
    }
    if (e->flavor != EquivFlavor::Definition) continue;
    if (e->rhs.kind != ExprKind::And || e->rhs.children.empty() ||
        e->rhs.children.front().kind != ExprKind::Atom)
      continue;
    DefRecipe recipe{e->lhs, e->rhs.children.front().atom, {}};
    bool simple = true;
    for (size_t i = 1; i < e->rhs.children.size(); ++i) {
      const auto& k = e->rhs.children[i];
      if (k.kind == ExprKind::Exists && k.children[0].kind == ExprKind::Nominals &&
          k.children[0].individuals.size() == 1) {
        recipe.edges.emplace_back(tbox.roles.name(k.prop.id),
                                  tbox.individuals.name(k.children[0].individuals[0]));
      } else {
        simple = false;
        break;
      }
    }
    if (simple && !recipe.edges.empty()) ctx.definitions.push_back(std::move(recipe));
  }
  return ctx;
}

bool element_has_edge(const RawElement& el, const std::string& role, const std::string& target) {
  auto it = el.refs.find(role);
  if (it == el.refs.end()) return false;
  return std::find(it->second.begin(), it->second.end(), target) != it->second.end();
}

std::set<ConceptId> implied_concepts(const RawElement& el, const DefaultsContext& ctx) {
  std::set<ConceptId> implied;
  for (const auto& a : el.atoms)
    if (auto id = ctx.tbox->concepts.find(a)) implied.insert(*id);
  if (!el.kind.empty())
    if (auto id = ctx.tbox->concepts.find(el.kind)) implied.insert(*id);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& recipe : ctx.definitions) {
      // a named kind implies its base chain
      if (implied.count(recipe.lhs) && !implied.count(recipe.base)) {
        implied.insert(recipe.base);
        changed = true;
      }
      if (implied.count(recipe.lhs) || !implied.count(recipe.base)) continue;
      bool all = true;
      for (const auto& [role, target] : recipe.edges)
        if (!element_has_edge(el, role, target)) {
          all = false;
          break;
        }
      if (all) {
        implied.insert(recipe.lhs);
        changed = true;
      }
    }
    for (const auto& [lhs, disjuncts] : ctx.coverages) {
      if (implied.count(lhs)) continue;
      for (ConceptId d : disjuncts)
        if (implied.count(d)) {
          implied.insert(lhs);
          changed = true;
          break;
        }
    }
  }
  return implied;
}

RawElement apply_defaults_impl(RawElement el, const DefaultsContext& ctx) {
  const Tbox& tbox = *ctx.tbox;
  bool changed = true;
  while (changed) {
    changed = false;
    auto implied = implied_concepts(el, ctx);
    for (const auto& rule : kDefaults) {
      auto cid = tbox.concepts.find(rule.concept_name);
      if (!cid || !implied.count(*cid)) continue;
      if (auto dr = tbox.data_roles.find(rule.property)) {
        if (el.data.count(rule.property)) continue;
        el.data[rule.property] = {literal_from_token(rule.token, tbox.data_role_type[*dr])};
        changed = true;
      } else if (tbox.roles.find(rule.property)) {
        if (el.refs.count(rule.property)) continue;
        el.refs[rule.property] = {rule.token};
        changed = true;
      }
    }
  }
  return el;
}

Literal parse_json_literal(const json& v, Datatype dt, const std::string& element,
                           const std::string& role) {
  auto fail = [&](const std::string& why) -> Literal {
    throw DiagramError("element '" + element + "': datatype mismatch for '" + role + "': " + why);
  };
  switch (dt) {
    case Datatype::String:
      if (!v.is_string()) return fail("expected a string");
      return Literal::string(v.get<std::string>());
    case Datatype::Boolean:
      if (!v.is_boolean()) return fail("expected a boolean");
      return Literal::boolean(v.get<bool>());
    case Datatype::Integer:
      if (!v.is_number_integer()) return fail("expected an integer");
      return Literal::integer(v.get<int64_t>());
    case Datatype::PositiveInteger:
      if (!v.is_number_integer()) return fail("expected an integer");
      if (v.get<int64_t>() < 1) return fail("positive integer must be >= 1");
      return Literal::integer(v.get<int64_t>(), Datatype::PositiveInteger);
    case Datatype::Date:
      if (!v.is_string() || !valid_iso_date(v.get<std::string>()))
        return fail("expected an ISO-8601 date (YYYY-MM-DD)");
      return Literal::date(v.get<std::string>());
  }
  return fail("unhandled datatype");
}

}  // namespace

RawElement apply_defaults(RawElement element, const Tbox& tbox) {
  return apply_defaults_impl(std::move(element), make_defaults_context(tbox));
}

InstanceGraph load_diagram(std::string_view document, const Tbox& tbox) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw DiagramError(std::string("diagram syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw DiagramError("top level must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (key != "elements") throw DiagramError("unknown top-level key '" + key + "'");
  if (!doc.contains("elements") || !doc["elements"].is_array())
    throw DiagramError("missing 'elements' array");

  const KindTable kinds = derive_kind_table(tbox);
  const DefaultsContext defaults_ctx = make_defaults_context(tbox);

  // -------- raw records
  std::vector<RawElement> elements;
  std::set<std::string> ids;
  for (const auto& item : doc["elements"]) {
    if (!item.is_object()) throw DiagramError("element entries must be objects");
    RawElement el;
    for (const auto& [key, value] : item.items()) {
      if (key == "id") {
        if (!value.is_string() || value.get<std::string>().empty())
          throw DiagramError("element id must be a non-empty string");
        el.id = value.get<std::string>();
      } else if (key == "kind") {
        if (!value.is_string()) throw DiagramError("'kind' must be a string");
        el.kind = value.get<std::string>();
      } else if (key == "atoms") {
        if (!value.is_array()) throw DiagramError("'atoms' must be an array");
        for (const auto& a : value) {
          if (!a.is_string()) throw DiagramError("'atoms' entries must be strings");
          el.atoms.push_back(a.get<std::string>());
        }
      } else if (key == "data") {
        if (!value.is_object()) throw DiagramError("'data' must be an object");
        for (const auto& [role, lits] : value.items()) {
          auto dr = tbox.data_roles.find(role);
          if (!dr) {
            if (tbox.roles.find(role))
              throw DiagramError("'" + role + "' is an object role; list its targets under 'refs'");
            throw DiagramError("unknown data role '" + role + "'");
          }
          if (!lits.is_array()) throw DiagramError("'data." + role + "' must be an array");
          auto& out = el.data[role];
          for (const auto& v : lits)
            out.push_back(parse_json_literal(v, tbox.data_role_type[*dr], el.id, role));
        }
      } else if (key == "refs") {
        if (!value.is_object()) throw DiagramError("'refs' must be an object");
        for (const auto& [role, targets] : value.items()) {
          if (!tbox.roles.find(role)) {
            if (tbox.data_roles.find(role))
              throw DiagramError("'" + role + "' is a data role; list its literals under 'data'");
            throw DiagramError("unknown role '" + role + "'");
          }
          if (!targets.is_array()) throw DiagramError("'refs." + role + "' must be an array");
          auto& out = el.refs[role];
          for (const auto& v : targets) {
            if (!v.is_string()) throw DiagramError("'refs." + role + "' entries must be strings");
            out.push_back(v.get<std::string>());
          }
        }
      } else {
        throw DiagramError("unknown element key '" + key + "'");
      }
    }
    if (el.id.empty()) throw DiagramError("element without an id");
    if (!ids.insert(el.id).second) throw DiagramError("duplicate element id '" + el.id + "'");
    for (const auto& a : el.atoms)
      if (!tbox.concepts.find(a))
        throw DiagramError("element '" + el.id + "': unknown concept '" + a + "'");
    if (!el.kind.empty() && !kinds.count(el.kind) && !tbox.concepts.find(el.kind))
      throw DiagramError("element '" + el.id + "': unknown kind token '" + el.kind + "'");
    elements.push_back(std::move(el));
  }

  for (auto& el : elements) el = apply_defaults_impl(std::move(el), defaults_ctx);

  // -------- node set: nominal individuals are always present
  InstanceGraph graph;
  graph.source_digest = sha256_hex(document);
  std::vector<std::string> names;
  for (const auto& n : tbox.individuals.all()) {
    if (ids.count(n)) throw DiagramError("duplicate element id '" + n + "' (nominal individual)");
    names.push_back(n);
  }
  for (const auto& el : elements) names.push_back(el.id);
  std::sort(names.begin(), names.end());

  graph.nodes.resize(names.size());
  for (NodeId i = 0; i < names.size(); ++i) {
    graph.nodes[i].name = names[i];
    graph.index.emplace(names[i], i);
  }
  graph.nominal_node.resize(tbox.individuals.size());
  for (uint32_t i = 0; i < tbox.individuals.size(); ++i)
    graph.nominal_node[i] = graph.index.at(tbox.individuals.name(i));

  // -------- populate
  for (const auto& el : elements) {
    Individual& node = graph.nodes[graph.index.at(el.id)];
    std::set<ConceptId> atoms;
    for (const auto& a : el.atoms) atoms.insert(*tbox.concepts.find(a));
    if (!el.kind.empty()) {
      auto it = kinds.find(el.kind);
      if (it != kinds.end()) {
        atoms.insert(it->second.atoms.begin(), it->second.atoms.end());
        for (auto [role, ind] : it->second.type_edges) {
          auto& fillers = node.edges[role];
          fillers.push_back(graph.nominal_node[ind]);
        }
      } else {
        atoms.insert(*tbox.concepts.find(el.kind));
      }
    }
    node.asserted.assign(atoms.begin(), atoms.end());
    for (const auto& [role, lits] : el.data) {
      auto& out = node.data[*tbox.data_roles.find(role)];
      out.insert(out.end(), lits.begin(), lits.end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    for (const auto& [role, targets] : el.refs) {
      auto& out = node.edges[*tbox.roles.find(role)];
      for (const auto& target : targets) {
        auto it = graph.index.find(target);
        if (it == graph.index.end())
          throw DiagramError("element '" + el.id + "': dangling reference '" + target + "'");
        out.push_back(it->second);
      }
    }
    for (auto& [role, fillers] : node.edges) {
      std::sort(fillers.begin(), fillers.end());
      fillers.erase(std::unique(fillers.begin(), fillers.end()), fillers.end());
    }
  }

  graph.materialized = false;
  return graph;
}

}  // namespace bpmnlint
