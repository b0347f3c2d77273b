#include "bpmnlint/check.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace bpmnlint {

bool Violation::operator<(const Violation& o) const {
  if (axiom_id != o.axiom_id) return axiom_id < o.axiom_id;
  if (subject != o.subject) return subject < o.subject;
  return witness.dump() < o.witness.dump();
}

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Witness why_true(const ConceptExpr& e, const CheckContext& ctx) {
  // used under negation: report the sub-expression that holds
  Witness w;
  w["holds"] = to_sexpr(e, ctx.tbox);
  if (e.kind == ExprKind::Atom) w["concepts"] = {ctx.tbox.concepts.name(e.atom)};
  return w;
}

// Why did `expr` come out false at `subject`? Produces a small, deterministic
// JSON explanation; rendering happens in Explainer.
Witness why_false(const ConceptExpr& e, NodeId subject, const CheckContext& ctx) {
  const Tbox& t = ctx.tbox;
  const InstanceGraph& g = ctx.graph;
  Witness w;
  switch (e.kind) {
    case ExprKind::Atom:
      w["missing"] = t.concepts.name(e.atom);
      return w;
    case ExprKind::Nominals: {
      std::vector<std::string> names;
      for (IndividualId i : e.individuals) names.push_back(t.individuals.name(i));
      w["subject"] = g.nodes[subject].name;
      w["one_of"] = names;
      return w;
    }
    case ExprKind::Not:
      return why_true(e.children[0], ctx);
    case ExprKind::And:
      for (const auto& k : e.children)
        if (!eval_expr(k, subject, g, ctx.membership)) return why_false(k, subject, ctx);
      return w;
    case ExprKind::Or:
      w["failed"] = to_sexpr(e, t);
      return w;
    case ExprKind::Exists: {
      const auto& fillers = g.fillers(subject, e.prop.id);
      w["role"] = t.roles.name(e.prop.id);
      if (fillers.empty()) {
        w["actual"] = 0;
      } else {
        std::vector<std::string> names;
        for (NodeId f : fillers) names.push_back(g.nodes[f].name);
        w["fillers"] = names;
        w["none_satisfy"] = to_sexpr(e.children[0], t);
      }
      return w;
    }
    case ExprKind::ForAll: {
      for (NodeId f : g.fillers(subject, e.prop.id)) {
        if (!eval_expr(e.children[0], f, g, ctx.membership)) {
          w["path"] = Witness::array(
              {Witness{{"role", t.roles.name(e.prop.id)}, {"to", g.nodes[f].name}}});
          w["because"] = why_false(e.children[0], f, ctx);
          return w;
        }
      }
      return w;
    }
    case ExprKind::MinCard:
    case ExprKind::MaxCard:
    case ExprKind::ExactCard: {
      size_t count = e.prop.is_data ? g.literals(subject, e.prop.id).size()
                                    : g.fillers(subject, e.prop.id).size();
      w["role"] = e.prop.is_data ? t.data_roles.name(e.prop.id) : t.roles.name(e.prop.id);
      w["actual"] = count;
      const char* bound = e.kind == ExprKind::MinCard   ? "min"
                          : e.kind == ExprKind::MaxCard ? "max"
                                                        : "exact";
      w[bound] = e.n;
      return w;
    }
    case ExprKind::DataExists:
    case ExprKind::DataForAll: {
      w["datarole"] = t.data_roles.name(e.prop.id);
      std::vector<std::string> present;
      for (const auto& lit : g.literals(subject, e.prop.id)) present.push_back(lit.text);
      w["literals"] = present;
      if (!e.range.values.empty()) {
        std::vector<std::string> accepted;
        for (const auto& v : e.range.values) accepted.push_back(v.text);
        w["accepted"] = accepted;
      }
      return w;
    }
  }
  return w;
}

Violation make_violation(const CheckContext& ctx, const Axiom& ax, NodeId subject,
                         std::string message, Witness witness) {
  Violation v;
  v.axiom_id = ax.id;
  v.subject = ctx.graph.nodes[subject].name;
  v.severity = ctx.tbox.effective_severity(ax);
  v.message = std::move(message);
  v.witness = std::move(witness);
  v.diagram_digest = ctx.graph.source_digest;
  return v;
}

void check_members_against(const Axiom& ax, ConceptId lhs, const ConceptExpr& rhs,
                           const CheckContext& ctx, std::vector<Violation>& out) {
  for (NodeId n : ctx.members_of[lhs]) {
    if (eval_expr(rhs, n, ctx.graph, ctx.membership)) continue;
    std::string msg = "'" + ctx.graph.nodes[n].name + "' is " + ctx.tbox.concepts.name(lhs) +
                      " but does not satisfy " + to_sexpr(rhs, ctx.tbox);
    out.push_back(make_violation(ctx, ax, n, std::move(msg), why_false(rhs, n, ctx)));
  }
}

}  // namespace

std::vector<Violation> check_axiom(const Axiom& ax, const CheckContext& ctx) {
  std::vector<Violation> out;
  const Tbox& t = ctx.tbox;
  const InstanceGraph& g = ctx.graph;

  if (const auto* s = std::get_if<SubConceptAxiom>(&ax.body)) {
    check_members_against(ax, s->lhs, s->rhs, ctx, out);
  } else if (const auto* e = std::get_if<EquivAxiom>(&ax.body)) {
    // the rhs=>lhs direction is derivation; only lhs=>rhs is checked
    check_members_against(ax, e->lhs, e->rhs, ctx, out);
  } else if (const auto* d = std::get_if<DisjointAxiom>(&ax.body)) {
    const auto& smaller =
        ctx.members_of[d->a].size() <= ctx.members_of[d->b].size() ? d->a : d->b;
    ConceptId other = smaller == d->a ? d->b : d->a;
    for (NodeId n : ctx.members_of[smaller]) {
      if (!ctx.membership.has(n, other)) continue;
      Witness w;
      w["concepts"] = {t.concepts.name(d->a), t.concepts.name(d->b)};
      std::string msg = "'" + g.nodes[n].name + "' is both " + t.concepts.name(d->a) + " and " +
                        t.concepts.name(d->b);
      out.push_back(make_violation(ctx, ax, n, std::move(msg), std::move(w)));
    }
  } else if (const auto* dom = std::get_if<DomainAxiom>(&ax.body)) {
    for (NodeId n = 0; n < g.nodes.size(); ++n) {
      bool used = dom->prop.is_data ? !g.literals(n, dom->prop.id).empty()
                                    : !g.fillers(n, dom->prop.id).empty();
      if (!used || ctx.membership.has(n, dom->domain)) continue;
      const auto& pname =
          dom->prop.is_data ? t.data_roles.name(dom->prop.id) : t.roles.name(dom->prop.id);
      Witness w;
      w["role"] = pname;
      w["missing"] = t.concepts.name(dom->domain);
      std::string msg = "'" + g.nodes[n].name + "' uses " + pname + " but is not " +
                        t.concepts.name(dom->domain);
      out.push_back(make_violation(ctx, ax, n, std::move(msg), std::move(w)));
    }
  } else if (const auto* rng = std::get_if<RangeAxiom>(&ax.body)) {
    if (rng->prop.is_data) {
      for (NodeId n = 0; n < g.nodes.size(); ++n) {
        for (const auto& lit : g.literals(n, rng->prop.id)) {
          if (rng->data_range.contains(lit)) continue;
          Witness w;
          w["datarole"] = t.data_roles.name(rng->prop.id);
          w["literal"] = lit.text;
          if (!rng->data_range.values.empty()) {
            std::vector<std::string> accepted;
            for (const auto& v : rng->data_range.values) accepted.push_back(v.text);
            w["accepted"] = accepted;
          }
          std::string msg = "'" + g.nodes[n].name + "': value " + literal_token(lit) +
                            " is outside the range of " + t.data_roles.name(rng->prop.id);
          out.push_back(make_violation(ctx, ax, n, std::move(msg), std::move(w)));
        }
      }
    } else {
      for (NodeId n = 0; n < g.nodes.size(); ++n) {
        for (NodeId f : g.fillers(n, rng->prop.id)) {
          if (eval_expr(rng->concept_range, f, g, ctx.membership)) continue;
          Witness w;
          w["path"] =
              Witness::array({Witness{{"role", t.roles.name(rng->prop.id)}, {"to", g.nodes[f].name}}});
          w["because"] = why_false(rng->concept_range, f, ctx);
          std::string msg = "'" + g.nodes[n].name + "': " + t.roles.name(rng->prop.id) +
                            " filler '" + g.nodes[f].name + "' is not " +
                            to_sexpr(rng->concept_range, t);
          out.push_back(make_violation(ctx, ax, n, std::move(msg), std::move(w)));
        }
      }
    }
  }
  // SubRole / InverseRole: materialized upstream. DistinctIndividuals: the
  // unique name assumption makes a collapse impossible. Native: handled by
  // extended_checks.
  return out;
}

bool native_check_registered(std::string_view name) {
  return name == "object-id-uniqueness" || name == "inclusive-gateway-uniform-conditions";
}

std::vector<Violation> extended_checks(const InstanceGraph& graph, const Membership& membership,
                                       const Tbox& tbox) {
  std::vector<Violation> out;

  // concept membership index for just the concepts these checks read
  auto members = [&](std::string_view concept_name) {
    std::vector<NodeId> nodes;
    auto id = tbox.concepts.find(concept_name);
    if (!id) return nodes;
    for (NodeId n = 0; n < graph.nodes.size(); ++n)
      if (membership.has(n, *id)) nodes.push_back(n);
    return nodes;
  };

  for (const auto& ax : tbox.axioms) {
    const auto* native = std::get_if<NativeAxiom>(&ax.body);
    if (!native) continue;

    if (native->check == "object-id-uniqueness") {
      auto id_role = tbox.data_roles.find("has_object_id");
      if (!id_role) continue;
      std::map<std::string, std::vector<NodeId>> by_literal;
      for (NodeId n : members("object"))
        for (const auto& lit : graph.literals(n, *id_role)) by_literal[lit.text].push_back(n);
      for (const auto& [text, nodes] : by_literal) {
        for (size_t i = 0; i < nodes.size(); ++i) {
          for (size_t j = i + 1; j < nodes.size(); ++j) {
            Violation v;
            v.axiom_id = ax.id;
            v.subject = graph.nodes[nodes[i]].name;
            v.severity = tbox.effective_severity(ax);
            v.message = "objects '" + graph.nodes[nodes[i]].name + "' and '" +
                        graph.nodes[nodes[j]].name + "' share object id \"" + text + "\"";
            v.witness["pair"] = {graph.nodes[nodes[i]].name, graph.nodes[nodes[j]].name};
            v.witness["literal"] = text;
            v.diagram_digest = graph.source_digest;
            out.push_back(std::move(v));
          }
        }
      }
    } else if (native->check == "inclusive-gateway-uniform-conditions") {
      auto src_inv = tbox.roles.find("has_sequence_flow_source_ref_inv");
      auto cond_expr = tbox.roles.find("has_sequence_flow_condition_expression");
      auto body_role = tbox.data_roles.find("has_expression_expression_body");
      auto lang_role = tbox.data_roles.find("has_expression_expression_language");
      if (!src_inv || !cond_expr || !body_role || !lang_role) continue;
      using ExprSig = std::set<std::pair<std::string, std::string>>;
      for (NodeId gw : members("inclusive_gateway")) {
        std::vector<std::pair<NodeId, ExprSig>> flows;
        for (NodeId flow : graph.fillers(gw, *src_inv)) {
          ExprSig sig;
          for (NodeId expr : graph.fillers(flow, *cond_expr)) {
            std::vector<std::string> bodies, langs;
            for (const auto& lit : graph.literals(expr, *body_role)) bodies.push_back(trim(lit.text));
            for (const auto& lit : graph.literals(expr, *lang_role)) langs.push_back(trim(lit.text));
            if (bodies.empty()) bodies.push_back("");
            if (langs.empty()) langs.push_back("");
            for (const auto& b : bodies)
              for (const auto& l : langs) sig.emplace(b, l);
          }
          if (!sig.empty()) flows.emplace_back(flow, std::move(sig));
        }
        for (size_t i = 1; i < flows.size(); ++i) {
          if (flows[i].second == flows[0].second) continue;
          auto render = [&](const ExprSig& sig) {
            Witness arr = Witness::array();
            for (const auto& [b, l] : sig) arr.push_back({b, l});
            return arr;
          };
          Violation v;
          v.axiom_id = ax.id;
          v.subject = graph.nodes[gw].name;
          v.severity = tbox.effective_severity(ax);
          v.message = "inclusive gateway '" + graph.nodes[gw].name + "': outgoing flows '" +
                      graph.nodes[flows[0].first].name + "' and '" +
                      graph.nodes[flows[i].first].name +
                      "' carry different condition expressions";
          v.witness["pair"] = {graph.nodes[flows[0].first].name,
                               graph.nodes[flows[i].first].name};
          v.witness["expressions"] =
              Witness::array({render(flows[0].second), render(flows[i].second)});
          v.diagram_digest = graph.source_digest;
          out.push_back(std::move(v));
        }
      }
    }
    // unknown native checks were rejected upstream by well_formed callers
  }
  return out;
}

ValidationReport check_all(const Tbox& tbox, InstanceGraph& graph, const CheckOptions& options) {
  if (!graph.materialized) {
    RoleTable roles = role_closure(tbox);
    materialize_roles(graph, roles);
  }
  StratumPlan plan = stratify(tbox);
  Membership membership = classify(graph, tbox, plan);

  std::vector<std::vector<NodeId>> members_of(tbox.concepts.size());
  for (NodeId n = 0; n < graph.nodes.size(); ++n)
    for (ConceptId c = 0; c < tbox.concepts.size(); ++c)
      if (membership.has(n, c)) members_of[c].push_back(n);

  CheckContext ctx{tbox, graph, membership, members_of};

  unsigned jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                    : options.jobs;
  jobs = std::min<unsigned>(jobs, 64);

  std::vector<Violation> violations;
  if (jobs <= 1) {
    for (const auto& ax : tbox.axioms) {
      auto found = check_axiom(ax, ctx);
      violations.insert(violations.end(), std::make_move_iterator(found.begin()),
                        std::make_move_iterator(found.end()));
    }
  } else {
    std::vector<std::vector<Violation>> partial(jobs);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (size_t i = w; i < tbox.axioms.size(); i += jobs) {
          auto found = check_axiom(tbox.axioms[i], ctx);
          partial[w].insert(partial[w].end(), std::make_move_iterator(found.begin()),
                            std::make_move_iterator(found.end()));
        }
      });
    }
    for (auto& worker : workers) worker.join();
    for (auto& part : partial)
      violations.insert(violations.end(), std::make_move_iterator(part.begin()),
                        std::make_move_iterator(part.end()));
  }

  auto ext = extended_checks(graph, membership, tbox);
  violations.insert(violations.end(), std::make_move_iterator(ext.begin()),
                    std::make_move_iterator(ext.end()));

  // overrides relabel, never add or remove
  for (auto& v : violations) {
    auto it = options.severity_overrides.find(v.axiom_id);
    if (it != options.severity_overrides.end()) v.severity = it->second;
  }

  std::sort(violations.begin(), violations.end());

  ValidationReport report;
  report.tbox_digest = tbox.source_digest;
  report.diagram_digest = graph.source_digest;
  report.violations = std::move(violations);
  for (const auto& v : report.violations)
    (v.severity == Severity::Error ? report.error_count : report.warning_count) += 1;
  return report;
}

nlohmann::ordered_json report_to_json(const ValidationReport& report) {
  nlohmann::ordered_json doc;
  doc["tbox"] = report.tbox_digest;
  doc["diagram"] = report.diagram_digest;
  doc["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    nlohmann::ordered_json item;
    item["axiom"] = v.axiom_id;
    item["subject"] = v.subject;
    item["severity"] = std::string(severity_name(v.severity));
    item["message"] = v.message;
    item["witness"] = v.witness;
    doc["violations"].push_back(std::move(item));
  }
  doc["counts"] = {{"error", report.error_count}, {"warning", report.warning_count}};
  return doc;
}

void render_text_report(const ValidationReport& report, std::ostream& out,
                        size_t max_violations) {
  size_t shown = 0;
  std::string current_axiom;
  for (const auto& v : report.violations) {
    if (max_violations && shown >= max_violations) {
      out << "...and " << (report.violations.size() - shown) << " more\n";
      break;
    }
    if (v.axiom_id != current_axiom) {
      current_axiom = v.axiom_id;
      out << v.axiom_id << " [" << severity_name(v.severity) << "]\n";
    }
    out << "  " << v.subject << ": " << v.message << "\n";
    ++shown;
  }
  out << report.error_count << " errors, " << report.warning_count << " warnings\n";
}

Explainer::Explainer(const Tbox& tbox, const InstanceGraph& graph)
    : tbox_(tbox), diagram_digest_(graph.source_digest) {}

std::string Explainer::explain(const Violation& v) const {
  if (v.diagram_digest != diagram_digest_)
    throw TboxError("stale violation: diagram fingerprint mismatch");
  const Axiom* ax = tbox_.find_axiom(v.axiom_id);
  std::ostringstream os;
  os << v.axiom_id << " [" << severity_name(v.severity) << "]";
  if (ax && !ax->trace.empty()) os << " \"" << ax->trace << "\"";
  os << "\n  subject: " << v.subject << "\n  " << v.message << "\n";

  std::function<void(const Witness&, const std::string&)> render =
      [&](const Witness& w, const std::string& indent) {
        if (w.contains("path")) {
          for (const auto& step : w["path"]) {
            os << indent << "via " << step["role"].get<std::string>() << " -> "
               << step["to"].get<std::string>() << "\n";
          }
        }
        if (w.contains("role") && w.contains("actual") && w["actual"].get<size_t>() == 0)
          os << indent << "no fillers found for " << w["role"].get<std::string>() << "\n";
        else if (w.contains("role") && w.contains("actual"))
          os << indent << w["role"].get<std::string>() << " has "
             << w["actual"].get<size_t>() << " filler(s)\n";
        if (w.contains("literals")) {
          os << indent << "literals:";
          for (const auto& l : w["literals"]) os << " \"" << l.get<std::string>() << "\"";
          if (w.contains("accepted")) {
            os << "  (accepted:";
            for (const auto& l : w["accepted"]) os << " \"" << l.get<std::string>() << "\"";
            os << ")";
          }
          os << "\n";
        }
        if (w.contains("missing"))
          os << indent << "not a member of " << w["missing"].get<std::string>() << "\n";
        if (w.contains("because")) render(w["because"], indent + "  ");
      };
  render(v.witness, "  ");
  return os.str();
}

}  // namespace bpmnlint
