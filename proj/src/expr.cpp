#include "bpmnlint/expr.hpp"

#include <algorithm>
#include <sstream>

#include "bpmnlint/tbox.hpp"

namespace bpmnlint {

bool DataRange::contains(const Literal& lit) const {
  if (lit.type != type) return false;
  if (values.empty()) return true;
  return std::find(values.begin(), values.end(), lit) != values.end();
}

ConceptExpr ConceptExpr::make_atom(ConceptId c) {
  ConceptExpr e;
  e.kind = ExprKind::Atom;
  e.atom = c;
  return e;
}

ConceptExpr ConceptExpr::make_nominals(std::vector<IndividualId> inds) {
  ConceptExpr e;
  e.kind = ExprKind::Nominals;
  e.individuals = std::move(inds);
  return e;
}

ConceptExpr ConceptExpr::make_not(ConceptExpr inner) {
  ConceptExpr e;
  e.kind = ExprKind::Not;
  e.children.push_back(std::move(inner));
  return e;
}

ConceptExpr ConceptExpr::make_and(std::vector<ConceptExpr> kids) {
  ConceptExpr e;
  e.kind = ExprKind::And;
  e.children = std::move(kids);
  return e;
}

ConceptExpr ConceptExpr::make_or(std::vector<ConceptExpr> kids) {
  ConceptExpr e;
  e.kind = ExprKind::Or;
  e.children = std::move(kids);
  return e;
}

ConceptExpr ConceptExpr::make_exists(RoleId r, ConceptExpr filler) {
  ConceptExpr e;
  e.kind = ExprKind::Exists;
  e.prop = PropertyRef{false, r};
  e.children.push_back(std::move(filler));
  return e;
}

ConceptExpr ConceptExpr::make_forall(RoleId r, ConceptExpr filler) {
  ConceptExpr e = make_exists(r, std::move(filler));
  e.kind = ExprKind::ForAll;
  return e;
}

ConceptExpr ConceptExpr::make_card(ExprKind kind, uint32_t n, PropertyRef prop) {
  ConceptExpr e;
  e.kind = kind;
  e.n = n;
  e.prop = prop;
  return e;
}

ConceptExpr ConceptExpr::make_data_some(DataRoleId r, DataRange range) {
  ConceptExpr e;
  e.kind = ExprKind::DataExists;
  e.prop = PropertyRef{true, r};
  e.range = std::move(range);
  return e;
}

ConceptExpr ConceptExpr::make_data_all(DataRoleId r, DataRange range) {
  ConceptExpr e = make_data_some(r, std::move(range));
  e.kind = ExprKind::DataForAll;
  return e;
}

std::string literal_token(const Literal& lit) {
  switch (lit.type) {
    case Datatype::Boolean:
    case Datatype::Integer:
    case Datatype::PositiveInteger:
      return lit.text;
    default:
      return "\"" + lit.text + "\"";
  }
}

static void write_range(std::ostream& os, const DataRange& r) {
  if (r.values.empty()) {
    os << "(datatype " << datatype_name(r.type) << ")";
    return;
  }
  os << "(values";
  for (const auto& v : r.values) os << ' ' << literal_token(v);
  os << ")";
}

static void write_expr(std::ostream& os, const ConceptExpr& e, const Tbox& t) {
  switch (e.kind) {
    case ExprKind::Atom:
      os << t.concepts.name(e.atom);
      return;
    case ExprKind::Nominals:
      os << "(one-of";
      for (IndividualId i : e.individuals) os << ' ' << t.individuals.name(i);
      os << ')';
      return;
    case ExprKind::Not:
      os << "(not ";
      write_expr(os, e.children[0], t);
      os << ')';
      return;
    case ExprKind::And:
    case ExprKind::Or:
      os << (e.kind == ExprKind::And ? "(and" : "(or");
      for (const auto& k : e.children) {
        os << ' ';
        write_expr(os, k, t);
      }
      os << ')';
      return;
    case ExprKind::Exists:
    case ExprKind::ForAll:
      os << (e.kind == ExprKind::Exists ? "(some " : "(all ") << t.roles.name(e.prop.id) << ' ';
      write_expr(os, e.children[0], t);
      os << ')';
      return;
    case ExprKind::MinCard:
    case ExprKind::MaxCard:
    case ExprKind::ExactCard: {
      const char* op = e.kind == ExprKind::MinCard   ? "min"
                       : e.kind == ExprKind::MaxCard ? "max"
                                                     : "exact";
      const auto& name = e.prop.is_data ? t.data_roles.name(e.prop.id) : t.roles.name(e.prop.id);
      os << '(' << op << ' ' << e.n << ' ' << name << ')';
      return;
    }
    case ExprKind::DataExists:
    case ExprKind::DataForAll:
      os << (e.kind == ExprKind::DataExists ? "(data-some " : "(data-all ")
         << t.data_roles.name(e.prop.id) << ' ';
      write_range(os, e.range);
      os << ')';
      return;
  }
}

std::string to_sexpr(const ConceptExpr& e, const Tbox& tbox) {
  std::ostringstream os;
  write_expr(os, e, tbox);
  return os.str();
}

}  // namespace bpmnlint
