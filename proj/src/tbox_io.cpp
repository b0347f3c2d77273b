#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "bpmnlint/tbox.hpp"

namespace bpmnlint {

namespace {

// One line, split into bare tokens, parens, and quoted strings.
struct LineTokens {
  std::vector<std::string> toks;
  size_t line = 0;
  size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : toks[pos];
  }
  std::string take() {
    if (done()) throw TboxParseError(line, "unexpected end of line");
    return toks[pos++];
  }
};

bool is_quoted(const std::string& t) { return t.size() >= 2 && t.front() == '"'; }
std::string unquote(const std::string& t) { return t.substr(1, t.size() - 2); }

LineTokens split_line(const std::string& line, size_t lineno) {
  LineTokens lt;
  lt.line = lineno;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == '(' || c == ')') {
      lt.toks.emplace_back(1, c);
      ++i;
    } else if (c == '"') {
      size_t j = i + 1;
      std::string out = "\"";
      while (j < line.size() && line[j] != '"') {
        if (line[j] == '\\' && j + 1 < line.size()) ++j;
        out.push_back(line[j]);
        ++j;
      }
      if (j >= line.size()) throw TboxParseError(lineno, "unterminated string");
      out.push_back('"');
      lt.toks.push_back(std::move(out));
      i = j + 1;
    } else {
      size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
             line[j] != '(' && line[j] != ')' && line[j] != '"' && line[j] != '#')
        ++j;
      lt.toks.push_back(line.substr(i, j - i));
      i = j;
    }
  }
  return lt;
}

class Parser {
 public:
  explicit Parser(std::string_view document) : doc_(document) {}

  Tbox run() {
    tbox_.source_digest = sha256_hex(doc_);
    collect_declarations();
    parse_axioms();
    tbox_.rebuild_indexes();
    return std::move(tbox_);
  }

 private:
  std::string_view doc_;
  Tbox tbox_;
  std::vector<std::pair<size_t, LineTokens>> axiom_lines_;
  std::vector<LineTokens> individual_lines_;

  void for_each_line(const std::function<void(LineTokens&)>& fn) {
    std::istringstream in{std::string(doc_)};
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      LineTokens lt = split_line(line, lineno);
      if (lt.toks.empty()) continue;
      fn(lt);
    }
  }

  void declare(SymbolTable& table, const std::string& name, size_t line) {
    if (!valid_identifier(name))
      throw TboxParseError(line, "invalid identifier '" + name + "'");
    if (tbox_.concepts.find(name) || tbox_.roles.find(name) || tbox_.data_roles.find(name) ||
        tbox_.individuals.find(name))
      throw TboxParseError(line, "name '" + name + "' already declared");
    table.intern(name);
  }

  void collect_declarations() {
    for_each_line([&](LineTokens& lt) {
      const std::string head = lt.take();
      if (head == "concept") {
        declare(tbox_.concepts, lt.take(), lt.line);
      } else if (head == "role") {
        declare(tbox_.roles, lt.take(), lt.line);
      } else if (head == "datarole") {
        std::string name = lt.take();
        std::string dt = lt.take();
        auto parsed = datatype_from_name(dt);
        if (!parsed) throw TboxParseError(lt.line, "unknown datatype '" + dt + "'");
        declare(tbox_.data_roles, name, lt.line);
        tbox_.data_role_type.push_back(*parsed);
      } else if (head == "individual") {
        individual_lines_.push_back(lt);
        lt.pos = lt.toks.size();  // defer until all concepts are known
      } else if (head == "axiom") {
        axiom_lines_.emplace_back(lt.line, lt);
      } else {
        throw TboxParseError(lt.line, "unknown declaration '" + head + "'");
      }
      if (head != "axiom" && !lt.done())
        throw TboxParseError(lt.line, "trailing tokens after declaration");
    });
    for (LineTokens lt : individual_lines_) {
      lt.pos = 1;
      std::string name = lt.take();
      if (lt.take() != "in") throw TboxParseError(lt.line, "expected 'in'");
      std::string enum_name = lt.take();
      if (!lt.done()) throw TboxParseError(lt.line, "trailing tokens after declaration");
      declare(tbox_.individuals, name, lt.line);
      auto cid = tbox_.concepts.find(enum_name);
      if (!cid) throw TboxParseError(lt.line, "unknown symbol '" + enum_name + "'");
      tbox_.individual_enum.push_back(*cid);
      tbox_.enum_members[*cid].push_back(tbox_.individuals.size() - 1);
    }
  }

  [[noreturn]] void unknown(size_t line, const std::string& name) {
    throw TboxParseError(line, "unknown symbol '" + name + "'");
  }

  ConceptId concept_id(const std::string& name, size_t line) {
    auto id = tbox_.concepts.find(name);
    if (!id) unknown(line, name);
    return *id;
  }

  PropertyRef property_ref(const std::string& name, size_t line) {
    if (auto id = tbox_.roles.find(name)) return PropertyRef{false, *id};
    if (auto id = tbox_.data_roles.find(name)) return PropertyRef{true, *id};
    unknown(line, name);
  }

  Literal parse_literal(LineTokens& lt, Datatype expected) {
    std::string t = lt.take();
    if (is_quoted(t)) {
      std::string body = unquote(t);
      if (expected == Datatype::Date) {
        if (!valid_iso_date(body))
          throw TboxParseError(lt.line, "invalid date literal '" + body + "'");
        return Literal::date(body);
      }
      if (expected != Datatype::String)
        throw TboxParseError(lt.line, "quoted literal where " +
                                          std::string(datatype_name(expected)) + " expected");
      return Literal::string(body);
    }
    if (t == "true" || t == "false") {
      if (expected != Datatype::Boolean)
        throw TboxParseError(lt.line, "boolean literal where " +
                                          std::string(datatype_name(expected)) + " expected");
      return Literal::boolean(t == "true");
    }
    try {
      size_t used = 0;
      int64_t v = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      if (expected == Datatype::PositiveInteger) {
        if (v < 1) throw TboxParseError(lt.line, "positive_integer literal must be >= 1");
        return Literal::integer(v, Datatype::PositiveInteger);
      }
      if (expected != Datatype::Integer)
        throw TboxParseError(lt.line, "numeric literal where " +
                                          std::string(datatype_name(expected)) + " expected");
      return Literal::integer(v);
    } catch (const TboxParseError&) {
      throw;
    } catch (...) {
      throw TboxParseError(lt.line, "bad literal '" + t + "'");
    }
  }

  DataRange parse_data_range(LineTokens& lt, Datatype role_type) {
    if (lt.take() != "(") throw TboxParseError(lt.line, "expected data range");
    std::string head = lt.take();
    DataRange r;
    if (head == "datatype") {
      auto dt = datatype_from_name(lt.take());
      if (!dt) throw TboxParseError(lt.line, "unknown datatype in range");
      r.type = *dt;
    } else if (head == "values") {
      r.type = role_type;
      while (lt.peek() != ")") r.values.push_back(parse_literal(lt, role_type));
      if (r.values.empty()) throw TboxParseError(lt.line, "empty value set");
      auto sorted = r.values;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw TboxParseError(lt.line, "duplicate literal in value set");
    } else {
      throw TboxParseError(lt.line, "expected 'datatype' or 'values'");
    }
    if (lt.take() != ")") throw TboxParseError(lt.line, "expected ')'");
    return r;
  }

  ConceptExpr parse_expr(LineTokens& lt) {
    std::string t = lt.take();
    if (t != "(") {
      return ConceptExpr::make_atom(concept_id(t, lt.line));
    }
    std::string op = lt.take();
    auto close = [&] {
      if (lt.take() != ")") throw TboxParseError(lt.line, "expected ')'");
    };
    if (op == "and" || op == "or") {
      std::vector<ConceptExpr> kids;
      while (lt.peek() != ")") kids.push_back(parse_expr(lt));
      close();
      if (kids.size() < 2)
        throw TboxParseError(lt.line, "'" + op + "' needs at least two operands");
      return op == "and" ? ConceptExpr::make_and(std::move(kids))
                         : ConceptExpr::make_or(std::move(kids));
    }
    if (op == "not") {
      ConceptExpr inner = parse_expr(lt);
      close();
      return ConceptExpr::make_not(std::move(inner));
    }
    if (op == "some" || op == "all") {
      std::string role = lt.take();
      auto rid = tbox_.roles.find(role);
      if (!rid) unknown(lt.line, role);
      ConceptExpr filler = parse_expr(lt);
      close();
      return op == "some" ? ConceptExpr::make_exists(*rid, std::move(filler))
                          : ConceptExpr::make_forall(*rid, std::move(filler));
    }
    if (op == "min" || op == "max" || op == "exact") {
      std::string num = lt.take();
      uint32_t n = 0;
      try {
        n = static_cast<uint32_t>(std::stoul(num));
      } catch (...) {
        throw TboxParseError(lt.line, "bad cardinality '" + num + "'");
      }
      PropertyRef prop = property_ref(lt.take(), lt.line);
      close();
      ExprKind k = op == "min"   ? ExprKind::MinCard
                   : op == "max" ? ExprKind::MaxCard
                                 : ExprKind::ExactCard;
      return ConceptExpr::make_card(k, n, prop);
    }
    if (op == "one-of") {
      std::vector<IndividualId> inds;
      while (lt.peek() != ")") {
        std::string name = lt.take();
        auto id = tbox_.individuals.find(name);
        if (!id) unknown(lt.line, name);
        inds.push_back(*id);
      }
      close();
      if (inds.empty()) throw TboxParseError(lt.line, "empty one-of");
      return ConceptExpr::make_nominals(std::move(inds));
    }
    if (op == "data-some" || op == "data-all") {
      std::string role = lt.take();
      auto rid = tbox_.data_roles.find(role);
      if (!rid) unknown(lt.line, role);
      DataRange r = parse_data_range(lt, tbox_.data_role_type[*rid]);
      close();
      return op == "data-some" ? ConceptExpr::make_data_some(*rid, std::move(r))
                               : ConceptExpr::make_data_all(*rid, std::move(r));
    }
    throw TboxParseError(lt.line, "unknown expression operator '" + op + "'");
  }

  void parse_axioms() {
    for (auto& [line, lt] : axiom_lines_) {
      Axiom ax;
      ax.id = lt.take();
      if (tbox_.find_axiom(ax.id) != nullptr || seen_ids_.count(ax.id))
        throw TboxParseError(line, "duplicate axiom id '" + ax.id + "'");
      seen_ids_.insert(ax.id);
      if (lt.peek() == "warning") {
        ax.severity = Severity::Warning;
        lt.take();
      }
      std::string kind = lt.take();
      if (kind == "sub") {
        SubConceptAxiom body;
        body.lhs = concept_id(lt.take(), line);
        body.rhs = parse_expr(lt);
        ax.body = std::move(body);
      } else if (kind == "def" || kind == "cover" || kind == "enum") {
        EquivAxiom body;
        body.flavor = kind == "def"     ? EquivFlavor::Definition
                      : kind == "cover" ? EquivFlavor::Coverage
                                        : EquivFlavor::Enumeration;
        body.lhs = concept_id(lt.take(), line);
        body.rhs = parse_expr(lt);
        if (body.flavor == EquivFlavor::Enumeration && body.rhs.kind != ExprKind::Nominals)
          throw TboxParseError(line, "enum axiom needs a one-of expression");
        ax.body = std::move(body);
      } else if (kind == "disjoint") {
        DisjointAxiom body;
        body.a = concept_id(lt.take(), line);
        body.b = concept_id(lt.take(), line);
        ax.body = body;
      } else if (kind == "domain") {
        DomainAxiom body;
        body.prop = property_ref(lt.take(), line);
        body.domain = concept_id(lt.take(), line);
        ax.body = body;
      } else if (kind == "range") {
        RangeAxiom body;
        body.prop = property_ref(lt.take(), line);
        if (body.prop.is_data) {
          body.data_range = parse_data_range(lt, tbox_.data_role_type[body.prop.id]);
        } else {
          body.concept_range = parse_expr(lt);
        }
        ax.body = std::move(body);
      } else if (kind == "subrole") {
        SubRoleAxiom body;
        std::string a = lt.take(), b = lt.take();
        auto sub = tbox_.roles.find(a);
        auto sup = tbox_.roles.find(b);
        if (!sub) unknown(line, a);
        if (!sup) unknown(line, b);
        body.sub = *sub;
        body.super = *sup;
        ax.body = body;
      } else if (kind == "inverse") {
        InverseRoleAxiom body;
        std::string a = lt.take(), b = lt.take();
        auto ia = tbox_.roles.find(a);
        auto ib = tbox_.roles.find(b);
        if (!ia) unknown(line, a);
        if (!ib) unknown(line, b);
        body.inverse = *ia;
        body.base = *ib;
        ax.body = body;
      } else if (kind == "distinct") {
        DistinctAxiom body;
        std::string a = lt.take(), b = lt.take();
        auto ia = tbox_.individuals.find(a);
        auto ib = tbox_.individuals.find(b);
        if (!ia) unknown(line, a);
        if (!ib) unknown(line, b);
        body.a = *ia;
        body.b = *ib;
        ax.body = body;
      } else if (kind == "native") {
        NativeAxiom body;
        body.check = lt.take();
        ax.body = std::move(body);
      } else {
        throw TboxParseError(line, "unknown axiom kind '" + kind + "'");
      }
      if (!lt.done()) {
        std::string t = lt.take();
        if (!is_quoted(t)) throw TboxParseError(line, "expected trace string, got '" + t + "'");
        ax.trace = unquote(t);
      }
      if (!lt.done()) throw TboxParseError(line, "trailing tokens after axiom");
      tbox_.axioms.push_back(std::move(ax));
    }
  }

  std::set<std::string> seen_ids_;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string range_text(const DataRange& r) {
  if (r.values.empty()) return "(datatype " + std::string(datatype_name(r.type)) + ")";
  std::string out = "(values";
  for (const auto& v : r.values) out += " " + literal_token(v);
  return out + ")";
}

}  // namespace

Tbox parse_tbox(std::string_view document) { return Parser(document).run(); }

std::string serialize_tbox(const Tbox& t) {
  std::ostringstream os;
  for (const auto& c : t.concepts.all()) os << "concept " << c << "\n";
  for (const auto& r : t.roles.all()) os << "role " << r << "\n";
  for (uint32_t i = 0; i < t.data_roles.size(); ++i)
    os << "datarole " << t.data_roles.name(i) << ' ' << datatype_name(t.data_role_type[i])
       << "\n";
  for (uint32_t i = 0; i < t.individuals.size(); ++i)
    os << "individual " << t.individuals.name(i) << " in "
       << t.concepts.name(t.individual_enum[i]) << "\n";
  for (const auto& ax : t.axioms) {
    os << "axiom " << ax.id;
    if (ax.severity == Severity::Warning) os << " warning";
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, SubConceptAxiom>) {
            os << " sub " << t.concepts.name(body.lhs) << ' ' << to_sexpr(body.rhs, t);
          } else if constexpr (std::is_same_v<T, EquivAxiom>) {
            const char* k = body.flavor == EquivFlavor::Definition ? "def"
                            : body.flavor == EquivFlavor::Coverage ? "cover"
                                                                   : "enum";
            os << ' ' << k << ' ' << t.concepts.name(body.lhs) << ' ' << to_sexpr(body.rhs, t);
          } else if constexpr (std::is_same_v<T, DisjointAxiom>) {
            os << " disjoint " << t.concepts.name(body.a) << ' ' << t.concepts.name(body.b);
          } else if constexpr (std::is_same_v<T, DomainAxiom>) {
            const auto& p = body.prop.is_data ? t.data_roles.name(body.prop.id)
                                              : t.roles.name(body.prop.id);
            os << " domain " << p << ' ' << t.concepts.name(body.domain);
          } else if constexpr (std::is_same_v<T, RangeAxiom>) {
            if (body.prop.is_data) {
              os << " range " << t.data_roles.name(body.prop.id) << ' '
                 << range_text(body.data_range);
            } else {
              os << " range " << t.roles.name(body.prop.id) << ' '
                 << to_sexpr(body.concept_range, t);
            }
          } else if constexpr (std::is_same_v<T, SubRoleAxiom>) {
            os << " subrole " << t.roles.name(body.sub) << ' ' << t.roles.name(body.super);
          } else if constexpr (std::is_same_v<T, InverseRoleAxiom>) {
            os << " inverse " << t.roles.name(body.inverse) << ' ' << t.roles.name(body.base);
          } else if constexpr (std::is_same_v<T, DistinctAxiom>) {
            os << " distinct " << t.individuals.name(body.a) << ' '
               << t.individuals.name(body.b);
          } else if constexpr (std::is_same_v<T, NativeAxiom>) {
            os << " native " << body.check;
          }
        },
        ax.body);
    if (!ax.trace.empty()) os << ' ' << quote(ax.trace);
    os << "\n";
  }
  return os.str();
}

}  // namespace bpmnlint
