#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpmnlint/classify.hpp"

namespace bpmnlint {

using Witness = nlohmann::ordered_json;

struct Violation {
  std::string axiom_id;
  std::string subject;   // individual name; "(diagram)" for diagram-level findings
  Severity severity = Severity::Error;
  std::string message;
  Witness witness;
  std::string diagram_digest;  // internal, for explain() staleness detection

  /// Total order: (axiom_id, subject), tie-broken on the witness bytes.
  bool operator<(const Violation& o) const;
};

struct ValidationReport {
  std::string tbox_digest;
  std::string diagram_digest;
  std::vector<Violation> violations;  // sorted
  size_t error_count = 0;
  size_t warning_count = 0;
};

struct CheckOptions {
  unsigned jobs = 1;  // worker threads for the axiom sweep; 0 = hardware
  std::map<std::string, Severity> severity_overrides;
};

/// Everything a single axiom check needs. The graph must be classified.
struct CheckContext {
  const Tbox& tbox;
  const InstanceGraph& graph;
  const Membership& membership;
  const std::vector<std::vector<NodeId>>& members_of;  // by ConceptId, sorted
};

std::vector<Violation> check_axiom(const Axiom& axiom, const CheckContext& ctx);
std::vector<Violation> extended_checks(const InstanceGraph& graph, const Membership& membership,
                                       const Tbox& tbox);

/// Full pipeline over a loaded graph: materialize (if needed), classify, check
/// every axiom plus the native checks, sort, apply overrides.
ValidationReport check_all(const Tbox& tbox, InstanceGraph& graph,
                           const CheckOptions& options = {});

nlohmann::ordered_json report_to_json(const ValidationReport& report);
void render_text_report(const ValidationReport& report, std::ostream& out,
                        size_t max_violations);

/// Renders one violation with the axiom's citation, the failing expression,
/// and the witness path. Rejects violations from another diagram.
class Explainer {
 public:
  Explainer(const Tbox& tbox, const InstanceGraph& graph);
  std::string explain(const Violation& v) const;

 private:
  const Tbox& tbox_;
  std::string diagram_digest_;
};

}  // namespace bpmnlint
