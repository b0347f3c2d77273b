#include "bpmnlint/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bpmnlint/check.hpp"

namespace bpmnlint {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string axiom_kind_name(const Axiom& ax) {
  return std::visit(
      [](const auto& body) -> std::string {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, SubConceptAxiom>) return "sub";
        else if constexpr (std::is_same_v<T, EquivAxiom>)
          return body.flavor == EquivFlavor::Definition ? "def"
                 : body.flavor == EquivFlavor::Coverage ? "cover"
                                                        : "enum";
        else if constexpr (std::is_same_v<T, DisjointAxiom>) return "disjoint";
        else if constexpr (std::is_same_v<T, DomainAxiom>) return "domain";
        else if constexpr (std::is_same_v<T, RangeAxiom>) return "range";
        else if constexpr (std::is_same_v<T, SubRoleAxiom>) return "subrole";
        else if constexpr (std::is_same_v<T, InverseRoleAxiom>) return "inverse";
        else if constexpr (std::is_same_v<T, DistinctAxiom>) return "distinct";
        else return "native";
      },
      ax.body);
}

Tbox load_tbox(const RunConfig& cfg, std::ostream& err) {
  std::string text;
  if (cfg.tbox_path) {
    text = read_file(*cfg.tbox_path);
  } else if (const char* env = std::getenv("BPMN_LINT_TBOX"); env && *env) {
    text = read_file(env);
  } else {
    text = std::string(bundled_tbox_text());
  }
  Tbox tbox = parse_tbox(text);
  auto findings = well_formed(tbox);
  if (!findings.empty()) {
    for (const auto& f : findings) err << "tbox: " << f.code << ": " << f.message << "\n";
    throw TboxError("tbox is not well-formed");
  }
  return tbox;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"BPMN 1.1 structural validator"};
  app.name("bpmn-dl-lint");

  RunConfig cfg;
  std::string tbox_path, format = "text";

  app.add_option("--tbox", tbox_path, "TBox document (default: bundled ontology)");
  app.add_flag("--list-axioms", cfg.list_axioms, "Print the axiom census and exit");
  app.add_option("--jobs", cfg.jobs, "Worker threads for the axiom sweep (0 = hardware)");

  auto* validate = app.add_subcommand("validate", "Validate a diagram document");
  validate->fallthrough();  // accept the global --tbox/--jobs after the subcommand too
  validate->add_option("diagram", cfg.diagram_path, "Diagram JSON file")->required();
  validate->add_option("--format", format, "Report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  validate->add_option("--severity-floor", cfg.severity_floor,
                       "Lowest severity that fails the run (default: error)")
      ->check(CLI::IsMember({"warning", "error"}));
  validate->add_option("--max-violations", cfg.max_violations,
                       "Truncate the text report after N violations")
      ->check(CLI::PositiveNumber);
  bool explain = false;
  validate->add_flag("--explain", explain,
                     "Render full explanations (trace quote, witness path) in the text report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (!tbox_path.empty()) cfg.tbox_path = tbox_path;
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;

  try {
    Tbox tbox = load_tbox(cfg, err);

    if (cfg.list_axioms) {
      for (const auto& ax : tbox.axioms) {
        out << ax.id << '\t' << axiom_kind_name(ax) << '\t'
            << severity_name(tbox.effective_severity(ax));
        if (!ax.trace.empty()) out << "\t\"" << ax.trace << '"';
        out << "\n";
      }
      out << tbox.axioms.size() << " axioms, " << tbox.concepts.size() << " concepts, "
          << tbox.roles.size() << " object roles, " << tbox.data_roles.size()
          << " data roles, " << tbox.individuals.size() << " individuals\n";
      if (!validate->parsed()) return 0;
    }
    if (!validate->parsed()) {
      err << "error: nothing to do (try 'validate <diagram>' or --list-axioms)\n";
      return 2;
    }

    std::string diagram_text = read_file(cfg.diagram_path);
    InstanceGraph graph = load_diagram(diagram_text, tbox);
    CheckOptions options;
    options.jobs = cfg.jobs;
    options.severity_overrides = tbox.severity_overrides;
    ValidationReport report = check_all(tbox, graph, options);

    if (cfg.format == OutputFormat::Json) {
      out << report_to_json(report).dump(2) << "\n";
    } else if (explain) {
      Explainer explainer(tbox, graph);
      size_t shown = 0;
      for (const auto& v : report.violations) {
        if (cfg.max_violations && shown >= cfg.max_violations) {
          out << "...and " << (report.violations.size() - shown) << " more\n";
          break;
        }
        out << explainer.explain(v) << "\n";
        ++shown;
      }
      out << report.error_count << " errors, " << report.warning_count << " warnings\n";
    } else {
      render_text_report(report, out, cfg.max_violations);
    }

    bool failed = cfg.severity_floor == "warning"
                      ? (report.error_count + report.warning_count) > 0
                      : report.error_count > 0;
    return failed ? 1 : 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace bpmnlint
