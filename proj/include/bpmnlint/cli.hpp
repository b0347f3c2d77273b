#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bpmnlint {

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::string diagram_path;
  std::optional<std::string> tbox_path;  // unset: env var, then bundled
  OutputFormat format = OutputFormat::Text;
  std::string severity_floor = "error";  // violations at/above fail the run
  size_t max_violations = 0;             // 0 = unlimited
  bool list_axioms = false;
  unsigned jobs = 1;
};

/// CLI entry point; exit 0 clean, 1 violations at/above the floor, 2 usage or
/// input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bpmnlint
