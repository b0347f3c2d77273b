#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "bpmnlint/cli.hpp"
#include "support.hpp"

using namespace bpmnlint;

namespace {

const std::string kGood = std::string(BPMNLINT_FIXTURE_DIR) + "/good.diagram.json";
const std::string kBad = std::string(BPMNLINT_FIXTURE_DIR) + "/bad.diagram.json";

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("validate a clean diagram exits 0 and reports counts") {
  auto r = run({"validate", kGood});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 errors") != std::string::npos);
  CHECK(r.out.find("warnings") != std::string::npos);
}

TEST_CASE("validate a violating diagram exits 1 with one error in json") {
  auto r = run({"validate", kBad, "--format", "json"});
  CHECK(r.code == 1);
  auto doc = nlohmann::json::parse(r.out);
  size_t errors = 0;
  for (const auto& v : doc["violations"])
    if (v["severity"] == "error") {
      ++errors;
      CHECK(v["axiom"] == "AX_57");
      CHECK(v["subject"] == "e1");
    }
  CHECK(errors == 1);
  CHECK(doc["counts"]["error"] == 1);
}

TEST_CASE("missing input file exits 2 and names the file") {
  auto r = run({"validate", "missing.json"});
  CHECK(r.code == 2);
  CHECK(r.err.find("missing.json") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("bad flags exit 2") {
  CHECK(run({"validate", kGood, "--format", "yaml"}).code == 2);
  CHECK(run({"--nonsense"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("severity floor warning turns warnings into failures") {
  auto r = run({"validate", kGood, "--severity-floor", "warning"});
  CHECK(r.code == 1);
  // floor never drops error-level findings from the report
  auto strict = run({"validate", kBad, "--severity-floor", "error", "--format", "json"});
  auto lax = run({"validate", kBad, "--format", "json"});
  CHECK(strict.out == lax.out);
}

TEST_CASE("json output is byte-identical across runs") {
  auto a = run({"validate", kBad, "--format", "json"});
  auto b = run({"validate", kBad, "--format", "json"});
  CHECK(a.out == b.out);
}

TEST_CASE("list-axioms prints the census") {
  auto r = run({"--list-axioms"});
  CHECK(r.code == 0);
  CHECK(r.out.find("AX_1\t") != std::string::npos);
  CHECK(r.out.find("AX_775\t") != std::string::npos);
  CHECK(r.out.find("EXT_1\tnative") != std::string::npos);
  CHECK(r.out.find(" axioms, ") != std::string::npos);
}

TEST_CASE("max-violations truncates the text report") {
  auto r = run({"validate", kBad, "--severity-floor", "warning", "--max-violations", "1"});
  CHECK(r.code == 1);
  CHECK(r.out.find("more") != std::string::npos);
}

TEST_CASE("a custom tbox can be supplied") {
  std::string path = "/tmp/bpmnlint_tiny.tbox";
  {
    std::ofstream f(path);
    f << "concept thing\n";
  }
  auto r = run({"--tbox", path, "validate", kBad});
  // the bad diagram references symbols the tiny tbox lacks
  CHECK(r.code == 2);
}

TEST_CASE("--max-violations must be positive") {
  CHECK(run({"validate", kBad, "--max-violations", "0"}).code == 2);
}

TEST_CASE("--explain renders trace quotes and witnesses") {
  auto r = run({"validate", kBad, "--explain"});
  CHECK(r.code == 1);
  CHECK(r.out.find("AX_57") != std::string::npos);
  CHECK(r.out.find("associated with a flow Dimension") != std::string::npos);
  CHECK(r.out.find("no fillers found for has_event_type") != std::string::npos);
}

TEST_CASE("global options are accepted after the subcommand") {
  auto a = run({"validate", kBad, "--jobs", "2", "--format", "json"});
  CHECK(a.code == 1);
  auto b = run({"validate", kBad, "--tbox", "/nonexistent.tbox"});
  CHECK(b.code == 2);
  CHECK(b.err.find("/nonexistent.tbox") != std::string::npos);
}
