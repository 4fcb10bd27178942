#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latdesign/catalog.hpp"
#include "latdesign/cli.hpp"
#include "support.hpp"

using namespace latdesign;
using testsupport::gram;

namespace {

struct Run {
  RunReport report;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "latdesign");
  std::ostringstream out, err;
  RunReport r = run_command(args, out, err);
  return {std::move(r), out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("catalog contents") {
  const Catalog& c = load_catalog();
  const std::vector<std::size_t> counts = {2, 3, 6, 7, 17, 7};
  std::size_t total = 0;
  for (std::size_t n = 2; n <= 7; ++n) {
    CHECK(c.of_dimension(n).size() == counts[n - 2]);
    total += c.of_dimension(n).size();
    for (const auto* e : c.of_dimension(n)) {
      CHECK(e->gram.dim() == n);
      CHECK(e->incomplete_table == (n == 7));
      CHECK(e->reference_N.has_value());
      CHECK(e->reference_dimM.has_value());
    }
  }
  CHECK(total == c.entries().size());
  CHECK(total - 7 == 35);

  const LatticeDescriptor& sta3 = *c.find("sta3");
  CHECK(sta3.traditional_name == std::optional<std::string>("A_2"));
  CHECK(sta3.reference_dimM == 2);
  CHECK(sta3.reference_N == 1);
  CHECK(sta3.gram == gram({{2, 1}, {1, 2}}));

  CHECK(c.find("ste10a")->gram == gram({{3, 1, 1, 1, 1, 0},
                                        {1, 3, -1, 1, 0, 1},
                                        {1, -1, 3, 0, 1, -1},
                                        {1, 1, 0, 3, -1, -1},
                                        {1, 0, 1, -1, 3, 1},
                                        {0, 1, -1, -1, 1, 3}}));
  CHECK(c.find("nonexistent") == nullptr);

  // Stored A7* form: diagonal 7, off-diagonal -1.
  const GramMatrix& stf8 = c.find("stf8")->gram;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) CHECK(stf8(i, j) == (i == j ? 7 : -1));
  CHECK(c.find("stf8")->note.has_value());
  CHECK(determinant(stf8) == 8 * 8 * 8 * 8 * 8 * 8);
}

TEST_CASE("catalog round trip through JSON") {
  for (const auto& e : load_catalog().entries()) {
    const std::string j = gram_to_json(e);
    const LatticeDescriptor back = parse_lattice(j);
    CHECK(back.gram == e.gram);
    CHECK(back.name == e.name);
    CHECK(back.reference_N == e.reference_N);
    CHECK(back.reference_dimM == e.reference_dimM);
    CHECK(back.traditional_name == e.traditional_name);
    CHECK(gram_to_json(back) == j);
  }
}

TEST_CASE("fully-critical command reproduces the transcript") {
  const Run r = run({"fully-critical", "--name", "ste10a", "--bound", "60"});
  CHECK(r.report.exit_code == kExitOk);
  for (const char* line : {"the layer (x,x)=1 is empty", "the layer (x,x)=2 is empty", "150 = 150, 2-DESIGN on the layer (x,x)=3",
                           "600 = 600, 2-DESIGN on the layer (x,x)=4", "86400 = 86400, 2-DESIGN on the layer (x,x)=10",
                           "1122854400 = 1122854400, 2-DESIGN on the layer (x,x)=57",
                           "4118640000 = 4118640000, 2-DESIGN on the layer (x,x)=60"})
    CHECK_MESSAGE(r.out.find(std::string(line) + "\n") != std::string::npos, line);
  CHECK(r.report.outcome["verdict"] == "fully-critical");
  CHECK(r.report.outcome["level"] == 20);
}

TEST_CASE("design command on the counterexample") {
  const std::string path = temp_file("latdesign_d12.json", R"({"n": 2, "gram": [[1, 0], [0, 2]]})");
  const Run r = run({"design", "--gram", path, "--layer-norm", "1", "--t", "2"});
  CHECK(r.report.exit_code == kExitFailure);
  CHECK(r.out.find("FAILURE on the layer (x,x)=1") != std::string::npos);

  const Run j = run({"design", path, "--layer-norm", "1", "--format", "json"});
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["exit_code"] == 1);
  CHECK(parsed["outcome"]["layers"][0]["lhs"] == "4");
  CHECK(parsed["outcome"]["layers"][0]["rhs"] == "2");

  const Run f = run({"fully-critical", path});
  CHECK(f.report.exit_code == kExitFailure);
  std::remove(path.c_str());
}

TEST_CASE("tables command") {
  const Run r = run({"tables", "--dim", "4"});
  CHECK(r.report.exit_code == kExitOk);
  REQUIRE(r.report.outcome["rows"].size() == 6);
  for (const auto& row : r.report.outcome["rows"]) CHECK(row["verdict"] == "fully-critical");
  CHECK(r.out.find("6 entries, 0 mismatches") != std::string::npos);
  CHECK(r.out.find("A_2 ⊥ A_2") != std::string::npos);
}

TEST_CASE("usage and input errors") {
  CHECK(run({}).report.exit_code == kExitInconclusive);
  CHECK(run({"bogus"}).report.exit_code == kExitInconclusive);
  CHECK(run({"fully-critical"}).report.exit_code == kExitInconclusive);
  CHECK(run({"fully-critical", "--name", "nope"}).report.exit_code == kExitInconclusive);
  CHECK(run({"layers", "--name", "sta3"}).report.exit_code == kExitInconclusive);
  CHECK(run({"design", "--gram", "/nonexistent/file"}).report.exit_code == kExitInconclusive);
  const std::string bad = temp_file("latdesign_bad.txt", "2\n1 2\n2 1\n");
  const Run r = run({"analyze", bad});
  CHECK(r.report.exit_code == kExitInconclusive);
  CHECK_FALSE(r.err.empty());
  std::remove(bad.c_str());
  const Run budget = run({"fully-critical", "--name", "ste10a", "--max-vectors", "100"});
  CHECK(budget.report.exit_code == kExitInconclusive);
}

TEST_CASE("other subcommands") {
  const Run a = run({"analyze", "--name", "stc12", "--format", "json"});
  CHECK(a.report.exit_code == kExitOk);
  const Run l = run({"layers", "--name", "sta3", "--bound", "6"});
  CHECK(l.report.exit_code == kExitOk);
  const Run h = run({"height", "--name", "sta3"});
  CHECK(h.report.exit_code == kExitOk);
  CHECK(h.report.outcome["height"].get<double>() < 1.0546);
  CHECK(run({"stationarity", "--name", "stc12"}).report.exit_code == kExitOk);
  const std::string path = temp_file("latdesign_d12.txt", "2\n1 0\n0 2\n");
  CHECK(run({"stationarity", path}).report.exit_code == kExitFailure);
  std::remove(path.c_str());
  const Run p = run({"probe-conjecture", "--random", "5", "--seed", "3"});
  CHECK(p.report.exit_code == kExitOk);
}

TEST_CASE("run report round trip") {
  const Run r = run({"fully-critical", "--name", "sta3"});
  const nlohmann::json j = r.report.to_json();
  const RunReport back = RunReport::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.command == "fully-critical");
  CHECK(back.input->gram == load_catalog().find("sta3")->gram);
  CHECK(back.version == kVersion);
}

TEST_CASE("reproduce_tables") {
  const TableSummary low = reproduce_tables({2, 3});
  CHECK(low.rows.size() == 5);
  CHECK(low.mismatches() == 0);
  const TableSummary five = reproduce_tables({5}, TableOptions{false, 2});
  CHECK(five.rows.size() == 7);
  CHECK(five.mismatches() == 0);
  for (const auto& row : five.rows) {
    CHECK(row.bound_used == row.sturm_B);
    CHECK(row.sturm_B >= static_cast<std::uint64_t>(*row.reference_N));
  }
  TableOptions fast;
  fast.fast_paper_bound = true;
  const TableSummary seven = reproduce_tables({7}, fast);
  CHECK(seven.rows.size() == 7);
  CHECK(seven.mismatches() == 0);
  for (const auto& row : seven.rows) {
    CHECK(row.incomplete_table);
    CHECK(row.bound_used == static_cast<std::uint64_t>(*row.reference_N));
  }
  CHECK(format_table(seven).find("incomplete") != std::string::npos);
}
