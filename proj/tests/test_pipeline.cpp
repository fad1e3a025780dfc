#include "covbound/pipeline.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace covbound;

TEST_SUITE("pipeline") {

TEST_CASE("shipped fixtures load") {
  const auto table = KnownBoundsTable::load(COVBOUND_FIXTURES);
  CHECK(table.rows().size() > 300);
  std::set<std::string> sources;
  for (const auto& row : table.rows()) {
    CHECK(row.lower <= row.upper);
    CHECK(row.r < row.n);
    sources.insert(row.source);
  }
  CHECK(sources.count("literature") == 1);
  CHECK(sources.count("shaded") == 1);
  const KnownBound* b = table.find(2, 12, 3);
  REQUIRE(b);
  CHECK(b->tabulatedValue == std::optional<std::string>("18.6887"));
  CHECK(table.find(2, 40, 1) == nullptr);
}

TEST_CASE("fixtures validation") {
  const std::string header = "q,n,r,bestKnownLower,bestKnownUpper,sdpValue,source\n";
  const auto t = KnownBoundsTable::parse("# comment\n" + header + "2,4,1,4,4,,computed\n");
  REQUIRE(t.rows().size() == 1);
  CHECK_FALSE(t.rows()[0].tabulatedValue);
  CHECK_THROWS_AS(KnownBoundsTable::parse(header + "2,4,1,5,4,,x\n"), std::invalid_argument);
  CHECK_THROWS_AS(KnownBoundsTable::parse(header + "2,4,1,4,4,,x\n2,4,1,4,4,,x\n"), std::invalid_argument);
  CHECK_THROWS_AS(KnownBoundsTable::parse(header + "2,4,1,4\n"), std::invalid_argument);
}

TEST_CASE("flags") {
  KnownBound known;
  known.q = 2;
  known.n = 12;
  known.r = 3;
  known.lower = 18;
  known.upper = 28;
  known.tabulatedValue = "18.6887";
  BoundResult res;
  res.rootValue = HighFloat("18.69");
  res.integerBound = 19;
  CHECK(flag_row(res, &known) == "match");
  res.rootValue = HighFloat("19.5");
  res.integerBound = 20;
  CHECK(flag_row(res, &known) == "improve");
  res.rootValue = HighFloat("17");
  res.integerBound = 17;
  CHECK(flag_row(res, &known) == "below");
  res.integerBound = 29;
  CHECK(flag_row(res, &known) == "UNSOUND");
  known.tabulatedValue.reset();
  res.integerBound = 18;
  CHECK(flag_row(res, &known) == "match");
  CHECK(flag_row(res, nullptr).empty());
}

TEST_CASE("table rows") {
  InstanceRequest req;
  req.q = 2;
  req.n = 4;
  req.r = 1;
  InstanceOutcome failed;
  failed.status = SolverStatus::infeasible;
  const std::string row = table_row(req, failed, nullptr);
  CHECK(row.rfind("2,4,1,sdp,triple,,,,,,failed:infeasible,", 0) == 0);
  std::istringstream header(table_header());
  int columns = 0;
  for (std::string f; std::getline(header, f, ',');) ++columns;
  CHECK(columns == 12);
}

TEST_CASE("inequality lists") {
  CHECK(parse_inequality_list(2, 5, 1, "default").size() == 2);
  CHECK(parse_inequality_list(3, 5, 1, "default").size() == 1);
  CHECK(parse_inequality_list(2, 5, 1, "sphere,vanwee")[1] == van_wee(5, 1));
  CHECK_THROWS_AS(parse_inequality_list(3, 5, 1, "vanwee"), std::invalid_argument);
  CHECK_THROWS_AS(parse_inequality_list(2, 5, 1, "bogus"), std::invalid_argument);
  CHECK_THROWS(parse_inequality_list(2, 5, 1, "file:/nonexistent.ineq"));
  CHECK(parse_method("lp") == Method::lp);
  CHECK_THROWS_AS(parse_method("ilp"), std::invalid_argument);
}

TEST_CASE("coefficient dump") {
  const std::string dump = dump_coefficients(2, 2);
  CHECK(dump.find("krawtchouk 2 2 1 1 = ") == std::string::npos);
  CHECK(dump.find("krawtchouk 2 2 0 0 = 1\n") != std::string::npos);
  CHECK(dump.find("betaBinary 2 0 0 0 0 = 1\n") != std::string::npos);
  std::istringstream in(dump);
  for (std::string line; std::getline(in, line);) {
    CHECK(line.find(" = ") != std::string::npos);
    CHECK(line.find(" = 0") == std::string::npos);
  }
  CHECK(dump == dump_coefficients(2, 2));
  CHECK_THROWS_AS(dump_coefficients(1, 2), std::invalid_argument);
}

TEST_CASE("exact LP bounds") {
  const auto ineqs = default_inequalities(3, 4, 1);
  const BoundResult b = lp_bound(3, 4, 1, ineqs);
  CHECK(b.integerBound == 9);
  const auto binary = default_inequalities(2, 5, 1);
  CHECK(lp_bound(2, 5, 1, binary).integerBound >= 6);
  InstanceRequest req;
  req.q = 2;
  req.n = 5;
  req.r = 1;
  req.method = Method::lp;
  const InstanceOutcome out = run_instance(req, RunConfig{});
  REQUIRE(out.result);
  CHECK(out.status == SolverStatus::optimal);
  CHECK(out.result->integerBound == lp_bound(2, 5, 1, binary).integerBound);
}

}  // TEST_SUITE
