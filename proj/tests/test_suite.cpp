#include <catch2/catch_amalgamated.hpp>

#include "rieszprob/builtin_scenarios.hpp"
#include "rieszprob/suite.hpp"

using namespace rieszprob;

TEST_CASE("two-coin scenario passes everything") {
    SuiteOptions options;
    options.timings = false;
    SuiteReport report = run_suite(two_coin_scenario(), options);
    CHECK(report.failed == 0);
    CHECK(report.errors == 0);
    CHECK(report.capped == 0);
    CHECK(report.passed == report.checks.size());
    CHECK(report.exit_code() == 0);
}

TEST_CASE("non-markov scenario fails with witnesses but coherent checkers") {
    SuiteOptions options;
    options.timings = false;
    SuiteReport report = run_suite(non_markov_scenario(), options);
    CHECK(report.exit_code() == 1);
    CHECK(report.failed > 0);
    CHECK(report.errors == 0);
    for (const auto& check : report.checks) {
        if (check.type == "markov_battery") {
            CHECK(check.status == "pass");  // the four characterizations agree
        }
        if (check.type == "is_markov") {
            CHECK(check.status == "fail");
            CHECK_FALSE(check.witness.is_null());
            CHECK(check.witness.contains("lhs"));
        }
        if (check.type == "chapman_kolmogorov") {
            CHECK(check.status == "pass");  // expected false, verdict false
            CHECK(*check.expect == false);
        }
    }
}

TEST_CASE("reports are deterministic without timings") {
    SuiteOptions options;
    options.timings = false;
    std::string a = run_suite(two_coin_scenario(), options).to_json().dump(2);
    std::string b = run_suite(two_coin_scenario(), options).to_json().dump(2);
    CHECK(a == b);
    std::string ta = run_suite(non_markov_scenario(), options).to_text();
    std::string tb = run_suite(non_markov_scenario(), options).to_text();
    CHECK(ta == tb);
}

TEST_CASE("cap errors surface as capped checks and exit code 3") {
    Scenario s = two_coin_scenario();
    s.checks.clear();
    s.checks.push_back({"subspaces_independent", Json{{"e1", "first"}, {"e2", "second"}}});
    SuiteOptions options;
    options.timings = false;
    options.cap_blocks = 1;
    SuiteReport report = run_suite(s, options);
    REQUIRE(report.checks.size() == 1);
    CHECK(report.checks[0].status == "cap");
    CHECK(report.exit_code() == 3);
}

TEST_CASE("check errors are captured without aborting the suite") {
    Scenario s = two_coin_scenario();
    // Make the base nontrivial; "second" crosses it, so the subspace check
    // hits a domain error while the rest of the suite still runs.
    s.base = Partition(s.space, {{0, 1}, {2, 3}});
    s.checks.clear();
    s.checks.push_back({"subspaces_independent", Json{{"e1", "second"}, {"e2", "second"}}});
    s.checks.push_back({"verify_axioms", Json::object()});
    SuiteOptions options;
    options.timings = false;
    SuiteReport report = run_suite(s, options);
    REQUIRE(report.checks.size() == 2);
    CHECK(report.checks[0].status == "error");
    CHECK(report.checks[1].status == "pass");
    CHECK(report.exit_code() == 1);
}

TEST_CASE("empty checks yield an empty passing report") {
    Scenario s = two_coin_scenario();
    s.checks.clear();
    SuiteReport report = run_suite(s);
    CHECK(report.checks.empty());
    CHECK(report.exit_code() == 0);
}

TEST_CASE("structured reports round-trip through JSON") {
    SuiteOptions options;
    options.timings = false;
    SuiteReport report = run_suite(non_markov_scenario(), options);
    Json j = report.to_json();
    SuiteReport back = suite_report_from_json(j);
    CHECK(back.passed == report.passed);
    CHECK(back.failed == report.failed);
    CHECK(back.exit_code() == report.exit_code());
    CHECK(back.to_json() == j);
}

TEST_CASE("random walk scenario passes") {
    SuiteOptions options;
    options.timings = false;
    SuiteReport report = run_suite(random_walk_scenario(3), options);
    CHECK(report.exit_code() == 0);
    CHECK(report.passed == report.checks.size());
}
