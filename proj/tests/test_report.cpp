// Report construction, summaries, and JSON/CSV serialization.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "detper/report.hpp"

using namespace detper;

TEST_CASE("verdict follows the residue comparison") {
    CongruenceReport pass = make_report("C4.7b", 5, 2, 1, 1, "det", 6);
    CHECK(pass.verdict == Verdict::PASS);

    CongruenceReport fail = make_report("C4.7b", 5, 2, 7, 1, "det", 6);
    CHECK(fail.verdict == Verdict::FAIL);

    CongruenceReport skip = make_skip("C4.12", 5, "needs p == 3 (mod 4)");
    CHECK(skip.verdict == Verdict::SKIPPED);
    CHECK(skip.skip_reason == "needs p == 3 (mod 4)");
}

TEST_CASE("summaries count verdicts") {
    std::vector<CongruenceReport> rs = {
        make_report("A", 3, 1, 0, 0, "", 1),
        make_report("A", 5, 1, 2, 2, "", 1),
        make_report("A", 7, 1, 1, 2, "", 1),   // FAIL
        make_skip("A", 11, "class"),
    };
    SuiteSummary s = summarize(rs);
    CHECK(s.pass == 2);
    CHECK(s.fail == 1);
    CHECK(s.skipped == 1);
    // a nonzero fail count is what drives the CLI's exit status
    CHECK(s.fail > 0);
}

TEST_CASE("csv layout") {
    std::vector<CongruenceReport> rs = {
        make_report("C4.7b", 5, 2, 1, 1, "det;unit", 6),
        make_skip("C4.12", 5, "congruence class"),
    };
    std::string csv = suite_to_csv(rs);
    CHECK(csv.find("check_id,p,k,lhs,rhs,method,achieved_precision,verdict,skip_reason\n") == 0);
    CHECK(csv.find("C4.7b,5,2,1,1,det;unit,6,PASS,\n") != std::string::npos);
    CHECK(csv.find("C4.12,5,0,0,0,,0,SKIPPED,congruence class\n") != std::string::npos);
    // exactly header + one line per report
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("csv fields are delimiter-safe") {
    CHECK(sanitize_field("a,b\nc\"d") == "a;b;c;d");
    CongruenceReport odd = make_report("X", 3, 1, 0, 0, "bad,method\"here", 1);
    std::string csv = suite_to_csv({odd});
    CHECK(csv.find("bad;method;here") != std::string::npos);
    CHECK(csv.find("bad,method") == std::string::npos);
}

TEST_CASE("json schema") {
    CongruenceReport r = make_report("C4.10ii", 5, 2, 10, 10, "det", 7);
    nlohmann::ordered_json j = report_to_json(r);
    CHECK(j["check_id"] == "C4.10ii");
    CHECK(j["p"] == 5);
    CHECK(j["k"] == 2);
    CHECK(j["lhs"] == "10");  // residues serialize as decimal strings
    CHECK(j["rhs"] == "10");
    CHECK(j["method"] == "det");
    CHECK(j["achieved_precision"] == 7);
    CHECK(j["verdict"] == "PASS");
    CHECK(!j.contains("skip_reason"));  // only present on skipped rows

    nlohmann::ordered_json s = report_to_json(make_skip("L5.4", 3, "small prime"));
    CHECK(s["verdict"] == "SKIPPED");
    CHECK(s["skip_reason"] == "small prime");

    // key order is fixed
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"check_id", "p", "k", "lhs", "rhs", "method",
                                           "achieved_precision", "verdict"});
}

TEST_CASE("suite json wraps config and summary") {
    nlohmann::ordered_json config;
    config["prime_lo"] = 3;
    config["prime_hi"] = 30;
    std::vector<CongruenceReport> rs = {
        make_report("C4.7b", 5, 2, 1, 1, "det", 6),
        make_skip("C4.12", 5, "class"),
    };
    nlohmann::ordered_json j = suite_to_json(rs, config);
    CHECK(j["tool_version"] == kToolVersion);
    CHECK(j["config"]["prime_lo"] == 3);
    REQUIRE(j["reports"].size() == 2);
    CHECK(j["summary"]["pass"] == 1);
    CHECK(j["summary"]["fail"] == 0);
    CHECK(j["summary"]["skipped"] == 1);

    // large residues survive the string round trip exactly
    mpz_class big("123456789012345678901234567890");
    nlohmann::ordered_json bj = report_to_json(make_report("X", 3, 40, big, big, "", 40));
    CHECK(bj["lhs"] == "123456789012345678901234567890");
}
