#pragma once

// Verification outcomes and their JSON/CSV serialization.  The reporting
// invariant: a non-skipped report PASSes exactly when lhs == rhs as residues
// mod p^k.  Predicate-style checks encode "property holds" as lhs in {0,1}
// with rhs = 1 and carry the interesting values in `method`.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace detper {

inline const char* kToolVersion = "1.0.0";

enum class Verdict { PASS, FAIL, SKIPPED };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::PASS: return "PASS";
        case Verdict::FAIL: return "FAIL";
        case Verdict::SKIPPED: return "SKIPPED";
    }
    return "?";
}

struct CongruenceReport {
    std::string check_id;
    int64_t p = 0;
    int k = 0;                  // congruence compared modulo p^k
    mpz_class lhs = 0;          // computed residue (or predicate indicator)
    mpz_class rhs = 0;          // expected residue
    std::string method;         // route and diagnostic values, comma-free
    int achieved_precision = 0; // working precision exponent actually used
    Verdict verdict = Verdict::SKIPPED;
    std::string skip_reason;
};

inline CongruenceReport make_report(std::string check_id, int64_t p, int k, mpz_class lhs,
                                    mpz_class rhs, std::string method, int achieved) {
    CongruenceReport r;
    r.check_id = std::move(check_id);
    r.p = p;
    r.k = k;
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    r.method = std::move(method);
    r.achieved_precision = achieved;
    r.verdict = (r.lhs == r.rhs) ? Verdict::PASS : Verdict::FAIL;
    return r;
}

inline CongruenceReport make_skip(std::string check_id, int64_t p, std::string reason) {
    CongruenceReport r;
    r.check_id = std::move(check_id);
    r.p = p;
    r.verdict = Verdict::SKIPPED;
    r.skip_reason = std::move(reason);
    return r;
}

struct SuiteSummary {
    int pass = 0, fail = 0, skipped = 0;
};

inline SuiteSummary summarize(const std::vector<CongruenceReport>& reports) {
    SuiteSummary s;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::PASS) ++s.pass;
        else if (r.verdict == Verdict::FAIL) ++s.fail;
        else ++s.skipped;
    }
    return s;
}

inline std::string sanitize_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '"') c = ';';
    return s;
}

inline nlohmann::ordered_json report_to_json(const CongruenceReport& r) {
    nlohmann::ordered_json j;
    j["check_id"] = r.check_id;
    j["p"] = r.p;
    j["k"] = r.k;
    j["lhs"] = r.lhs.get_str();
    j["rhs"] = r.rhs.get_str();
    j["method"] = r.method;
    j["achieved_precision"] = r.achieved_precision;
    j["verdict"] = verdict_name(r.verdict);
    if (r.verdict == Verdict::SKIPPED) j["skip_reason"] = r.skip_reason;
    return j;
}

inline nlohmann::ordered_json suite_to_json(const std::vector<CongruenceReport>& reports,
                                            const nlohmann::ordered_json& config) {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["config"] = config;
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
    SuiteSummary s = summarize(reports);
    j["summary"] = {{"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}};
    return j;
}

inline std::string suite_to_csv(const std::vector<CongruenceReport>& reports) {
    std::string out =
        "check_id,p,k,lhs,rhs,method,achieved_precision,verdict,skip_reason\n";
    for (const auto& r : reports) {
        out += r.check_id;
        out += ',' + std::to_string(r.p);
        out += ',' + std::to_string(r.k);
        out += ',' + r.lhs.get_str();
        out += ',' + r.rhs.get_str();
        out += ',' + sanitize_field(r.method);
        out += ',' + std::to_string(r.achieved_precision);
        out += ',';
        out += verdict_name(r.verdict);
        out += ',' + sanitize_field(r.skip_reason);
        out += '\n';
    }
    return out;
}

}  // namespace detper
