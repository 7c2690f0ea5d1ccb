// detper: build the inverse-difference matrix families over Z/p^K, run the
// congruence verification suite over prime sweeps, and cross-check the fast
// routines against brute-force oracles.
//
// Exit codes: 0 success (verify: no FAIL), 1 verification failures,
// 2 usage/configuration errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "detper/checks.hpp"
#include "detper/errors.hpp"
#include "detper/kernels.hpp"
#include "detper/oracles.hpp"
#include "detper/report.hpp"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open output file: " + path);
    f << body;
}

std::pair<int64_t, int64_t> parse_prime_range(const std::string& s) {
    const auto dots = s.find("..");
    if (dots == std::string::npos)
        throw UsageError("--primes expects <lo>..<hi>, got: " + s);
    try {
        size_t used = 0;
        int64_t lo = std::stoll(s.substr(0, dots), &used);
        if (used != dots) throw UsageError("bad prime range: " + s);
        std::string hi_part = s.substr(dots + 2);
        int64_t hi = std::stoll(hi_part, &used);
        if (used != hi_part.size()) throw UsageError("bad prime range: " + s);
        return {lo, hi};
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("bad prime range: " + s);
    }
}

std::vector<std::string> parse_check_list(const std::string& s) {
    if (s == "all") return detper::all_check_ids();
    std::vector<std::string> ids;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) ids.push_back(item);
    if (ids.empty()) throw UsageError("--checks given an empty list");
    return ids;
}

int cmd_verify(const std::string& checks, const std::string& primes, const std::string& out,
               const std::string& format, detper::SuiteConfig cfg) {
    auto [lo, hi] = parse_prime_range(primes);
    cfg.prime_lo = lo;
    cfg.prime_hi = hi;
    if (cfg.guard < 1 || cfg.jobs < 1 || cfg.ryser_cap < 0 || cfg.det_cap < 0)
        throw UsageError("caps, guard and jobs must be positive");
    std::vector<std::string> ids = parse_check_list(checks);
    std::vector<detper::CongruenceReport> reports = detper::run_suite(ids, cfg);

    nlohmann::ordered_json config;
    config["checks"] = ids;
    config["prime_lo"] = cfg.prime_lo;
    config["prime_hi"] = cfg.prime_hi;
    config["guard"] = cfg.guard;
    config["ryser_cap"] = cfg.ryser_cap;
    config["det_cap"] = cfg.det_cap;
    config["format"] = format;

    std::string body;
    if (format == "json") {
        body = detper::suite_to_json(reports, config).dump(2);
        body += '\n';
    } else if (format == "csv") {
        body = detper::suite_to_csv(reports);
    } else {
        throw UsageError("--format must be json or csv");
    }
    write_output(out, body);

    detper::SuiteSummary s = detper::summarize(reports);
    std::cerr << "verify: " << s.pass << " pass, " << s.fail << " fail, " << s.skipped
              << " skipped\n";
    return s.fail == 0 ? 0 : 1;
}

detper::KernelKind parse_kind(const std::string& s) {
    using detper::KernelKind;
    for (KernelKind k : {KernelKind::CAUCHY, KernelKind::CAYLEY, KernelKind::CAYLEY_FULL,
                         KernelKind::QUAD_CAUCHY, KernelKind::QUAD_CAYLEY, KernelKind::DPAB})
        if (detper::kind_name(k) == s) return k;
    throw UsageError("unknown matrix kind: " + s);
}

int cmd_matrix(const std::string& kind_s, int64_t p, int K, int64_t a, int64_t b, bool ab_set,
               const std::string& out) {
    if (p < 3 || p % 2 == 0 || !detper::is_prime_u64(static_cast<uint64_t>(p)))
        throw UsageError("--prime must be an odd prime");
    if (K < 1) throw UsageError("--precision must be >= 1");
    detper::KernelKind kind = parse_kind(kind_s);
    detper::KernelMatrix m;
    if (kind == detper::KernelKind::DPAB) {
        if (!ab_set) throw UsageError("--kind dpab requires --a and --b");
        if (K != 1) throw UsageError("dpab matrices are defined mod p only (--precision 1)");
        m = detper::build_dpab(p, a, b);
    } else {
        m = detper::build_kernel(kind, p, K);
    }
    nlohmann::ordered_json j;
    j["kind"] = detper::kind_name(m.kind);
    j["p"] = m.p();
    j["K"] = m.K();
    j["n"] = m.n();
    if (kind == detper::KernelKind::DPAB) {
        j["a"] = m.dp_a;
        j["b"] = m.dp_b;
    }
    j["nodes"] = m.nodes;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.n(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int jj = 0; jj < m.n(); ++jj) row.push_back(m.mat.at(i, jj).get_str());
        rows.push_back(row);
    }
    j["entries"] = rows;
    write_output(out, j.dump(2) + "\n");
    return 0;
}

int cmd_oracle(const std::string& which, int trials, uint64_t seed) {
    detper::OracleRun run;
    if (which == "cycle") run = detper::oracle_cycle(trials, seed);
    else if (which == "matching") run = detper::oracle_matching(trials, seed);
    else if (which == "derangement") run = detper::oracle_derangement(trials, seed);
    else if (which == "ryser-vs-enum") run = detper::oracle_ryser_vs_enum(trials, seed);
    else if (which == "det-vs-exact") run = detper::oracle_det_vs_exact(trials, seed);
    else throw UsageError("unknown oracle: " + which);
    std::cout << run.name << ": " << (run.trials - run.failures) << "/" << run.trials
              << " trials passed";
    if (!run.ok()) std::cout << " (first failure: " << run.detail << ")";
    std::cout << "\n";
    return run.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact congruence checks for inverse-difference matrix families"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "run congruence checks over a prime sweep");
    std::string checks = "all";
    std::string primes = "3..100";
    std::string out;
    std::string format = "json";
    detper::SuiteConfig cfg;
    verify->add_option("--checks", checks, "comma-separated check ids, or 'all'");
    verify->add_option("--primes", primes, "prime range <lo>..<hi>, inclusive");
    verify->add_option("--out", out, "output file (default: stdout)");
    verify->add_option("--format", format, "json or csv");
    verify->add_option("--ryser-cap", cfg.ryser_cap, "largest permanent dimension");
    verify->add_option("--det-cap", cfg.det_cap, "largest prime for dense matrix checks");
    verify->add_option("--guard", cfg.guard, "extra precision digits");
    verify->add_option("--jobs", cfg.jobs, "worker threads");

    // matrix
    auto* matrix = app.add_subcommand("matrix", "build and dump one matrix as JSON");
    std::string kind = "cauchy";
    int64_t mp = 5;
    int mK = 1;
    int64_t ma = 0, mb = 0;
    std::string mout;
    matrix->add_option("--kind", kind,
                       "cauchy|cayley|cayley_full|quad_cauchy|quad_cayley|dpab");
    matrix->add_option("--prime", mp, "odd prime p");
    matrix->add_option("--precision", mK, "precision exponent K");
    auto* aopt = matrix->add_option("--a", ma, "dpab coefficient a");
    auto* bopt = matrix->add_option("--b", mb, "dpab coefficient b");
    matrix->add_option("--out", mout, "output file (default: stdout)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "randomized cross-check suites");
    std::string which = "cycle";
    int trials = 100;
    uint64_t seed = 1;
    oracle->add_option("--which", which,
                       "cycle|matching|derangement|ryser-vs-enum|det-vs-exact");
    oracle->add_option("--trials", trials, "number of random trials");
    oracle->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version are 0; all parse errors are usage errors
    }

    try {
        if (verify->parsed()) return cmd_verify(checks, primes, out, format, cfg);
        if (matrix->parsed())
            return cmd_matrix(kind, mp, mK, ma, mb, aopt->count() > 0 && bopt->count() > 0,
                              mout);
        if (oracle->parsed()) return cmd_oracle(which, trials, seed);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const detper::UnknownCheckId& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const detper::BadCongruenceClass& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
