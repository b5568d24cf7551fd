#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "nc/rand.hpp"
#include "nc/suite.hpp"

using namespace nc;

namespace {

Json strip_runtime(Json reports) {
    for (auto& r : reports) r.erase("runtime_ms");
    return reports;
}

}  // namespace

TEST_CASE("empty suite exits 0 with an empty report") {
    SuiteConfig cfg;
    std::ostringstream out;
    SuiteResult res = run_suite(cfg, out);
    CHECK(res.exit_code == 0);
    CHECK(res.reports.empty());
    CHECK(reports_to_json(res.reports) == Json::array());
}

TEST_CASE("invalid check name is a config error") {
    Json j{{"seed", 1}, {"suite", {{{"check", "no_such_check"}}}}};
    CHECK_THROWS_WITH_AS(suite_config_from_json(j),
                         "unknown check name: \"no_such_check\"", ParseError);

    SuiteConfig cfg;
    cfg.suite.push_back({"no_such_check"});
    std::ostringstream out;
    SuiteResult res = run_suite(cfg, out);
    CHECK(res.exit_code == 2);
    CHECK(out.str().find("no_such_check") != std::string::npos);
}

TEST_CASE("single kernel-identity suite passes") {
    Rng rng(163, 0);
    Matrix A = rng.ginibre(2, 2);
    A *= 0.6 / operator_norm(A);
    SuiteConfig cfg;
    CheckDescriptor d{"kernel_identity"};
    d.trials = 20;
    d.params = Json{{"A", to_json(A)}, {"p", 2}, {"q", 2}, {"level", 2}};
    cfg.suite.push_back(std::move(d));

    std::ostringstream out;
    SuiteResult res = run_suite(cfg, out);
    CHECK(res.exit_code == 0);
    REQUIRE(res.reports.size() == 1);
    CHECK(res.reports[0].passed);
    CHECK(out.str().find("[PASS]") != std::string::npos);
}

TEST_CASE("builtin suite covers the catalog and round-trips") {
    SuiteConfig cfg = builtin_paper_suite();
    CHECK(cfg.suite.size() >= 12);
    CHECK(cfg.seed == kDefaultSeed);

    SuiteConfig back = suite_config_from_json(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
}

TEST_CASE("csv and json report the same records") {
    SuiteConfig cfg;
    {
        CheckDescriptor d{"cb_transpose"};
        d.params = Json{{"p", 2}, {"level", 2}, {"samples", 50}};
        cfg.suite.push_back(std::move(d));
    }
    {
        CheckDescriptor d{"nc_closure", DomainSpec::polydisk(2), {}, 20};
        cfg.suite.push_back(std::move(d));
    }
    std::ostringstream out;
    SuiteResult res = run_suite(cfg, out);
    CHECK(res.exit_code == 0);

    const std::string csv = reports_to_csv(res.reports);
    std::istringstream lines(csv);
    std::string header, line;
    std::getline(lines, header);
    CHECK(header == "check,seed,trials,max_residual,tolerance,passed,runtime_ms");
    int count = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find(res.reports[count].check_name) == 0);
        ++count;
    }
    CHECK(count == static_cast<int>(res.reports.size()));
}

TEST_CASE("identical config and seed reproduce reports bit-for-bit") {
    SuiteConfig cfg;
    {
        CheckDescriptor d{"nc_closure", DomainSpec::rpq(2, 2), {}, 20};
        cfg.suite.push_back(std::move(d));
    }
    {
        CheckDescriptor d{"von_neumann"};
        d.trials = 30;
        d.params = Json{{"theta", 0.2}, {"a", {0.5, 0.1}}, {"level", 3}};
        cfg.suite.push_back(std::move(d));
    }
    std::ostringstream o1, o2;
    Json r1 = strip_runtime(reports_to_json(run_suite(cfg, o1).reports));
    Json r2 = strip_runtime(reports_to_json(run_suite(cfg, o2).reports));
    CHECK(r1.dump() == r2.dump());

    cfg.seed = 12345;
    Json r3 = strip_runtime(reports_to_json(run_suite(cfg, o1).reports));
    CHECK(r1.dump() != r3.dump());
}

TEST_CASE("parallel execution matches serial") {
    SuiteConfig cfg = builtin_paper_suite();
    cfg.suite.resize(6);
    std::ostringstream o1, o2;
    Json serial = strip_runtime(reports_to_json(run_suite(cfg, o1).reports));
    cfg.jobs = 4;
    Json parallel = strip_runtime(reports_to_json(run_suite(cfg, o2).reports));
    CHECK(serial.dump() == parallel.dump());
}
