#include "nc/suite.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "nc/rand.hpp"

namespace nc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const std::vector<std::string> kCheckNames = {
    "nc_axioms",      "kernel_identity", "cb_transpose",
    "rigidity",       "derivative_similarity_invariance",
    "linear_structure", "von_neumann",   "nc_closure",
    "inverse_law",    "spectral_disk",   "level_restriction",
    "ha_derivative"};

bool known_check(const std::string& name) {
    for (const auto& n : kCheckNames)
        if (n == name) return true;
    return false;
}

const DomainSpec& require_domain(const CheckDescriptor& d) {
    if (!d.domain) throw ParseError("check \"" + d.check + "\" needs a \"domain\" field");
    return *d.domain;
}

const NcMapExpr& require_map(const CheckDescriptor& d) {
    if (!d.map) throw ParseError("check \"" + d.check + "\" needs a \"map\" field");
    return *d.map;
}

CheckReport run_inverse_law(const CheckDescriptor& d, std::uint64_t seed) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "inverse_law";
    rep.seed = seed;
    rep.trials = d.trials;
    rep.tolerance = d.tolerance.value_or(1e-9);

    const NcMapExpr& f = require_map(d);
    const DomainSpec& dom = require_domain(d);
    NcMapExpr round_trip = NcMapExpr::compose({invert(f), f});
    const std::vector<int> levels = d.params.value("levels", std::vector<int>{1, 2, 3});

    for (int t = 0; t < d.trials; ++t) {
        const int n = levels[t % levels.size()];
        NcPoint x = sample_member(dom, n, seed, t);
        const double res = relative_residual(apply(round_trip, x), x);
        if (res > rep.max_residual) {
            rep.max_residual = res;
            if (res > rep.tolerance) {
                std::ostringstream os;
                os << "round-trip residual " << res << " at trial " << t;
                rep.witnesses.push_back(os.str());
            }
        }
    }
    rep.passed = rep.max_residual <= rep.tolerance;
    rep.runtime_ms = ms_since(t0);
    return rep;
}

CheckReport run_rigidity(const CheckDescriptor& d, std::uint64_t seed) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "rigidity";
    rep.seed = seed;
    rep.trials = d.trials;

    const int base = d.params.value("base_level", 1);
    const std::vector<int> probe = d.params.value("probe_levels", std::vector<int>{2, 3, 4});
    const std::string expect = d.params.value("expect", std::string("identity"));
    rep.tolerance = d.tolerance.value_or(1e-8);

    RigidityVerdict v = rigidity_probe(require_map(d), require_domain(d), base, probe, seed);
    double worst_identity = 0.0;
    for (const auto& [lev, res] : v.identity_residual_at_levels)
        worst_identity = std::max(worst_identity, res);

    std::ostringstream os;
    os << "origin_norm=" << v.origin_norm << " derivative_residual=" << v.derivative_residual
       << " worst_identity_residual=" << worst_identity;
    rep.witnesses.push_back(os.str());

    const bool hypotheses = v.fixes_origin && v.derivative_residual <= 1e-5;
    if (expect == "identity") {
        rep.max_residual = worst_identity;
        rep.passed = hypotheses && worst_identity <= rep.tolerance;
    } else if (expect == "identity_violation") {
        const bool detected = hypotheses && worst_identity > 1e-3;
        rep.max_residual = detected ? 0.0 : 1.0;
        rep.passed = detected;
    } else if (expect == "hypothesis_violation") {
        const bool detected = v.fixes_origin && v.derivative_residual > 1e-3;
        rep.max_residual = detected ? 0.0 : 1.0;
        rep.passed = detected;
    } else {
        throw ParseError("rigidity: unknown \"expect\" value: " + expect);
    }
    rep.runtime_ms = ms_since(t0);
    return rep;
}

CheckReport run_spectral_disk(const CheckDescriptor& d, std::uint64_t seed) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "spectral_disk";
    rep.seed = seed;
    rep.trials = d.trials;
    rep.tolerance = 1e-9;

    const std::vector<double> radii =
        d.params.value("radii", std::vector<double>{1.0, 2.0});
    DomainSpec dom = DomainSpec::spectral_disk(radii);

    auto fail = [&](const std::string& what, int t) {
        std::ostringstream os;
        os << what << " at trial " << t;
        rep.witnesses.push_back(os.str());
        rep.max_residual = 1.0;
    };

    for (int t = 0; t < d.trials; ++t) {
        Rng rng(seed, t);
        const int n = 2 + t % 2;
        const double r = dom.radius_at(n);

        // normal strict contraction: accepted with s = I
        Matrix u = rng.unitary(n);
        Matrix diag = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i)
            diag(i, i) = (0.2 + 0.7 * rng.uniform()) * std::polar(1.0, 6.28 * rng.uniform());
        Matrix normal = u * diag * u.adjoint();
        MembershipVerdict v1 = membership(dom, NcPoint({normal}));
        if (v1.member != Member::Yes || !v1.similarity ||
            (*v1.similarity - Matrix::Identity(n, n)).norm() > 1e-12)
            fail("normal contraction not accepted with s = I", t);

        // spectral radius >= 1: rejected
        Matrix big = diag;
        big(0, 0) = 1.2 * std::polar(1.0, 6.28 * rng.uniform());
        Matrix s0 = Matrix::Identity(n, n) + 0.3 * rng.ginibre(n, n);
        Matrix expanded = s0 * big * s0.inverse();
        if (membership(dom, NcPoint({expanded})).member != Member::No)
            fail("spectral radius >= 1 not rejected", t);

        // certified member: certificate re-verifies and transports
        NcPoint x = sample_member(dom, n, seed, 100000 + t);
        MembershipVerdict v2 = membership(dom, x);
        if (v2.member == Member::Yes) {
            const Matrix& s = *v2.similarity;
            if (!verify_spectral_certificate(x.vars[0], s, r))
                fail("yes-certificate does not re-verify", t);
            // Mobius image keeps the same certificate
            const double theta = 6.28 * rng.uniform();
            const Complex a = 0.5 * rng.cnormal() / std::sqrt(2.0);
            if (std::abs(a) < 1.0) {
                Matrix y = mobius_apply(theta, a, x.vars[0]);
                if (!verify_spectral_certificate(y, s, r))
                    fail("Mobius image loses the certificate", t);
            }
            // unitary conjugation transports the certificate
            Matrix w = rng.unitary(n);
            if (!verify_spectral_certificate(w.adjoint() * x.vars[0] * w,
                                             w.adjoint() * s * w, r))
                fail("unitary conjugation loses the certificate", t);
        }
    }
    rep.passed = rep.witnesses.empty();
    rep.runtime_ms = ms_since(t0);
    return rep;
}

CheckReport run_level_restriction(const CheckDescriptor& d, std::uint64_t seed) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "level_restriction";
    rep.seed = seed;
    rep.tolerance = 1e-12;

    const int p = d.params.value("p", 2);
    const int q = d.params.value("q", 1);
    const std::vector<int> gens = d.params.value("generators", std::vector<int>{2, 3});
    const int max_level = d.params.value("max_level", 5);
    DomainSpec plain = DomainSpec::rpq(p, q);
    DomainSpec restricted = plain.restricted(gens);

    int trials = 0;
    for (int n = 1; n <= max_level; ++n) {
        for (int t = 0; t < 5; ++t, ++trials) {
            NcPoint x = sample_member(plain, n, seed, 10 * n + t);
            // scale half the samples out of the ball
            if (t % 2 == 1)
                for (auto& v : x.vars) v *= 2.0;
            MembershipVerdict vu = membership(plain, x);
            MembershipVerdict vr = membership(restricted, x);
            const bool in_s = restricted.levels.contains(n);
            bool ok;
            if (!in_s)
                ok = vr.member == Member::No && !vr.margin.has_value();
            else
                ok = vr.member == vu.member;
            if (!ok) {
                std::ostringstream os;
                os << "filter mismatch at level " << n << " trial " << t;
                rep.witnesses.push_back(os.str());
                rep.max_residual = 1.0;
            }
        }
    }
    rep.trials = trials;
    rep.passed = rep.witnesses.empty();
    rep.runtime_ms = ms_since(t0);
    return rep;
}

CheckReport run_ha_derivative(const CheckDescriptor& d, std::uint64_t seed) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "ha_derivative";
    rep.seed = seed;
    rep.trials = d.trials;
    rep.tolerance = d.tolerance.value_or(1e-6);

    const int p = d.params.value("p", 2);
    const int q = d.params.value("q", 2);
    const int n = d.params.value("level", 2);
    const BlockShape shape{p, q};

    for (int t = 0; t < d.trials; ++t) {
        Rng rng(seed, t);
        Matrix A = rng.ginibre(p, q);
        const double an = operator_norm(A);
        if (an > 0) A *= (0.3 + 0.5 * rng.uniform()) / an;
        NcMapExpr f = NcMapExpr::ha(A, shape);

        NcPoint h = gamma_unpack(rng.ginibre(n * p, n * q), shape, n);
        DerivativeResult dr =
            directional_derivative([&](const NcPoint& z) { return apply(f, z); },
                                   NcPoint::zero(p * q, n), h);

        const Matrix In = Matrix::Identity(n, n);
        const Matrix closed =
            kron(herm_sqrt_inv(Matrix::Identity(p, p) - A * A.adjoint(), +1), In) *
            gamma_pack(h, shape) *
            kron(herm_sqrt_inv(Matrix::Identity(q, q) - A.adjoint() * A, +1), In);

        const double res = relative_residual(gamma_pack(dr.value, shape), closed);
        if (res > rep.max_residual) {
            rep.max_residual = res;
            if (res > rep.tolerance) {
                std::ostringstream os;
                os << "derivative residual " << res << " at trial " << t;
                rep.witnesses.push_back(os.str());
            }
        }
    }
    rep.passed = rep.max_residual <= rep.tolerance;
    rep.runtime_ms = ms_since(t0);
    return rep;
}

}  // namespace

CheckReport run_check(const CheckDescriptor& d, std::uint64_t seed) {
    if (!known_check(d.check))
        throw ParseError("unknown check name: \"" + d.check + "\"");

    if (d.check == "nc_axioms") {
        AxiomCheckOptions opts;
        opts.levels = d.params.value("levels", std::vector<int>{1, 2, 3, 4});
        opts.expect_similarity_violation =
            d.params.value("expect_similarity_violation", false);
        if (d.tolerance) opts.tolerance = *d.tolerance;
        return check_nc_axioms(require_map(d), require_domain(d), d.trials, seed, opts);
    }
    if (d.check == "kernel_identity") {
        Matrix A = matrix_from_json(d.params.at("A"));
        BlockShape shape{d.params.at("p").get<int>(), d.params.at("q").get<int>()};
        return check_kernel_identity(A, shape, d.params.value("level", 2), d.trials, seed);
    }
    if (d.check == "cb_transpose")
        return check_cb_transpose(d.params.at("p").get<int>(),
                                  d.params.value("level", d.params.at("p").get<int>()),
                                  seed, d.params.value("samples", 1000));
    if (d.check == "rigidity") return run_rigidity(d, seed);
    if (d.check == "derivative_similarity_invariance")
        return check_derivative_similarity_invariance(
            require_map(d), require_domain(d), d.params.value("level", 2), d.trials, seed);
    if (d.check == "linear_structure")
        return check_linear_structure(require_map(d), require_domain(d), seed,
                                      d.params.value("probe_levels",
                                                     std::vector<int>{1, 2, 3}))
            .report;
    if (d.check == "von_neumann")
        return check_von_neumann(d.params.value("theta", 0.0),
                                 complex_from_json(d.params.value("a", Json::array({0.0, 0.0}))),
                                 d.trials, seed, d.params.value("level", 4));
    if (d.check == "nc_closure")
        return nc_closure_check(require_domain(d), d.trials, seed);
    if (d.check == "inverse_law") return run_inverse_law(d, seed);
    if (d.check == "spectral_disk") return run_spectral_disk(d, seed);
    if (d.check == "level_restriction") return run_level_restriction(d, seed);
    return run_ha_derivative(d, seed);
}

SuiteConfig suite_config_from_json(const Json& j) {
    SuiteConfig cfg;
    cfg.seed = j.value("seed", kDefaultSeed);
    cfg.jobs = j.value("jobs", 1);
    if (j.contains("output")) {
        cfg.output_path = j.at("output").value("path", std::string{});
        cfg.output_format = j.at("output").value("format", std::string("json"));
        if (cfg.output_format != "json" && cfg.output_format != "csv")
            throw ParseError("output.format must be \"json\" or \"csv\"");
    }
    for (const auto& cj : j.value("suite", Json::array())) {
        CheckDescriptor d;
        d.check = cj.at("check").get<std::string>();
        if (!known_check(d.check))
            throw ParseError("unknown check name: \"" + d.check + "\"");
        if (cj.contains("domain")) d.domain = domain_from_json(cj.at("domain"));
        if (cj.contains("map")) d.map = map_from_json(cj.at("map"));
        d.trials = cj.value("trials", 100);
        if (cj.contains("tolerance")) d.tolerance = cj.at("tolerance").get<double>();
        d.params = cj.value("params", Json::object());
        cfg.suite.push_back(std::move(d));
    }
    return cfg;
}

Json to_json(const SuiteConfig& cfg) {
    Json suite = Json::array();
    for (const auto& d : cfg.suite) {
        Json cj{{"check", d.check}, {"trials", d.trials}};
        if (d.domain) cj["domain"] = to_json(*d.domain);
        if (d.map) cj["map"] = to_json(*d.map);
        if (d.tolerance) cj["tolerance"] = *d.tolerance;
        if (!d.params.empty()) cj["params"] = d.params;
        suite.push_back(std::move(cj));
    }
    Json j{{"seed", cfg.seed}, {"jobs", cfg.jobs}, {"suite", std::move(suite)}};
    if (!cfg.output_path.empty())
        j["output"] = Json{{"path", cfg.output_path}, {"format", cfg.output_format}};
    return j;
}

SuiteConfig builtin_paper_suite() {
    SuiteConfig cfg;
    cfg.seed = kDefaultSeed;

    auto add = [&](CheckDescriptor d) { cfg.suite.push_back(std::move(d)); };

    Rng rng(kDefaultSeed, 999);
    Matrix A22 = rng.ginibre(2, 2);
    A22 *= 0.6 / operator_norm(A22);
    Matrix U2 = rng.unitary(2);
    Matrix V2 = rng.unitary(2);

    const DomainSpec poly2 = DomainSpec::polydisk(2);
    const DomainSpec rpq22 = DomainSpec::rpq(2, 2);
    const DomainSpec comm = DomainSpec::commutator();

    NcMapExpr mobius = NcMapExpr::mobius_tuple(
        {{0.7, Complex(0.3, 0.2)}, {-0.4, Complex(-0.1, 0.4)}}, {1, 0});
    NcMapExpr morita = NcMapExpr::linear_isometry(U2, V2, {2, 2});
    NcMapExpr ha = NcMapExpr::ha(A22, {2, 2});
    NcMapExpr counter = NcMapExpr::counterexample({Complex(1.0)});

    // Closure of the domains under direct sums and unitary conjugation
    add({"nc_closure", poly2, {}, 100});
    add({"nc_closure", rpq22, {}, 100});
    add({"nc_closure", comm, {}, 100});

    // nc axioms for the map catalog
    add({"nc_axioms", poly2, mobius, 60});
    add({"nc_axioms", rpq22, morita, 60});
    add({"nc_axioms", rpq22, ha, 60});
    add({"nc_axioms", comm, counter, 60});
    {
        CheckDescriptor d{"nc_axioms", DomainSpec::polydisk(1),
                          NcMapExpr::transpose_amplification(2), 40};
        d.params = Json{{"levels", {2, 4}}, {"expect_similarity_violation", true}};
        add(std::move(d));
    }

    // kernel identity and the inverse law
    {
        CheckDescriptor d{"kernel_identity", {}, {}, 100};
        d.params = Json{{"A", to_json(A22)}, {"p", 2}, {"q", 2}, {"level", 2}};
        add(std::move(d));
    }
    add({"inverse_law", rpq22, ha, 100});
    add({"inverse_law", poly2, mobius, 100});

    // complete-isometry failure of the transpose
    {
        CheckDescriptor d{"cb_transpose", {}, {}, 1000};
        d.params = Json{{"p", 2}, {"level", 2}};
        add(std::move(d));
    }
    {
        CheckDescriptor d{"cb_transpose", {}, {}, 1000};
        d.params = Json{{"p", 3}, {"level", 3}};
        add(std::move(d));
    }

    // von Neumann margins for Mobius images
    {
        CheckDescriptor d{"von_neumann", {}, {}, 100};
        d.params = Json{{"theta", 0.3}, {"a", {0.7, 0.0}}, {"level", 4}};
        add(std::move(d));
    }

    // rigidity: identity instance, rotation hypothesis failure, counterexample
    {
        CheckDescriptor d{"rigidity", rpq22,
                          NcMapExpr::compose({invert(morita), morita}), 5};
        d.params = Json{{"expect", "identity"}};
        add(std::move(d));
    }
    {
        CheckDescriptor d{"rigidity", DomainSpec::polydisk(1),
                          NcMapExpr::mobius_tuple({{3.14159265358979 / 3.0, 0.0}}), 5};
        d.params = Json{{"expect", "hypothesis_violation"}, {"probe_levels", {2}}};
        add(std::move(d));
    }
    {
        CheckDescriptor d{"rigidity", comm, counter, 5};
        d.params = Json{{"expect", "identity_violation"}};
        add(std::move(d));
    }

    // derivative structure
    add({"derivative_similarity_invariance", rpq22, morita, 20});
    {
        CheckDescriptor d{"ha_derivative", {}, {}, 50};
        d.params = Json{{"p", 2}, {"q", 2}, {"level", 2}};
        add(std::move(d));
    }

    // linear structure of 0-fixing automorphisms of circular domains
    add({"linear_structure", rpq22, morita, 15});
    add({"linear_structure", poly2,
         NcMapExpr::mobius_tuple({{0.9, 0.0}, {0.0, 0.0}}, {1, 0}), 15});

    // spectral disk and level restriction
    add({"spectral_disk", {}, {}, 30});
    {
        CheckDescriptor d{"level_restriction", {}, {}, 25};
        d.params = Json{{"p", 2}, {"q", 1}, {"generators", {2, 3}}, {"max_level", 5}};
        add(std::move(d));
    }

    return cfg;
}

Json reports_to_json(const std::vector<CheckReport>& reports) {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

std::string reports_to_csv(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << "check,seed,trials,max_residual,tolerance,passed,runtime_ms\n";
    for (const auto& r : reports) {
        os << r.check_name << ',' << r.seed << ',' << r.trials << ','
           << r.max_residual << ',' << r.tolerance << ','
           << (r.passed ? "true" : "false") << ',' << r.runtime_ms << '\n';
    }
    return os.str();
}

SuiteResult run_suite(const SuiteConfig& config, std::ostream& summary) {
    SuiteResult result;
    result.reports.resize(config.suite.size());

    for (const auto& d : config.suite) {
        if (!known_check(d.check)) {
            summary << "config error: unknown check name \"" << d.check << "\"\n";
            result.exit_code = 2;
            return result;
        }
    }

    std::atomic<size_t> next{0};
    std::atomic<bool> had_error{false};
    const int jobs = std::max(1, config.jobs);
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < config.suite.size();
             i = next.fetch_add(1)) {
            try {
                result.reports[i] = run_check(config.suite[i], config.seed);
            } catch (const std::exception& e) {
                CheckReport rep;
                rep.check_name = config.suite[i].check;
                rep.seed = config.seed;
                rep.passed = false;
                rep.max_residual = std::numeric_limits<double>::infinity();
                rep.witnesses.push_back(std::string("error: ") + e.what());
                result.reports[i] = std::move(rep);
                had_error = true;
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    bool all_passed = true;
    for (const auto& r : result.reports) {
        summary << (r.passed ? "[PASS] " : "[FAIL] ") << r.check_name
                << "  residual=" << r.max_residual << "  tol=" << r.tolerance
                << "  trials=" << r.trials << "\n";
        all_passed = all_passed && r.passed;
    }

    if (!config.output_path.empty()) {
        std::ofstream out(config.output_path);
        if (!out) {
            summary << "error: cannot open output file " << config.output_path << "\n";
            result.exit_code = 1;
            return result;
        }
        if (config.output_format == "csv")
            out << reports_to_csv(result.reports);
        else
            out << reports_to_json(result.reports).dump(2) << "\n";
    }

    result.exit_code = had_error ? 1 : (all_passed ? 0 : 1);
    return result;
}

}  // namespace nc
