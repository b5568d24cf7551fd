// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "nc/rand.hpp"
#include "nc/suite.hpp"

using namespace nc;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << number << ": " << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_strict_contraction(Rng& rng, int rows, int cols, double target) {
    Matrix M = rng.ginibre(rows, cols);
    const double nm = operator_norm(M);
    if (nm > 0) M *= target / nm;
    return M;
}

// ---- criterion 1: kernel identity over all shapes -------------------------

void run_kernel_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int p : {1, 2, 3}) {
        for (int q : {1, 2, 3}) {
            for (int n : {1, 2, 4}) {
                const BlockShape shape{p, q};
                const Matrix In = Matrix::Identity(n, n);
                const Matrix I = Matrix::Identity(n * q, n * q);
                for (int t = 0; t < 100; ++t) {
                    Rng rng(0x5EED, 100000 * (9 * p + 3 * q + n) + t);
                    Matrix A = random_strict_contraction(rng, p, q, 0.3 + 0.5 * rng.uniform());
                    Matrix W = random_strict_contraction(rng, n * p, n * q, 0.9);
                    Matrix Z = random_strict_contraction(rng, n * p, n * q, 0.9);

                    Matrix S = kron(herm_sqrt_inv(
                                        Matrix(Matrix::Identity(q, q) - A.adjoint() * A), +1),
                                    In);
                    Matrix Aamp = kron(A, In);
                    Matrix Asamp = kron(Matrix(A.adjoint()), In);
                    Matrix lhs = I - ha_apply(A, shape, W).adjoint() * ha_apply(A, shape, Z);
                    Matrix rhs = S * (I + W.adjoint() * Aamp).inverse() *
                                 (I - W.adjoint() * Z) * (I + Asamp * Z).inverse() * S;
                    worst = std::max(worst, relative_residual(lhs, rhs));
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    std::ostringstream os;
    os << "max residual " << worst << ", " << secs << " s";
    criterion(1, "kernel identity, p,q in {1,2,3}, n in {1,2,4}",
              worst <= 1e-10 && secs < 10.0, os.str());
}

// ---- criterion 2: inverse law ---------------------------------------------

void run_inverse_law() {
    double worst = 0.0;
    for (auto [p, q] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 2}, {3, 3}}) {
        DomainSpec dom = DomainSpec::rpq(p, q);
        Rng rng0(0x5EED, 77 * p + q);
        Matrix A = random_strict_contraction(rng0, p, q, 0.6);
        NcMapExpr f = NcMapExpr::ha(A, {p, q});
        NcMapExpr fi = NcMapExpr::ha(-A, {p, q});
        for (int t = 0; t < 100; ++t) {
            NcPoint x = sample_member(dom, 1 + t % 3, 0x5EED, 1000 * p + 100 * q + t);
            worst = std::max(worst, relative_residual(apply(fi, apply(f, x)), x));
        }
    }
    std::ostringstream os;
    os << "max residual " << worst;
    criterion(2, "H_{-A} inverts H_A on random members", worst <= 1e-9, os.str());
}

// ---- criterion 3: nc axioms -----------------------------------------------

void run_axioms() {
    Rng rng(0x5EED, 31337);
    Matrix A = random_strict_contraction(rng, 2, 2, 0.5);
    Matrix U = rng.unitary(2), V = rng.unitary(2);

    struct Case {
        const char* name;
        NcMapExpr map;
        DomainSpec dom;
    };
    const std::vector<Case> cases = {
        {"mobius", NcMapExpr::mobius_tuple({{0.6, Complex(0.2, 0.3)}, {-0.3, Complex(-0.4, 0.1)}}, {1, 0}),
         DomainSpec::polydisk(2)},
        {"isometry", NcMapExpr::linear_isometry(U, V, {2, 2}), DomainSpec::rpq(2, 2)},
        {"ha", NcMapExpr::ha(A, {2, 2}), DomainSpec::rpq(2, 2)},
        {"counterexample", NcMapExpr::counterexample({Complex(1.0)}), DomainSpec::commutator()},
    };
    bool ok = true;
    double worst = 0.0;
    for (const auto& c : cases) {
        AxiomCheckOptions opts;
        opts.levels = {1, 2, 3, 4};
        CheckReport rep = check_nc_axioms(c.map, c.dom, 64, 0x5EED, opts);
        ok = ok && rep.passed;
        worst = std::max(worst, rep.max_residual);
    }
    std::ostringstream os;
    os << "max residual " << worst;
    criterion(3, "nc axioms for the map catalog, levels 1-4", ok && worst <= 1e-9, os.str());
}

// ---- criterion 4: complete-isometry failure -------------------------------

void run_cb() {
    bool ok = true;
    std::ostringstream os;
    for (int p : {2, 3}) {
        CheckReport rep = check_cb_transpose(p, p, 0x5EED, 300);
        ok = ok && rep.passed && rep.max_residual <= 1e-9;
        os << "p=" << p << " residual " << rep.max_residual << "; ";
    }
    for (auto [p, n] : {std::pair{1, 1}, {1, 3}, {3, 1}}) {
        CheckReport rep = check_cb_transpose(p, n, 0x5EED, 300);
        ok = ok && rep.passed;
    }
    criterion(4, "transpose amplification norm p; trivial cases give 1", ok, os.str());
}

// ---- criterion 5: range preservation + von Neumann ------------------------

void run_range_preservation() {
    bool ok = true;
    for (int lev = 1; lev <= 4; ++lev) {
        CheckReport rep = check_von_neumann(0.4, Complex(0.5, 0.3), 100, 0x5EED, lev);
        ok = ok && rep.passed;
    }
    Rng rng(0x5EED, 5150);
    Matrix A = random_strict_contraction(rng, 2, 2, 0.5);
    NcMapExpr ha = NcMapExpr::ha(A, {2, 2});
    DomainSpec dom = DomainSpec::rpq(2, 2);
    for (int lev = 1; lev <= 4; ++lev) {
        for (int t = 0; t < 100; ++t) {
            NcPoint x = sample_member(dom, lev, 0x5EED, 10000 + 100 * lev + t);
            MembershipVerdict v = membership(dom, apply(ha, x));
            ok = ok && v.member == Member::Yes && *v.margin > 0.0;
        }
    }
    criterion(5, "Mobius and H_A map strict contractions inside, levels 1-4", ok);
}

// ---- criterion 6: rigidity instances --------------------------------------

void run_rigidity() {
    Rng rng(0x5EED, 616);
    Matrix U = rng.unitary(2), V = rng.unitary(2);
    Matrix A = random_strict_contraction(rng, 2, 2, 0.5);
    NcMapExpr morita = NcMapExpr::linear_isometry(U, V, {2, 2});
    NcMapExpr ha = NcMapExpr::ha(A, {2, 2});
    NcMapExpr mob = NcMapExpr::mobius_tuple({{0.5, Complex(0.2, 0.1)}, {1.1, Complex(0.0, -0.3)}}, {1, 0});

    struct Case {
        NcMapExpr map;
        DomainSpec dom;
    };
    const std::vector<Case> catalog = {
        {NcMapExpr::identity(2), DomainSpec::polydisk(2)},
        {NcMapExpr::compose({invert(morita), morita}), DomainSpec::rpq(2, 2)},
        {NcMapExpr::compose({invert(ha), ha}), DomainSpec::rpq(2, 2)},
        {NcMapExpr::compose({invert(mob), mob}), DomainSpec::polydisk(2)},
    };
    bool ok = true;
    double worst = 0.0;
    for (const auto& c : catalog) {
        RigidityVerdict v = rigidity_probe(c.map, c.dom, 1, {2, 3, 4}, 0x5EED);
        ok = ok && v.fixes_origin && v.derivative_residual <= 1e-5;
        for (const auto& [lev, res] : v.identity_residual_at_levels) {
            ok = ok && res <= 1e-8;
            worst = std::max(worst, res);
        }
    }
    // the pi/3 rotation fixes 0 but must be flagged on the derivative hypothesis
    RigidityVerdict rot = rigidity_probe(NcMapExpr::mobius_tuple({{M_PI / 3.0, 0.0}}),
                                         DomainSpec::polydisk(1), 1, {2}, 0x5EED);
    ok = ok && rot.fixes_origin && rot.derivative_residual > 1e-3;
    std::ostringstream os;
    os << "worst identity residual " << worst;
    criterion(6, "0-fixing identity-derivative automorphisms are the identity", ok, os.str());
}

// ---- criterion 7: the unbounded counterexample ----------------------------

void run_counterexample() {
    NcMapExpr e = NcMapExpr::counterexample({Complex(1.0)});
    DomainSpec dom = DomainSpec::commutator();

    CheckReport axioms = check_nc_axioms(e, dom, 64, 0x5EED);

    RigidityVerdict v = rigidity_probe(e, dom, 1, {2}, 0x5EED);
    const bool level1_identity = v.fixes_origin && v.derivative_residual <= 1e-5;

    Matrix e12 = Matrix::Zero(2, 2), e21 = Matrix::Zero(2, 2);
    e12(0, 1) = 0.9;
    e21(1, 0) = 0.9;
    NcPoint x({e12, e21, Matrix::Zero(2, 2)});
    const double deviation = operator_norm(apply(e, x).vars[2] - x.vars[2]);
    const bool witness_ok = std::abs(deviation - 0.81) <= 1e-12;

    std::ostringstream os;
    os << "level-2 deviation " << deviation;
    criterion(7, "counterexample: nc map, identity at level 1, 0.81 deviation at level 2",
              axioms.passed && level1_identity && witness_ok, os.str());
}

// ---- criterion 8: linear structure ----------------------------------------

void run_linear_structure() {
    Rng rng(0x5EED, 888);
    Matrix U = rng.unitary(2), V = rng.unitary(2);
    bool ok = true;
    double worst = 0.0;
    const std::vector<std::pair<NcMapExpr, DomainSpec>> cases = {
        {NcMapExpr::linear_isometry(U, V, {2, 2}), DomainSpec::rpq(2, 2)},
        {NcMapExpr::mobius_tuple({{0.9, 0.0}, {-0.4, 0.0}}, {1, 0}), DomainSpec::polydisk(2)},
    };
    for (const auto& [map, dom] : cases) {
        LinearStructureResult r = check_linear_structure(map, dom, 0x5EED, {1, 2, 3});
        ok = ok && r.report.passed && r.report.max_residual <= 1e-10;
        ok = ok && Eigen::JacobiSVD<Matrix>(r.F).singularValues().minCoeff() > 1e-10;
        worst = std::max(worst, r.report.max_residual);
    }
    std::ostringstream os;
    os << "max residual " << worst;
    criterion(8, "fitted linear F reproduces the entrywise action, levels 1-3", ok, os.str());
}

// ---- criterion 9: derivative scheme ---------------------------------------

void run_derivative_scheme() {
    CheckDescriptor d{"ha_derivative"};
    d.trials = 50;
    d.params = Json{{"p", 2}, {"q", 2}, {"level", 2}};
    CheckReport rep = run_check(d, 0x5EED);
    std::ostringstream os;
    os << "max relative error " << rep.max_residual;
    criterion(9, "finite-difference D H_A(0) matches the closed form",
              rep.passed && rep.max_residual <= 1e-6, os.str());
}

// ---- criterion 10: spectral disk ------------------------------------------

void run_spectral() {
    CheckDescriptor d{"spectral_disk"};
    d.trials = 40;
    d.params = Json{{"radii", {1.0, 2.0}}};
    CheckReport rep = run_check(d, 0x5EED);
    criterion(10, "spectral disk certificates: accept, reject, re-verify, transport",
              rep.passed);
}

// ---- criterion 11: level restriction --------------------------------------

void run_levels() {
    CheckDescriptor d{"level_restriction"};
    d.params = Json{{"p", 2}, {"q", 1}, {"generators", {2, 3}}, {"max_level", 5}};
    CheckReport rep = run_check(d, 0x5EED);
    criterion(11, "S = <2,3>: level 1 refused, levels 2-5 match unfiltered", rep.passed);
}

// ---- criterion 12: reproducibility ----------------------------------------

void run_reproducibility() {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteConfig cfg = builtin_paper_suite();
    std::ostringstream sink1, sink2;
    SuiteResult r1 = run_suite(cfg, sink1);
    SuiteResult r2 = run_suite(cfg, sink2);
    const double secs = seconds_since(t0);

    Json j1 = reports_to_json(r1.reports);
    Json j2 = reports_to_json(r2.reports);
    for (auto& r : j1) r.erase("runtime_ms");
    for (auto& r : j2) r.erase("runtime_ms");

    std::ostringstream os;
    os << r1.reports.size() << " checks, two runs in " << secs << " s";
    criterion(12, "paper suite is byte-identical across runs and fast",
              r1.exit_code == 0 && r2.exit_code == 0 && j1.dump() == j2.dump() &&
                  secs < 60.0,
              os.str());
}

}  // namespace

int main() {
    run_kernel_identity();
    run_inverse_law();
    run_axioms();
    run_cb();
    run_range_preservation();
    run_rigidity();
    run_counterexample();
    run_linear_structure();
    run_derivative_scheme();
    run_spectral();
    run_levels();
    run_reproducibility();

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED"
                                  : std::to_string(g_failures) + " CRITERIA FAILED")
              << "\n";
    return g_failures == 0 ? 0 : 1;
}
