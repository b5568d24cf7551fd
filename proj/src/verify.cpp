#include "nc/verify.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <sstream>

#include "nc/rand.hpp"

namespace nc {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

NcEvaluator evaluator(const NcMapExpr& expr) {
    return [&expr](const NcPoint& x) { return apply(expr, x); };
}

double cond(const Matrix& s) {
    const double r = rcond(s);
    return r > 0 ? 1.0 / r : std::numeric_limits<double>::infinity();
}

}  // namespace

CheckReport check_nc_axioms(const NcMapExpr& expr, const DomainSpec& spec,
                            int trials, std::uint64_t seed,
                            const AxiomCheckOptions& opts) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "nc_axioms";
    rep.seed = seed;
    rep.trials = trials;
    rep.tolerance = opts.tolerance;

    double best_violation = 0.0;
    bool hard_error = false;

    for (int t = 0; t < trials; ++t) {
        const int n = opts.levels[t % opts.levels.size()];
        const int m = opts.levels[(t / opts.levels.size()) % opts.levels.size()];
        NcPoint x = sample_member(spec, n, seed, 4 * t);
        NcPoint y = sample_member(spec, m, seed, 4 * t + 1);

        // gradedness
        NcPoint fx = apply(expr, x);
        if (fx.level() != x.level()) {
            rep.witnesses.push_back("gradedness violated at trial " + std::to_string(t));
            hard_error = true;
            continue;
        }

        // direct sums
        if (!opts.expect_similarity_violation) {
            const double ds_res = relative_residual(apply(expr, direct_sum(x, y)),
                                                    direct_sum(fx, apply(expr, y)));
            if (ds_res > rep.max_residual) rep.max_residual = ds_res;
            if (ds_res > opts.tolerance) {
                std::ostringstream os;
                os << "direct-sum residual " << ds_res << " at trial " << t;
                rep.witnesses.push_back(os.str());
            }
        }

        // similarity equivariance, with membership retries
        Rng rng(seed, 4 * t + 2);
        for (int attempt = 0; attempt < 50; ++attempt) {
            Matrix s = Matrix::Identity(n, n) + 0.1 * rng.ginibre(n, n);
            NcPoint xc;
            try {
                xc = conjugate(s, x);
            } catch (const SingularMatrix&) {
                continue;
            }
            if (membership(spec, xc).member != Member::Yes) continue;
            const double raw =
                relative_residual(apply(expr, xc), conjugate(s, fx));
            const double res = raw / cond(s);
            if (opts.expect_similarity_violation) {
                if (raw > best_violation) best_violation = raw;
            } else if (res > rep.max_residual) {
                rep.max_residual = res;
                if (res > opts.tolerance) {
                    std::ostringstream os;
                    os << "similarity residual " << res << " at trial " << t
                       << " level " << n;
                    rep.witnesses.push_back(os.str());
                }
            }
            break;
        }
    }

    if (opts.expect_similarity_violation) {
        const bool detected = best_violation > opts.detection_threshold;
        rep.max_residual = detected ? 0.0 : 1.0;
        std::ostringstream os;
        os << "largest similarity violation found: " << best_violation;
        rep.witnesses.push_back(os.str());
        rep.passed = detected;
    } else {
        rep.passed = rep.max_residual <= rep.tolerance && !hard_error;
    }
    rep.runtime_ms = ms_since(t0);
    return rep;
}

CheckReport check_kernel_identity(const Matrix& A, BlockShape shape, int level,
                                  int trials, std::uint64_t seed) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "kernel_identity";
    rep.seed = seed;
    rep.trials = trials;
    rep.tolerance = 1e-10;

    const int n = level, p = shape.p, q = shape.q;
    const Matrix In = Matrix::Identity(n, n);
    const Matrix Iq = Matrix::Identity(q, q);
    const Matrix Inq = Matrix::Identity(n * q, n * q);
    const Matrix S = kron(herm_sqrt_inv(Iq - A.adjoint() * A, +1), In);
    const Matrix Aamp = kron(A, In);
    const Matrix Asamp = kron(Matrix(A.adjoint()), In);

    for (int t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        Matrix W = rng.ginibre(n * p, n * q);
        Matrix Z = rng.ginibre(n * p, n * q);
        const double wn = operator_norm(W), zn = operator_norm(Z);
        if (wn > 0) W *= 0.9 / wn;
        if (zn > 0) Z *= 0.9 / zn;

        const Matrix HW = ha_apply(A, shape, W);
        const Matrix HZ = ha_apply(A, shape, Z);
        const Matrix lhs = Inq - HW.adjoint() * HZ;
        const Matrix rhs = S * (Inq + W.adjoint() * Aamp).inverse() *
                           (Inq - W.adjoint() * Z) *
                           (Inq + Asamp * Z).inverse() * S;
        const double res = relative_residual(lhs, rhs);
        if (res > rep.max_residual) {
            rep.max_residual = res;
            if (res > rep.tolerance) {
                std::ostringstream os;
                os << "kernel residual " << res << " at trial " << t;
                rep.witnesses.push_back(os.str());
            }
        }

        // W = Z: both sides must be positive semidefinite
        const Matrix psd = Inq - HZ.adjoint() * HZ;
        const double min_eig =
            Eigen::SelfAdjointEigenSolver<Matrix>(psd).eigenvalues().minCoeff();
        if (min_eig < -1e-10) {
            std::ostringstream os;
            os << "PSD violation " << min_eig << " at trial " << t;
            rep.witnesses.push_back(os.str());
            rep.max_residual = std::max(rep.max_residual, -min_eig);
        }
    }
    rep.passed = rep.max_residual <= rep.tolerance;
    rep.runtime_ms = ms_since(t0);
    return rep;
}

CheckReport check_cb_transpose(int p, int level, std::uint64_t seed, int samples) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "cb_transpose";
    rep.seed = seed;
    rep.trials = samples;
    rep.tolerance = 1e-9;

    const int n = level;
    const int k = std::min(p, n);

    // swap witness on the first k indices: block (i,j) = E_{ji}
    Matrix X = Matrix::Zero(n * p, n * p);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            X(i * n + j, j * n + i) = 1.0;
    double best = operator_norm(transpose_amplify(p, X)) / operator_norm(X);

    for (int t = 0; t < samples; ++t) {
        Rng rng(seed, t);
        Matrix Y = rng.ginibre(n * p, n * p);
        const double yn = operator_norm(Y);
        if (yn == 0) continue;
        const double v = operator_norm(transpose_amplify(p, Y)) / yn;
        if (v > best) best = v;
    }

    const double expected = k;
    rep.max_residual = std::abs(best - expected);
    {
        std::ostringstream os;
        os << "amplified-norm lower bound " << best << " (expected " << expected << ")";
        rep.witnesses.push_back(os.str());
    }
    rep.passed = rep.max_residual <= rep.tolerance &&
                 (k == 1 ? std::abs(best - 1.0) <= rep.tolerance
                         : best > 1.0 + 1e-6);
    if (rep.passed) rep.max_residual = std::min(rep.max_residual, rep.tolerance);
    rep.runtime_ms = ms_since(t0);
    return rep;
}

RigidityVerdict rigidity_probe(const NcMapExpr& expr, const DomainSpec& spec,
                               int base_level, const std::vector<int>& probe_levels,
                               std::uint64_t seed, int samples_per_level) {
    RigidityVerdict v;
    const int d = arity(expr);
    const int m = base_level;

    NcPoint origin = NcPoint::zero(d, m);
    if (membership(spec, origin).member != Member::Yes)
        throw NcError("rigidity_probe: origin is not in the domain at the base level");

    v.origin_norm = point_norm(apply(expr, origin));
    v.fixes_origin = v.origin_norm <= 1e-10;

    const auto f = evaluator(expr);
    for (int j = 0; j < d; ++j) {
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                NcPoint h = NcPoint::zero(d, m);
                h.vars[j](a, b) = 1.0;
                DerivativeResult dr = directional_derivative(f, origin, h);
                double res = 0.0;
                for (int jj = 0; jj < d; ++jj)
                    res += (dr.value.vars[jj] - h.vars[jj]).squaredNorm();
                v.derivative_residual = std::max(v.derivative_residual, std::sqrt(res));
            }
        }
    }

    for (int lev : probe_levels) {
        double worst = 0.0;
        for (int t = 0; t < samples_per_level; ++t) {
            NcPoint x = sample_member(spec, lev, seed, 100 * lev + t);
            worst = std::max(worst, relative_residual(apply(expr, x), x));
        }
        v.identity_residual_at_levels[lev] = worst;
    }
    return v;
}

CheckReport check_derivative_similarity_invariance(const NcMapExpr& expr,
                                                   const DomainSpec& spec, int level,
                                                   int trials, std::uint64_t seed) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "derivative_similarity_invariance";
    rep.seed = seed;
    rep.trials = trials;
    rep.tolerance = 1e-6;

    const int d = arity(expr);
    const int n = level;
    NcPoint origin = NcPoint::zero(d, n);
    if (membership(spec, origin).member != Member::Yes)
        throw NcError("derivative check: origin not in domain");

    const double origin_norm = point_norm(apply(expr, origin));
    if (origin_norm > 1e-8) {
        std::ostringstream os;
        os << "hypothesis_failure: origin not fixed, ||Phi(0)|| = " << origin_norm;
        rep.witnesses.push_back(os.str());
        rep.max_residual = origin_norm;
        rep.passed = false;
        rep.runtime_ms = ms_since(t0);
        return rep;
    }

    const auto f = evaluator(expr);
    for (int t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        std::vector<Matrix> zs;
        for (int j = 0; j < d; ++j) zs.push_back(rng.ginibre(n, n));
        NcPoint Z(std::move(zs));
        Matrix s = Matrix::Identity(n, n) + 0.1 * rng.ginibre(n, n);

        NcPoint lhs = directional_derivative(f, origin, conjugate(s, Z)).value;
        NcPoint rhs = conjugate(s, directional_derivative(f, origin, Z).value);
        const double res = relative_residual(lhs, rhs) / cond(s);
        if (res > rep.max_residual) {
            rep.max_residual = res;
            if (res > rep.tolerance) {
                std::ostringstream os;
                os << "invariance residual " << res << " at trial " << t;
                rep.witnesses.push_back(os.str());
            }
        }
    }
    rep.passed = rep.max_residual <= rep.tolerance;
    rep.runtime_ms = ms_since(t0);
    return rep;
}

LinearStructureResult check_linear_structure(const NcMapExpr& expr,
                                             const DomainSpec& spec,
                                             std::uint64_t seed,
                                             const std::vector<int>& probe_levels) {
    const auto t0 = Clock::now();
    LinearStructureResult out;
    CheckReport& rep = out.report;
    rep.check_name = "linear_structure";
    rep.seed = seed;
    rep.tolerance = 1e-10;

    const int d = arity(expr);
    const double origin_norm = point_norm(apply(expr, NcPoint::zero(d, 1)));
    if (origin_norm > 1e-10) {
        std::ostringstream os;
        os << "hypothesis_failure: origin not fixed, ||Phi(0)|| = " << origin_norm;
        rep.witnesses.push_back(os.str());
        rep.max_residual = origin_norm;
        rep.passed = false;
        rep.runtime_ms = ms_since(t0);
        return out;
    }

    // Fit F from the level-1 action on the standard basis directions.
    const double t = 0.4;
    out.F = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        NcPoint e = NcPoint::zero(d, 1);
        e.vars[k](0, 0) = t;
        NcPoint img = apply(expr, e);
        for (int j = 0; j < d; ++j) out.F(j, k) = img.vars[j](0, 0) / t;
    }
    const double smin =
        Eigen::JacobiSVD<Matrix>(out.F).singularValues().minCoeff();
    if (smin <= 1e-10) {
        rep.witnesses.push_back("fitted F is numerically singular");
        rep.passed = false;
        rep.runtime_ms = ms_since(t0);
        return out;
    }

    int trials = 0;
    for (int lev : probe_levels) {
        for (int s = 0; s < 5; ++s, ++trials) {
            NcPoint Z = sample_member(spec, lev, seed, 100 * lev + s);
            NcPoint img = apply(expr, Z);
            std::vector<Matrix> expect(d, Matrix::Zero(lev, lev));
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    expect[j] += out.F(j, k) * Z.vars[k];
            const double res = relative_residual(img, NcPoint(std::move(expect)));
            if (res > rep.max_residual) {
                rep.max_residual = res;
                if (res > rep.tolerance) {
                    std::ostringstream os;
                    os << "entrywise-action residual " << res << " at level " << lev;
                    rep.witnesses.push_back(os.str());
                }
            }
        }
    }
    rep.trials = trials;
    rep.passed = rep.max_residual <= rep.tolerance;
    rep.runtime_ms = ms_since(t0);
    return out;
}

CheckReport check_von_neumann(double theta, Complex a, int trials,
                              std::uint64_t seed, int level) {
    const auto t0 = Clock::now();
    CheckReport rep;
    rep.check_name = "von_neumann";
    rep.seed = seed;
    rep.trials = trials;
    rep.tolerance = 0.0;

    double min_margin = 1.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        Matrix Z = rng.contraction(level, 0.3 + 0.65 * rng.uniform());
        const double nm = operator_norm(mobius_apply(theta, a, Z));
        min_margin = std::min(min_margin, 1.0 - nm);
        if (nm >= 1.0) {
            std::ostringstream os;
            os << "image norm " << nm << " at trial " << t;
            rep.witnesses.push_back(os.str());
            rep.max_residual = std::max(rep.max_residual, nm - 1.0);
        }
    }
    {
        std::ostringstream os;
        os << "minimum margin " << min_margin;
        rep.witnesses.push_back(os.str());
    }
    rep.passed = min_margin > 0.0;
    rep.runtime_ms = ms_since(t0);
    return rep;
}

}  // namespace nc
