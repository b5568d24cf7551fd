#include "nc/domains.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "nc/rand.hpp"

namespace nc {

bool LevelFilter::contains(int level) const {
    if (all()) return true;
    if (level <= 0) return false;
    // reachable sums of generators up to the queried level
    std::vector<char> reach(level + 1, 0);
    reach[0] = 1;
    for (int v = 1; v <= level; ++v)
        for (int g : generators)
            if (g > 0 && g <= v && reach[v - g]) { reach[v] = 1; break; }
    // 0 itself is not a level
    return reach[level] && level > 0 &&
           std::any_of(generators.begin(), generators.end(),
                       [&](int g) { return g <= level; });
}

DomainSpec DomainSpec::polydisk(int d) {
    DomainSpec s;
    s.kind = DomainKind::MatrixPolydisk;
    s.d = d;
    return s;
}

DomainSpec DomainSpec::rpq(int p, int q) {
    DomainSpec s;
    s.kind = DomainKind::RpqBall;
    s.shape = {p, q};
    return s;
}

DomainSpec DomainSpec::spectral_disk(std::vector<double> radii) {
    DomainSpec s;
    s.kind = DomainKind::SpectralDisk;
    if (radii.empty() || radii.front() != 1.0)
        throw NcError("spectral disk radius sequence must start at 1");
    for (size_t i = 1; i < radii.size(); ++i)
        if (radii[i] < radii[i - 1])
            throw NcError("spectral disk radius sequence must be non-decreasing");
    s.radii = std::move(radii);
    return s;
}

DomainSpec DomainSpec::commutator() {
    DomainSpec s;
    s.kind = DomainKind::CommutatorDomain;
    s.d = 3;
    return s;
}

int DomainSpec::required_dim() const {
    switch (kind) {
        case DomainKind::MatrixPolydisk: return d;
        case DomainKind::RpqBall: return shape.dim();
        case DomainKind::SpectralDisk: return 1;
        case DomainKind::CommutatorDomain: return 3;
    }
    return 0;
}

double DomainSpec::radius_at(int level) const {
    if (radii.empty()) return 1.0;
    const size_t i = std::min<size_t>(level, radii.size());
    return radii[i - 1];
}

DomainSpec DomainSpec::restricted(std::vector<int> generators) const {
    DomainSpec s = *this;
    s.levels.generators = std::move(generators);
    return s;
}

namespace {

MembershipVerdict norm_verdict(double value) {
    MembershipVerdict v;
    v.norm_value = value;
    v.margin = 1.0 - value;
    v.member = value < 1.0 ? Member::Yes : Member::No;
    return v;
}

// Clamp singular values of s so that cond(s) <= r.
Matrix clamp_condition(const Matrix& s, double r) {
    Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    const double hi = sv(0);
    const double lo = hi / r;
    for (int i = 0; i < sv.size(); ++i) sv(i) = std::max(sv(i), lo);
    return svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
}

double conjugated_norm(const Matrix& x, const Matrix& s) {
    Eigen::PartialPivLU<Matrix> lu(s);
    return operator_norm(lu.solve(x * s));
}

}  // namespace

bool verify_spectral_certificate(const Matrix& x, const Matrix& s, double r) {
    if (rcond(s) < 1e-14) return false;
    Eigen::JacobiSVD<Matrix> svd(s);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    return cond <= r * (1.0 + 1e-10) && conjugated_norm(x, s) < 1.0;
}

MembershipVerdict spectral_disk_search(const Matrix& x, double r, int max_iters) {
    if (r < 1.0) throw NcError("spectral_disk_search: r must be >= 1");
    const int n = static_cast<int>(x.rows());

    MembershipVerdict v;
    const double direct = operator_norm(x);
    if (direct < 1.0) {
        v.member = Member::Yes;
        v.similarity = Matrix::Identity(n, n);
        v.norm_value = direct;
        v.margin = 1.0 - direct;
        return v;
    }
    const double rho = spectral_radius(x);
    if (rho >= 1.0) {
        v.member = Member::No;
        v.margin = 1.0 - rho;
        return v;
    }

    // Candidate: balanced eigenvector matrix, projected into the condition ball.
    Matrix best = Matrix::Identity(n, n);
    double best_norm = direct;
    Eigen::ComplexEigenSolver<Matrix> es(x, true);
    if (es.info() == Eigen::Success) {
        Matrix P = es.eigenvectors();
        for (int j = 0; j < n; ++j) {
            const double c = P.col(j).norm();
            if (c > 0) P.col(j) /= c;
        }
        if (rcond(P) > 1e-12) {
            Matrix cand = clamp_condition(P, r);
            const double cn = conjugated_norm(x, cand);
            if (cn < best_norm) { best = cand; best_norm = cn; }
        }
    }

    // Local descent with condition clamping after each proposal.
    Rng rng(0x5EEDULL, static_cast<std::uint64_t>(n));
    double step = 0.25;
    for (int it = 0; it < max_iters; ++it) {
        Matrix G = rng.ginibre(n, n);
        Matrix cand = clamp_condition(best * (Matrix::Identity(n, n) + step * G), r);
        const double cn = conjugated_norm(x, cand);
        if (cn < best_norm) {
            best = cand;
            best_norm = cn;
        } else {
            step *= 0.95;
        }
        if (best_norm < 1.0) break;
    }

    if (best_norm < 1.0) {
        v.member = Member::Yes;
        v.similarity = best;
        v.norm_value = best_norm;
        v.margin = 1.0 - best_norm;
    } else {
        v.member = Member::Undetermined;
    }
    return v;
}

MembershipVerdict membership(const DomainSpec& spec, const NcPoint& x) {
    if (x.dim() != spec.required_dim())
        throw DimensionMismatch("membership: variable count mismatch for domain kind");

    if (!spec.levels.contains(x.level())) {
        MembershipVerdict v;
        v.member = Member::No;
        return v;
    }

    switch (spec.kind) {
        case DomainKind::MatrixPolydisk:
            return norm_verdict(point_norm(x));
        case DomainKind::RpqBall:
            return norm_verdict(operator_norm(gamma_pack(x, spec.shape)));
        case DomainKind::CommutatorDomain:
            return norm_verdict(operator_norm(x.vars[0] * x.vars[1] - x.vars[1] * x.vars[0]));
        case DomainKind::SpectralDisk:
            return spectral_disk_search(x.vars[0], spec.radius_at(x.level()));
    }
    throw NcError("membership: unknown domain kind");
}

NcPoint sample_member(const DomainSpec& spec, int level, std::uint64_t seed,
                      std::uint64_t stream, double norm_fraction) {
    if (!spec.levels.contains(level))
        throw NcError("sample_member: level excluded by the domain's level filter");
    Rng rng(seed, stream);
    switch (spec.kind) {
        case DomainKind::MatrixPolydisk: {
            std::vector<Matrix> vars;
            for (int j = 0; j < spec.d; ++j)
                vars.push_back(rng.contraction(level, norm_fraction));
            return NcPoint(std::move(vars));
        }
        case DomainKind::RpqBall: {
            Matrix M = rng.ginibre(level * spec.shape.p, level * spec.shape.q);
            const double nm = operator_norm(M);
            if (nm > 0) M *= norm_fraction / nm;
            return gamma_unpack(M, spec.shape, level);
        }
        case DomainKind::SpectralDisk: {
            Matrix s = Matrix::Identity(level, level) + 0.3 * rng.ginibre(level, level);
            Matrix y = rng.contraction(level, norm_fraction);
            Eigen::PartialPivLU<Matrix> lu(s);
            return NcPoint({s * y * lu.inverse()});
        }
        case DomainKind::CommutatorDomain: {
            Matrix a = rng.ginibre(level, level);
            Matrix b = rng.ginibre(level, level);
            Matrix c = a * b - b * a;
            const double cn = operator_norm(c);
            if (cn > 0) {
                const double f = std::sqrt(norm_fraction / cn);
                a *= f;
                b *= f;
            }
            return NcPoint({a, b, rng.ginibre(level, level)});
        }
    }
    throw NcError("sample_member: unknown domain kind");
}

CheckReport nc_closure_check(const DomainSpec& spec, int samples, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check_name = "nc_closure";
    rep.seed = seed;
    rep.trials = samples;
    rep.tolerance = 1e-9;

    for (int t = 0; t < samples; ++t) {
        const int n = 1 + t % 3;
        const int m = 1 + (t / 3) % 3;
        NcPoint x = sample_member(spec, n, seed, 2 * t);
        NcPoint y = sample_member(spec, m, seed, 2 * t + 1);
        Rng rng(seed, 1000000 + t);
        Matrix u = rng.unitary(n);

        auto record = [&](const char* what, const MembershipVerdict& v) {
            const double res = v.member == Member::Yes ? 0.0 : 1.0;
            if (res > rep.max_residual) rep.max_residual = res;
            if (v.member != Member::Yes) {
                std::ostringstream os;
                os << what << " violated at trial " << t << " (levels " << n << "," << m << ")";
                rep.witnesses.push_back(os.str());
            }
        };
        record("direct-sum closure", membership(spec, direct_sum(x, y)));
        record("unitary closure", membership(spec, conjugate(u, x)));
    }
    rep.passed = rep.max_residual <= rep.tolerance && rep.witnesses.empty();
    rep.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace nc
