#include "nc/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace nc {

NcPoint::NcPoint(std::vector<Matrix> v) : vars(std::move(v)) {
    if (vars.empty()) throw DimensionMismatch("NcPoint needs at least one variable");
    const auto n = vars[0].rows();
    for (const auto& m : vars) {
        if (m.rows() != n || m.cols() != n)
            throw DimensionMismatch("NcPoint variables must be square of equal size");
        if (!m.allFinite())
            throw NcError("NcPoint entries must be finite");
    }
}

NcPoint NcPoint::zero(int d, int n) {
    std::vector<Matrix> v(d, Matrix::Zero(n, n));
    return NcPoint(std::move(v));
}

double point_norm(const NcPoint& x) {
    double m = 0.0;
    for (const auto& v : x.vars) m = std::max(m, operator_norm(v));
    return m;
}

NcPoint direct_sum(const NcPoint& x, const NcPoint& y) {
    if (x.dim() != y.dim())
        throw DimensionMismatch("direct_sum: variable counts differ");
    const int n = x.level(), m = y.level();
    std::vector<Matrix> out;
    out.reserve(x.dim());
    for (int j = 0; j < x.dim(); ++j) {
        Matrix b = Matrix::Zero(n + m, n + m);
        b.topLeftCorner(n, n) = x.vars[j];
        b.bottomRightCorner(m, m) = y.vars[j];
        out.push_back(std::move(b));
    }
    return NcPoint(std::move(out));
}

NcPoint conjugate(const Matrix& s, const NcPoint& x, double rcond_floor) {
    if (s.rows() != s.cols() || s.rows() != x.level())
        throw DimensionMismatch("conjugate: s must be n-by-n at the point's level");
    if (rcond(s) < rcond_floor)
        throw SingularMatrix("conjugate: similarity matrix below invertibility floor");
    Eigen::PartialPivLU<Matrix> lu(s);
    std::vector<Matrix> out;
    out.reserve(x.dim());
    for (const auto& v : x.vars) out.push_back(lu.solve(v * s));
    return NcPoint(std::move(out));
}

Matrix gamma_pack(const NcPoint& x, BlockShape shape) {
    if (x.dim() != shape.dim())
        throw DimensionMismatch("gamma_pack: variable count != p*q");
    const int n = x.level();
    Matrix M(n * shape.p, n * shape.q);
    for (int i = 0; i < shape.p; ++i)
        for (int j = 0; j < shape.q; ++j)
            M.block(i * n, j * n, n, n) = x.vars[i * shape.q + j];
    return M;
}

NcPoint gamma_unpack(const Matrix& M, BlockShape shape, int level) {
    if (M.rows() != static_cast<long>(level) * shape.p ||
        M.cols() != static_cast<long>(level) * shape.q)
        throw DimensionMismatch("gamma_unpack: matrix is not (n*p)-by-(n*q)");
    std::vector<Matrix> vars;
    vars.reserve(shape.dim());
    for (int i = 0; i < shape.p; ++i)
        for (int j = 0; j < shape.q; ++j)
            vars.push_back(M.block(i * level, j * level, level, level));
    return NcPoint(std::move(vars));
}

double operator_norm(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

double spectral_radius(const Matrix& M) {
    return Eigen::ComplexEigenSolver<Matrix>(M, false).eigenvalues().cwiseAbs().maxCoeff();
}

double rcond(const Matrix& M) {
    Eigen::JacobiSVD<Matrix> svd(M);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0) return 0.0;
    return sv(sv.size() - 1) / sv(0);
}

Matrix herm_sqrt_inv(const Matrix& M, int power_sign, double clamp_tol) {
    if (M.rows() != M.cols())
        throw DimensionMismatch("herm_sqrt_inv: matrix must be square");
    Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    Eigen::VectorXd lam = es.eigenvalues();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) < -clamp_tol * scale)
            throw NotPositiveDefinite("herm_sqrt_inv: eigenvalue below tolerance floor");
        if (lam(i) < 0.0) lam(i) = 0.0;
        if (power_sign < 0 && lam(i) <= clamp_tol * scale)
            throw NotPositiveDefinite("herm_sqrt_inv: eigenvalue too small for inverse root");
    }
    Eigen::VectorXd root = lam.cwiseSqrt();
    if (power_sign < 0) root = root.cwiseInverse();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

NcPoint axpy(const NcPoint& z, double t, const NcPoint& h) {
    std::vector<Matrix> v;
    v.reserve(z.dim());
    for (int j = 0; j < z.dim(); ++j) v.push_back(z.vars[j] + t * h.vars[j]);
    return NcPoint(std::move(v));
}

NcPoint central_difference(const NcEvaluator& f, const NcPoint& z, const NcPoint& h,
                           double t, const DerivativeConfig& cfg) {
    NcPoint zp = axpy(z, t, h);
    NcPoint zm = axpy(z, -t, h);
    if (cfg.domain && (!cfg.domain(zp) || !cfg.domain(zm)))
        throw NcError("directional_derivative: probe point left the domain");
    NcPoint fp = f(zp);
    NcPoint fm = f(zm);
    std::vector<Matrix> v;
    v.reserve(fp.dim());
    for (int j = 0; j < fp.dim(); ++j)
        v.push_back((fp.vars[j] - fm.vars[j]) / (2.0 * t));
    return NcPoint(std::move(v));
}

}  // namespace

DerivativeResult directional_derivative(const NcEvaluator& f, const NcPoint& z,
                                        const NcPoint& h, const DerivativeConfig& config) {
    if (z.dim() != h.dim() || z.level() != h.level())
        throw DimensionMismatch("directional_derivative: z and h shapes differ");
    double t = config.base_step > 0.0 ? config.base_step : 1e-5 * (1.0 + point_norm(z));
    NcPoint d1 = central_difference(f, z, h, t, config);
    NcPoint d2 = central_difference(f, z, h, t / 2.0, config);
    std::vector<Matrix> v;
    double err = 0.0;
    v.reserve(d1.dim());
    for (int j = 0; j < d1.dim(); ++j) {
        v.push_back((4.0 * d2.vars[j] - d1.vars[j]) / 3.0);
        err = std::max(err, (d2.vars[j] - d1.vars[j]).norm() / 3.0);
    }
    return {NcPoint(std::move(v)), err};
}

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (long i = 0; i < A.rows(); ++i)
        for (long j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

double relative_residual(const Matrix& lhs, const Matrix& rhs) {
    return (lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm());
}

double relative_residual(const NcPoint& lhs, const NcPoint& rhs) {
    double num = 0.0, a = 0.0, b = 0.0;
    for (int j = 0; j < lhs.dim(); ++j) {
        num += (lhs.vars[j] - rhs.vars[j]).squaredNorm();
        a += lhs.vars[j].squaredNorm();
        b += rhs.vars[j].squaredNorm();
    }
    return std::sqrt(num) / (1.0 + std::sqrt(a) + std::sqrt(b));
}

}  // namespace nc
