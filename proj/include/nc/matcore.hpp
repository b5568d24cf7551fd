#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct NcError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : NcError {
    using NcError::NcError;
};

struct SingularMatrix : NcError {
    using NcError::NcError;
};

struct NotPositiveDefinite : NcError {
    using NcError::NcError;
};

// A d-tuple of n-by-n matrices at a single level n.
struct NcPoint {
    std::vector<Matrix> vars;

    NcPoint() = default;
    explicit NcPoint(std::vector<Matrix> v);

    int level() const { return vars.empty() ? 0 : static_cast<int>(vars[0].rows()); }
    int dim() const { return static_cast<int>(vars.size()); }

    static NcPoint zero(int d, int n);
};

struct BlockShape {
    int p = 1;
    int q = 1;
    int dim() const { return p * q; }
};

// max_j ||x^j||
double point_norm(const NcPoint& x);

NcPoint direct_sum(const NcPoint& x, const NcPoint& y);

// s^{-1} x s per variable. Throws SingularMatrix when rcond(s) < floor.
NcPoint conjugate(const Matrix& s, const NcPoint& x, double rcond_floor = 1e-12);

// Row-major block packing: block (i,j) of the (n*p)x(n*q) result is vars[i*q + j].
Matrix gamma_pack(const NcPoint& x, BlockShape shape);
NcPoint gamma_unpack(const Matrix& M, BlockShape shape, int level);

// Largest singular value.
double operator_norm(const Matrix& M);

double spectral_radius(const Matrix& M);

// Reciprocal condition number sigma_min / sigma_max (0 for the zero matrix).
double rcond(const Matrix& M);

// M^{+1/2} or M^{-1/2} for Hermitian positive semidefinite M, via unitary
// eigendecomposition. Eigenvalues in [-clamp_tol, 0] are clamped to 0;
// anything below -clamp_tol throws NotPositiveDefinite.
Matrix herm_sqrt_inv(const Matrix& M, int power_sign, double clamp_tol = 1e-12);

struct DerivativeResult {
    NcPoint value;
    double error_estimate = 0.0;
};

struct DerivativeConfig {
    double base_step = 0.0;  // 0 -> 1e-5 * (1 + ||z||)
    std::function<bool(const NcPoint&)> domain;  // optional probe-point guard
};

using NcEvaluator = std::function<NcPoint(const NcPoint&)>;

// Central differences at steps t and t/2 with one Richardson step.
DerivativeResult directional_derivative(const NcEvaluator& f, const NcPoint& z,
                                        const NcPoint& h,
                                        const DerivativeConfig& config = {});

Matrix kron(const Matrix& A, const Matrix& B);

// ||L - R||_F / (1 + ||L||_F + ||R||_F)
double relative_residual(const Matrix& lhs, const Matrix& rhs);
double relative_residual(const NcPoint& lhs, const NcPoint& rhs);

}  // namespace nc
