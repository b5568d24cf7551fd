#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "nc/matcore.hpp"

namespace nc {

struct MobiusParam {
    double theta = 0.0;  // radians
    Complex a = 0.0;     // |a| < 1
};

// Automorphism of the matrix polydisk: slot j of the output is m^{perm[j]}
// applied to variable perm[j].
struct MobiusTuple {
    std::vector<MobiusParam> params;
    std::vector<int> perm;  // 0-based; empty means identity permutation
};

// Z -> (I_n (x) U) Z (I_n (x) V) on gamma-packed points.
struct LinearIsometry {
    Matrix U;
    Matrix V;
    BlockShape shape;
};

// Block transpose on M_p(M_n); not an nc map for p >= 2.
struct TransposeAmplification {
    int p = 1;
};

// Rectangular Mobius-type automorphism of the R_pq ball.
struct HaMap {
    Matrix A;  // p-by-q, ||A|| < 1
    BlockShape shape;
};

// (x, y, z) -> (x, y, z + h(xy - yx)) with polynomial h, h(0) = 0.
struct CounterexampleMap {
    std::vector<Complex> h_coeffs;  // h(w) = sum_k h_coeffs[k] w^{k+1}
};

struct IdentityMap {
    int d = 1;
};

struct NcMapExpr;

struct ComposeMap {
    std::vector<NcMapExpr> factors;  // applied right-to-left
};

struct NcMapExpr {
    std::variant<MobiusTuple, LinearIsometry, TransposeAmplification, HaMap,
                 CounterexampleMap, ComposeMap, IdentityMap>
        node;

    static NcMapExpr identity(int d);
    static NcMapExpr mobius_tuple(std::vector<MobiusParam> params,
                                  std::vector<int> perm = {});
    static NcMapExpr linear_isometry(Matrix U, Matrix V, BlockShape shape);
    static NcMapExpr transpose_amplification(int p);
    static NcMapExpr ha(Matrix A, BlockShape shape);
    static NcMapExpr counterexample(std::vector<Complex> h_coeffs);
    static NcMapExpr compose(std::vector<NcMapExpr> factors);
};

// Variable count the expression acts on.
int arity(const NcMapExpr& expr);

NcPoint apply(const NcMapExpr& expr, const NcPoint& x);

// e^{i theta} (Z - aI)(I - conj(a) Z)^{-1}
Matrix mobius_apply(double theta, Complex a, const Matrix& Z);

NcPoint polydisk_auto_apply(const MobiusTuple& t, const NcPoint& x);

NcPoint linear_isometry_apply(const LinearIsometry& iso, const NcPoint& x);

// Blocks (i,j) and (j,i) exchanged; the blocks themselves are not transposed.
Matrix transpose_amplify(int p, const Matrix& X);

// Acts on the gamma-packed (n*p)-by-(n*q) matrix.
Matrix ha_apply(const Matrix& A, BlockShape shape, const Matrix& Z_packed);

NcPoint counterexample_apply(const std::vector<Complex>& h_coeffs, const NcPoint& x);

// Horner evaluation of h at a matrix argument; h has zero constant term.
Matrix poly_apply(const std::vector<Complex>& h_coeffs, const Matrix& W);

struct NotInvertible : NcError {
    using NcError::NcError;
};

NcMapExpr invert(const NcMapExpr& expr);

}  // namespace nc
