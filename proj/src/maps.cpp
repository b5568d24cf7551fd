#include "nc/maps.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

namespace nc {

NcMapExpr NcMapExpr::identity(int d) { return {IdentityMap{d}}; }

NcMapExpr NcMapExpr::mobius_tuple(std::vector<MobiusParam> params, std::vector<int> perm) {
    for (const auto& p : params)
        if (std::abs(p.a) >= 1.0) throw NcError("mobius_tuple: |a| must be < 1");
    if (!perm.empty()) {
        if (perm.size() != params.size())
            throw DimensionMismatch("mobius_tuple: permutation size mismatch");
        std::vector<char> seen(perm.size(), 0);
        for (int v : perm) {
            if (v < 0 || v >= static_cast<int>(perm.size()) || seen[v])
                throw NcError("mobius_tuple: perm is not a bijection");
            seen[v] = 1;
        }
    }
    return {MobiusTuple{std::move(params), std::move(perm)}};
}

NcMapExpr NcMapExpr::linear_isometry(Matrix U, Matrix V, BlockShape shape) {
    const double tol = 1e-10;
    auto unitary_defect = [](const Matrix& M) {
        return (M.adjoint() * M - Matrix::Identity(M.cols(), M.cols())).norm();
    };
    if (U.rows() != shape.p || U.cols() != shape.p || unitary_defect(U) > tol)
        throw NcError("linear_isometry: U is not a p-by-p unitary");
    if (V.rows() != shape.q || V.cols() != shape.q || unitary_defect(V) > tol)
        throw NcError("linear_isometry: V is not a q-by-q unitary");
    return {LinearIsometry{std::move(U), std::move(V), shape}};
}

NcMapExpr NcMapExpr::transpose_amplification(int p) {
    if (p < 1) throw NcError("transpose_amplification: p must be positive");
    return {TransposeAmplification{p}};
}

NcMapExpr NcMapExpr::ha(Matrix A, BlockShape shape) {
    if (A.rows() != shape.p || A.cols() != shape.q)
        throw DimensionMismatch("ha: A must be p-by-q");
    if (operator_norm(A) >= 1.0) throw NcError("ha: ||A|| must be < 1");
    return {HaMap{std::move(A), shape}};
}

NcMapExpr NcMapExpr::counterexample(std::vector<Complex> h_coeffs) {
    const bool nonzero = std::any_of(h_coeffs.begin(), h_coeffs.end(),
                                     [](Complex c) { return c != Complex(0); });
    if (!nonzero) throw NcError("counterexample: h must be non-constant");
    return {CounterexampleMap{std::move(h_coeffs)}};
}

NcMapExpr NcMapExpr::compose(std::vector<NcMapExpr> factors) {
    if (factors.empty()) throw NcError("compose: empty factor list");
    for (size_t i = 0; i + 1 < factors.size(); ++i)
        if (arity(factors[i]) != arity(factors[i + 1]))
            throw DimensionMismatch("compose: adjacent variable counts differ");
    return {ComposeMap{std::move(factors)}};
}

int arity(const NcMapExpr& expr) {
    return std::visit(
        [](const auto& node) -> int {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MobiusTuple>)
                return static_cast<int>(node.params.size());
            else if constexpr (std::is_same_v<T, LinearIsometry>)
                return node.shape.dim();
            else if constexpr (std::is_same_v<T, TransposeAmplification>)
                return 1;
            else if constexpr (std::is_same_v<T, HaMap>)
                return node.shape.dim();
            else if constexpr (std::is_same_v<T, CounterexampleMap>)
                return 3;
            else if constexpr (std::is_same_v<T, ComposeMap>)
                return arity(node.factors.back());
            else
                return node.d;
        },
        expr.node);
}

Matrix mobius_apply(double theta, Complex a, const Matrix& Z) {
    const int n = static_cast<int>(Z.rows());
    const Matrix I = Matrix::Identity(n, n);
    Matrix denom = I - std::conj(a) * Z;
    if (rcond(denom) < 1e-12)
        throw SingularMatrix("mobius_apply: I - conj(a) Z is near singular");
    const Complex phase = std::polar(1.0, theta);
    return phase * (Z - a * I) * denom.inverse();
}

NcPoint polydisk_auto_apply(const MobiusTuple& t, const NcPoint& x) {
    const int d = static_cast<int>(t.params.size());
    if (x.dim() != d) throw DimensionMismatch("polydisk_auto_apply: arity mismatch");
    std::vector<Matrix> out(d);
    for (int j = 0; j < d; ++j) {
        const int src = t.perm.empty() ? j : t.perm[j];
        out[j] = mobius_apply(t.params[src].theta, t.params[src].a, x.vars[src]);
    }
    return NcPoint(std::move(out));
}

NcPoint linear_isometry_apply(const LinearIsometry& iso, const NcPoint& x) {
    const int n = x.level();
    Matrix Z = gamma_pack(x, iso.shape);
    const Matrix In = Matrix::Identity(n, n);
    Matrix out = kron(iso.U, In) * Z * kron(iso.V, In);
    return gamma_unpack(out, iso.shape, n);
}

Matrix transpose_amplify(int p, const Matrix& X) {
    if (X.rows() != X.cols() || X.rows() % p != 0)
        throw DimensionMismatch("transpose_amplify: matrix is not (n*p)-by-(n*p)");
    const int n = static_cast<int>(X.rows()) / p;
    Matrix out(X.rows(), X.cols());
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            out.block(i * n, j * n, n, n) = X.block(j * n, i * n, n, n);
    return out;
}

Matrix ha_apply(const Matrix& A, BlockShape shape, const Matrix& Z_packed) {
    const int p = shape.p, q = shape.q;
    if (A.rows() != p || A.cols() != q)
        throw DimensionMismatch("ha_apply: A must be p-by-q");
    if (Z_packed.rows() % p != 0 || Z_packed.cols() % q != 0)
        throw DimensionMismatch("ha_apply: packed point shape mismatch");
    const int n = static_cast<int>(Z_packed.rows()) / p;
    if (Z_packed.cols() != static_cast<long>(n) * q)
        throw DimensionMismatch("ha_apply: packed point shape mismatch");

    const Matrix In = Matrix::Identity(n, n);
    const Matrix Ip = Matrix::Identity(p, p);
    const Matrix Iq = Matrix::Identity(q, q);
    const Matrix left = kron(herm_sqrt_inv(Ip - A * A.adjoint(), -1), In);
    const Matrix right = kron(herm_sqrt_inv(Iq - A.adjoint() * A, +1), In);
    const Matrix Aamp = kron(A, In);
    const Matrix Asamp = kron(Matrix(A.adjoint()), In);

    Matrix mid = Matrix::Identity(n * q, n * q) + Asamp * Z_packed;
    if (rcond(mid) < 1e-12)
        throw SingularMatrix("ha_apply: middle factor near singular");
    return left * (Z_packed + Aamp) * mid.inverse() * right;
}

Matrix poly_apply(const std::vector<Complex>& h_coeffs, const Matrix& W) {
    const int n = static_cast<int>(W.rows());
    const Matrix I = Matrix::Identity(n, n);
    // h(W) = (c_0 I + c_1 W + ...) W, Horner on the bracket
    Matrix acc = Matrix::Zero(n, n);
    for (auto it = h_coeffs.rbegin(); it != h_coeffs.rend(); ++it)
        acc = acc * W + *it * I;
    return acc * W;
}

NcPoint counterexample_apply(const std::vector<Complex>& h_coeffs, const NcPoint& x) {
    if (x.dim() != 3) throw DimensionMismatch("counterexample_apply: needs 3 variables");
    Matrix comm = x.vars[0] * x.vars[1] - x.vars[1] * x.vars[0];
    return NcPoint({x.vars[0], x.vars[1], x.vars[2] + poly_apply(h_coeffs, comm)});
}

NcPoint apply(const NcMapExpr& expr, const NcPoint& x) {
    if (arity(expr) != x.dim())
        throw DimensionMismatch("apply: expression arity does not match point");
    return std::visit(
        [&](const auto& node) -> NcPoint {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MobiusTuple>) {
                return polydisk_auto_apply(node, x);
            } else if constexpr (std::is_same_v<T, LinearIsometry>) {
                return linear_isometry_apply(node, x);
            } else if constexpr (std::is_same_v<T, TransposeAmplification>) {
                return NcPoint({transpose_amplify(node.p, x.vars[0])});
            } else if constexpr (std::is_same_v<T, HaMap>) {
                Matrix out = ha_apply(node.A, node.shape, gamma_pack(x, node.shape));
                return gamma_unpack(out, node.shape, x.level());
            } else if constexpr (std::is_same_v<T, CounterexampleMap>) {
                return counterexample_apply(node.h_coeffs, x);
            } else if constexpr (std::is_same_v<T, ComposeMap>) {
                NcPoint y = x;
                for (auto it = node.factors.rbegin(); it != node.factors.rend(); ++it)
                    y = apply(*it, y);
                return y;
            } else {
                return x;
            }
        },
        expr.node);
}

namespace {

MobiusParam invert_mobius(const MobiusParam& m) {
    // m^{-1}(w) = e^{-i theta} (w + e^{i theta} a)(1 + conj(a) e^{-i theta} w)^{-1}
    return {-m.theta, -std::polar(1.0, m.theta) * m.a};
}

}  // namespace

NcMapExpr invert(const NcMapExpr& expr) {
    return std::visit(
        [&](const auto& node) -> NcMapExpr {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, MobiusTuple>) {
                const int d = static_cast<int>(node.params.size());
                std::vector<int> sigma = node.perm;
                if (sigma.empty())
                    for (int j = 0; j < d; ++j) sigma.push_back(j);
                std::vector<int> inv_perm(d);
                for (int j = 0; j < d; ++j) inv_perm[sigma[j]] = j;
                std::vector<MobiusParam> params(d);
                for (int i = 0; i < d; ++i) params[i] = invert_mobius(node.params[sigma[i]]);
                return NcMapExpr::mobius_tuple(std::move(params), std::move(inv_perm));
            } else if constexpr (std::is_same_v<T, LinearIsometry>) {
                return NcMapExpr::linear_isometry(node.U.adjoint(), node.V.adjoint(),
                                                  node.shape);
            } else if constexpr (std::is_same_v<T, TransposeAmplification>) {
                return expr;  // self-inverse
            } else if constexpr (std::is_same_v<T, HaMap>) {
                return NcMapExpr::ha(-node.A, node.shape);
            } else if constexpr (std::is_same_v<T, CounterexampleMap>) {
                // the first two variables pass through, so negating h inverts
                std::vector<Complex> neg = node.h_coeffs;
                for (auto& c : neg) c = -c;
                return NcMapExpr::counterexample(std::move(neg));
            } else if constexpr (std::is_same_v<T, ComposeMap>) {
                std::vector<NcMapExpr> inv;
                for (auto it = node.factors.rbegin(); it != node.factors.rend(); ++it)
                    inv.push_back(invert(*it));
                return NcMapExpr::compose(std::move(inv));
            } else {
                return expr;
            }
        },
        expr.node);
}

}  // namespace nc
