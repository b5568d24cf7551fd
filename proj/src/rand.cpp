#include "nc/rand.hpp"

#include <Eigen/QR>
#include <cmath>

namespace nc {

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix Rng::ginibre(int rows, int cols) {
    Matrix M(rows, cols);
    const double s = 1.0 / std::sqrt(2.0 * std::max(rows, cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            M(i, j) = s * cnormal();
    return M;
}

Matrix Rng::contraction(int n, double target_norm) {
    Matrix M = ginibre(n, n);
    const double nm = operator_norm(M);
    if (nm == 0.0) return M;
    return M * (target_norm / nm);
}

Matrix Rng::unitary(int n) {
    Matrix G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            G(i, j) = cnormal();
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix phases so the distribution is Haar
    for (int j = 0; j < n; ++j) {
        Complex r = R(j, j);
        Q.col(j) *= (r == Complex(0) ? Complex(1) : r / std::abs(r));
    }
    return Q;
}

}  // namespace nc
