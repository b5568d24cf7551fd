#pragma once

#include <map>

#include "nc/domains.hpp"
#include "nc/maps.hpp"
#include "nc/report.hpp"

namespace nc {

struct RigidityVerdict {
    bool fixes_origin = false;
    double origin_norm = 0.0;
    double derivative_residual = 0.0;          // ||D Phi(0) - I|| at the base level
    std::map<int, double> identity_residual_at_levels;
};

struct AxiomCheckOptions {
    std::vector<int> levels = {1, 2, 3, 4};
    // When set, the check passes exactly when a similarity violation above the
    // detection threshold is found (Lemma-style negative results).
    bool expect_similarity_violation = false;
    double detection_threshold = 1e-6;
    double tolerance = 1e-9;
};

// Def.-style axioms: gradedness, direct sums, similarity equivariance.
CheckReport check_nc_axioms(const NcMapExpr& expr, const DomainSpec& spec,
                            int trials, std::uint64_t seed,
                            const AxiomCheckOptions& opts = {});

// Both sides of the difference-quotient kernel factorization for H_A.
CheckReport check_kernel_identity(const Matrix& A, BlockShape shape, int level,
                                  int trials, std::uint64_t seed);

// Lower bound on the norm of the block-transpose amplification at level n,
// via the swap witness plus randomized search.
CheckReport check_cb_transpose(int p, int level, std::uint64_t seed,
                               int samples = 1000);

RigidityVerdict rigidity_probe(const NcMapExpr& expr, const DomainSpec& spec,
                               int base_level, const std::vector<int>& probe_levels,
                               std::uint64_t seed, int samples_per_level = 5);

CheckReport check_derivative_similarity_invariance(const NcMapExpr& expr,
                                                   const DomainSpec& spec, int level,
                                                   int trials, std::uint64_t seed);

struct LinearStructureResult {
    CheckReport report;
    Matrix F;  // fitted d-by-d coefficient matrix
};

// Fits the level-1 linear action and asserts the entrywise form at probe levels.
LinearStructureResult check_linear_structure(const NcMapExpr& expr,
                                             const DomainSpec& spec,
                                             std::uint64_t seed,
                                             const std::vector<int>& probe_levels = {1, 2, 3});

CheckReport check_von_neumann(double theta, Complex a, int trials,
                              std::uint64_t seed, int level);

}  // namespace nc
