#pragma once

#include <cstdint>
#include <random>

#include "nc/matcore.hpp"

namespace nc {

// Seeded generator with (seed, stream) splitting so per-trial randomness is
// independent of evaluation order.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : gen_(mix(seed, stream)) {}

    double normal() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }
    Complex cnormal() { return {normal(), normal()}; }

    // Complex Gaussian entries, normalized so the norm is O(1) in n.
    Matrix ginibre(int rows, int cols);

    // Ginibre scaled so the operator norm equals target exactly.
    Matrix contraction(int n, double target_norm);

    Matrix unitary(int n);

    std::mt19937_64& raw() { return gen_; }

  private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace nc
