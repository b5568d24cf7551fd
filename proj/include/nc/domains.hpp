#pragma once

#include <optional>
#include <vector>

#include "nc/matcore.hpp"
#include "nc/report.hpp"

namespace nc {

enum class DomainKind {
    MatrixPolydisk,   // max_j ||x^j|| < 1
    RpqBall,          // ||gamma(x)|| < 1
    SpectralDisk,     // exists s, ||s|| ||s^-1|| <= r_n, ||s^-1 x s|| < 1
    CommutatorDomain  // ||x1 x2 - x2 x1|| < 1, d = 3, unbounded
};

// Sub-semigroup of positive integers given by a finite generator list;
// empty generators means "all levels".
struct LevelFilter {
    std::vector<int> generators;

    bool all() const { return generators.empty(); }
    bool contains(int level) const;
};

struct DomainSpec {
    DomainKind kind = DomainKind::MatrixPolydisk;
    int d = 1;                   // MatrixPolydisk variable count
    BlockShape shape;            // RpqBall
    std::vector<double> radii;   // SpectralDisk r_n; last value repeats; r_1 = 1
    LevelFilter levels;

    static DomainSpec polydisk(int d);
    static DomainSpec rpq(int p, int q);
    static DomainSpec spectral_disk(std::vector<double> radii = {1.0});
    static DomainSpec commutator();

    int required_dim() const;
    bool nc_bounded() const { return kind != DomainKind::CommutatorDomain; }
    double radius_at(int level) const;

    DomainSpec restricted(std::vector<int> generators) const;
};

enum class Member { Yes, No, Undetermined };

struct MembershipVerdict {
    Member member = Member::Undetermined;
    std::optional<double> norm_value;     // norm-domain certificate
    std::optional<Matrix> similarity;     // SpectralDisk certificate s
    std::optional<double> margin;         // signed distance to the defining inequality
};

MembershipVerdict membership(const DomainSpec& spec, const NcPoint& x);

// Certificate search for the spectral disk at condition budget r.
MembershipVerdict spectral_disk_search(const Matrix& x, double r,
                                       int max_iters = 200);

// Recompute ||s|| ||s^-1|| and ||s^-1 x s|| from a certificate.
bool verify_spectral_certificate(const Matrix& x, const Matrix& s, double r);

// Seeded sampler of interior points; norm_fraction scales towards the boundary.
NcPoint sample_member(const DomainSpec& spec, int level, std::uint64_t seed,
                      std::uint64_t stream, double norm_fraction = 0.8);

// Samples member pairs and unitaries; asserts closure under direct sums and
// joint unitary equivalence.
CheckReport nc_closure_check(const DomainSpec& spec, int samples,
                             std::uint64_t seed);

}  // namespace nc
