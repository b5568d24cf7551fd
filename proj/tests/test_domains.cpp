#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nc/domains.hpp"
#include "nc/maps.hpp"
#include "nc/rand.hpp"

using namespace nc;

TEST_CASE("polydisk membership") {
    DomainSpec spec = DomainSpec::polydisk(2);
    MembershipVerdict v = membership(spec, NcPoint::zero(2, 2));
    CHECK(v.member == Member::Yes);
    CHECK(*v.margin == doctest::Approx(1.0));

    CHECK_THROWS_AS(membership(spec, NcPoint::zero(3, 2)), DimensionMismatch);
}

TEST_CASE("rpq membership hits the boundary") {
    DomainSpec spec = DomainSpec::rpq(2, 1);
    NcPoint x({Matrix::Constant(1, 1, Complex(0.6)),
               Matrix::Constant(1, 1, Complex(0.8))});
    MembershipVerdict v = membership(spec, x);
    // column (0.6, 0.8) has norm exactly 1
    CHECK(v.member == Member::No);
    CHECK(*v.norm_value == doctest::Approx(1.0));
}

TEST_CASE("commutator domain membership") {
    DomainSpec spec = DomainSpec::commutator();
    Matrix e12 = Matrix::Zero(2, 2), e21 = Matrix::Zero(2, 2);
    e12(0, 1) = 1.0;
    e21(1, 0) = 1.0;
    // [E12, E21] = E11 - E22 has norm exactly 1
    MembershipVerdict v = membership(spec, NcPoint({e12, e21, Matrix::Zero(2, 2)}));
    CHECK(v.member == Member::No);

    // the domain is unbounded: (cI, cI, cI) is a member for any c
    const double c = 1e6;
    Matrix big = c * Matrix::Identity(2, 2);
    CHECK(membership(spec, NcPoint({big, big, big})).member == Member::Yes);
}

TEST_CASE("spectral disk membership") {
    DomainSpec spec = DomainSpec::spectral_disk({1.0});
    Rng rng(23, 0);

    SUBCASE("normal strict contraction accepted with s = I") {
        Matrix u = rng.unitary(3);
        Matrix d = Matrix::Zero(3, 3);
        d(0, 0) = 0.3;
        d(1, 1) = Complex(0.0, 0.8);
        d(2, 2) = -0.5;
        MembershipVerdict v = membership(spec, NcPoint({u * d * u.adjoint()}));
        CHECK(v.member == Member::Yes);
        REQUIRE(v.similarity.has_value());
        CHECK((*v.similarity - Matrix::Identity(3, 3)).norm() == 0.0);
    }

    SUBCASE("spectral radius >= 1 rejected") {
        Matrix d = Matrix::Zero(2, 2);
        d(0, 0) = 1.2;
        d(1, 1) = 0.1;
        CHECK(membership(spec, NcPoint({d})).member == Member::No);

        Matrix jordan = Matrix::Identity(2, 2);
        jordan(0, 1) = 1.0;
        CHECK(spectral_disk_search(jordan, 5.0).member == Member::No);
    }
}

TEST_CASE("spectral disk search on a 2x2 nilpotent") {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = 1.5;

    // oracle: over s = diag(1, lambda) with cond = 1/lambda <= 2,
    // ||s^-1 x s|| = 1.5 lambda, minimized at lambda = 1/2 giving 0.75
    double oracle_best = 1e9;
    for (double lam = 0.5; lam <= 1.0; lam += 1e-4) {
        Matrix s = Matrix::Zero(2, 2);
        s(0, 0) = 1.0;
        s(1, 1) = lam;
        Matrix c = s.inverse() * x * s;
        oracle_best = std::min(oracle_best, operator_norm(c));
    }
    CHECK(oracle_best == doctest::Approx(0.75).epsilon(1e-3));

    MembershipVerdict v = spectral_disk_search(x, 2.0);
    CHECK(v.member == Member::Yes);
    REQUIRE(v.similarity.has_value());
    CHECK(verify_spectral_certificate(x, *v.similarity, 2.0));

    Matrix already = Matrix::Zero(2, 2);
    already(0, 0) = 0.3;
    already(1, 1) = 0.9;
    MembershipVerdict w = spectral_disk_search(already, 1.0);
    CHECK(w.member == Member::Yes);
    CHECK((*w.similarity - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("certificates transport under unitary conjugation") {
    DomainSpec spec = DomainSpec::spectral_disk({1.0, 3.0});
    Rng rng(29, 0);
    for (int t = 0; t < 10; ++t) {
        NcPoint x = sample_member(spec, 2, 29, t);
        MembershipVerdict v = membership(spec, x);
        if (v.member != Member::Yes) continue;
        Matrix u = rng.unitary(2);
        Matrix xc = u.adjoint() * x.vars[0] * u;
        Matrix sc = u.adjoint() * (*v.similarity) * u;
        CHECK(verify_spectral_certificate(xc, sc, spec.radius_at(2)));
    }
}

TEST_CASE("level filter semantics") {
    LevelFilter f{{2, 3}};
    CHECK(!f.contains(1));
    CHECK(f.contains(2));
    CHECK(f.contains(3));
    CHECK(f.contains(4));
    CHECK(f.contains(5));
    CHECK(f.contains(7));
    LevelFilter g{{4}};
    CHECK(!g.contains(6));
    CHECK(g.contains(8));
    CHECK(LevelFilter{}.contains(1));

    DomainSpec spec = DomainSpec::rpq(2, 1).restricted({2, 3});
    NcPoint x = NcPoint::zero(2, 1);
    MembershipVerdict v = membership(spec, x);
    CHECK(v.member == Member::No);
    CHECK(!v.margin.has_value());

    NcPoint y = NcPoint::zero(2, 2);
    CHECK(membership(spec, y).member == Member::Yes);
}

TEST_CASE("radius sequence validation") {
    CHECK_THROWS_AS(DomainSpec::spectral_disk({2.0}), NcError);
    CHECK_THROWS_AS(DomainSpec::spectral_disk({1.0, 3.0, 2.0}), NcError);
    DomainSpec s = DomainSpec::spectral_disk({1.0, 2.0, 4.0});
    CHECK(s.radius_at(1) == 1.0);
    CHECK(s.radius_at(3) == 4.0);
    CHECK(s.radius_at(10) == 4.0);
}

TEST_CASE("sampled members respect the defining inequality") {
    for (auto spec : {DomainSpec::polydisk(3), DomainSpec::rpq(2, 2),
                      DomainSpec::commutator()}) {
        for (int t = 0; t < 20; ++t) {
            const int n = 1 + t % 3;
            NcPoint x = sample_member(spec, n, 31, t);
            MembershipVerdict v = membership(spec, x);
            CHECK(v.member == Member::Yes);
            CHECK(*v.margin > 1e-9);
            if (spec.nc_bounded())
                CHECK(point_norm(x) < 1.0 + 1e-12);
        }
    }
}

TEST_CASE("closure under direct sums and unitary equivalence") {
    for (auto spec : {DomainSpec::polydisk(2), DomainSpec::rpq(2, 2),
                      DomainSpec::commutator()}) {
        CheckReport rep = nc_closure_check(spec, 100, 0x5EED);
        CHECK(rep.passed);
        CHECK(rep.witnesses.empty());
    }
}
