#include <doctest.h>

#include "helpers.hpp"
#include "qfi/qfi.hpp"

using namespace qfi;
using test::random_hermitian;
using test::random_space;

namespace {

WeightedSpace qubit_space() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.75;
    m(1, 1) = 0.25;
    return build_weighted_space(validate_density_matrix(m));
}

ComplexMatrix pauli_x() {
    ComplexMatrix sx(2, 2);
    sx << 0, 1, 1, 0;
    return sx;
}

} // namespace

TEST_CASE("exact_qfi closed form") {
    const WeightedSpace ctx = qubit_space();
    CHECK(exact_qfi(ctx, HermitianOperator{pauli_x()}) == doctest::Approx(1.0).epsilon(1e-13));

    ComplexMatrix hz(2, 2);
    hz << 1, 0, 0, -1; // commutes with rho
    CHECK(exact_qfi(ctx, HermitianOperator{hz}) == doctest::Approx(0.0));
}

TEST_CASE("exact_qfi matches the resolvent-moment oracle") {
    const WeightedSpace ctx = random_space(4, 301);
    const HermitianOperator h{random_hermitian(4, 302)};
    const Seed seed = unitary_seed(ctx, h);

    // seed_norm^2 <v0, K^-2 v0> by entrywise division by w^2
    double moment = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            moment += std::norm(seed.op.matrix(a, b)) / ctx.weights(a, b);
    // <v0, K^-2 v0>_rho = sum w |v0|^2 / w^2; with v0 = O0/|O0|.
    CHECK(exact_qfi(ctx, h) == doctest::Approx(moment).epsilon(1e-11));
}

TEST_CASE("exact_sld solves the defining equation") {
    const WeightedSpace ctx = qubit_space();
    const LiouvilleVector l = exact_sld(ctx, HermitianOperator{pauli_x()});
    CHECK(std::abs(l.matrix(0, 1) - Complex(0, 1)) < 1e-13);
    CHECK(std::abs(l.matrix(1, 0) - Complex(0, -1)) < 1e-13);
    CHECK(std::abs(l.matrix(0, 0)) < 1e-15);
    CHECK(inner_product(ctx, l, l).real() == doctest::Approx(1.0).epsilon(1e-11));

    ComplexMatrix hz(2, 2);
    hz << 1, 0, 0, -1;
    CHECK(exact_sld(ctx, HermitianOperator{hz}).matrix.cwiseAbs().maxCoeff() < 1e-15);

    // residual oracle at N = 4: K(L) = i[rho,H] entrywise
    const WeightedSpace ctx4 = random_space(4, 303);
    const HermitianOperator h{random_hermitian(4, 304)};
    const LiouvilleVector l4 = exact_sld(ctx4, h);
    const ComplexMatrix kl = apply_k(ctx4, l4).matrix;
    const Seed seed = unitary_seed(ctx4, h); // i[rho,H] in the eigenbasis
    CHECK((kl - seed.op.matrix).cwiseAbs().maxCoeff() <=
          1e-11 * seed.op.matrix.cwiseAbs().maxCoeff());
    CHECK(inner_product(ctx4, l4, l4).real() ==
          doctest::Approx(exact_qfi(ctx4, h)).epsilon(1e-11));
}

TEST_CASE("krylov_coefficients from the breakdown solve") {
    SUBCASE("qubit gives a single unit coefficient") {
        const WeightedSpace ctx = qubit_space();
        const Seed seed = unitary_seed(ctx, HermitianOperator{pauli_x()});
        const KrylovResult res = run_lanczos(ctx, seed.op, 10);
        const RealVector ell = krylov_coefficients(res);
        REQUIRE(ell.size() == 1);
        CHECK(ell[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("coefficients equal projections onto the exact SLD") {
        const WeightedSpace ctx = random_space(4, 305);
        const HermitianOperator h{random_hermitian(4, 306)};
        const Seed seed = unitary_seed(ctx, h);
        LanczosOptions opts;
        opts.store_basis = true;
        const KrylovResult res = run_lanczos(ctx, seed.op, 30, opts);
        REQUIRE(res.d0.has_value());
        const RealVector ell = krylov_coefficients(res);
        const LiouvilleVector l = exact_sld(ctx, h);
        for (int k = 0; k < ell.size(); ++k) {
            const Complex proj = inner_product(ctx, res.basis[k], l);
            CHECK(std::abs(proj - ell[k]) < 1e-9);
        }
        // Parseval
        CHECK(ell.squaredNorm() == doctest::Approx(exact_qfi(ctx, h)).epsilon(1e-9));
    }
    SUBCASE("truncated runs are refused") {
        const WeightedSpace ctx = random_space(4, 307);
        const Seed seed = unitary_seed(ctx, HermitianOperator{random_hermitian(4, 308)});
        const KrylovResult res = run_lanczos(ctx, seed.op, 3); // d0 = 6 generically
        CHECK_THROWS_AS(krylov_coefficients(res), IncompleteKrylov);
    }
}

TEST_CASE("krylov_distribution") {
    RealVector one(1);
    one << 1.0;
    const KrylovDistribution d1 = krylov_distribution(one);
    CHECK(d1.p[0] == doctest::Approx(1.0));
    CHECK(d1.depth == doctest::Approx(0.0));

    RealVector two(2);
    two << 1.0, 1.0;
    const KrylovDistribution d2 = krylov_distribution(two);
    CHECK(d2.p[0] == doctest::Approx(0.5));
    CHECK(d2.depth == doctest::Approx(0.5));

    RealVector three(3);
    three << 0.0, 0.0, 3.0;
    const KrylovDistribution d3 = krylov_distribution(three);
    CHECK(d3.p[2] == doctest::Approx(1.0));
    CHECK(d3.depth == doctest::Approx(2.0));

    CHECK_THROWS_AS(krylov_distribution(RealVector::Zero(3)), ZeroVector);
}

TEST_CASE("error_report tail identity and bound") {
    SUBCASE("single level") {
        RealVector ell(1), fs(1);
        ell << 2.0;
        fs << 4.0;
        const QfiReport rep = error_report(fs, ell, 4.0);
        CHECK(rep.rel_error[0] == doctest::Approx(0.0));
        CHECK(rep.bound_margin[0] == doctest::Approx(0.0));
    }
    SUBCASE("symmetric two-level distribution saturates the bound") {
        RealVector ell(2), fs(2);
        ell << 1.0, 1.0;
        fs << 1.0, 2.0;
        const QfiReport rep = error_report(fs, ell, 2.0);
        CHECK(rep.rel_error[0] == doctest::Approx(0.5));
        CHECK(rep.depth == doctest::Approx(0.5));
        CHECK(rep.bound_margin[0] == doctest::Approx(0.0)); // D/1 = rel_error(1)
    }
    SUBCASE("random member: identity to 1e-9, margins nonnegative") {
        const WeightedSpace ctx = random_space(4, 309);
        const HermitianOperator h{random_hermitian(4, 310)};
        const Seed seed = unitary_seed(ctx, h);
        const KrylovResult res = run_lanczos(ctx, seed.op, 30);
        const RealVector ell = krylov_coefficients(res);
        const QfiReport rep = error_report(coefficient_partial_sums(ell), ell, exact_qfi(ctx, h));
        CHECK(rep.p.sum() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rep.depth >= 0.0);
        CHECK(rep.depth <= ell.size() - 1);
        for (int n = 0; n < rep.rel_error.size(); ++n) {
            CHECK(rep.rel_error[n] >= 0.0);
            CHECK(rep.rel_error[n] <= 1.0);
            CHECK(rep.bound_margin[n] >= -1e-10);
            if (n > 0) CHECK(rep.rel_error[n] <= rep.rel_error[n - 1] + 1e-15);
        }
        // lower-bound property for the partial sums
        const RealVector fs = coefficient_partial_sums(ell);
        for (int n = 0; n < fs.size(); ++n) CHECK(fs[n] <= rep.f_exact * (1 + 1e-12));
    }
    SUBCASE("a Galerkin series is rejected by the identity check") {
        // The leading-block solves and the coefficient partial sums are
        // different sequences below breakdown; error_report must notice.
        const WeightedSpace ctx = random_space(3, 311);
        const HermitianOperator h{random_hermitian(3, 312)};
        const Seed seed = unitary_seed(ctx, h);
        const KrylovResult res = run_lanczos(ctx, seed.op, 10);
        REQUIRE(res.d0.has_value());
        REQUIRE(*res.d0 >= 2);
        const RealVector ell = krylov_coefficients(res);
        const RealVector galerkin = fn_series(res.tridiag, res.seed_norm);
        CHECK_THROWS_AS(error_report(galerkin, ell, exact_qfi(ctx, h)), IdentityViolation);
    }
    SUBCASE("nonpositive exact value is rejected") {
        RealVector ell(1), fs(1);
        ell << 1.0;
        fs << 1.0;
        CHECK_THROWS_AS(error_report(fs, ell, 0.0), ZeroVector);
    }
}

TEST_CASE("oracle triangle: three routes to the QFI agree") {
    for (std::uint64_t s : {501u, 502u, 503u}) {
        const WeightedSpace ctx = random_space(4, s);
        const HermitianOperator h{random_hermitian(4, s + 50)};
        const double f_sum = exact_qfi(ctx, h);
        const LiouvilleVector l = exact_sld(ctx, h);
        const double f_sld = inner_product(ctx, l, l).real();
        const Seed seed = unitary_seed(ctx, h);
        const KrylovResult res = run_lanczos(ctx, seed.op, 20);
        const RealVector fn = fn_series(res.tridiag, res.seed_norm);
        const double f_krylov = fn[fn.size() - 1];
        CHECK(f_sld == doctest::Approx(f_sum).epsilon(1e-9));
        CHECK(f_krylov == doctest::Approx(f_sum).epsilon(1e-9));
    }
}
