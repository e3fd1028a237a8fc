#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "triflag/analysis.hpp"
#include "triflag/bruhat.hpp"
#include "triflag/iwasawa.hpp"

using namespace triflag;
using triflag::testing::rand_parabolic;
using triflag::testing::rand_sl3;
using triflag::testing::rand_unip;
using triflag::testing::rand_weyl;

namespace {

MatD rand_matd(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    MatD g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = u(rng);
    return g;
}

/// Random double matrix with entries in [-10,10], |det| >= 1 before
/// normalization (keeps the condition number bounded), scaled to det 1.
MatD rand_sl3d(std::mt19937_64& rng) {
    for (;;) {
        MatD g = rand_matd(rng);
        const double d = g.det();
        if (std::abs(d) < 1.0) continue;
        const double s = std::cbrt(d);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) /= s;
        return g;
    }
}

double max_abs_diff(const MatD& a, const MatD& b) {
    double m = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace

TEST_CASE("bruhat_cell basics") {
    REQUIRE(bruhat_cell(MatQ::identity()) == Weyl::e);
    for (Weyl w : kAllWeyl) REQUIRE(bruhat_cell(weyl_rep(w)) == w);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const MatQ g = rand_parabolic(rng) * weyl_rep(Weyl::z1) * rand_unip(rng).to_matrix();
        REQUIRE(bruhat_cell(g) == Weyl::z1);
    }
}

TEST_CASE("bruhat factorization round trip") {
    // g = w0 rep: trivial factors
    {
        const auto f = bruhat_factor(weyl_rep(Weyl::w0));
        REQUIRE(f.w == Weyl::w0);
        REQUIRE(f.p == MatQ::identity());
        REQUIRE(f.n == UnipQ{0, 0, 0});
    }
    // already factored: the N-part is recovered exactly on the open cell
    {
        const UnipQ n{1, 1, 3};
        const auto f = bruhat_factor(weyl_rep(Weyl::w0) * n.to_matrix());
        REQUIRE(f.w == Weyl::w0);
        REQUIRE(f.p == MatQ::identity());
        REQUIRE(f.n == n);
    }

    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const MatQ p = rand_parabolic(rng);
        const Weyl w = rand_weyl(rng);
        const UnipQ n = rand_unip(rng);
        const MatQ g = p * weyl_rep(w) * n.to_matrix();
        REQUIRE(bruhat_cell(g) == w);
        const auto f = bruhat_factor(g);
        REQUIRE(f.w == w);
        REQUIRE(f.p.is_upper_triangular());
        REQUIRE(f.p * weyl_rep(f.w) * f.n.to_matrix() == g);
    }
}

TEST_CASE("open cell N-part is unique") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 500; ++i) {
        const UnipQ n = rand_unip(rng);
        const MatQ g = rand_parabolic(rng) * weyl_rep(Weyl::w0) * n.to_matrix();
        REQUIRE(bruhat_factor(g).n == n);
    }
}

TEST_CASE("iwasawa basics") {
    {
        const auto t = iwasawa(MatD::identity());
        REQUIRE(t.s == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(t.t == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(max_abs_diff(t.k, MatD::identity()) < 1e-15);
    }
    {
        const MatD g = MatD::diag(2.0, 1.0, 0.5);
        const auto t = iwasawa(g);
        REQUIRE(t.a1() == Catch::Approx(2.0));
        REQUIRE(t.a2() == Catch::Approx(1.0));
        REQUIRE(std::abs(t.n.x) + std::abs(t.n.y) + std::abs(t.n.z) < 1e-14);
        REQUIRE(max_abs_diff(t.k, MatD::identity()) < 1e-14);
    }
    {
        // w0 representative is orthogonal: a = 1 and a^rho = f(0,0,0) = 1
        const MatD g = to_matd(weyl_rep(Weyl::w0));
        const auto t = iwasawa(g);
        REQUIRE(t.a_rho() == Catch::Approx(1.0));
        REQUIRE(a_rho(g) == Catch::Approx(1.0));
    }
    REQUIRE_THROWS_AS(iwasawa(MatD::diag(2, 2, 2)), std::invalid_argument);
}

TEST_CASE("iwasawa reconstruction and a_rho consistency") {
    std::mt19937_64 rng(23);
    double worst_rec = 0, worst_rho = 0, worst_orth = 0;
    for (int i = 0; i < 10000; ++i) {
        const MatD g = rand_sl3d(rng);
        const auto t = iwasawa(g);
        worst_rec = std::max(worst_rec, max_abs_diff(t.reconstruct(), g));
        const double closed = a_rho(g);
        worst_rho = std::max(worst_rho, std::abs(closed - t.a_rho()) / closed);
        const MatD kkt = t.k * t.k.transposed();
        worst_orth = std::max(worst_orth, max_abs_diff(kkt, MatD::identity()));
        REQUIRE(t.a1() > 0);
        REQUIRE(t.a2() > 0);
    }
    REQUIRE(worst_rec <= 1e-12);
    REQUIRE(worst_rho <= 1e-10);
    REQUIRE(worst_orth <= 1e-8);
}

TEST_CASE("a_rho of diagonal and of translated long element") {
    const double e = std::exp(1.0);
    REQUIRE(a_rho(MatD::diag(e, 1.0, 1.0 / e)) == Catch::Approx(e * e));

    // a_rho(w0 n(x,y,z)) equals the closed kernel f(x,y,z)
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 10000; ++i) {
        const double x = u(rng), y = u(rng), z = u(rng);
        const MatD g = to_matd(weyl_rep(Weyl::w0)) * UnipD{x, y, z}.to_matrix();
        const double lhs = a_rho(g);
        const double rhs = f_xyz(x, y, z);
        REQUIRE(std::abs(lhs - rhs) / rhs < 1e-10);
        const auto t = iwasawa(g);
        REQUIRE(std::abs(t.a_rho() - rhs) / rhs < 1e-10);
    }
}
