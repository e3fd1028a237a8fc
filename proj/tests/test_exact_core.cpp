#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "triflag/group.hpp"
#include "triflag/rational.hpp"
#include "triflag/weyl.hpp"

using namespace triflag;
using triflag::testing::rand_in_mask;
using triflag::testing::rand_parabolic;
using triflag::testing::rand_rat;
using triflag::testing::rand_unip;

TEST_CASE("rational canonical form and serialization") {
    REQUIRE(rat(2, 4) == rat(1, 2));
    REQUIRE(rat(3, -6) == rat(-1, 2));
    REQUIRE(denominator(rat(3, -6)) == 2);  // denominator kept positive
    REQUIRE(rat_to_string(rat(-4, 8)) == "-1/2");
    REQUIRE(rat_to_string(rat(7)) == "7");
    REQUIRE(rat_from_string("22/7") == rat(22, 7));
    REQUIRE(rat_from_string("-5") == rat(-5));
    REQUIRE_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
    REQUIRE_THROWS_AS(rat_from_string("x"), std::invalid_argument);
}

TEST_CASE("unipotent multiplication") {
    const UnipQ id{0, 0, 0};
    const UnipQ n{rat(1), rat(2), rat(3)};
    REQUIRE(unip_mul(id, n) == n);

    // inverse of n(1,1,u) is n(-1,u-1,-u)
    const Rat u = rat(5, 3);
    REQUIRE(unip_mul(UnipQ{1, 1, u}, UnipQ{-1, u - 1, -u}) == id);

    REQUIRE(unip_mul(UnipQ{1, 2, 3}, UnipQ{4, 5, 6}) == UnipQ{5, 13, 9});
}

TEST_CASE("unipotent inverse") {
    REQUIRE(unip_inv(UnipQ{0, 0, 0}) == UnipQ{0, 0, 0});
    const Rat u = rat(7, 2);
    REQUIRE(unip_inv(UnipQ{1, 1, u}) == UnipQ{-1, u - 1, -u});
    REQUIRE(unip_inv(UnipQ{2, 3, 5}) == UnipQ{-2, 7, -5});

    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const UnipQ n = rand_unip(rng);
        REQUIRE(unip_mul(n, unip_inv(n)) == UnipQ{0, 0, 0});
        // cross-check against matrix inversion
        REQUIRE(unip_inv(n).to_matrix() == n.to_matrix().inverse());
    }
}

TEST_CASE("to_matrix respects the group law exactly") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const UnipQ a = rand_unip(rng), b = rand_unip(rng);
        REQUIRE(unip_mul(a, b).to_matrix() == a.to_matrix() * b.to_matrix());
        REQUIRE(UnipQ::from_matrix(a.to_matrix()) == a);
    }
}

TEST_CASE("diagonal conjugation") {
    const UnipQ n{1, 1, 1};
    REQUIRE(diag_conj(DiagQ{1, 1, 1}, n) == n);
    REQUIRE(diag_conj(make_diag(rat(2), rat(1)), n) == UnipQ{2, 4, 2});
    REQUIRE(diag_conj(DiagQ{-1, -1, 1}, n) == UnipQ{1, -1, -1});

    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const DiagQ d = triflag::testing::rand_diag(rng);
        const UnipQ m = rand_unip(rng);
        const MatQ lhs = diag_conj(d, m).to_matrix();
        const MatQ rhs = d.to_matrix() * m.to_matrix() * d.to_matrix().inverse();
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("Weyl representatives are signed permutations of determinant 1") {
    for (Weyl w : kAllWeyl) {
        const MatQ& r = weyl_rep(w);
        REQUIRE(r.det() == 1);
        for (int i = 0; i < 3; ++i) {
            int row_nonzero = 0, col_nonzero = 0;
            for (int j = 0; j < 3; ++j) {
                if (r(i, j) != 0) {
                    ++row_nonzero;
                    REQUIRE((r(i, j) == 1 || r(i, j) == -1));
                }
                if (r(j, i) != 0) ++col_nonzero;
            }
            REQUIRE(row_nonzero == 1);
            REQUIRE(col_nonzero == 1);
        }
    }
}

TEST_CASE("Weyl multiplication table") {
    REQUIRE(weyl_mul(Weyl::s1, Weyl::s1) == Weyl::e);
    REQUIRE(weyl_mul(Weyl::s2, Weyl::s2) == Weyl::e);
    REQUIRE(weyl_mul(Weyl::s2, Weyl::s1) == Weyl::z1);
    REQUIRE(weyl_mul(Weyl::s1, Weyl::s2) == Weyl::z2);
    REQUIRE(weyl_mul(weyl_mul(Weyl::s1, Weyl::s2), Weyl::s1) == Weyl::w0);
    REQUIRE(weyl_mul(weyl_mul(Weyl::s2, Weyl::s1), Weyl::s2) == Weyl::w0);

    // closed and associative, and representatives realize it modulo D
    const auto table = weyl_table();
    for (Weyl a : kAllWeyl)
        for (Weyl b : kAllWeyl) {
            const Weyl c = table[weyl_index(a)][weyl_index(b)];
            const MatQ prod = weyl_rep(a) * weyl_rep(b);
            const MatQ d = prod * weyl_rep(c).inverse();
            REQUIRE(d.is_upper_triangular());
            REQUIRE(d.transposed().is_upper_triangular());  // diagonal
            REQUIRE(d.det() == 1);
        }
    // squares of the generators land in D
    for (Weyl s : {Weyl::s1, Weyl::s2}) {
        const MatQ sq = weyl_rep(s) * weyl_rep(s);
        REQUIRE(sq.is_upper_triangular());
        REQUIRE(sq.transposed().is_upper_triangular());
    }
}

TEST_CASE("conjugated parabolic patterns match the computed shapes") {
    using C = SubgroupPattern::Cell;
    // s1^{-1} P s1 and friends, straight from the shape display
    auto expect = [](Weyl v, std::array<std::array<int, 3>, 3> stars) {
        const auto p = conj_parabolic_pattern(v);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) {
                    REQUIRE(p.cell[i][j] == C::diag);
                } else {
                    REQUIRE(p.cell[i][j] == (stars[i][j] ? C::free : C::zero));
                }
            }
    };
    expect(Weyl::s1, {{{1, 0, 1}, {1, 1, 1}, {0, 0, 1}}});
    expect(Weyl::s2, {{{1, 1, 1}, {0, 1, 0}, {0, 1, 1}}});
    expect(Weyl::z1, {{{1, 0, 0}, {1, 1, 1}, {1, 0, 1}}});
    expect(Weyl::z2, {{{1, 1, 0}, {0, 1, 0}, {1, 1, 1}}});

    // random p in P: v^{-1} p v lies in the mask, for each v
    std::mt19937_64 rng(2024);
    for (Weyl v : kAllWeyl) {
        const auto mask = conj_parabolic_pattern(v);
        const MatQ r = weyl_rep(v), ri = r.inverse();
        for (int i = 0; i < 1000; ++i) {
            const MatQ p = rand_parabolic(rng);
            REQUIRE(mask.matches(ri * p * r));
        }
    }
}

TEST_CASE("N_v masks") {
    auto mask_of = [](Weyl v) {
        const auto m = n_v_mask(v);
        return std::array<bool, 3>{m.x, m.y, m.z};
    };
    REQUIRE(mask_of(Weyl::e) == std::array<bool, 3>{true, true, true});
    REQUIRE(mask_of(Weyl::s1) == std::array<bool, 3>{false, true, true});
    REQUIRE(mask_of(Weyl::s2) == std::array<bool, 3>{true, true, false});
    REQUIRE(mask_of(Weyl::z1) == std::array<bool, 3>{false, false, true});
    REQUIRE(mask_of(Weyl::z2) == std::array<bool, 3>{true, false, false});
    REQUIRE(mask_of(Weyl::w0) == std::array<bool, 3>{false, false, false});
}

TEST_CASE("N_v pattern equals N-mask intersected with v^-1 P v pattern") {
    using C = SubgroupPattern::Cell;
    for (Weyl v : kAllWeyl) {
        const auto nv = n_v_pattern(v);
        const auto pv = conj_parabolic_pattern(v);
        // strictly upper entries: free in N_v iff free in v^-1 P v
        REQUIRE((nv.cell[0][1] == C::free) == (pv.cell[0][1] == C::free));
        REQUIRE((nv.cell[0][2] == C::free) == (pv.cell[0][2] == C::free));
        REQUIRE((nv.cell[1][2] == C::free) == (pv.cell[1][2] == C::free));
        // and members of the mask conjugate into N
        std::mt19937_64 rng(42 + weyl_index(v));
        const MatQ r = weyl_rep(v), ri = r.inverse();
        for (int i = 0; i < 200; ++i) {
            const UnipQ n = rand_in_mask(rng, n_v_mask(v));
            const MatQ conj = r * n.to_matrix() * ri;
            REQUIRE(conj.is_upper_triangular());
            REQUIRE(conj(0, 0) == 1);
            REQUIRE(conj(1, 1) == 1);
            REQUIRE(conj(2, 2) == 1);
        }
    }
}

TEST_CASE("Bruhat order on W") {
    REQUIRE(bruhat_leq(Weyl::e, Weyl::s1));
    REQUIRE(bruhat_leq(Weyl::s1, Weyl::z1));
    REQUIRE(bruhat_leq(Weyl::s1, Weyl::z2));
    REQUIRE(bruhat_leq(Weyl::s2, Weyl::z1));
    REQUIRE(bruhat_leq(Weyl::z1, Weyl::w0));
    REQUIRE_FALSE(bruhat_leq(Weyl::s1, Weyl::s2));
    REQUIRE_FALSE(bruhat_leq(Weyl::z1, Weyl::z2));
    REQUIRE_FALSE(bruhat_leq(Weyl::w0, Weyl::z1));
    // partial order sanity: reflexive, antisymmetric, transitive
    for (Weyl a : kAllWeyl) {
        REQUIRE(bruhat_leq(a, a));
        for (Weyl b : kAllWeyl) {
            if (a != b) REQUIRE_FALSE((bruhat_leq(a, b) && bruhat_leq(b, a)));
            for (Weyl c : kAllWeyl)
                if (bruhat_leq(a, b) && bruhat_leq(b, c)) REQUIRE(bruhat_leq(a, c));
        }
    }
}
