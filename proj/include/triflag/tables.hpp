#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "triflag/orbit.hpp"

namespace triflag {

// Reference data for the classification of X = (P\G)^3: per-cell orbit
// counts and orbit-dimension multisets, rows indexed by v, columns by w, in
// kAllWeyl order (1, s1, s2, z1, z2, w0).  The open cell additionally
// carries the one-parameter family (not included in the isolated count).

inline const std::array<std::array<int, 6>, 6>& expected_counts_table() {
    static const std::array<std::array<int, 6>, 6> t{{
        {1, 1, 1, 1, 1, 1},
        {1, 2, 1, 2, 1, 2},
        {1, 1, 2, 1, 2, 2},
        {1, 2, 1, 3, 2, 4},
        {1, 1, 2, 2, 3, 4},
        {1, 2, 2, 4, 4, 7},
    }};
    return t;
}

/// Dimension multisets, ascending.  The family's dimension (8) is listed
/// separately and only occurs at (w0, w0).
inline const std::array<std::array<std::vector<int>, 6>, 6>& expected_dims_table() {
    static const std::array<std::array<std::vector<int>, 6>, 6> t = [] {
        std::array<std::array<std::vector<int>, 6>, 6> d;
        auto at = [&d](Weyl v, Weyl w) -> std::vector<int>& {
            return d[weyl_index(v)][weyl_index(w)];
        };
        using enum Weyl;
        at(e, e) = {3};
        at(e, s1) = {4};
        at(e, s2) = {4};
        at(e, z1) = {5};
        at(e, z2) = {5};
        at(e, w0) = {6};
        at(s1, e) = {4};
        at(s1, s1) = {4, 5};
        at(s1, s2) = {5};
        at(s1, z1) = {5, 6};
        at(s1, z2) = {6};
        at(s1, w0) = {6, 7};
        at(s2, e) = {4};
        at(s2, s1) = {5};
        at(s2, s2) = {4, 5};
        at(s2, z1) = {6};
        at(s2, z2) = {5, 6};
        at(s2, w0) = {6, 7};
        at(z1, e) = {5};
        at(z1, s1) = {5, 6};
        at(z1, s2) = {6};
        at(z1, z1) = {5, 6, 7};
        at(z1, z2) = {6, 7};
        at(z1, w0) = {6, 7, 7, 8};
        at(z2, e) = {5};
        at(z2, s1) = {6};
        at(z2, s2) = {5, 6};
        at(z2, z1) = {6, 7};
        at(z2, z2) = {5, 6, 7};
        at(z2, w0) = {6, 7, 7, 8};
        at(w0, e) = {6};
        at(w0, s1) = {6, 7};
        at(w0, s2) = {6, 7};
        at(w0, z1) = {6, 7, 7, 8};
        at(w0, z2) = {6, 7, 7, 8};
        at(w0, w0) = {6, 7, 7, 7, 8, 8, 8};
        return d;
    }();
    return t;
}

constexpr int kExpectedIsolatedTotal = 70;
constexpr int kFamilyDim = 8;

struct WitnessFailure {
    std::string condition;  // which membership condition broke
    std::string params;
};

/// Samples the claimed stabilizer family of a class and checks the three
/// membership conditions s ∈ P, v s v^{-1} ∈ P, (wn) s (wn)^{-1} ∈ P.
template <class Rng>
inline std::optional<WitnessFailure> stabilizer_witness_check(const OrbitClass& oc, int samples,
                                                              Rng& rng) {
    if (!oc.witness) return std::nullopt;
    const StabilizerWitness& wt = *oc.witness;
    const MatQ v = weyl_rep(oc.cell.v);
    const MatQ vi = v.inverse();
    const MatQ wn = weyl_rep(oc.cell.w) * oc.rep.element().to_matrix();
    const MatQ wni = wn.inverse();
    const auto pmask = p_pattern();

    auto rand_nonzero = [&rng]() {
        const int num = 1 + static_cast<int>(rng() % 9);
        const int den = 1 + static_cast<int>(rng() % 9);
        const bool neg = rng() & 1;
        return rat(neg ? -num : num, den);
    };
    auto rand_any = [&rng, &rand_nonzero]() { return rng() % 5 == 0 ? Rat(0) : rand_nonzero(); };

    for (int i = 0; i < samples; ++i) {
        const Rat a = rand_nonzero(), b = rand_nonzero();
        const MatQ s = wt.element(a, b, rand_any(), rand_any(), rand_any());
        const std::string params = "a=" + rat_to_string(a) + " b=" + rat_to_string(b);
        if (!pmask.matches(s)) return WitnessFailure{"s in P", params};
        if (!pmask.matches(v * s * vi)) return WitnessFailure{"v s v^-1 in P", params};
        if (!pmask.matches(wn * s * wni)) return WitnessFailure{"(wn) s (wn)^-1 in P", params};
    }
    return std::nullopt;
}

}  // namespace triflag
