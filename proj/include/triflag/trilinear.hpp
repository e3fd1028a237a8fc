#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "triflag/analysis.hpp"
#include "triflag/iwasawa.hpp"
#include "triflag/mc.hpp"
#include "triflag/testfn.hpp"

namespace triflag {

// Numerical realization of the invariant trilinear forms carried by the
// open-cell orbit family: T_u(F1,F2,F3) integrates
//     F1(g) F2(w0 g) F3(w0 n(1,1,u) g)
// over g = a n k with Haar measure da dn dk.  In the sampled coordinates the
// modulus of the integrand reduces in closed form to
//     f(x,y,z) * f(x + e^P, y + z e^P + e^{P+M}, z + u e^M) * e^{P+M},
// with P = t - s and M = -s - 2t, which also defines the convergence
// integral I(u).  That reduction (and the exact expression for the minor
// y~ - x~ z~, which cancels catastrophically if formed naively) keeps the
// evaluation stable over the whole noncompact range.

namespace tridetail {

struct Proposal {
    SinhLaplace coord{2.0, 120.0};      // base x,y,z draw and mixture widths
    LaplaceMix st_p{0.0, 6.0, 2.0, 240.0};
    LaplaceMix st_m{0.0, 6.0, 2.0, 240.0};
};

/// One draw of the noncompact coordinates with its log proposal density.
struct CoordSample {
    double x, y, z, P, M;
    double log_pdf;  // joint density of the draw, including the ds dt / 3 Jacobian
};

inline CoordSample draw_coords(std::mt19937_64& rng, double u, const Proposal& prop) {
    CoordSample c{};
    c.P = prop.st_p.sample(rng);
    c.M = prop.st_m.sample(rng);
    const double A = std::exp(c.P);
    const double B = std::exp(c.P + c.M);
    const double C = u * std::exp(c.M);

    auto mix2 = [&](double shift, double& out) {
        const double base = prop.coord.sample(rng);
        out = (rng() & 1) ? base : base - shift;
        double p0 = prop.coord.pdf(out);
        double p1 = prop.coord.pdf(out + shift);
        return 0.5 * (p0 + p1);
    };
    const double px = mix2(A, c.x);
    const double pz = mix2(C, c.z);
    // y: even mixture over the four soft peaks of the two kernels
    const double sh = c.z * A + B;
    const std::array<double, 4> centers{0.0, c.x * c.z, -sh, (c.x + A) * (c.z + C) - sh};
    const double base = prop.coord.sample(rng);
    c.y = base + centers[rng() % 4];
    double py = 0;
    for (const double cen : centers) py += 0.25 * prop.coord.pdf(c.y - cen);

    c.log_pdf = std::log(px) + std::log(py) + std::log(pz) + std::log(prop.st_p.pdf(c.P)) +
                std::log(prop.st_m.pdf(c.M)) + std::log(3.0);
    return c;
}

/// Iwasawa data of w0 * m for a unipotent m, from the coordinates of m and
/// the exact minor mt = y - x z (all stable sums of squares):
/// a1 = (1 + z^2 + mt^2)^{-1/2}, a3 = (1 + x^2 + y^2)^{1/2}.
struct W0Model {
    double ln_a1, ln_a2, ln_a3;

    double ln_rho() const { return ln_a1 - ln_a3; }
};

inline W0Model w0_model(double xt, double yt, double zt, double mt) {
    W0Model w;
    w.ln_a1 = -0.5 * log_one_plus_sq(zt, mt);
    w.ln_a3 = 0.5 * log_one_plus_sq(xt, yt);
    w.ln_a2 = -w.ln_a1 - w.ln_a3;
    return w;
}

/// Orthonormal frame kappa(w0 * m) by Gram–Schmidt from the bottom row of
/// w0 * m = [[0,0,-1],[0,-1,-z],[-1,-x,-y]].
inline MatD w0_model_frame(double xt, double yt, double zt) {
    MatD M = MatD::zero();
    M(0, 2) = -1;
    M(1, 1) = -1;
    M(1, 2) = -zt;
    M(2, 0) = -1;
    M(2, 1) = -xt;
    M(2, 2) = -yt;
    double r3[3] = {M(2, 0), M(2, 1), M(2, 2)};
    const double sc3 = std::max({std::fabs(r3[0]), std::fabs(r3[1]), std::fabs(r3[2])});
    for (double& v : r3) v /= sc3;
    const double n3 = std::sqrt(r3[0] * r3[0] + r3[1] * r3[1] + r3[2] * r3[2]);
    for (double& v : r3) v /= n3;
    double r2[3] = {M(1, 0), M(1, 1), M(1, 2)};
    const double dot = r2[0] * r3[0] + r2[1] * r3[1] + r2[2] * r3[2];
    double w[3] = {r2[0] - dot * r3[0], r2[1] - dot * r3[1], r2[2] - dot * r3[2]};
    const double nw = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    for (double& v : w) v /= nw;
    MatD k;
    // e1 = e2 x e3 keeps det = +1
    k(0, 0) = w[1] * r3[2] - w[2] * r3[1];
    k(0, 1) = w[2] * r3[0] - w[0] * r3[2];
    k(0, 2) = w[0] * r3[1] - w[1] * r3[0];
    for (int j = 0; j < 3; ++j) {
        k(1, j) = w[j];
        k(2, j) = r3[j];
    }
    return k;
}

/// ln a^rho of an O(1)-sized invertible matrix (used for right translations):
/// a^rho = |det| / (|r2 x r3| |r3|).
inline std::array<double, 3> ln_a_of_small(const MatD& m) {
    const double r2[3] = {m(1, 0), m(1, 1), m(1, 2)};
    const double r3[3] = {m(2, 0), m(2, 1), m(2, 2)};
    const double cr[3] = {r2[1] * r3[2] - r2[2] * r3[1], r2[2] * r3[0] - r2[0] * r3[2],
                          r2[0] * r3[1] - r2[1] * r3[0]};
    const double n3 = std::sqrt(r3[0] * r3[0] + r3[1] * r3[1] + r3[2] * r3[2]);
    const double ncr = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
    const double det = std::fabs(m.det());
    // ln a1 = ln(det/ncr), ln a2 = ln(ncr/n3), ln a3 = ln n3
    return {std::log(det) - std::log(ncr), std::log(ncr) - std::log(n3), std::log(n3)};
}

struct ArgFrame {
    std::array<double, 3> ln_a;  // Iwasawa A-part, componentwise logs
    MatD kappa;                  // Iwasawa K-part (valid when frames_needed)
};

}  // namespace tridetail

/// Specification of one T evaluation.
struct TrilinearSpec {
    double u = 1.0;
    std::array<TestFunction, 3> f{TestFunction::unit(), TestFunction::unit(),
                                  TestFunction::unit()};
};

namespace tridetail {

inline bool needs_frames(const std::vector<TrilinearSpec>& specs, bool translated) {
    if (translated) return true;
    for (const auto& s : specs)
        for (const auto& fn : s.f)
            for (const auto& [idx, c] : fn.terms)
                if (idx != 0) return true;
    return false;
}

}  // namespace tridetail

/// Evaluates T_u on a batch of test-function triples sharing one sample
/// stream (all specs must share the same u).  `translate` applies the right
/// regular action: each section is evaluated at (.) * y instead.  `k_reps`
/// averages the compact-direction factor over several Haar draws per
/// noncompact sample, which removes most of the variance of zero-mean test
/// functions at little cost.
inline std::vector<McEstimate> trilinear_batch(double u, const std::vector<TrilinearSpec>& specs,
                                               std::uint64_t samples, std::uint64_t seed,
                                               int workers = 1,
                                               std::optional<MatD> translate = std::nullopt,
                                               int k_reps = 1) {
    using namespace tridetail;
    if (u == 0) throw std::domain_error("the family parameter must lie in R^x (u != 0)");
    if (k_reps < 1) k_reps = 1;
    for (const auto& s : specs)
        if (s.u != u) throw std::invalid_argument("batch requires a common u");

    Proposal prop;
    prop.st_m.mu = -std::log(std::fabs(u));
    const bool frames = needs_frames(specs, translate.has_value());
    const int ncomp = static_cast<int>(specs.size());

    return estimate_many(seed, samples, workers, ncomp, [&, frames, u, k_reps](
                                                            std::mt19937_64& rng,
                                                            std::vector<std::complex<double>>& out) {
        const CoordSample c = draw_coords(rng, u, prop);
        const double s = -(2 * c.P + c.M) / 3.0;
        const double t = (c.P - c.M) / 3.0;
        const double A = std::exp(c.P), B = std::exp(c.P + c.M), C = u * std::exp(c.M);

        const double ytil = c.y - c.x * c.z;
        const double xt = c.x + A, yt = c.y + c.z * A + B, zt = c.z + C;
        const double mt = ytil + B * (1.0 - u) - c.x * C;  // exact minor of the translate

        const W0Model m2 = w0_model(c.x, c.y, c.z, ytil);
        const W0Model m3 = w0_model(xt, yt, zt, mt);

        // componentwise logs of the three Iwasawa A-parts at k = identity
        const std::array<std::array<double, 3>, 3> base_ln{{{s, t, -s - t},
                                                            {-s - t + m2.ln_a1, t + m2.ln_a2,
                                                             s + m2.ln_a3},
                                                            {-s - t + m3.ln_a1, t + m3.ln_a2,
                                                             s + m3.ln_a3}}};
        const double base_log_mod = (base_ln[0][0] - base_ln[0][2]) +
                                    (base_ln[1][0] - base_ln[1][2]) +
                                    (base_ln[2][0] - base_ln[2][2]) - c.log_pdf;
        const double base_mod = std::exp(base_log_mod);

        if (!frames) {
            const MatD id = MatD::identity();
            for (int j = 0; j < ncomp; ++j) {
                const auto& sp = specs[j];
                std::complex<double> val(base_mod, 0.0);
                for (int slot = 0; slot < 3; ++slot) {
                    const auto& fn = sp.f[slot];
                    if (!fn.lambda.is_zero()) {
                        const double ph = fn.lambda.l1 * base_ln[slot][0] +
                                          fn.lambda.l2 * base_ln[slot][1];
                        val *= std::complex<double>(std::cos(ph), std::sin(ph));
                    }
                    val *= fn.eval(id);  // constant terms only on this path
                }
                out[j] = val;
            }
            return;
        }

        const MatD fr2 = w0_model_frame(c.x, c.y, c.z);
        const MatD fr3 = w0_model_frame(xt, yt, zt);
        for (auto& o : out) o = {0.0, 0.0};

        for (int rep = 0; rep < k_reps; ++rep) {
            const MatD k = haar_so3(rng);
            ArgFrame a1{base_ln[0], k};
            ArgFrame a2{base_ln[1], fr2 * k};
            ArgFrame a3{base_ln[2], fr3 * k};
            double extra_log_mod = 0;
            bool dead = false;
            if (translate) {
                for (ArgFrame* af : {&a1, &a2, &a3}) {
                    const MatD small = af->kappa * *translate;
                    const double det = small.det();
                    if (!(det > 0.5 && det < 2.0)) {
                        // the far-tail frame lost orthogonality to rounding;
                        // the true contribution there is below underflow
                        dead = true;
                        break;
                    }
                    const auto ln = ln_a_of_small(small);
                    const IwasawaTriple it = iwasawa(small, 1.0);
                    for (int i = 0; i < 3; ++i) af->ln_a[i] += ln[i];
                    extra_log_mod += ln[0] - ln[2];
                    af->kappa = it.k;
                }
            }
            if (dead) continue;
            const double mod = base_mod * std::exp(extra_log_mod);
            const std::array<const ArgFrame*, 3> args{&a1, &a2, &a3};
            for (int j = 0; j < ncomp; ++j) {
                const auto& sp = specs[j];
                std::complex<double> val(mod, 0.0);
                for (int slot = 0; slot < 3; ++slot) {
                    const auto& fn = sp.f[slot];
                    if (!fn.lambda.is_zero()) {
                        const double ph = fn.lambda.l1 * args[slot]->ln_a[0] +
                                          fn.lambda.l2 * args[slot]->ln_a[1];
                        val *= std::complex<double>(std::cos(ph), std::sin(ph));
                    }
                    val *= fn.eval(args[slot]->kappa);
                }
                out[j] += val;
            }
        }
        const double inv = 1.0 / k_reps;
        for (auto& o : out) o *= inv;
    });
}

/// Single-triple front end.
inline McEstimate trilinear_T(double u, const std::array<TestFunction, 3>& f,
                              std::uint64_t samples, std::uint64_t seed, int workers = 1,
                              std::optional<MatD> translate = std::nullopt, int k_reps = 1) {
    TrilinearSpec sp;
    sp.u = u;
    sp.f = f;
    return trilinear_batch(u, {sp}, samples, seed, workers, translate, k_reps)[0];
}

// --- the convergence integral I(u) ------------------------------------------

struct CutoffPoint {
    double radius;  // truncation max(|s|,|t|) <= radius
    double value;
};

struct IntegralResult {
    McEstimate estimate;
    std::vector<CutoffPoint> cutoffs;  // same-stream partial integrals
};

/// I(u) = ∫ f(x,y,z) f(x+e^P, y+z e^P+e^{P+M}, z+u e^M) e^{P+M}, the
/// absolute-convergence envelope of T_u; nonnegative integrand, so the
/// same-stream cutoff sequence is exactly nondecreasing.
inline IntegralResult integral_I(double u, std::uint64_t samples, std::uint64_t seed,
                                 int workers = 1, std::vector<double> radii = {2.5, 5, 10, 20}) {
    using namespace tridetail;
    if (u == 0) throw std::domain_error("the family parameter must lie in R^x (u != 0)");
    Proposal prop;
    prop.st_m.mu = -std::log(std::fabs(u));
    const int ncomp = 1 + static_cast<int>(radii.size());

    auto ests = estimate_many(seed, samples, workers, ncomp, [&, u](std::mt19937_64& rng,
                                                                    std::vector<std::complex<double>>& out) {
        const CoordSample c = draw_coords(rng, u, prop);
        const double s = -(2 * c.P + c.M) / 3.0;
        const double t = (c.P - c.M) / 3.0;
        const double A = std::exp(c.P), B = std::exp(c.P + c.M), C = u * std::exp(c.M);
        const double ytil = c.y - c.x * c.z;
        const double xt = c.x + A, yt = c.y + c.z * A + B, zt = c.z + C;
        const double mt = ytil + B * (1.0 - u) - c.x * C;
        const double logw = log_f_xyz_from_minor(c.x, c.y, c.z, ytil) +
                            log_f_xyz_from_minor(xt, yt, zt, mt) + (c.P + c.M) - c.log_pdf;
        const double w = std::exp(logw);
        out[0] = w;
        const double r = std::max(std::fabs(s), std::fabs(t));
        for (size_t i = 0; i < radii.size(); ++i) out[1 + i] = r <= radii[i] ? w : 0.0;
    });

    IntegralResult res;
    res.estimate = ests[0];
    for (size_t i = 0; i < radii.size(); ++i)
        res.cutoffs.push_back({radii[i], ests[1 + i].real()});
    return res;
}

}  // namespace triflag
