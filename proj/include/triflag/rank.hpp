#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "triflag/trilinear.hpp"

namespace triflag {

namespace rankdetail {

using CMat = std::vector<std::vector<std::complex<double>>>;

/// Cyclic Jacobi on a Hermitian matrix (tiny sizes); returns eigenvalues
/// ascending and fills the unitary V with columns of eigenvectors.
inline std::vector<double> hermitian_eig(CMat a, CMat& v) {
    const int n = static_cast<int>(a.size());
    v.assign(n, std::vector<std::complex<double>>(n, {0.0, 0.0}));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0, diag = 0;
        for (int p = 0; p < n; ++p) {
            diag += std::norm(a[p][p]);
            for (int q = p + 1; q < n; ++q) off += std::norm(a[p][q]);
        }
        if (off <= 1e-30 * std::max(diag, 1e-300)) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const std::complex<double> apq = a[p][q];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[p][p].real(), aqq = a[q][q].real();
                const double phi = std::arg(apq);
                const std::complex<double> eiphi(std::cos(phi), std::sin(phi));
                const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                const double c = std::cos(theta);
                const std::complex<double> sp = std::sin(theta) * eiphi;
                for (int k = 0; k < n; ++k) {
                    const auto akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp + std::conj(sp) * akq;
                    a[k][q] = -sp * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const auto apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk + sp * aqk;
                    a[q][k] = -std::conj(sp) * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const auto vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp + std::conj(sp) * vkq;
                    v[k][q] = -sp * vkp + c * vkq;
                }
            }
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&a](int i, int j) { return a[i][i].real() < a[j][j].real(); });
    CMat vs = v;
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) {
        eig[i] = a[order[i]][order[i]].real();
        for (int k = 0; k < n; ++k) v[k][i] = vs[k][order[i]];
    }
    return eig;
}

/// Singular value decomposition pieces of an m x n complex matrix (m <= n):
/// descending singular values, left vectors as columns of U.
inline std::vector<double> singular_values(const CMat& a, CMat& u_out, CMat& v_out) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(a[0].size());
    CMat gram(m, std::vector<std::complex<double>>(m, {0.0, 0.0}));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            std::complex<double> s{0.0, 0.0};
            for (int k = 0; k < n; ++k) s += a[i][k] * std::conj(a[j][k]);
            gram[i][j] = s;
        }
    CMat U;
    const auto eig = hermitian_eig(gram, U);
    std::vector<double> sv(m);
    u_out.assign(m, std::vector<std::complex<double>>(m, {0.0, 0.0}));
    v_out.assign(m, std::vector<std::complex<double>>(n, {0.0, 0.0}));
    for (int k = 0; k < m; ++k) {
        const int src = m - 1 - k;  // descending
        sv[k] = std::sqrt(std::max(0.0, eig[src]));
        for (int i = 0; i < m; ++i) u_out[i][k] = U[i][src];
        if (sv[k] > 1e-300) {
            for (int j = 0; j < n; ++j) {
                std::complex<double> s{0.0, 0.0};
                for (int i = 0; i < m; ++i) s += std::conj(U[i][src]) * a[i][j];
                v_out[k][j] = s / sv[k];
            }
        }
    }
    return sv;
}

}  // namespace rankdetail

/// Matrix of T values sharing one sample stream across all u rows (common
/// random numbers): row differences are then measured far more precisely
/// than the rows themselves, which is what the rank decision needs.
struct TrilinearMatrix {
    std::vector<std::vector<McEstimate>> entries;           // m x n means with errors
    std::vector<rankdetail::CMat> block_means;              // per replication block
    std::uint64_t samples = 0, seed = 0;
    int blocks = 0;
};

namespace rankdetail {

/// Shared-proposal draw whose mixture components cover the kernel peaks of
/// every u in the batch (required for common random numbers across rows).
inline tridetail::CoordSample draw_coords_shared(std::mt19937_64& rng,
                                                 const std::vector<double>& us,
                                                 const tridetail::Proposal& prop) {
    using tridetail::CoordSample;
    CoordSample c{};
    c.P = prop.st_p.sample(rng);
    c.M = prop.st_m.sample(rng);
    const double A = std::exp(c.P);
    const double B = std::exp(c.P + c.M);
    const int m = static_cast<int>(us.size());

    auto mix = [&](const std::vector<double>& centers, double& out_val) {
        const double base = prop.coord.sample(rng);
        out_val = base + centers[rng() % centers.size()];
        double p = 0;
        for (const double cen : centers) p += prop.coord.pdf(out_val - cen);
        return p / centers.size();
    };

    std::vector<double> cx{0.0, -A};
    const double px = mix(cx, c.x);

    std::vector<double> cz{0.0};
    for (double u : us) cz.push_back(-u * std::exp(c.M));
    const double pz = mix(cz, c.z);

    const double sh = c.z * A + B;
    std::vector<double> cy{0.0, c.x * c.z, -sh};
    for (double u : us) cy.push_back((c.x + A) * (c.z + u * std::exp(c.M)) - sh);
    const double py = mix(cy, c.y);

    c.log_pdf = std::log(px) + std::log(py) + std::log(pz) + std::log(prop.st_p.pdf(c.P)) +
                std::log(prop.st_m.pdf(c.M)) + std::log(3.0);
    (void)m;
    return c;
}

}  // namespace rankdetail

inline TrilinearMatrix trilinear_matrix(const std::vector<double>& us,
                                        const std::vector<std::array<TestFunction, 3>>& triples,
                                        std::uint64_t samples, std::uint64_t seed, int workers = 1,
                                        int k_reps = 8, int blocks = 32) {
    using namespace tridetail;
    const int m = static_cast<int>(us.size());
    const int n = static_cast<int>(triples.size());
    for (double u : us)
        if (u == 0) throw std::domain_error("the family parameter must lie in R^x (u != 0)");

    // one proposal serves every row; center the M-part on the log-midrange
    double lo = 1e300, hi = -1e300;
    for (double u : us) {
        lo = std::min(lo, std::log(std::fabs(u)));
        hi = std::max(hi, std::log(std::fabs(u)));
    }
    Proposal prop;
    prop.st_m.mu = -0.5 * (lo + hi);

    TrilinearMatrix out;
    out.samples = samples;
    out.seed = seed;
    out.blocks = blocks;
    out.block_means.resize(blocks);

    const int ncomp = m * n;
    std::vector<std::vector<McEstimate>> block_est(blocks);
    for (int b = 0; b < blocks; ++b) {
        const std::uint64_t nb = samples / blocks + (b < static_cast<int>(samples % blocks) ? 1 : 0);
        block_est[b] = estimate_many(
            mix_seed(seed, 1000 + b), nb, workers, ncomp,
            [&](std::mt19937_64& rng, std::vector<std::complex<double>>& vals) {
                const CoordSample c = rankdetail::draw_coords_shared(rng, us, prop);
                const double A = std::exp(c.P), B = std::exp(c.P + c.M);
                const double ytil = c.y - c.x * c.z;
                const W0Model m2 = w0_model(c.x, c.y, c.z, ytil);
                const double s = -(2 * c.P + c.M) / 3.0;
                const double t = (c.P - c.M) / 3.0;
                const MatD fr2 = w0_model_frame(c.x, c.y, c.z);

                std::vector<MatD> ks(k_reps);
                for (auto& k : ks) k = haar_so3(rng);

                for (int i = 0; i < m; ++i) {
                    const double u = us[i];
                    const double C = u * std::exp(c.M);
                    const double xt = c.x + A, yt = c.y + c.z * A + B, zt = c.z + C;
                    const double mt = ytil + B * (1.0 - u) - c.x * C;
                    const W0Model m3 = w0_model(xt, yt, zt, mt);
                    const std::array<std::array<double, 3>, 3> ln{
                        {{s, t, -s - t},
                         {-s - t + m2.ln_a1, t + m2.ln_a2, s + m2.ln_a3},
                         {-s - t + m3.ln_a1, t + m3.ln_a2, s + m3.ln_a3}}};
                    const double mod =
                        std::exp((ln[0][0] - ln[0][2]) + (ln[1][0] - ln[1][2]) +
                                 (ln[2][0] - ln[2][2]) - c.log_pdf) /
                        k_reps;
                    const MatD fr3 = w0_model_frame(xt, yt, zt);
                    for (int j = 0; j < n; ++j) vals[i * n + j] = {0.0, 0.0};
                    for (const auto& k : ks) {
                        const std::array<MatD, 3> kap{k, fr2 * k, fr3 * k};
                        for (int j = 0; j < n; ++j) {
                            std::complex<double> val(mod, 0.0);
                            for (int slot = 0; slot < 3; ++slot) {
                                const auto& fn = triples[j][slot];
                                if (!fn.lambda.is_zero()) {
                                    const double ph = fn.lambda.l1 * ln[slot][0] +
                                                      fn.lambda.l2 * ln[slot][1];
                                    val *= std::complex<double>(std::cos(ph), std::sin(ph));
                                }
                                val *= fn.eval(kap[slot]);
                            }
                            vals[i * n + j] += val;
                        }
                    }
                }
            });
        out.block_means[b].assign(m, std::vector<std::complex<double>>(n, {0.0, 0.0}));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) out.block_means[b][i][j] = block_est[b][i * n + j].value;
    }

    // combine blocks: mean of block means (equal weights up to the +-1 sample)
    out.entries.assign(m, std::vector<McEstimate>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            std::complex<double> mean{0.0, 0.0};
            for (int b = 0; b < blocks; ++b) mean += out.block_means[b][i][j];
            mean /= static_cast<double>(blocks);
            double var = 0;
            for (int b = 0; b < blocks; ++b) var += std::norm(out.block_means[b][i][j] - mean);
            var /= std::max(1, blocks - 1);
            out.entries[i][j] = {mean, std::sqrt(var / blocks), samples, seed};
        }
    return out;
}

struct RankResult {
    std::vector<double> singular_values;    // descending
    std::vector<double> propagated_errors;  // per singular value, from block spread
    double threshold = 0;
    int rank = 0;
    bool inconclusive = false;  // a deficit may be noise drowning, not dependence
    TrilinearMatrix matrix;
};

/// Numerical rank of [ T_{u_i}(triple_j) ] at threshold = 10 x the largest
/// MC standard error propagated to the singular values.  Propagation uses
/// the replication blocks of the shared-stream run, which credits the strong
/// correlation between rows that common random numbers create.
inline RankResult independence_rank(const std::vector<double>& us,
                                    const std::vector<std::array<TestFunction, 3>>& triples,
                                    std::uint64_t samples, std::uint64_t seed, int workers = 1,
                                    int k_reps = 8) {
    using rankdetail::CMat;
    const int m = static_cast<int>(us.size());
    const int n = static_cast<int>(triples.size());
    if (m < 1 || n < m) throw std::invalid_argument("need at least as many triples as u values");

    RankResult res;
    res.matrix = trilinear_matrix(us, triples, samples, seed, workers, k_reps);
    const auto& M = res.matrix;

    CMat a(m, std::vector<std::complex<double>>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = M.entries[i][j].value;

    CMat U, V;
    res.singular_values = rankdetail::singular_values(a, U, V);

    // first-order perturbation per block: delta_k^(b) = Re( u_k^H (M_b - A) v_k )
    res.propagated_errors.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double mean = 0;
        std::vector<double> deltas(M.blocks, 0.0);
        for (int b = 0; b < M.blocks; ++b) {
            std::complex<double> d{0.0, 0.0};
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j)
                    d += std::conj(U[i][k]) * (M.block_means[b][i][j] - a[i][j]) * std::conj(V[k][j]);
            deltas[b] = d.real();
            mean += d.real();
        }
        mean /= M.blocks;
        double var = 0;
        for (double d : deltas) var += (d - mean) * (d - mean);
        var /= std::max(1, M.blocks - 1);
        res.propagated_errors[k] = std::sqrt(var / M.blocks);
    }
    res.threshold =
        10.0 * *std::max_element(res.propagated_errors.begin(), res.propagated_errors.end());
    res.rank = 0;
    for (double sv : res.singular_values)
        if (sv > res.threshold) ++res.rank;
    res.inconclusive = res.rank < m;
    return res;
}

}  // namespace triflag
