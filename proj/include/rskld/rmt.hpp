#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rskld/error.hpp"
#include "rskld/hermitian.hpp"
#include "rskld/random.hpp"
#include "rskld/wordmodel.hpp"

namespace rskld {

enum class Ensemble { gue, traceless, block };

inline const char* to_string(Ensemble e) {
    switch (e) {
        case Ensemble::gue: return "gue";
        case Ensemble::traceless: return "traceless";
        case Ensemble::block: return "block";
    }
    return "?";
}

/// Eigenvalues sorted nonincreasing. Unscaled: xi = lambda / sqrt(m).
struct SpectrumSample {
    std::vector<double> eigenvalues;
    std::size_t m = 0;
    Ensemble ensemble = Ensemble::gue;

    std::vector<double> scaled() const {
        std::vector<double> xi(eigenvalues);
        const double s = 1.0 / std::sqrt(static_cast<double>(m));
        for (auto& v : xi) v *= s;
        return xi;
    }
};

/// m x m GUE: X_ii ~ N(0,1), Re X_ij and Im X_ij ~ N(0,1/2) for i < j.
/// Draw order is row-major over the upper triangle, diagonal first in each row.
inline HermitianMatrix sample_gue_matrix(std::size_t m, RandomSource& rs) {
    HermitianMatrix a(m);
    const double s = std::sqrt(0.5);
    for (std::size_t i = 0; i < m; ++i) {
        a.set(i, i, rs.normal());
        for (std::size_t j = i + 1; j < m; ++j) {
            const double re = s * rs.normal();
            const double im = s * rs.normal();
            a.set(i, j, Complex(re, im));
        }
    }
    return a;
}

inline SpectrumSample sample_gue_spectrum(std::size_t m, RandomSource& rs) {
    if (m == 0) throw std::invalid_argument("sample_gue_spectrum: m must be >= 1");
    if (m == 1) return SpectrumSample{{rs.normal()}, 1, Ensemble::gue};
    return SpectrumSample{hermitian_eigenvalues(sample_gue_matrix(m, rs)), m, Ensemble::gue};
}

inline SpectrumSample sample_gue_spectrum(std::size_t m, std::uint64_t seed) {
    RandomSource rs(seed);
    return sample_gue_spectrum(m, rs);
}

/// Spectrum of X - (tr X / m) Id. Centering an already traceless spectrum is
/// a no-op up to rounding, so both tags are accepted.
inline SpectrumSample traceless(const SpectrumSample& s) {
    if (s.ensemble == Ensemble::block)
        throw std::invalid_argument("traceless: block spectra are already modified");
    SpectrumSample out{s.eigenvalues, s.m, Ensemble::traceless};
    if (out.eigenvalues.empty()) return out;
    // Two passes: the residual mean after the first is at rounding level.
    for (int pass = 0; pass < 2; ++pass) {
        const double mean = std::accumulate(out.eigenvalues.begin(), out.eigenvalues.end(), 0.0) /
                            static_cast<double>(out.eigenvalues.size());
        for (auto& v : out.eigenvalues) v -= mean;
    }
    return out;
}

inline SpectrumSample sample_traceless_spectrum(std::size_t m, RandomSource& rs) {
    return traceless(sample_gue_spectrum(m, rs));
}

inline constexpr std::size_t kJointDensityMaxM = 30;

/// log Z_m with Z_m = (2 pi)^{m/2} m^{-m^2/2} prod_{j=1}^m j!.
inline double log_partition(std::size_t m) {
    if (m == 0 || m > kJointDensityMaxM) throw std::invalid_argument("log_partition: need 1 <= m <= 30");
    const double mm = static_cast<double>(m);
    double lf = 0.0;
    for (std::size_t j = 1; j <= m; ++j) lf += std::lgamma(static_cast<double>(j) + 1.0);
    return 0.5 * mm * std::log(2.0 * std::numbers::pi) - 0.5 * mm * mm * std::log(mm) + lf;
}

/// Log joint density of the scaled GUE spectrum. Returns -inf on repeated entries.
/// Sums run over a sorted copy so the result is exactly symmetric.
inline double log_joint_density(std::span<const double> xi_in, std::size_t m) {
    if (xi_in.size() != m) throw std::invalid_argument("log_joint_density: xi must have m entries");
    std::vector<double> xi(xi_in.begin(), xi_in.end());
    std::sort(xi.begin(), xi.end());
    const double logz = log_partition(m);
    double sq = 0.0, vdm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sq += xi[i] * xi[i];
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = std::abs(xi[i] - xi[j]);
            if (d == 0.0) return -std::numeric_limits<double>::infinity();
            vdm += std::log(d);
        }
    }
    return -logz - 0.5 * static_cast<double>(m) * sq + 2.0 * vdm;
}

/// Distinct letter probabilities p(1) > ... > p(l) with multiplicities d_i.
struct BlockEnsembleSpec {
    std::vector<double> probs;
    std::vector<std::size_t> mults;

    BlockEnsembleSpec() = default;
    BlockEnsembleSpec(std::vector<double> p, std::vector<std::size_t> d) : probs(std::move(p)), mults(std::move(d)) {
        validate();
    }

    void validate() const {
        if (probs.empty() || probs.size() != mults.size())
            throw std::invalid_argument("block spec: probs and mults must be nonempty and of equal length");
        double total = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (mults[i] == 0) throw std::invalid_argument("block spec: multiplicities must be positive");
            if (!(probs[i] > 0.0)) throw std::invalid_argument("block spec: probabilities must be positive");
            if (i > 0 && !(probs[i] < probs[i - 1]))
                throw std::invalid_argument("block spec: probabilities must be strictly decreasing");
            total += static_cast<double>(mults[i]) * probs[i];
        }
        if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("block spec: sum of d_i p_i must be 1");
    }

    std::size_t dimension() const { return std::accumulate(mults.begin(), mults.end(), std::size_t{0}); }
    double p_max() const { return probs.front(); }

    /// Groups an alphabet's probabilities into blocks; ties within tie_tol merge.
    static BlockEnsembleSpec from_alphabet(const AlphabetDistribution& dist, double tie_tol = kDefaultTieTolerance) {
        std::vector<double> p(dist.probs().begin(), dist.probs().end());
        std::sort(p.begin(), p.end(), std::greater<>());
        BlockEnsembleSpec spec;
        std::vector<double> block_sum;
        for (double v : p) {
            if (!spec.probs.empty() && spec.probs.back() - v <= tie_tol) {
                ++spec.mults.back();
                block_sum.back() += v;
            } else {
                spec.probs.push_back(v);
                spec.mults.push_back(1);
                block_sum.push_back(v);
            }
        }
        // Tied probabilities are replaced by their block mean so the total stays 1.
        for (std::size_t i = 0; i < spec.probs.size(); ++i)
            spec.probs[i] = block_sum[i] / static_cast<double>(spec.mults[i]);
        spec.validate();
        return spec;
    }
};

inline void to_json(nlohmann::json& j, const BlockEnsembleSpec& s) {
    j = nlohmann::json{{"probs", s.probs}, {"mults", s.mults}};
}

inline void from_json(const nlohmann::json& j, BlockEnsembleSpec& s) {
    s = BlockEnsembleSpec(j.at("probs").get<std::vector<double>>(), j.at("mults").get<std::vector<std::size_t>>());
}

struct BlockSample {
    double lambda_tilde_1_0 = 0.0;
    /// Spectra of every block after the diagonal modification, when requested.
    std::optional<std::vector<std::vector<double>>> blocks;
};

/// Block-diagonal GUE with X_ii replaced by X_ii - sqrt(p_(i)) sum_h sqrt(p_(h)) X_hh.
/// Draws all m diagonal entries first, then the off-diagonal entries of block 1,
/// then (only if full_blocks) those of the remaining blocks.
inline BlockSample sample_block_traceless(const BlockEnsembleSpec& spec, RandomSource& rs, bool full_blocks = false) {
    const std::size_t m = spec.dimension();
    std::vector<double> diag(m), sqrt_p(m);
    {
        std::size_t h = 0;
        for (std::size_t b = 0; b < spec.probs.size(); ++b)
            for (std::size_t t = 0; t < spec.mults[b]; ++t) sqrt_p[h++] = std::sqrt(spec.probs[b]);
    }
    double weighted = 0.0;
    for (std::size_t h = 0; h < m; ++h) {
        diag[h] = rs.normal();
        weighted += sqrt_p[h] * diag[h];
    }
    for (std::size_t h = 0; h < m; ++h) diag[h] -= sqrt_p[h] * weighted;

    const double s = std::sqrt(0.5);
    auto block_spectrum = [&](std::size_t offset, std::size_t d) {
        if (d == 1) return std::vector<double>{diag[offset]};
        HermitianMatrix a(d);
        for (std::size_t i = 0; i < d; ++i) {
            a.set(i, i, diag[offset + i]);
            for (std::size_t j = i + 1; j < d; ++j) {
                const double re = s * rs.normal();
                const double im = s * rs.normal();
                a.set(i, j, Complex(re, im));
            }
        }
        return hermitian_eigenvalues(a);
    };

    BlockSample out;
    auto first = block_spectrum(0, spec.mults[0]);
    out.lambda_tilde_1_0 = first.front();
    if (full_blocks) {
        std::vector<std::vector<double>> all;
        all.push_back(std::move(first));
        std::size_t offset = spec.mults[0];
        for (std::size_t b = 1; b < spec.mults.size(); ++b) {
            all.push_back(block_spectrum(offset, spec.mults[b]));
            offset += spec.mults[b];
        }
        out.blocks = std::move(all);
    }
    return out;
}

inline BlockSample sample_block_traceless(const BlockEnsembleSpec& spec, std::uint64_t seed, bool full_blocks = false) {
    RandomSource rs(seed);
    return sample_block_traceless(spec, rs, full_blocks);
}

/// max over cut indices 0 = c_0 <= c_1 <= ... <= c_k = N of
/// sum_r sum_{c_{r-1} <= s < c_r} inc[r][s]; inc is k x N row-major.
inline double max_over_cuts(std::span<const double> inc, std::size_t k, std::size_t n_steps) {
    if (k == 0) throw std::invalid_argument("max_over_cuts: k must be >= 1");
    if (inc.size() != k * n_steps) throw std::invalid_argument("max_over_cuts: size mismatch");
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> best(k, ninf);
    best[0] = 0.0;
    for (std::size_t s = 0; s < n_steps; ++s) {
        for (std::size_t r = 1; r < k; ++r) best[r] = std::max(best[r], best[r - 1]);
        for (std::size_t r = 0; r < k; ++r) best[r] += inc[r * n_steps + s];
    }
    for (std::size_t r = 1; r < k; ++r) best[r] = std::max(best[r], best[r - 1]);
    return best[k - 1];
}

/// Increments of k equicorrelated Brownian motions on an N-step grid of [0,1].
/// The correlation square root is closed form: Z = a W + b (sum W) 1 with
/// a = sqrt(1 - rho), b = (sqrt(1 + (k-1) rho) - a) / k.
inline std::vector<double> brownian_increments(std::size_t k, std::size_t n_steps, double rho, RandomSource& rs) {
    if (k == 0) throw std::invalid_argument("brownian: k must be >= 1");
    if (n_steps < k) throw std::invalid_argument("brownian: need N >= k");
    if (k > 1 && (rho > 1.0 || 1.0 + static_cast<double>(k - 1) * rho < -1e-15))
        throw std::invalid_argument("brownian: correlation matrix is not positive semidefinite");
    const double a = k > 1 ? std::sqrt(1.0 - rho) : 1.0;
    const double b = k > 1 ? (std::sqrt(std::max(0.0, 1.0 + static_cast<double>(k - 1) * rho)) - a) / static_cast<double>(k) : 0.0;
    const double dt = 1.0 / std::sqrt(static_cast<double>(n_steps));
    std::vector<double> inc(k * n_steps);
    std::vector<double> w(k);
    for (std::size_t s = 0; s < n_steps; ++s) {
        double total = 0.0;
        for (std::size_t r = 0; r < k; ++r) {
            w[r] = rs.normal();
            total += w[r];
        }
        for (std::size_t r = 0; r < k; ++r) inc[r * n_steps + s] = dt * (a * w[r] + b * total);
    }
    return inc;
}

inline double brownian_functional_sample(std::size_t k, std::size_t n_steps, double rho, RandomSource& rs) {
    const auto inc = brownian_increments(k, n_steps, rho, rs);
    return max_over_cuts(inc, k, n_steps);
}

inline double brownian_functional_sample(std::size_t k, std::size_t n_steps, double rho, std::uint64_t seed) {
    RandomSource rs(seed);
    return brownian_functional_sample(k, n_steps, rho, rs);
}

// --- semicircle on [-2, 2] -------------------------------------------------

inline double semicircle_density(double x) {
    if (x <= -2.0 || x >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

inline double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(0.5 * x) / std::numbers::pi;
}

/// Inverse CDF by bisection to full double resolution.
inline double semicircle_quantile(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("semicircle_quantile: u outside [0,1]");
    double lo = -2.0, hi = 2.0;
    for (int it = 0; it < 200 && hi - lo > 4e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (semicircle_cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace rskld
