#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rskld/io.hpp"
#include "rskld/random.hpp"
#include "rskld/rate_functions.hpp"
#include "rskld/rmt.hpp"
#include "rskld/stats.hpp"
#include "rskld/tableaux.hpp"
#include "rskld/variational.hpp"
#include "rskld/wordmodel.hpp"

namespace rskld {

enum class Side { upper, lower };
enum class Speed { m, m2, k, k2 };
enum class Model { uniform_words, nonuniform_words, traceless_gue };

inline const char* to_string(Side s) { return s == Side::upper ? "upper" : "lower"; }

inline const char* to_string(Speed s) {
    switch (s) {
        case Speed::m: return "m";
        case Speed::m2: return "m2";
        case Speed::k: return "k";
        case Speed::k2: return "k2";
    }
    return "?";
}

inline const char* to_string(Model m) {
    switch (m) {
        case Model::uniform_words: return "uniform_words";
        case Model::nonuniform_words: return "nonuniform_words";
        case Model::traceless_gue: return "traceless_gue";
    }
    return "?";
}

inline Side side_from_string(const std::string& s) {
    if (s == "upper") return Side::upper;
    if (s == "lower") return Side::lower;
    throw std::invalid_argument("unknown side '" + s + "'");
}

inline Speed speed_from_string(const std::string& s) {
    if (s == "m") return Speed::m;
    if (s == "m2") return Speed::m2;
    if (s == "k") return Speed::k;
    if (s == "k2") return Speed::k2;
    throw std::invalid_argument("unknown speed '" + s + "'");
}

inline Model model_from_string(const std::string& s) {
    if (s == "uniform_words") return Model::uniform_words;
    if (s == "nonuniform_words") return Model::nonuniform_words;
    if (s == "traceless_gue") return Model::traceless_gue;
    throw std::invalid_argument("unknown model '" + s + "'");
}

// --- worker pool -----------------------------------------------------------

/// Runs body(state, rep) for rep in [0, reps) on `workers` threads, each with
/// its own State from init(). Reps are handed out in chunks from a shared
/// counter; callers must make per-rep work depend only on rep (seed
/// substreams) and reduce states order-independently.
template <class State, class Init, class Body>
std::vector<State> run_reps(std::uint64_t reps, unsigned workers, Init&& init, Body&& body) {
    workers = std::max(1u, workers);
    std::vector<State> states;
    states.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) states.push_back(init());
    const std::uint64_t chunk = std::max<std::uint64_t>(1, std::min<std::uint64_t>(64, reps / (8 * workers) + 1));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&](unsigned w) {
        try {
            while (true) {
                const std::uint64_t begin = next.fetch_add(chunk);
                if (begin >= reps) break;
                const std::uint64_t end = std::min(reps, begin + chunk);
                for (std::uint64_t rep = begin; rep < end; ++rep) body(states[w], rep);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(reps);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    return states;
}

// --- tail estimation -------------------------------------------------------

struct TailEstimate {
    std::vector<double> x;
    Side side = Side::upper;
    std::uint64_t hits = 0;
    std::uint64_t reps = 0;
    double p_hat = 0.0;
    double stderr_ = 0.0;
    Speed speed = Speed::m;
    double speed_value = 1.0;
    RateValue rate_estimate = RateValue::infinity();
};

inline TailEstimate make_estimate(std::vector<double> x, Side side, std::uint64_t hits, std::uint64_t reps,
                                  Speed speed, double speed_value) {
    TailEstimate e;
    e.x = std::move(x);
    e.side = side;
    e.hits = hits;
    e.reps = reps;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(reps);
    e.stderr_ = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(reps));
    e.speed = speed;
    e.speed_value = speed_value;
    e.rate_estimate = hits == 0 ? RateValue::infinity() : RateValue::finite(-std::log(e.p_hat) / speed_value);
    return e;
}

struct ExperimentConfig {
    Model model = Model::uniform_words;
    /// Alphabet size for uniform words, matrix dimension for the traceless GUE.
    std::size_t m = 0;
    /// Letter law for the non-uniform model.
    std::optional<AlphabetDistribution> dist;
    std::uint64_t n = 0;
    /// Each point lists thresholds for rows 1..r; upper events are joint.
    std::vector<std::vector<double>> points;
    Side side = Side::upper;
    Speed speed = Speed::m;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    std::size_t rows_needed() const {
        std::size_t r = 1;
        for (const auto& p : points) r = std::max(r, p.size());
        return r;
    }

    std::size_t multiplicity() const { return dist ? multiplicity_stats(*dist).k : m; }

    double speed_value() const {
        const double d = model == Model::nonuniform_words ? static_cast<double>(multiplicity()) : static_cast<double>(m);
        return (speed == Speed::m || speed == Speed::k) ? d : d * d;
    }

    void validate() const {
        if (reps < 1) throw std::invalid_argument("experiment: reps must be >= 1");
        for (const auto& p : points) {
            if (p.empty()) throw std::invalid_argument("experiment: empty threshold point");
            for (double v : p)
                if (!std::isfinite(v)) throw std::invalid_argument("experiment: thresholds must be finite");
            if (side == Side::lower && p.size() != 1)
                throw std::invalid_argument("experiment: lower-tail events use the first row only");
        }
        switch (model) {
            case Model::uniform_words:
                if (m < 1 || n < 1) throw std::invalid_argument("experiment: uniform model needs m, n >= 1");
                if (rows_needed() > m) throw std::invalid_argument("experiment: more rows than letters");
                break;
            case Model::nonuniform_words:
                if (!dist || n < 1) throw std::invalid_argument("experiment: non-uniform model needs a distribution and n");
                if (rows_needed() != 1) throw std::invalid_argument("experiment: non-uniform model uses the first row only");
                break;
            case Model::traceless_gue:
                if (m < 1) throw std::invalid_argument("experiment: traceless model needs m >= 1");
                if (rows_needed() > m) throw std::invalid_argument("experiment: more rows than eigenvalues");
                break;
        }
    }
};

namespace detail {

inline constexpr std::uint64_t kStreamRowTail = 1;
inline constexpr std::uint64_t kStreamSamplerA = 101;
inline constexpr std::uint64_t kStreamSamplerB = 102;
inline constexpr std::uint64_t kStreamConcentration = 201;

/// Normalized top rows (or scaled eigenvalues) of one replicate.
class ReplicateSampler {
public:
    explicit ReplicateSampler(const ExperimentConfig& cfg) : cfg_(cfg), rows_(cfg.rows_needed()) {
        if (cfg.model == Model::uniform_words) letters_.emplace(uniform(cfg.m));
        if (cfg.model == Model::nonuniform_words) {
            letters_.emplace(*cfg.dist);
            stats_ = multiplicity_stats(*cfg.dist);
        }
    }

    /// Fills out[0..r) for the replicate with the given seed.
    void sample(std::uint64_t seed, std::vector<double>& out) const {
        out.assign(rows_, 0.0);
        switch (cfg_.model) {
            case Model::uniform_words: {
                Xoshiro256pp eng(seed);
                const std::size_t m = cfg_.m;
                if (rows_ == 1) {
                    const auto r1 = first_row(m, eng);
                    out[0] = (static_cast<double>(r1) - static_cast<double>(cfg_.n) / static_cast<double>(m)) /
                             std::sqrt(static_cast<double>(cfg_.n));
                } else {
                    YoungShape shape;
                    if (m <= 256) {
                        RskCountBuilder b(m);
                        letters_->stream(cfg_.n, eng, [&](Letter a) { b.insert(a); });
                        shape = b.shape();
                    } else {
                        RskRowBuilder b(m);
                        letters_->stream(cfg_.n, eng, [&](Letter a) { b.insert(a); });
                        shape = b.shape();
                    }
                    out = normalize_uniform(shape, cfg_.n, m, rows_).values;
                }
                break;
            }
            case Model::nonuniform_words: {
                Xoshiro256pp eng(seed);
                const auto r1 = first_row(cfg_.dist->size(), eng);
                out[0] = normalize_nonuniform(r1, cfg_.n, stats_.p_max, stats_.k);
                break;
            }
            case Model::traceless_gue: {
                RandomSource rs(seed);
                const auto s = sample_traceless_spectrum(cfg_.m, rs);
                const double scale = 1.0 / std::sqrt(static_cast<double>(cfg_.m));
                for (std::size_t i = 0; i < rows_; ++i) out[i] = s.eigenvalues[i] * scale;
                break;
            }
        }
    }

private:
    std::uint64_t first_row(std::size_t m, Xoshiro256pp& eng) const {
        if (m <= 64 && cfg_.n < (std::uint64_t{1} << 32)) {
            WeakLisCounter c(m);
            letters_->stream(cfg_.n, eng, [&](Letter a) { c.push(a); });
            return c.value();
        }
        PatienceCounter c;
        letters_->stream(cfg_.n, eng, [&](Letter a) { c.push(a); });
        return c.value();
    }

    const ExperimentConfig& cfg_;
    std::size_t rows_;
    std::optional<LetterSampler> letters_;
    MultiplicityStats stats_;
};

inline bool event_holds(std::span<const double> values, std::span<const double> x, Side side) {
    if (side == Side::lower) return values[0] <= x[0];
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(values[i] >= x[i])) return false;
    return true;
}

}  // namespace detail

/// One estimate per configured point. All points share the same replicates,
/// so nested events give monotone estimates.
inline std::vector<TailEstimate> estimate_row_tail(const ExperimentConfig& cfg) {
    cfg.validate();
    const detail::ReplicateSampler sampler(cfg);
    const std::size_t np = cfg.points.size();
    struct State {
        std::vector<std::uint64_t> hits;
        std::vector<double> values;
    };
    auto states = run_reps<State>(
        cfg.reps, cfg.workers, [&] { return State{std::vector<std::uint64_t>(np, 0), {}}; },
        [&](State& st, std::uint64_t rep) {
            sampler.sample(derive_seed(cfg.seed, detail::kStreamRowTail, rep), st.values);
            for (std::size_t p = 0; p < np; ++p)
                if (detail::event_holds(st.values, cfg.points[p], cfg.side)) ++st.hits[p];
        });
    std::vector<TailEstimate> out;
    for (std::size_t p = 0; p < np; ++p) {
        std::uint64_t hits = 0;
        for (const auto& st : states) hits += st.hits[p];
        out.push_back(make_estimate(cfg.points[p], cfg.side, hits, cfg.reps, cfg.speed, cfg.speed_value()));
    }
    return out;
}

/// Normalized first row of every replicate, in rep order. Uses the same
/// substreams as estimate_row_tail.
inline std::vector<double> sample_first_rows(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.points = {{0.0}};
    c.validate();
    const detail::ReplicateSampler sampler(c);
    std::vector<double> out(c.reps);
    struct State {
        std::vector<double> values;
    };
    run_reps<State>(c.reps, c.workers, [] { return State{}; }, [&](State& st, std::uint64_t rep) {
        sampler.sample(derive_seed(c.seed, detail::kStreamRowTail, rep), st.values);
        out[rep] = st.values[0];
    });
    return out;
}

/// Tail of the largest scaled traceless GUE eigenvalue; speed m (upper) or m^2 (lower).
inline TailEstimate estimate_eigen_tail(std::size_t m, double x, Side side, std::uint64_t reps, std::uint64_t seed,
                                        unsigned workers = 1) {
    ExperimentConfig cfg;
    cfg.model = Model::traceless_gue;
    cfg.m = m;
    cfg.points = {{x}};
    cfg.side = side;
    cfg.speed = side == Side::upper ? Speed::m : Speed::m2;
    cfg.reps = reps;
    cfg.seed = seed;
    cfg.workers = workers;
    return estimate_row_tail(cfg).front();
}

/// Warnings when a non-uniform experiment is outside the regime where the
/// limit theorems apply at this n.
inline std::vector<std::string> hypothesis_warnings(const AlphabetDistribution& dist, std::uint64_t n) {
    std::vector<std::string> w;
    const auto s = multiplicity_stats(dist);
    const double k = static_cast<double>(s.k), nn = static_cast<double>(n);
    if (k * k * k / s.p_max > nn / 10.0)
        w.push_back("k^3/p_max = " + fmt(k * k * k / s.p_max) + " exceeds n/10 = " + fmt(nn / 10.0));
    if (s.p_2nd) {
        const double q = nn * (*s.p_2nd) * (*s.p_2nd) / s.p_max;
        if (q > std::exp(-k))
            w.push_back("n p_2nd^2 / p_max = " + fmt(q) + " is not small against exp(-k) = " + fmt(std::exp(-k)));
    }
    return w;
}

// --- distributional identities ---------------------------------------------

/// A scalar-valued sampler addressed by id, for two-sample comparisons.
struct ScalarSampler {
    enum class Kind { gue_lambda1, traceless_lambda1, block_decomposition, brownian };
    Kind kind = Kind::gue_lambda1;
    std::size_t dim = 1;
    BlockEnsembleSpec block;
    std::size_t steps = 4096;
    double rho = 0.0;

    /// Largest eigenvalue of the k x k GUE.
    static ScalarSampler gue(std::size_t k) { return {Kind::gue_lambda1, k, {}, 0, 0.0}; }
    static ScalarSampler traceless(std::size_t m) { return {Kind::traceless_lambda1, m, {}, 0, 0.0}; }
    /// lambda~_1^0 + sqrt(p_max) g with g independent standard normal.
    static ScalarSampler decomposition(BlockEnsembleSpec spec) {
        return {Kind::block_decomposition, spec.mults.front(), std::move(spec), 0, 0.0};
    }
    static ScalarSampler brownian(std::size_t k, std::size_t steps, double rho) {
        return {Kind::brownian, k, {}, steps, rho};
    }

    double draw(RandomSource& rs) const {
        switch (kind) {
            case Kind::gue_lambda1: return sample_gue_spectrum(dim, rs).eigenvalues.front();
            case Kind::traceless_lambda1: return sample_traceless_spectrum(dim, rs).eigenvalues.front();
            case Kind::block_decomposition: {
                const double l = sample_block_traceless(block, rs).lambda_tilde_1_0;
                return l + std::sqrt(block.p_max()) * rs.normal();
            }
            case Kind::brownian: return brownian_functional_sample(dim, steps, rho, rs);
        }
        return 0.0;
    }

    std::string describe() const {
        switch (kind) {
            case Kind::gue_lambda1: return "gue_lambda1(k=" + std::to_string(dim) + ")";
            case Kind::traceless_lambda1: return "traceless_lambda1(m=" + std::to_string(dim) + ")";
            case Kind::block_decomposition: return "block_decomposition(d1=" + std::to_string(dim) + ",p_max=" + fmt(block.p_max()) + ")";
            case Kind::brownian:
                return "brownian(k=" + std::to_string(dim) + ",N=" + std::to_string(steps) + ",rho=" + fmt(rho) + ")";
        }
        return "?";
    }
};

inline std::vector<double> sample_scalars(const ScalarSampler& s, std::uint64_t reps, std::uint64_t seed,
                                          std::uint64_t stream, unsigned workers = 1) {
    std::vector<double> out(reps);
    struct Empty {};
    run_reps<Empty>(reps, workers, [] { return Empty{}; }, [&](Empty&, std::uint64_t rep) {
        RandomSource rs(derive_seed(seed, stream, rep));
        out[rep] = s.draw(rs);
    });
    return out;
}

struct KsOptions {
    double alpha = 1e-3;
    /// Replaces the null critical value when set (e.g. to absorb grid bias).
    std::optional<double> threshold;
};

struct KsReport {
    double statistic = 0.0;
    double threshold = 0.0;
    std::uint64_t reps = 0;
    bool pass = false;
};

/// Two-sample KS test between independent draws of `a` and `b`.
inline KsReport identity_ks_test(const ScalarSampler& a, const ScalarSampler& b, std::uint64_t reps,
                                 std::uint64_t seed, unsigned workers = 1, const KsOptions& opt = {}) {
    if (reps < 100) throw std::invalid_argument("identity_ks_test: reps must be >= 100");
    auto xa = sample_scalars(a, reps, seed, detail::kStreamSamplerA, workers);
    auto xb = sample_scalars(b, reps, seed, detail::kStreamSamplerB, workers);
    KsReport r;
    r.reps = reps;
    r.statistic = ks_two_sample(std::move(xa), std::move(xb));
    r.threshold = opt.threshold ? *opt.threshold : ks_critical_value(reps, reps, opt.alpha);
    r.pass = r.statistic <= r.threshold;
    return r;
}

// --- concentration ---------------------------------------------------------

struct ConcentrationConfig {
    Model model = Model::uniform_words;
    std::uint64_t n = 0;
    /// m for the uniform and traceless models, k for the non-uniform one.
    std::vector<std::size_t> dims;
    /// Non-uniform family: k letters at p_max plus `tail_letters` equal letters.
    double p_max = 0.0;
    std::size_t tail_letters = 0;
    std::vector<double> eps_upper;
    std::vector<double> eps_lower;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct ConcentrationPoint {
    std::size_t dim = 0;
    double eps = 0.0;
    Side side = Side::upper;
    double t = 0.0;  ///< m eps^{3/2} (upper) or m^2 eps^3 (lower)
    TailEstimate estimate;
};

struct DecayFit {
    bool sufficient = false;
    std::size_t used = 0;
    double intercept = 0.0;
    double c_hat = 0.0;
    double max_residual = 0.0;  ///< max of log p_hat - fitted log p
    bool within_envelope = false;
    std::string note;

    bool pass(double safety = 10.0) const {
        return sufficient && c_hat > 0.0 && within_envelope && max_residual <= std::log(safety);
    }
};

struct ConcentrationReport {
    std::vector<ConcentrationPoint> points;
    DecayFit upper;
    DecayFit lower;
    bool pass() const { return upper.pass() && lower.pass(); }
};

/// Least squares log p_hat = a - c t over the points with p_hat > 0.
inline DecayFit fit_decay(const std::vector<ConcentrationPoint>& pts, Side side, double safety = 10.0) {
    std::vector<double> t, y;
    for (const auto& p : pts)
        if (p.side == side && p.estimate.hits > 0) {
            t.push_back(p.t);
            y.push_back(std::log(p.estimate.p_hat));
        }
    DecayFit f;
    f.used = t.size();
    if (t.size() < 3) {
        f.note = "insufficient data: " + std::to_string(t.size()) + " nonzero tail estimates (need 3)";
        return f;
    }
    const auto ts = mean_std(t), ys = mean_std(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxy += (t[i] - ts.mean) * (y[i] - ys.mean);
        sxx += (t[i] - ts.mean) * (t[i] - ts.mean);
    }
    if (!(sxx > 0.0)) {
        f.note = "insufficient data: all nonzero estimates share one value of the decay variable";
        return f;
    }
    f.sufficient = true;
    const double slope = sxy / sxx;
    f.c_hat = -slope;
    f.intercept = ys.mean - slope * ts.mean;
    f.max_residual = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i)
        f.max_residual = std::max(f.max_residual, y[i] - (f.intercept + slope * t[i]));
    f.within_envelope = f.max_residual <= std::log(safety);
    return f;
}

inline ConcentrationReport concentration_check(const ConcentrationConfig& cfg) {
    for (double e : cfg.eps_upper)
        if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("concentration: eps must lie in (0,1)");
    for (double e : cfg.eps_lower)
        if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("concentration: eps must lie in (0,1)");
    ConcentrationReport rep;
    for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
        const std::size_t d = cfg.dims[di];
        ExperimentConfig ec;
        ec.model = cfg.model;
        ec.n = cfg.n;
        ec.reps = cfg.reps;
        ec.workers = cfg.workers;
        ec.seed = derive_seed(cfg.seed, detail::kStreamConcentration, d);
        if (cfg.model == Model::nonuniform_words) {
            ec.dist = top_heavy(d, cfg.p_max, cfg.tail_letters);
            ec.m = ec.dist->size();
        } else {
            ec.m = d;
        }
        const double dd = static_cast<double>(d);
        const auto xi = sample_first_rows(ec);
        auto tail = [&](double e, Side side) {
            const double x = side == Side::upper ? 2.0 * (1.0 + e) : 2.0 * (1.0 - e);
            std::uint64_t hits = 0;
            for (double v : xi) hits += side == Side::upper ? (v >= x) : (v <= x);
            const bool nonuni = cfg.model == Model::nonuniform_words;
            const Speed sp = side == Side::upper ? (nonuni ? Speed::k : Speed::m) : (nonuni ? Speed::k2 : Speed::m2);
            const double sv = side == Side::upper ? dd : dd * dd;
            return make_estimate({x}, side, hits, cfg.reps, sp, sv);
        };
        for (double e : cfg.eps_upper) rep.points.push_back({d, e, Side::upper, dd * std::pow(e, 1.5), tail(e, Side::upper)});
        for (double e : cfg.eps_lower) rep.points.push_back({d, e, Side::lower, dd * dd * e * e * e, tail(e, Side::lower)});
    }
    rep.upper = fit_decay(rep.points, Side::upper);
    rep.lower = fit_decay(rep.points, Side::lower);
    return rep;
}

// --- slope tables ----------------------------------------------------------

struct LdpRow {
    std::size_t index = 0;
    TailEstimate estimate;
    RateValue rate_function = RateValue::finite(0.0);
    double ratio = std::numeric_limits<double>::quiet_NaN();
};

/// Rate function matched to an experiment: I_r for upper tails, K for lower
/// tails of the uniform and traceless models, K_eta with eta = k p_max for
/// lower tails of the non-uniform model.
/// Upper events take the infimum of I_r over the event, which sits at
/// y_i = max(2, x_i, ..., x_r); K and K_eta are decreasing, so lower events use x.
inline RateValue matching_rate(const ExperimentConfig& cfg, std::span<const double> x) {
    if (cfg.side == Side::upper) {
        std::vector<double> y(x.begin(), x.end());
        double floor = 2.0;
        for (std::size_t i = y.size(); i-- > 0;) y[i] = floor = std::max(floor, y[i]);
        return rate_I_r(y);
    }
    if (cfg.model == Model::nonuniform_words) return rate_K_eta(x[0], multiplicity_stats(*cfg.dist).eta_hat);
    return rate_K_closed(x[0]);
}

inline std::vector<LdpRow> ldp_slope_experiment(const ExperimentConfig& cfg) {
    std::vector<LdpRow> rows;
    if (cfg.points.empty()) return rows;
    const auto est = estimate_row_tail(cfg);
    for (std::size_t i = 0; i < est.size(); ++i) {
        LdpRow r;
        r.index = i;
        r.estimate = est[i];
        r.rate_function = matching_rate(cfg, cfg.points[i]);
        if (r.estimate.rate_estimate.is_infinite())
            r.ratio = std::numeric_limits<double>::infinity();
        else if (r.rate_function.is_finite() && r.rate_function.value() > 0.0)
            r.ratio = r.estimate.rate_estimate.value() / r.rate_function.value();
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string join_point(std::span<const double> x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ';';
        s += fmt(x[i]);
    }
    return s;
}

inline const std::vector<std::string>& ldp_columns() {
    static const std::vector<std::string> cols = {"experiment", "point", "x",        "side",      "speed",
                                                  "reps",       "hits",  "p_hat",    "stderr",    "rate_estimate",
                                                  "rate_function", "ratio"};
    return cols;
}

inline void write_ldp_rows(CsvWriter& w, const std::string& experiment, const std::vector<LdpRow>& rows) {
    for (const auto& r : rows) {
        const auto& e = r.estimate;
        w.row({experiment, std::to_string(r.index), join_point(e.x), to_string(e.side), to_string(e.speed),
               std::to_string(e.reps), std::to_string(e.hits), fmt(e.p_hat), fmt(e.stderr_),
               fmt(e.rate_estimate.as_double()), fmt(r.rate_function.as_double()), fmt(r.ratio)});
    }
}

}  // namespace rskld
