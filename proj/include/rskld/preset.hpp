#pragma once

// Preset files: JSON descriptions of slope experiments and concentration
// grids, plus the checks attached to each experiment.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rskld/montecarlo.hpp"

namespace rskld {

struct CheckFailure {
    std::string check;
    std::string detail;
};

inline constexpr std::uint64_t kStreamLdpPreset = 21;

/// FNV-1a. Stable across platforms, unlike std::hash, so experiment seeds
/// depend only on the experiment id.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

inline nlohmann::json load_preset_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::invalid_argument("cannot read preset " + p.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + p.string() + ": " + e.what());
    }
}

/// Experiment entry of a preset's "ldp" array. The seed is derived from the
/// root seed and the experiment id.
inline ExperimentConfig experiment_from_json(const nlohmann::json& j, std::uint64_t root_seed, unsigned workers) {
    ExperimentConfig c;
    try {
        c.model = model_from_string(j.at("model").get<std::string>());
        c.m = j.value("m", std::size_t{0});
        c.n = j.value("n", std::uint64_t{0});
        if (j.contains("probs")) c.dist = AlphabetDistribution(j.at("probs").get<std::vector<double>>());
        if (j.contains("top_heavy")) {
            const auto& th = j.at("top_heavy");
            c.dist = top_heavy(th.at("k").get<std::size_t>(), th.at("p_max").get<double>(),
                               th.at("tail_letters").get<std::size_t>());
        }
        if (c.dist) c.m = c.dist->size();
        c.points = j.at("points").get<std::vector<std::vector<double>>>();
        c.side = side_from_string(j.at("side").get<std::string>());
        c.speed = speed_from_string(j.at("speed").get<std::string>());
        c.reps = j.at("reps").get<std::uint64_t>();
        c.seed = derive_seed(root_seed, kStreamLdpPreset, fnv1a(j.at("id").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad experiment entry: ") + e.what());
    }
    c.workers = workers;
    c.validate();
    return c;
}

inline ConcentrationConfig concentration_from_json(const nlohmann::json& j, std::uint64_t seed, unsigned workers) {
    ConcentrationConfig c;
    try {
        c.model = model_from_string(j.at("model").get<std::string>());
        c.n = j.value("n", std::uint64_t{0});
        c.dims = j.at("dims").get<std::vector<std::size_t>>();
        c.p_max = j.value("p_max", 0.0);
        c.tail_letters = j.value("tail_letters", std::size_t{0});
        c.eps_upper = j.at("eps_upper").get<std::vector<double>>();
        c.eps_lower = j.at("eps_lower").get<std::vector<double>>();
        c.reps = j.at("reps").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad concentration entry: ") + e.what());
    }
    c.seed = seed;
    c.workers = workers;
    return c;
}

/// Event inclusion: when every threshold of q is at most (upper) the matching
/// threshold of p and q has no more rows, the event for p sits inside the
/// event for q. Shared replicates make the hit counts ordered exactly.
inline void check_nesting(const std::string& id, const ExperimentConfig& c, const std::vector<LdpRow>& rows,
                          std::vector<CheckFailure>& fails) {
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (i == j) continue;
            const auto& p = c.points[i];
            const auto& q = c.points[j];
            bool inside = q.size() <= p.size();
            for (std::size_t r = 0; inside && r < q.size(); ++r)
                inside = c.side == Side::upper ? p[r] >= q[r] : p[r] <= q[r];
            if (inside && rows[i].estimate.hits > rows[j].estimate.hits)
                fails.push_back({id + ".nesting", "event " + join_point(p) + " has more hits than containing event " +
                                                      join_point(q)});
        }
}

/// Runs the check named in an experiment's "check" object. Kinds: "ratio"
/// (|rate_estimate / rate - 1| <= tolerance), "positive_monotone" (finite
/// positive rate estimates, p_hat monotone toward the tail) and "none".
/// Nesting is always checked.
inline void check_experiment(const std::string& id, const nlohmann::json& check, const ExperimentConfig& c,
                             const std::vector<LdpRow>& rows, std::vector<CheckFailure>& fails) {
    check_nesting(id, c, rows, fails);
    const std::string kind = check.value("kind", "none");
    if (kind == "none") return;
    if (kind == "ratio") {
        const double tol = check.at("tolerance").get<double>();
        for (const auto& r : rows)
            if (!(std::abs(r.ratio - 1.0) <= tol))
                fails.push_back({id + ".ratio", "point " + join_point(r.estimate.x) + ": rate_estimate/rate = " +
                                                    fmt(r.ratio) + " outside 1 +/- " + fmt(tol)});
        return;
    }
    if (kind == "positive_monotone") {
        for (const auto& r : rows)
            if (r.estimate.rate_estimate.is_infinite() || !(r.estimate.rate_estimate.value() > 0.0))
                fails.push_back({id + ".positive", "point " + join_point(r.estimate.x) +
                                                       ": rate estimate not finite and positive"});
        std::vector<std::size_t> order(rows.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return c.points[a][0] < c.points[b][0]; });
        for (std::size_t i = 1; i < order.size(); ++i) {
            const auto& prev = rows[order[i - 1]].estimate;
            const auto& cur = rows[order[i]].estimate;
            const bool ok = c.side == Side::lower ? prev.p_hat <= cur.p_hat : prev.p_hat >= cur.p_hat;
            if (!ok)
                fails.push_back({id + ".monotone", "p_hat not monotone between " + join_point(prev.x) + " and " +
                                                       join_point(cur.x)});
        }
        return;
    }
    throw std::invalid_argument("unknown check kind '" + kind + "' in experiment " + id);
}

}  // namespace rskld
