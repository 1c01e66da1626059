// rskld: command-line front end for the samplers, rate functions and
// Monte Carlo checks.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rskld/io.hpp"
#include "rskld/montecarlo.hpp"
#include "rskld/preset.hpp"
#include "rskld/rate_functions.hpp"
#include "rskld/rmt.hpp"
#include "rskld/tableaux.hpp"
#include "rskld/variational.hpp"
#include "rskld/wordmodel.hpp"

#ifndef RSKLD_PRESET_DIR
#define RSKLD_PRESET_DIR "presets"
#endif

using nlohmann::json;
using namespace rskld;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 42;
    bool seed_given = false;
    unsigned workers = 1;
    std::string out;
    std::string format = "csv";
    bool quiet = false;
};

/// A rectangular result that can be written as CSV or JSON.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> trailer;  // CSV comment lines after the rows
    json extra = json::object();       // JSON-only summary fields
};

json cell_to_json(const std::string& s) {
    if (s.empty()) return s;
    char* end = nullptr;
    if (s.find_first_not_of("0123456789") == std::string::npos && s.size() < 21) {
        const unsigned long long u = std::strtoull(s.c_str(), &end, 10);
        if (*end == '\0') return u;
    }
    const double v = std::strtod(s.c_str(), &end);
    if (end && *end == '\0' && std::isfinite(v)) return v;
    return s;
}

class Output {
public:
    explicit Output(const Globals& g) : format_(g.format) {
        if (!g.out.empty()) {
            file_ = std::make_unique<std::ofstream>(g.out, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open output file " + g.out);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

    void write(const Table& t) {
        auto& os = stream();
        if (format_ == "json") {
            json rows = json::array();
            for (const auto& r : t.rows) {
                json o = json::object();
                for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = cell_to_json(r[i]);
                rows.push_back(std::move(o));
            }
            json doc = {{"schema", t.name}, {"version", kSchemaVersion}, {"rows", rows}};
            for (auto& [k, v] : t.extra.items()) doc[k] = v;
            os << doc.dump(2) << '\n';
        } else {
            CsvWriter w(os, t.name, t.columns);
            for (const auto& r : t.rows) w.row(r);
            for (const auto& line : t.trailer) os << "# " << line << '\n';
        }
        os.flush();
    }

    void write_json(const json& j) {
        stream() << j.dump(2) << '\n';
        stream().flush();
    }

private:
    std::string format_;
    std::unique_ptr<std::ofstream> file_;
};

void log_config(const Globals& g, const std::string& command, json cfg) {
    if (g.quiet) return;
    cfg["command"] = command;
    cfg["seed"] = g.seed;
    cfg["workers"] = g.workers;
    cfg["format"] = g.format;
    if (!g.out.empty()) cfg["out"] = g.out;
    std::cerr << "rskld: config " << cfg.dump() << '\n';
}

std::vector<double> grid_or_point(const std::string& grid, const std::string& at) {
    if (!grid.empty() && !at.empty()) throw UsageError("give either --grid or --at, not both");
    if (!grid.empty()) return parse_grid(grid);
    if (!at.empty()) return parse_list(at);
    throw UsageError("one of --grid or --at is required");
}

AlphabetDistribution alphabet_from_flags(std::size_t uniform_m, const std::string& probs) {
    if (uniform_m > 0 && !probs.empty()) throw UsageError("give either --uniform or --probs, not both");
    if (uniform_m > 0) return uniform(uniform_m);
    if (!probs.empty()) return AlphabetDistribution(parse_list(probs));
    throw UsageError("one of --uniform or --probs is required");
}

// --- rate ------------------------------------------------------------------

struct RateArgs {
    std::string fn = "K";
    std::string grid, at, compare, point;
    double eta = -1.0;
    bool keta = false;
    std::string eta_grid;
};

Table cmd_rate(const RateArgs& a) {
    Table t;
    t.name = "rate";
    if (a.keta) {
        if (a.eta_grid.empty()) throw UsageError("--keta needs --eta-grid");
        const auto xs = grid_or_point(a.grid, a.at);
        const auto etas = parse_grid(a.eta_grid);
        t.name = "rate_keta";
        t.columns = {"x", "eta", "K_eta"};
        for (double eta : etas)
            for (double x : xs) t.rows.push_back({fmt(x), fmt(eta), fmt(rate_K_eta(x, eta).as_double())});
        return t;
    }
    if (a.fn == "Ir") {
        if (a.point.empty()) throw UsageError("--fn Ir needs --point x1,x2,...");
        const auto xs = parse_list(a.point);
        t.columns = {"point", "value"};
        t.rows.push_back({join_point(xs), fmt(rate_I_r(xs).as_double())});
        return t;
    }
    const auto xs = grid_or_point(a.grid, a.at);
    if (!a.compare.empty()) {
        if (a.fn != "K" || a.compare != "closed:variational")
            throw UsageError("--compare supports only --fn K --compare closed:variational");
        t.columns = {"x", "K_closed", "K_variational", "abs_diff"};
        double max_diff = 0.0;
        for (double x : xs) {
            const auto c = rate_K_closed(x), v = rate_K_variational(x);
            double d = 0.0;
            if (c.is_finite() != v.is_finite())
                d = std::numeric_limits<double>::infinity();
            else if (c.is_finite())
                d = std::abs(c.value() - v.value());
            max_diff = std::max(max_diff, d);
            t.rows.push_back({fmt(x), fmt(c.as_double()), fmt(v.as_double()), fmt(d)});
        }
        t.trailer.push_back("max_abs_diff," + fmt(max_diff));
        t.extra["max_abs_diff"] = max_diff;
        return t;
    }
    t.columns = {"x", "value"};
    for (double x : xs) {
        double v;
        if (a.fn == "I1") {
            v = rate_I_r(std::vector<double>{x}).as_double();
        } else if (a.fn == "J") {
            v = rate_J(x).as_double();
        } else if (a.fn == "Jp") {
            v = rate_J_prime(x);
        } else if (a.fn == "Jpp") {
            v = rate_J_second(x);
        } else if (a.fn == "K") {
            v = rate_K_closed(x).as_double();
        } else if (a.fn == "Keta") {
            if (a.eta < 0.0) throw UsageError("--fn Keta needs --eta");
            v = rate_K_eta(x, a.eta).as_double();
        } else if (a.fn == "Keta-asym") {
            if (a.eta < 0.0) throw UsageError("--fn Keta-asym needs --eta");
            v = k_eta_asymptotic(x, a.eta);
        } else {
            throw UsageError("unknown --fn " + a.fn);
        }
        t.rows.push_back({fmt(x), fmt(v)});
    }
    return t;
}

json cmd_equilibrium(double x) {
    const auto mu = equilibrium_measure(x);
    const auto mom = equilibrium_moments(mu);
    const double kv = rate_K_variational(x).value(), kc = rate_K_closed(x).value();
    return json{{"x", x},
                {"L", mu.L},
                {"c2", mu.c2},
                {"mass", mom.mass},
                {"mean", mom.mean},
                {"mean_plus_x", mom.mean + x},
                {"K_variational", kv},
                {"K_closed", kc},
                {"diff", std::abs(kv - kc)}};
}

// --- sample ----------------------------------------------------------------

enum SampleStream : std::uint64_t { kWords = 11, kShape = 12, kGue = 13, kTraceless = 14, kBlocks = 15, kBrownian = 16 };

struct SampleArgs {
    std::size_t uniform_m = 0;
    std::string probs, mults;
    std::uint64_t n = 100;
    std::uint64_t reps = 1;
    std::size_t m = 10;
    std::size_t rows = 0;
    std::size_t k = 4;
    std::size_t steps = 4096;
    double rho = 0.0;
    bool full = false;
};

template <class F>
std::vector<std::vector<std::string>> rows_in_parallel(std::uint64_t reps, unsigned workers, F&& make_row) {
    std::vector<std::vector<std::string>> rows(reps);
    struct Empty {};
    run_reps<Empty>(reps, workers, [] { return Empty{}; },
                    [&](Empty&, std::uint64_t rep) { rows[rep] = make_row(rep); });
    return rows;
}

Table cmd_sample(const std::string& target, const SampleArgs& a, const Globals& g) {
    Table t;
    t.name = "sample_" + target;
    if (a.reps == 0) throw UsageError("--reps must be positive");
    if (target == "words" || target == "shape") {
        const auto dist = alphabet_from_flags(a.uniform_m, a.probs);
        const std::size_t m = dist.size();
        if (target == "words") {
            t.columns = {"rep", "seed", "n", "letters"};
            t.rows = rows_in_parallel(a.reps, g.workers, [&](std::uint64_t rep) {
                const auto seed = derive_seed(g.seed, kWords, rep);
                const auto w = sample_word(dist, a.n, seed);
                std::string s;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    if (i) s += ' ';
                    s += std::to_string(w.letters[i]);
                }
                return std::vector<std::string>{std::to_string(rep), std::to_string(seed), std::to_string(a.n), s};
            });
        } else {
            t.columns = {"rep", "seed", "n"};
            for (std::size_t i = 1; i <= m; ++i) t.columns.push_back("R" + std::to_string(i));
            t.rows = rows_in_parallel(a.reps, g.workers, [&](std::uint64_t rep) {
                const auto seed = derive_seed(g.seed, kShape, rep);
                const auto shape = rsk_shape(sample_word(dist, a.n, seed), m);
                std::vector<std::string> r{std::to_string(rep), std::to_string(seed), std::to_string(a.n)};
                for (std::size_t i = 0; i < m; ++i) r.push_back(std::to_string(i < shape.rows.size() ? shape.rows[i] : 0));
                return r;
            });
        }
        return t;
    }
    if (target == "gue" || target == "traceless") {
        if (a.m < 1) throw UsageError("--m must be >= 1");
        const std::size_t r = a.rows == 0 ? a.m : std::min(a.rows, a.m);
        t.columns = {"rep", "seed", "m"};
        for (std::size_t i = 1; i <= r; ++i) t.columns.push_back("lambda" + std::to_string(i));
        const bool centered = target == "traceless";
        t.rows = rows_in_parallel(a.reps, g.workers, [&](std::uint64_t rep) {
            const auto seed = derive_seed(g.seed, centered ? kTraceless : kGue, rep);
            RandomSource rs(seed);
            auto s = sample_gue_spectrum(a.m, rs);
            if (centered) s = traceless(s);
            std::vector<std::string> row{std::to_string(rep), std::to_string(seed), std::to_string(a.m)};
            for (std::size_t i = 0; i < r; ++i) row.push_back(fmt(s.eigenvalues[i]));
            return row;
        });
        return t;
    }
    if (target == "blocks") {
        if (a.probs.empty() || a.mults.empty()) throw UsageError("sample blocks needs --probs and --mults");
        const BlockEnsembleSpec spec(parse_list(a.probs), parse_list<std::size_t>(a.mults));
        t.columns = {"rep", "seed", "lambda_tilde_1_0"};
        if (a.full) t.columns.push_back("block_spectra");
        t.rows = rows_in_parallel(a.reps, g.workers, [&](std::uint64_t rep) {
            const auto seed = derive_seed(g.seed, kBlocks, rep);
            const auto s = sample_block_traceless(spec, seed, a.full);
            std::vector<std::string> row{std::to_string(rep), std::to_string(seed), fmt(s.lambda_tilde_1_0)};
            if (a.full) {
                std::string b;
                for (std::size_t i = 0; i < s.blocks->size(); ++i) {
                    if (i) b += '|';
                    b += join_point((*s.blocks)[i]);
                }
                row.push_back(b);
            }
            return row;
        });
        return t;
    }
    if (target == "brownian") {
        t.columns = {"rep", "seed", "k", "steps", "rho", "F"};
        t.rows = rows_in_parallel(a.reps, g.workers, [&](std::uint64_t rep) {
            const auto seed = derive_seed(g.seed, kBrownian, rep);
            const double f = brownian_functional_sample(a.k, a.steps, a.rho, seed);
            return std::vector<std::string>{std::to_string(rep), std::to_string(seed), std::to_string(a.k),
                                            std::to_string(a.steps), fmt(a.rho), fmt(f)};
        });
        return t;
    }
    throw UsageError("unknown sample target " + target);
}

// --- verify ----------------------------------------------------------------

std::filesystem::path resolve_preset(const std::string& name, const std::string& dir) {
    std::filesystem::path p(name);
    if (p.extension() == ".json" && std::filesystem::exists(p)) return p;
    std::vector<std::filesystem::path> roots;
    if (!dir.empty()) roots.emplace_back(dir);
    if (const char* env = std::getenv("RSKLD_PRESETS")) roots.emplace_back(env);
    roots.emplace_back(RSKLD_PRESET_DIR);
    for (const auto& r : roots) {
        auto cand = r / (name + ".json");
        if (std::filesystem::exists(cand)) return cand;
    }
    throw UsageError("preset '" + name + "' not found");
}

int report_failures(const std::vector<CheckFailure>& fails, const std::string& what) {
    json list = json::array();
    for (const auto& f : fails) list.push_back({{"check", f.check}, {"detail", f.detail}});
    std::cerr << json{{"verify", what}, {"passed", fails.empty()}, {"failures", list}}.dump() << '\n';
    return fails.empty() ? 0 : kExitVerifyFailed;
}

int verify_ldp(const std::string& preset, const std::string& preset_dir, Globals g) {
    const auto path = resolve_preset(preset, preset_dir);
    const json doc = load_preset_file(path);
    if (!g.seed_given && doc.contains("seed")) g.seed = doc.at("seed").get<std::uint64_t>();
    log_config(g, "verify ldp", {{"preset", path.string()}});
    Output out(g);
    std::vector<CheckFailure> fails;
    Table t;
    t.name = "ldp_slope";
    t.columns = ldp_columns();
    for (const auto& e : doc.at("ldp")) {
        const auto id = e.at("id").get<std::string>();
        const auto cfg = experiment_from_json(e, g.seed, g.workers);
        if (cfg.model == Model::nonuniform_words && !g.quiet)
            for (const auto& w : hypothesis_warnings(*cfg.dist, cfg.n)) std::cerr << "rskld: warning: " << id << ": " << w << '\n';
        const auto rows = ldp_slope_experiment(cfg);
        for (const auto& r : rows) {
            const auto& est = r.estimate;
            t.rows.push_back({id, std::to_string(r.index), join_point(est.x), to_string(est.side), to_string(est.speed),
                              std::to_string(est.reps), std::to_string(est.hits), fmt(est.p_hat), fmt(est.stderr_),
                              fmt(est.rate_estimate.as_double()), fmt(r.rate_function.as_double()), fmt(r.ratio)});
        }
        check_experiment(id, e.value("check", json::object()), cfg, rows, fails);
    }
    out.write(t);
    return report_failures(fails, "ldp");
}

struct IdentityArgs {
    std::string which = "lambda-decomposition";
    std::size_t k = 5;
    std::string probs, mults;
    std::uint64_t reps = 100000;
    std::size_t steps = 4096;
    double rho = 0.0;
    double alpha = 1e-3;
    double threshold = -1.0;
};

int verify_identity(const IdentityArgs& a, const Globals& g) {
    ScalarSampler lhs = ScalarSampler::gue(a.k), rhs = ScalarSampler::gue(a.k);
    bool expect_pass = true;
    if (a.which == "lambda-decomposition") {
        BlockEnsembleSpec spec;
        if (!a.probs.empty() || !a.mults.empty()) {
            if (a.probs.empty() || a.mults.empty()) throw UsageError("--probs and --mults go together");
            spec = BlockEnsembleSpec(parse_list(a.probs), parse_list<std::size_t>(a.mults));
            if (spec.mults.front() != a.k) throw UsageError("the first block size must equal --k");
        } else {
            spec = BlockEnsembleSpec({1.0 / static_cast<double>(a.k)}, {a.k});
        }
        rhs = ScalarSampler::decomposition(spec);
    } else if (a.which == "brownian") {
        rhs = ScalarSampler::brownian(a.k, a.steps, a.rho);
    } else if (a.which == "self") {
        rhs = ScalarSampler::gue(a.k);
    } else if (a.which == "distinct") {
        rhs = ScalarSampler::gue(a.k + 1);
        expect_pass = false;
    } else {
        throw UsageError("unknown --which " + a.which);
    }
    log_config(g, "verify identity",
               {{"which", a.which}, {"lhs", lhs.describe()}, {"rhs", rhs.describe()}, {"reps", a.reps}, {"alpha", a.alpha}});
    KsOptions opt;
    opt.alpha = a.alpha;
    if (a.threshold > 0.0) opt.threshold = a.threshold;
    const auto r = identity_ks_test(lhs, rhs, a.reps, g.seed, g.workers, opt);
    Output out(g);
    Table t;
    t.name = "identity";
    t.columns = {"lhs", "rhs", "reps", "ks_statistic", "threshold", "ks_pass", "expected_pass"};
    t.rows.push_back({lhs.describe(), rhs.describe(), std::to_string(r.reps), fmt(r.statistic), fmt(r.threshold),
                      r.pass ? "1" : "0", expect_pass ? "1" : "0"});
    out.write(t);
    std::vector<CheckFailure> fails;
    if (r.pass != expect_pass)
        fails.push_back({"identity." + a.which, "KS statistic " + fmt(r.statistic) + " vs threshold " + fmt(r.threshold)});
    return report_failures(fails, "identity");
}

int verify_concentration(const std::string& preset, const std::string& preset_dir, Globals g) {
    const auto path = resolve_preset(preset, preset_dir);
    const json doc = load_preset_file(path);
    if (!doc.contains("concentration")) throw UsageError("preset has no concentration section");
    if (!g.seed_given && doc.contains("seed")) g.seed = doc.at("seed").get<std::uint64_t>();
    const auto c = concentration_from_json(doc.at("concentration"), g.seed, g.workers);
    log_config(g, "verify concentration", {{"preset", path.string()}});
    const auto rep = concentration_check(c);
    Output out(g);
    Table t;
    t.name = "concentration";
    t.columns = {"dim", "eps", "side", "t", "reps", "hits", "p_hat", "stderr"};
    for (const auto& p : rep.points)
        t.rows.push_back({std::to_string(p.dim), fmt(p.eps), to_string(p.side), fmt(p.t), std::to_string(p.estimate.reps),
                          std::to_string(p.estimate.hits), fmt(p.estimate.p_hat), fmt(p.estimate.stderr_)});
    auto fit_line = [](const char* side, const DecayFit& f) {
        return std::string("fit,") + side + ",c_hat=" + fmt(f.c_hat) + ",intercept=" + fmt(f.intercept) +
               ",max_residual=" + fmt(f.max_residual) + ",points=" + std::to_string(f.used) +
               (f.note.empty() ? "" : ",note=" + f.note);
    };
    t.trailer = {fit_line("upper", rep.upper), fit_line("lower", rep.lower)};
    auto fit_json = [](const DecayFit& f) {
        return json{{"c_hat", f.c_hat}, {"intercept", f.intercept}, {"max_residual", f.max_residual},
                    {"points", f.used}, {"sufficient", f.sufficient}, {"note", f.note}};
    };
    t.extra["fit_upper"] = fit_json(rep.upper);
    t.extra["fit_lower"] = fit_json(rep.lower);
    out.write(t);
    std::vector<CheckFailure> fails;
    for (auto [name, f] : {std::pair{"upper", &rep.upper}, std::pair{"lower", &rep.lower}}) {
        if (!f->sufficient)
            fails.push_back({std::string("concentration.") + name, f->note});
        else if (!f->pass())
            fails.push_back({std::string("concentration.") + name,
                             "c_hat = " + fmt(f->c_hat) + ", max residual = " + fmt(f->max_residual)});
    }
    return report_failures(fails, "concentration");
}

struct OracleArgs {
    std::size_t max_length = 8;
    std::size_t max_alphabet = 4;
};

/// Every word up to the given length and alphabet size: RSK prefix sums
/// against the exhaustive Greene search, plus the cut-point formulas.
int verify_oracle(const OracleArgs& a, const Globals& g) {
    if (a.max_length > kOracleMaxLength) throw UsageError("--max-length is limited to " + std::to_string(kOracleMaxLength));
    log_config(g, "verify oracle", {{"max_length", a.max_length}, {"max_alphabet", a.max_alphabet}});
    std::vector<CheckFailure> fails;
    std::uint64_t words = 0, comparisons = 0;
    for (std::size_t m = 1; m <= a.max_alphabet; ++m) {
        for (std::size_t n = 0; n <= a.max_length; ++n) {
            std::vector<Letter> letters(n, 0);
            while (true) {
                const Word w(letters, m);
                const auto shape = rsk_shape(w, m);
                const auto v = shape.prefix_sums();
                const auto counts = prefix_counts(w, m);
                for (std::size_t k = 1; k <= m; ++k) {
                    const auto greene = v_k_oracle(w, k);
                    ++comparisons;
                    if (v[k - 1] != greene || v_k_lattice(counts, k) != greene) {
                        std::string s;
                        for (auto l : letters) s += static_cast<char>('a' + l);
                        fails.push_back({"oracle.greene", "word '" + s + "' k=" + std::to_string(k)});
                    }
                }
                if (lis_weak(w) != v[0] || v1_dp(counts) != v[0]) fails.push_back({"oracle.v1", "n=" + std::to_string(n)});
                ++words;
                std::size_t i = 0;
                while (i < n && letters[i] + 1 == m) letters[i++] = 0;
                if (i == n) break;
                ++letters[i];
            }
        }
    }
    // Quadrature cross-checks of the closed forms.
    for (double x = 2.0; x <= 10.0 + 1e-12; x += 0.5) {
        const double d = std::abs(rate_I1_quadrature(x).value - rate_I1_antiderivative(x));
        if (d > 1e-10) fails.push_back({"oracle.I1_quadrature", "x=" + fmt(x) + " diff=" + fmt(d)});
    }
    for (double x = 0.25; x < 2.0; x += 0.25) {
        const double d = std::abs(rate_K_closed(x).value() - rate_K_variational(x).value());
        if (d > 1e-6) fails.push_back({"oracle.K_variational", "x=" + fmt(x) + " diff=" + fmt(d)});
    }
    Output out(g);
    Table t;
    t.name = "oracle";
    t.columns = {"words", "greene_comparisons", "failures"};
    t.rows.push_back({std::to_string(words), std::to_string(comparisons), std::to_string(fails.size())});
    out.write(t);
    return report_failures(fails, "oracle");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Young tableaux shapes, GUE spectra and their large deviations"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Root seed (default 42)")->each([&](const std::string&) { g.seed_given = true; });
    app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Write results to this file instead of stdout");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--quiet", g.quiet, "Do not log the resolved configuration to stderr");
    app.fallthrough();

    RateArgs ra;
    auto* rate = app.add_subcommand("rate", "Evaluate a rate function on a grid");
    rate->add_option("--fn", ra.fn, "I1, Ir, J, Jp, Jpp, K, Keta, Keta-asym")
        ->check(CLI::IsMember({"I1", "Ir", "J", "Jp", "Jpp", "K", "Keta", "Keta-asym"}));
    rate->add_option("--grid", ra.grid, "start:stop:step");
    rate->add_option("--at", ra.at, "Single value or comma list");
    rate->add_option("--point", ra.point, "Comma list x1,...,xr for --fn Ir");
    rate->add_option("--compare", ra.compare, "closed:variational (with --fn K)");
    rate->add_option("--eta", ra.eta, "eta in [0,1] for Keta and Keta-asym");
    rate->add_flag("--keta", ra.keta, "Tabulate K_eta over --grid x --eta-grid");
    rate->add_option("--eta-grid", ra.eta_grid, "start:stop:step for --keta");

    double eq_x = 1.0;
    auto* equil = app.add_subcommand("equilibrium", "Constrained equilibrium measure and both K evaluations");
    equil->add_option("--x", eq_x, "Right endpoint in (0, 2)")->required();

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "Draw words, shapes, spectra or Brownian functionals");
    sample->require_subcommand(1);
    auto add_common = [&](CLI::App* c) { c->add_option("--reps", sa.reps, "Number of samples"); };
    auto* s_words = sample->add_subcommand("words", "Random words");
    auto* s_shape = sample->add_subcommand("shape", "RSK shapes of random words");
    for (auto* c : {s_words, s_shape}) {
        c->add_option("--uniform", sa.uniform_m, "Uniform alphabet of this size");
        c->add_option("--probs", sa.probs, "Comma list of letter probabilities");
        c->add_option("--n", sa.n, "Word length");
        add_common(c);
    }
    auto* s_gue = sample->add_subcommand("gue", "GUE spectra");
    auto* s_tl = sample->add_subcommand("traceless", "Traceless GUE spectra");
    for (auto* c : {s_gue, s_tl}) {
        c->add_option("--m", sa.m, "Matrix dimension");
        c->add_option("--rows", sa.rows, "Leading eigenvalues to print (default all)");
        add_common(c);
    }
    auto* s_blocks = sample->add_subcommand("blocks", "Generalized traceless block ensemble");
    s_blocks->add_option("--probs", sa.probs, "Distinct probabilities, decreasing")->required();
    s_blocks->add_option("--mults", sa.mults, "Block sizes")->required();
    s_blocks->add_flag("--full", sa.full, "Also print every block spectrum");
    add_common(s_blocks);
    auto* s_brown = sample->add_subcommand("brownian", "Brownian cut functional on a grid");
    s_brown->add_option("--k", sa.k, "Number of Brownian motions");
    s_brown->add_option("--steps", sa.steps, "Grid size N");
    s_brown->add_option("--rho", sa.rho, "Pairwise correlation");
    add_common(s_brown);

    auto* verify = app.add_subcommand("verify", "Run checks; exit 0 iff all pass");
    verify->require_subcommand(1);
    std::string preset = "desk", preset_dir;
    auto* v_ldp = verify->add_subcommand("ldp", "Tail-slope experiments from a preset");
    auto* v_conc = verify->add_subcommand("concentration", "Concentration decay fit from a preset");
    for (auto* c : {v_ldp, v_conc}) {
        c->add_option("--preset", preset, "Preset name or path to a JSON file");
        c->add_option("--preset-dir", preset_dir, "Directory holding <name>.json presets");
    }
    IdentityArgs ia;
    auto* v_id = verify->add_subcommand("identity", "Two-sample KS test of an equality in law");
    v_id->add_option("--which", ia.which, "lambda-decomposition, brownian, self, distinct")
        ->check(CLI::IsMember({"lambda-decomposition", "brownian", "self", "distinct"}));
    v_id->add_option("--k", ia.k, "GUE dimension k");
    v_id->add_option("--probs", ia.probs, "Block probabilities (lambda-decomposition)");
    v_id->add_option("--mults", ia.mults, "Block sizes (lambda-decomposition)");
    v_id->add_option("--reps", ia.reps, "Samples per side (>= 100)");
    v_id->add_option("--steps", ia.steps, "Grid size for --which brownian");
    v_id->add_option("--rho", ia.rho, "Correlation for --which brownian");
    v_id->add_option("--alpha", ia.alpha, "KS level");
    v_id->add_option("--threshold", ia.threshold, "Fixed KS threshold instead of the null quantile");
    OracleArgs oa;
    auto* v_or = verify->add_subcommand("oracle", "Exhaustive RSK/Greene agreement and quadrature cross-checks");
    v_or->add_option("--max-length", oa.max_length, "Longest word");
    v_or->add_option("--max-alphabet", oa.max_alphabet, "Largest alphabet");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (rate->parsed()) {
            log_config(g, "rate", {{"fn", ra.fn}, {"grid", ra.grid}, {"at", ra.at}, {"compare", ra.compare}});
            Output(g).write(cmd_rate(ra));
            return 0;
        }
        if (equil->parsed()) {
            log_config(g, "equilibrium", {{"x", eq_x}});
            Output(g).write_json(cmd_equilibrium(eq_x));
            return 0;
        }
        if (sample->parsed()) {
            std::string target;
            for (auto* c : sample->get_subcommands()) target = c->get_name();
            log_config(g, "sample " + target, {{"reps", sa.reps}, {"n", sa.n}, {"m", sa.m}});
            Output(g).write(cmd_sample(target, sa, g));
            return 0;
        }
        if (v_ldp->parsed()) return verify_ldp(preset, preset_dir, g);
        if (v_conc->parsed()) return verify_concentration(preset, preset_dir, g);
        if (v_id->parsed()) return verify_identity(ia, g);
        if (v_or->parsed()) return verify_oracle(oa, g);
    } catch (const UsageError& e) {
        std::cerr << "rskld: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "rskld: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "rskld: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "rskld: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
