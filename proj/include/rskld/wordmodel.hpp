#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rskld/random.hpp"

namespace rskld {

using Letter = std::uint32_t;

inline constexpr double kDefaultTieTolerance = 1e-12;

/// Letter probabilities p_1..p_m of an ordered alphabet; letter j has index j-1.
class AlphabetDistribution {
public:
    explicit AlphabetDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) throw std::invalid_argument("alphabet must have at least one letter");
        double total = 0.0;
        for (double p : probs_) {
            if (!(p > 0.0) || !std::isfinite(p))
                throw std::invalid_argument("letter probabilities must be strictly positive");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("letter probabilities must sum to 1");
    }

    std::size_t size() const noexcept { return probs_.size(); }
    std::span<const double> probs() const noexcept { return probs_; }
    double operator[](std::size_t j) const { return probs_.at(j); }

    bool operator==(const AlphabetDistribution&) const = default;

private:
    std::vector<double> probs_;
};

inline AlphabetDistribution uniform(std::size_t m) {
    if (m == 0) throw std::invalid_argument("uniform: alphabet size must be positive");
    return AlphabetDistribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

/// k letters of probability p_max followed by `tail_letters` letters sharing
/// the remaining mass equally (the non-uniform model with multiplicity k).
inline AlphabetDistribution top_heavy(std::size_t k, double p_max, std::size_t tail_letters) {
    if (k == 0) throw std::invalid_argument("top_heavy: k must be positive");
    const double rest = 1.0 - static_cast<double>(k) * p_max;
    if (tail_letters == 0) {
        if (std::abs(rest) > 1e-12) throw std::invalid_argument("top_heavy: k p_max must be 1 without tail letters");
        return uniform(k);
    }
    if (!(rest > 0.0)) throw std::invalid_argument("top_heavy: k p_max must be < 1");
    const double p2 = rest / static_cast<double>(tail_letters);
    if (!(p2 < p_max)) throw std::invalid_argument("top_heavy: tail probability must be below p_max");
    std::vector<double> probs(k, p_max);
    probs.resize(k + tail_letters, p2);
    // Absorb rounding so the total is 1 to within the validator's tolerance.
    double total = 0.0;
    for (double p : probs) total += p;
    probs.back() += 1.0 - total;
    return AlphabetDistribution(std::move(probs));
}

/// Top-probability structure of an alphabet: p_max, p_2nd, the arg-max set J
/// and its size k, and eta_hat = k * p_max.
struct MultiplicityStats {
    double p_max = 0.0;
    std::optional<double> p_2nd;
    std::vector<Letter> J;
    std::size_t k = 0;
    double eta_hat = 0.0;
};

/// Probabilities within `tie_tol` of p_max count as ties.
inline MultiplicityStats multiplicity_stats(const AlphabetDistribution& dist,
                                            double tie_tol = kDefaultTieTolerance) {
    MultiplicityStats s;
    const auto probs = dist.probs();
    s.p_max = *std::max_element(probs.begin(), probs.end());
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (s.p_max - probs[j] <= tie_tol) {
            s.J.push_back(static_cast<Letter>(j));
        } else if (!s.p_2nd || probs[j] > *s.p_2nd) {
            s.p_2nd = probs[j];
        }
    }
    s.k = s.J.size();
    s.eta_hat = static_cast<double>(s.k) * s.p_max;
    return s;
}

/// A word over {0, ..., m-1}.
struct Word {
    Word() = default;
    Word(std::vector<Letter> ls, std::size_t m) : letters(std::move(ls)), alphabet_size(m) {
        for (Letter a : letters)
            if (a >= m) throw std::invalid_argument("letter index out of range for alphabet");
    }

    /// Convenience for tests and examples: "abca" -> {0, 1, 2, 0}.
    static Word from_string(const std::string& s, std::size_t m) {
        std::vector<Letter> ls;
        ls.reserve(s.size());
        for (char c : s) ls.push_back(static_cast<Letter>(c - 'a'));
        return Word(std::move(ls), m);
    }

    std::size_t size() const noexcept { return letters.size(); }

    std::vector<Letter> letters;
    std::size_t alphabet_size = 0;
};

/// Vose alias table. One 64-bit draw per letter: the high half of r*m picks
/// the column and the low half is the acceptance variate.
class AliasTable {
public:
    explicit AliasTable(const AlphabetDistribution& dist) {
        const std::size_t m = dist.size();
        threshold_.assign(m, 0);
        alias_.assign(m, 0);
        accept_all_.assign(m, 0);
        std::vector<double> scaled(m);
        std::vector<std::size_t> small, large;
        for (std::size_t j = 0; j < m; ++j) {
            scaled[j] = dist[j] * static_cast<double>(m);
            (scaled[j] < 1.0 ? small : large).push_back(j);
        }
        while (!small.empty() && !large.empty()) {
            const std::size_t s = small.back();
            small.pop_back();
            const std::size_t l = large.back();
            set_column(s, scaled[s], l);
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::size_t j : large) set_column(j, 1.0, j);
        for (std::size_t j : small) set_column(j, 1.0, j);  // rounding leftovers
    }

    std::size_t size() const noexcept { return alias_.size(); }

    template <class Engine>
    Letter operator()(Engine& eng) const noexcept {
        const unsigned __int128 prod =
            static_cast<unsigned __int128>(eng()) * static_cast<unsigned __int128>(alias_.size());
        const auto col = static_cast<std::size_t>(prod >> 64);
        const auto frac = static_cast<std::uint64_t>(prod);
        if (accept_all_[col] || frac < threshold_[col]) return static_cast<Letter>(col);
        return alias_[col];
    }

private:
    void set_column(std::size_t j, double prob, std::size_t alias) {
        alias_[j] = static_cast<Letter>(alias);
        if (prob >= 1.0) {
            accept_all_[j] = 1;
            threshold_[j] = 0;
        } else {
            accept_all_[j] = 0;
            threshold_[j] = static_cast<std::uint64_t>(std::ldexp(std::max(prob, 0.0), 64));
        }
    }

    std::vector<std::uint64_t> threshold_;
    std::vector<Letter> alias_;
    std::vector<std::uint8_t> accept_all_;
};

/// Exact uniform letters over {0..m-1}, several per 64-bit draw. For a draw r
/// the multiply chain r*m, (low)*m, ... yields the base-m digits of
/// floor(r m^j / 2^64); rejecting the block when the final low word falls
/// below 2^64 mod m^j (Lemire) makes the j digits exactly iid uniform.
class UniformLetterBlocks {
public:
    explicit UniformLetterBlocks(std::size_t m) : m_(m) {
        if (m == 0) throw std::invalid_argument("UniformLetterBlocks: m must be positive");
        std::uint64_t big = 1;
        while (per_draw_ < 32 && big <= std::numeric_limits<std::uint64_t>::max() / m) {
            big *= m;
            ++per_draw_;
        }
        modulus_ = big;
        reject_below_ = (0 - big) % big;
    }

    std::size_t per_draw() const noexcept { return per_draw_; }

    template <class Engine, class Sink>
    void stream(std::uint64_t n, Engine& eng, Sink&& sink) const {
        const std::uint64_t m = m_;
        std::uint64_t left = n;
        while (left > 0) {
            std::uint64_t low = eng();
            // The chain's final low word is r * m^j mod 2^64; test it first.
            if (low * modulus_ < reject_below_) continue;
            const std::uint64_t take = std::min<std::uint64_t>(per_draw_, left);
            for (std::uint64_t i = 0; i < take; ++i) {
                const unsigned __int128 x = static_cast<unsigned __int128>(low) * m;
                sink(static_cast<Letter>(x >> 64));
                low = static_cast<std::uint64_t>(x);
            }
            left -= take;
        }
    }

private:
    std::uint64_t m_;
    std::size_t per_draw_ = 0;
    std::uint64_t modulus_ = 1;
    std::uint64_t reject_below_ = 0;
};

/// iid letters from a distribution: block sampling when the law is uniform,
/// the alias method otherwise.
class LetterSampler {
public:
    explicit LetterSampler(const AlphabetDistribution& dist) {
        const auto p = dist.probs();
        const bool is_uniform = std::all_of(p.begin(), p.end(), [&](double v) { return v == p[0]; });
        if (is_uniform)
            blocks_.emplace(dist.size());
        else
            alias_.emplace(dist);
    }

    bool uses_blocks() const noexcept { return blocks_.has_value(); }

    template <class Sink>
    void stream(std::uint64_t n, Xoshiro256pp& eng, Sink&& sink) const {
        if (blocks_) {
            blocks_->stream(n, eng, sink);
        } else {
            for (std::uint64_t i = 0; i < n; ++i) sink((*alias_)(eng));
        }
    }

private:
    std::optional<UniformLetterBlocks> blocks_;
    std::optional<AliasTable> alias_;
};

inline Word sample_word(const AlphabetDistribution& dist, std::size_t n, std::uint64_t seed) {
    const LetterSampler sampler(dist);
    Xoshiro256pp eng(seed);
    Word w;
    w.letters.reserve(n);
    sampler.stream(n, eng, [&](Letter a) { w.letters.push_back(a); });
    w.alphabet_size = dist.size();
    return w;
}

/// Prefix letter counts S_k^j = #{i <= k : X_i = j}, k = 0..n, stored row-major.
class CountMatrix {
public:
    CountMatrix(std::size_t n, std::size_t m) : n_(n), m_(m), data_((n + 1) * m, 0) {}

    std::size_t length() const noexcept { return n_; }
    std::size_t alphabet_size() const noexcept { return m_; }

    std::uint32_t operator()(std::size_t k, std::size_t j) const { return data_[k * m_ + j]; }
    std::uint32_t& operator()(std::size_t k, std::size_t j) { return data_[k * m_ + j]; }

    std::span<const std::uint32_t> row(std::size_t k) const {
        return std::span<const std::uint32_t>(data_).subspan(k * m_, m_);
    }

private:
    std::size_t n_, m_;
    std::vector<std::uint32_t> data_;
};

inline CountMatrix prefix_counts(const Word& word, std::size_t m) {
    CountMatrix c(word.size(), m);
    for (std::size_t k = 1; k <= word.size(); ++k) {
        for (std::size_t j = 0; j < m; ++j) c(k, j) = c(k - 1, j);
        const Letter a = word.letters[k - 1];
        if (a >= m) throw std::invalid_argument("prefix_counts: letter out of range");
        ++c(k, a);
    }
    return c;
}

// --- serialization ---------------------------------------------------------


/// Raw little-endian dump: u8 per letter when m <= 256, u16 when m <= 65536.
inline void write_word_binary(std::ostream& os, const Word& w) {
    if (w.alphabet_size <= 256) {
        for (Letter a : w.letters) os.put(static_cast<char>(a));
    } else if (w.alphabet_size <= 65536) {
        for (Letter a : w.letters) {
            os.put(static_cast<char>(a & 0xff));
            os.put(static_cast<char>((a >> 8) & 0xff));
        }
    } else {
        throw std::invalid_argument("binary word dump supports alphabets up to 65536 letters");
    }
}

inline Word read_word_binary(std::istream& is, std::size_t m) {
    std::vector<Letter> ls;
    if (m <= 256) {
        for (int c; (c = is.get()) != std::char_traits<char>::eof();)
            ls.push_back(static_cast<Letter>(c));
    } else if (m <= 65536) {
        for (int lo; (lo = is.get()) != std::char_traits<char>::eof();) {
            const int hi = is.get();
            if (hi == std::char_traits<char>::eof())
                throw std::runtime_error("truncated u16 word dump");
            ls.push_back(static_cast<Letter>(lo | (hi << 8)));
        }
    } else {
        throw std::invalid_argument("binary word dump supports alphabets up to 65536 letters");
    }
    return Word(std::move(ls), m);
}

}  // namespace rskld

// AlphabetDistribution has no default state, so it gets a full serializer
// rather than ADL to_json/from_json. Format: {"probs": [...]}.
template <>
struct nlohmann::adl_serializer<rskld::AlphabetDistribution> {
    static rskld::AlphabetDistribution from_json(const json& j) {
        return rskld::AlphabetDistribution(j.at("probs").get<std::vector<double>>());
    }
    static void to_json(json& j, const rskld::AlphabetDistribution& d) {
        j = json{{"probs", std::vector<double>(d.probs().begin(), d.probs().end())}};
    }
};
