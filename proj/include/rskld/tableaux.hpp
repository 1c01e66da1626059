#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rskld/wordmodel.hpp"

namespace rskld {

/// Row lengths R_1 >= R_2 >= ... >= R_m >= 0 of an RSK tableau built from a
/// word of length n. Prefix sums give V_k = R_1 + ... + R_k.
struct YoungShape {
    std::vector<std::uint64_t> rows;
    std::uint64_t n = 0;

    std::vector<std::uint64_t> prefix_sums() const {
        std::vector<std::uint64_t> v(rows.size());
        std::partial_sum(rows.begin(), rows.end(), v.begin());
        return v;
    }

    /// Inverse of prefix_sums: rows from (V_1, ..., V_m).
    static YoungShape from_prefix_sums(std::span<const std::uint64_t> v) {
        YoungShape s;
        s.rows.resize(v.size());
        std::adjacent_difference(v.begin(), v.end(), s.rows.begin());
        s.n = v.empty() ? 0 : v.back();
        return s;
    }

    bool is_valid() const {
        if (!std::is_sorted(rows.rbegin(), rows.rend())) return false;
        return std::accumulate(rows.begin(), rows.end(), std::uint64_t{0}) == n;
    }

    bool operator==(const YoungShape&) const = default;
};

/// Row insertion with each row stored as per-letter counts plus a bitmask of
/// occupied letters. Row i only ever holds letters >= i, so memory is O(m^2)
/// regardless of n. Suited to streaming long words over small alphabets.
class RskCountBuilder {
public:
    explicit RskCountBuilder(std::size_t m)
        : m_(m), words_((m + 63) / 64), counts_(m * m, 0), masks_(m * words_, 0), lengths_(m, 0) {}

    void insert(Letter a) {
        for (std::size_t row = 0; row < m_; ++row) {
            const std::size_t b = next_occupied(row, a);
            add(row, a);
            if (b == m_) {
                ++lengths_[row];
                ++n_;
                return;
            }
            remove(row, b);
            a = static_cast<Letter>(b);
        }
        throw std::logic_error("RSK insertion exceeded alphabet size rows");
    }

    YoungShape shape() const { return YoungShape{lengths_, n_}; }
    std::uint64_t first_row() const noexcept { return lengths_.empty() ? 0 : lengths_[0]; }
    std::span<const std::uint64_t> row_lengths() const noexcept { return lengths_; }

    void reset() {
        std::fill(counts_.begin(), counts_.end(), 0);
        std::fill(masks_.begin(), masks_.end(), 0);
        std::fill(lengths_.begin(), lengths_.end(), 0);
        n_ = 0;
    }

private:
    // Smallest occupied letter strictly greater than a in `row`, or m if none.
    std::size_t next_occupied(std::size_t row, Letter a) const {
        std::size_t bit = static_cast<std::size_t>(a) + 1;
        if (bit >= m_) return m_;
        const std::uint64_t* mask = &masks_[row * words_];
        std::size_t w = bit / 64;
        std::uint64_t cur = mask[w] & (~std::uint64_t{0} << (bit % 64));
        while (true) {
            if (cur != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(cur));
            if (++w == words_) return m_;
            cur = mask[w];
        }
    }
    void add(std::size_t row, Letter a) {
        if (counts_[row * m_ + a]++ == 0) masks_[row * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
    }
    void remove(std::size_t row, std::size_t b) {
        if (--counts_[row * m_ + b] == 0) masks_[row * words_ + b / 64] &= ~(std::uint64_t{1} << (b % 64));
    }

    std::size_t m_, words_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint64_t> masks_;
    std::vector<std::uint64_t> lengths_;
    std::uint64_t n_ = 0;
};

/// Row insertion with explicit sorted rows and a binary search per row.
/// Memory O(n); preferred for large alphabets.
class RskRowBuilder {
public:
    explicit RskRowBuilder(std::size_t m) : m_(m) {}

    void insert(Letter a) {
        for (auto& row : rows_) {
            auto it = std::upper_bound(row.begin(), row.end(), a);
            if (it == row.end()) {
                row.push_back(a);
                ++n_;
                return;
            }
            std::swap(*it, a);
        }
        rows_.push_back({a});
        ++n_;
    }

    YoungShape shape() const {
        YoungShape s;
        s.rows.assign(std::max(m_, rows_.size()), 0);
        for (std::size_t i = 0; i < rows_.size(); ++i) s.rows[i] = rows_[i].size();
        s.n = n_;
        return s;
    }

private:
    std::size_t m_;
    std::vector<std::vector<Letter>> rows_;
    std::uint64_t n_ = 0;
};

/// Shape of the RSK insertion tableau of `word` (weakly increasing rows; a
/// letter bumps the leftmost entry strictly greater than itself).
inline YoungShape rsk_shape(const Word& word, std::size_t m) {
    if (m <= 256) {
        RskCountBuilder b(m);
        for (Letter a : word.letters) {
            if (a >= m) throw std::invalid_argument("rsk_shape: letter out of range");
            b.insert(a);
        }
        return b.shape();
    }
    RskRowBuilder b(m);
    for (Letter a : word.letters) {
        if (a >= m) throw std::invalid_argument("rsk_shape: letter out of range");
        b.insert(a);
    }
    return b.shape();
}

/// Longest weakly increasing subsequence by patience sorting (upper bound).
inline std::uint64_t lis_weak(std::span<const Letter> letters) {
    std::vector<Letter> tails;
    for (Letter a : letters) {
        auto it = std::upper_bound(tails.begin(), tails.end(), a);
        if (it == tails.end())
            tails.push_back(a);
        else
            *it = a;
    }
    return tails.size();
}

inline std::uint64_t lis_weak(const Word& word) { return lis_weak(std::span<const Letter>(word.letters)); }

/// Streaming first-row length for small alphabets. best_[j] is the longest
/// weakly increasing subsequence using letters <= j seen so far; this is the
/// cut-point recursion of v1_dp evaluated one letter at a time. Counts are
/// 32-bit, so words are limited to 2^32 - 1 letters.
class WeakLisCounter {
public:
    explicit WeakLisCounter(std::size_t m) : best_(m, 0) {}

    void push(Letter a) noexcept {
        const std::uint32_t v = ++best_[a];
        for (std::size_t j = a + 1; j < best_.size() && best_[j] < v; ++j) best_[j] = v;
    }

    std::uint64_t value() const noexcept { return best_.empty() ? 0 : best_.back(); }
    void reset() noexcept { std::fill(best_.begin(), best_.end(), 0); }

private:
    std::vector<std::uint32_t> best_;
};

/// Streaming first-row length by patience sorting; O(log R_1) per letter, for
/// alphabets too large for WeakLisCounter.
class PatienceCounter {
public:
    void push(Letter a) {
        auto it = std::upper_bound(tails_.begin(), tails_.end(), a);
        if (it == tails_.end())
            tails_.push_back(a);
        else
            *it = a;
    }
    std::uint64_t value() const noexcept { return tails_.size(); }
    void reset() noexcept { tails_.clear(); }

private:
    std::vector<Letter> tails_;
};

/// R_1 as the supremum over cut points 0 = l_0 <= l_1 <= ... <= l_m = n of
/// sum_j (S_{l_j}^j - S_{l_{j-1}}^j), by dynamic programming in O(n m).
inline std::uint64_t v1_dp(const CountMatrix& counts) {
    const std::size_t n = counts.length();
    const std::size_t m = counts.alphabet_size();
    if (m == 0) return 0;
    // d[i] = best value with the current letter's block ending at i.
    std::vector<std::int64_t> d(n + 1);
    for (std::size_t i = 0; i <= n; ++i) d[i] = counts(i, 0);
    for (std::size_t j = 1; j < m; ++j) {
        std::int64_t running = std::numeric_limits<std::int64_t>::min();
        for (std::size_t i = 0; i <= n; ++i) {
            const auto s = static_cast<std::int64_t>(counts(i, j));
            running = std::max(running, d[i] - s);
            d[i] = running + s;
        }
    }
    return static_cast<std::uint64_t>(d[n]);
}

inline constexpr std::size_t kOracleMaxLength = 12;

/// Greene invariant by exhaustive search: the largest total size of k
/// pairwise disjoint weakly increasing subsequences. Only for n <= 12.
inline std::uint64_t v_k_oracle(const Word& word, std::size_t k) {
    const std::size_t n = word.size();
    if (n > kOracleMaxLength)
        throw std::invalid_argument("v_k_oracle: word too long for exhaustive search");
    if (k == 0) return 0;

    // State: position and the sorted multiset of subsequence tails (-1 = empty).
    // Subsequences are interchangeable, so sorting the tails loses nothing.
    std::map<std::pair<std::size_t, std::vector<int>>, std::uint64_t> memo;
    auto search = [&](auto&& self, std::size_t pos, std::vector<int> tails) -> std::uint64_t {
        if (pos == n) return 0;
        auto key = std::make_pair(pos, tails);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const int a = static_cast<int>(word.letters[pos]);
        std::uint64_t best = self(self, pos + 1, tails);  // leave the letter unused
        for (std::size_t s = 0; s < tails.size(); ++s) {
            if (tails[s] > a || (s > 0 && tails[s] == tails[s - 1])) continue;
            auto next = tails;
            next[s] = a;
            std::sort(next.begin(), next.end());
            best = std::max(best, 1 + self(self, pos + 1, std::move(next)));
        }
        memo.emplace(std::move(key), best);
        return best;
    };
    return search(search, 0, std::vector<int>(k, -1));
}

/// V_k as the supremum over the cut-point lattice I_{k,m}(n), by enumeration.
/// Exponential in k(m-k); guarded to small inputs.
inline std::uint64_t v_k_lattice(const CountMatrix& counts, std::size_t k) {
    const std::size_t n = counts.length();
    const std::size_t m = counts.alphabet_size();
    if (k == 0) return 0;
    if (k > m) throw std::invalid_argument("v_k_lattice: k exceeds alphabet size");
    const double leaves = std::pow(static_cast<double>(n + 1), static_cast<double>(k * (m - k)));
    if (leaves > 5e7) throw std::invalid_argument("v_k_lattice: lattice too large to enumerate");

    // t[j][l] for j = 0..k-1 (paths) and l = 0..m (letters), 0-based version of
    // t_{j,l}: path j covers letters j..m-k+j.
    std::vector<std::vector<std::size_t>> t(k, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = 0; l <= m; ++l) t[j][l] = (l <= j) ? 0 : n;
    }
    std::uint64_t best = 0;

    auto evaluate = [&]() {
        std::int64_t total = 0;
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t l = j + 1; l <= m - k + j + 1; ++l) {
                const std::size_t letter = l - 1;
                total += static_cast<std::int64_t>(counts(t[j][l], letter)) -
                         static_cast<std::int64_t>(counts(t[j][l - 1], letter));
            }
        }
        best = std::max(best, static_cast<std::uint64_t>(total));
    };

    // Free variables: t[j][l] for l = j+1 .. m-k+j, in row-major order.
    auto recurse = [&](auto&& self, std::size_t j, std::size_t l) -> void {
        if (j == k) {
            evaluate();
            return;
        }
        if (l > m - k + j) {
            self(self, j + 1, j + 2);
            return;
        }
        const std::size_t lo = t[j][l - 1];
        const std::size_t hi = (j == 0) ? n : std::min(n, t[j - 1][l - 1]);
        for (std::size_t v = lo; v <= hi; ++v) {
            t[j][l] = v;
            self(self, j, l + 1);
        }
    };
    recurse(recurse, 0, 1);
    return best;
}

/// Longest weakly increasing subsequence using only letters in J; equals the
/// cut-point supremum with the non-J blocks collapsed to empty intervals.
inline std::uint64_t v1_restricted(const Word& word, std::span<const Letter> J) {
    if (J.empty()) throw std::invalid_argument("v1_restricted: J must be nonempty");
    std::vector<char> in_j(word.alphabet_size, 0);
    for (Letter a : J) {
        if (a >= word.alphabet_size) throw std::invalid_argument("v1_restricted: J letter out of range");
        in_j[a] = 1;
    }
    std::vector<Letter> sub;
    for (Letter a : word.letters)
        if (in_j[a]) sub.push_back(a);
    return lis_weak(std::span<const Letter>(sub));
}

struct NormalizedShape {
    std::vector<double> values;
};

/// First r entries of (R_i - n/m) / sqrt(n).
inline NormalizedShape normalize_uniform(const YoungShape& shape, std::uint64_t n, std::size_t m,
                                         std::size_t r) {
    if (r > m || r > shape.rows.size()) throw std::invalid_argument("normalize_uniform: r exceeds m");
    const double nn = static_cast<double>(n);
    const double mean = nn / static_cast<double>(m);
    const double scale = std::sqrt(nn);
    NormalizedShape out;
    out.values.reserve(r);
    for (std::size_t i = 0; i < r; ++i)
        out.values.push_back((static_cast<double>(shape.rows[i]) - mean) / scale);
    return out;
}

/// (R_1 - n p_max) / sqrt(n k p_max).
inline double normalize_nonuniform(std::uint64_t r1, std::uint64_t n, double p_max, std::size_t k) {
    if (k < 1) throw std::invalid_argument("normalize_nonuniform: k must be >= 1");
    if (!(p_max > 0.0 && p_max <= 1.0)) throw std::invalid_argument("normalize_nonuniform: p_max out of (0,1]");
    const double nn = static_cast<double>(n);
    return (static_cast<double>(r1) - nn * p_max) / std::sqrt(nn * static_cast<double>(k) * p_max);
}

}  // namespace rskld
