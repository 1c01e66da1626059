#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <sstream>

#include "rskld/wordmodel.hpp"

using namespace rskld;

namespace {

// Pearson statistic of letter frequencies against `dist`, with its 1e-6 upper quantile.
std::pair<double, double> chi_square(const Word& w, const AlphabetDistribution& dist) {
    std::vector<double> counts(dist.size(), 0.0);
    for (auto a : w.letters) counts[a] += 1.0;
    double stat = 0.0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        const double e = dist[j] * static_cast<double>(w.size());
        stat += (counts[j] - e) * (counts[j] - e) / e;
    }
    boost::math::chi_squared chi(static_cast<double>(dist.size() - 1));
    return {stat, boost::math::quantile(boost::math::complement(chi, 1e-6))};
}

}  // namespace

TEST(Uniform, Examples) {
    const auto u4 = uniform(4);
    for (double p : u4.probs()) EXPECT_EQ(p, 0.25);
    EXPECT_EQ(multiplicity_stats(u4).k, 4u);

    const auto u1 = uniform(1);
    const auto s1 = multiplicity_stats(u1);
    EXPECT_EQ(s1.p_max, 1.0);
    EXPECT_EQ(s1.k, 1u);

    EXPECT_DOUBLE_EQ(multiplicity_stats(uniform(3)).eta_hat, 1.0);
    EXPECT_THROW(uniform(0), std::invalid_argument);
}

TEST(Uniform, MultiplicityIsFullForAllSizes) {
    for (std::size_t m = 1; m <= 100; ++m) {
        const auto s = multiplicity_stats(uniform(m));
        EXPECT_EQ(s.k, m);
        EXPECT_FALSE(s.p_2nd.has_value());
        EXPECT_NEAR(s.eta_hat, 1.0, 1e-12) << m;
    }
}

TEST(Multiplicity, ReadOff) {
    const auto s = multiplicity_stats(AlphabetDistribution({0.4, 0.4, 0.2}));
    EXPECT_EQ(s.p_max, 0.4);
    EXPECT_EQ(s.k, 2u);
    ASSERT_TRUE(s.p_2nd);
    EXPECT_EQ(*s.p_2nd, 0.2);
    EXPECT_EQ(s.J, (std::vector<Letter>{0, 1}));

    const auto u = multiplicity_stats(uniform(5));
    EXPECT_FALSE(u.p_2nd);
    EXPECT_EQ(u.k, 5u);

    EXPECT_DOUBLE_EQ(multiplicity_stats(AlphabetDistribution({0.5, 0.3, 0.2})).eta_hat, 0.5);
}

TEST(Multiplicity, TieTolerance) {
    const double d = 1e-13;
    const auto t = multiplicity_stats(AlphabetDistribution({0.35 + d, 0.35 - d, 0.3}));
    EXPECT_EQ(t.k, 2u);
    EXPECT_EQ(*t.p_2nd, 0.3);
}

TEST(AlphabetDistribution, RejectsBadInput) {
    EXPECT_THROW(AlphabetDistribution({}), std::invalid_argument);
    EXPECT_THROW(AlphabetDistribution({0.5, 0.0, 0.5}), std::invalid_argument);
    EXPECT_THROW(AlphabetDistribution({0.5, 0.4}), std::invalid_argument);
    EXPECT_THROW(AlphabetDistribution({1.5, -0.5}), std::invalid_argument);
}

TEST(TopHeavy, Structure) {
    const auto d = top_heavy(5, 0.02, 100);
    EXPECT_EQ(d.size(), 105u);
    const auto s = multiplicity_stats(d);
    EXPECT_EQ(s.k, 5u);
    EXPECT_DOUBLE_EQ(s.p_max, 0.02);
    EXPECT_NEAR(*s.p_2nd, 0.009, 1e-12);
    EXPECT_THROW(top_heavy(3, 0.4, 5), std::invalid_argument);
    EXPECT_THROW(top_heavy(2, 0.1, 1), std::invalid_argument);
    EXPECT_EQ(top_heavy(4, 0.25, 0), uniform(4));
}

TEST(SampleWord, EmptyAndDeterministic) {
    EXPECT_EQ(sample_word(uniform(3), 0, 1).size(), 0u);
    const auto a = sample_word(AlphabetDistribution({0.5, 0.3, 0.2}), 5000, 99);
    const auto b = sample_word(AlphabetDistribution({0.5, 0.3, 0.2}), 5000, 99);
    EXPECT_EQ(a.letters, b.letters);
    const auto c = sample_word(AlphabetDistribution({0.5, 0.3, 0.2}), 5000, 100);
    EXPECT_NE(a.letters, c.letters);
    for (auto l : a.letters) EXPECT_LT(l, 3u);
}

TEST(SampleWord, BinaryCountWithinFiveSigma) {
    const std::size_t n = 1000000;
    const double half = 0.5 * n, band = 5.0 * std::sqrt(n * 0.25);
    // The band holds at least 1 - 1e-4 of the exact binomial law.
    boost::math::binomial bin(static_cast<double>(n), 0.5);
    EXPECT_GE(boost::math::quantile(bin, 5e-5), half - band);
    EXPECT_LE(boost::math::quantile(boost::math::complement(bin, 5e-5)), half + band);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto w = sample_word(uniform(2), n, seed);
        const auto zeros = std::count(w.letters.begin(), w.letters.end(), Letter{0});
        EXPECT_LE(std::abs(static_cast<double>(zeros) - half), band) << seed;
    }
}

TEST(SampleWord, ChiSquareUniformBlocks) {
    for (std::size_t m : {3u, 7u, 10u, 26u}) {
        const auto dist = uniform(m);
        for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
            const auto [stat, crit] = chi_square(sample_word(dist, 100000, seed), dist);
            EXPECT_LT(stat, crit) << "m=" << m << " seed=" << seed;
        }
    }
}

TEST(SampleWord, ChiSquareAlias) {
    const std::vector<AlphabetDistribution> dists = {AlphabetDistribution({0.5, 0.3, 0.2}), top_heavy(3, 0.2, 8),
                                                     AlphabetDistribution({0.01, 0.98, 0.01})};
    for (const auto& dist : dists)
        for (std::uint64_t seed : {21u, 22u, 23u, 24u, 25u}) {
            const auto [stat, crit] = chi_square(sample_word(dist, 100000, seed), dist);
            EXPECT_LT(stat, crit) << "seed=" << seed;
        }
}

TEST(LetterSampler, BlockPathOnlyForEqualProbabilities) {
    EXPECT_TRUE(LetterSampler(uniform(10)).uses_blocks());
    EXPECT_FALSE(LetterSampler(AlphabetDistribution({0.5, 0.5 - 1e-6, 1e-6})).uses_blocks());
}

TEST(UniformLetterBlocks, SingleLetterAndPairs) {
    Xoshiro256pp eng(5);
    UniformLetterBlocks one(1);
    std::size_t count = 0;
    one.stream(1000, eng, [&](Letter a) {
        EXPECT_EQ(a, 0u);
        ++count;
    });
    EXPECT_EQ(count, 1000u);

    // Consecutive letters must be independent: chi-square over ordered pairs.
    const std::size_t m = 6;
    UniformLetterBlocks blocks(m);
    std::vector<double> pair(m * m, 0.0);
    Letter prev = 0;
    std::size_t i = 0;
    const std::size_t n = 360000;
    blocks.stream(n, eng, [&](Letter a) {
        if (i++ % 2 == 1) pair[prev * m + a] += 1.0;
        prev = a;
    });
    const double e = static_cast<double>(n / 2) / static_cast<double>(m * m);
    double stat = 0.0;
    for (double c : pair) stat += (c - e) * (c - e) / e;
    boost::math::chi_squared chi(static_cast<double>(m * m - 1));
    EXPECT_LT(stat, boost::math::quantile(boost::math::complement(chi, 1e-6)));
}

TEST(PrefixCounts, Examples) {
    const auto c = prefix_counts(Word::from_string("aba", 2), 2);
    EXPECT_EQ(c(3, 0), 2u);
    EXPECT_EQ(c(3, 1), 1u);
    const auto e = prefix_counts(Word({}, 3), 3);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(e(0, j), 0u);
}

TEST(PrefixCounts, MonotoneAndTotal) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto w = sample_word(AlphabetDistribution({0.1, 0.2, 0.3, 0.4}), 300, seed);
        const auto c = prefix_counts(w, 4);
        for (std::size_t k = 1; k <= w.size(); ++k) {
            std::uint64_t total = 0;
            for (std::size_t j = 0; j < 4; ++j) {
                ASSERT_GE(c(k, j), c(k - 1, j));
                total += c(k, j);
            }
            ASSERT_EQ(total, k);
        }
    }
}

TEST(Word, RejectsOutOfRangeLetters) {
    EXPECT_THROW(Word({0, 3}, 3), std::invalid_argument);
}

TEST(Serialization, JsonRoundTrip) {
    const AlphabetDistribution d({0.5, 0.25, 0.25});
    nlohmann::json j = d;
    EXPECT_EQ(j.dump(), R"({"probs":[0.5,0.25,0.25]})");
    EXPECT_EQ(j.get<AlphabetDistribution>(), d);
}

TEST(Serialization, BinaryRoundTrip) {
    for (std::size_t m : {4u, 300u}) {
        const auto w = sample_word(uniform(m), 1000, 3);
        std::stringstream ss;
        write_word_binary(ss, w);
        const auto back = read_word_binary(ss, m);
        EXPECT_EQ(back.letters, w.letters);
    }
}
