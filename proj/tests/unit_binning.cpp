#include <doctest.h>

#include <set>

#include "core/binning.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

using namespace crossforge;

TEST_CASE("chi-square: identical distributions score zero") {
    ContingencyPair p{{{5, 5}, {5, 5}}};
    CHECK(chi_square_adjacent(p) == doctest::Approx(0.0));
}

TEST_CASE("chi-square: fully separated pair") {
    // R=C=10, N=20, E=5 in every cell -> 4 * (5^2/5) = 20.
    ContingencyPair p{{{10, 0}, {0, 10}}};
    CHECK(chi_square_adjacent(p) == doctest::Approx(20.0));
}

TEST_CASE("chi-square: empty second bin contributes nothing") {
    ContingencyPair p{{{1, 0}, {0, 0}}};
    CHECK(chi_square_adjacent(p) == doctest::Approx(0.0));
}

TEST_CASE("chi-square: all-zero pair rejected") {
    ContingencyPair p{{{0, 0}, {0, 0}}};
    CHECK_THROWS_AS(chi_square_adjacent(p), Error);
}

TEST_CASE("chi-square symmetry under bin swap and class permutation") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const size_t classes = 2 + rng.uniform_index(3);
        ContingencyPair p;
        p.counts.assign(2, std::vector<int64_t>(classes, 0));
        int64_t total = 0;
        for (auto& row : p.counts)
            for (auto& c : row) {
                c = static_cast<int64_t>(rng.uniform_index(6));
                total += c;
            }
        if (total == 0) continue;
        const double base = chi_square_adjacent(p);

        ContingencyPair swapped{{p.counts[1], p.counts[0]}};
        CHECK(chi_square_adjacent(swapped) == doctest::Approx(base));

        ContingencyPair permuted = p;
        std::reverse(permuted.counts[0].begin(), permuted.counts[0].end());
        std::reverse(permuted.counts[1].begin(), permuted.counts[1].end());
        CHECK(chi_square_adjacent(permuted) == doctest::Approx(base));
    }
}

TEST_CASE("chimerge: constant column has no cuts") {
    BinningSpec s = fit_chimerge({4.0, 4.0, 4.0}, {0, 1, 0}, {});
    CHECK(s.cuts.empty());
    CHECK(s.n_bins() == 1);
}

TEST_CASE("chimerge: pure regions merge, budget stops at the boundary") {
    // Oracle-verified with the default df=1 threshold: the two pure pairs
    // merge at chi-square 0 and the remaining boundary scores 4 > 3.841.
    BinningConfig cfg;
    cfg.max_bins = 2;
    auto oracle = oracle::chimerge({1, 2, 3, 4}, {0, 0, 1, 1}, 2,
                                   chi_square_critical_005(1));
    REQUIRE(oracle.cuts == std::vector<double>{2.5});

    BinningSpec s = fit_chimerge({1, 2, 3, 4}, {0, 0, 1, 1}, cfg);
    CHECK(s.cuts == std::vector<double>{2.5});

    // With an effectively infinite threshold everything merges down to the
    // bin budget; with budget 1 that means a single bin.
    BinningConfig all;
    all.max_bins = 1;
    all.chi_threshold = 1e18;
    CHECK(fit_chimerge({1, 2, 3, 4}, {0, 0, 1, 1}, all).cuts.empty());
}

TEST_CASE("chimerge: zero threshold with a generous budget keeps every value") {
    BinningConfig cfg;
    cfg.max_bins = 10;
    cfg.chi_threshold = 0.0;
    BinningSpec s = fit_chimerge({1, 2, 2, 3, 7}, {0, 1, 0, 1, 1}, cfg);
    CHECK(s.n_bins() == 4); // distinct values 1,2,3,7
    CHECK(s.cuts == std::vector<double>{1.5, 2.5, 5.0});
}

TEST_CASE("chimerge: bin budget is always respected") {
    Rng rng(5);
    for (int t = 0; t < 40; ++t) {
        const size_t n = 5 + rng.uniform_index(40);
        std::vector<double> values;
        std::vector<int32_t> labels;
        for (size_t i = 0; i < n; ++i) {
            values.push_back(static_cast<double>(rng.uniform_index(15)));
            labels.push_back(static_cast<int32_t>(rng.uniform_index(3)));
        }
        BinningConfig cfg;
        cfg.max_bins = 1 + rng.uniform_index(6);
        BinningSpec s = fit_chimerge(values, labels, cfg);
        CHECK(s.n_bins() <= cfg.max_bins);
        for (size_t i = 1; i < s.cuts.size(); ++i) CHECK(s.cuts[i - 1] < s.cuts[i]);
    }
}

TEST_CASE("chimerge matches the brute-force simulator on random instances") {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        const size_t n = 4 + rng.uniform_index(40);
        std::vector<double> values;
        std::vector<int32_t> labels;
        for (size_t i = 0; i < n; ++i) {
            values.push_back(static_cast<double>(rng.uniform_index(12)));
            labels.push_back(static_cast<int32_t>(rng.uniform_index(2)));
        }
        BinningConfig cfg;
        cfg.max_bins = 1 + rng.uniform_index(8);
        const double threshold = chi_square_critical_005(1);

        auto got = fit_chimerge_traced(values, labels, cfg);
        auto want = oracle::chimerge(values, labels, cfg.max_bins, threshold);
        CHECK(got.merge_trace == want.merge_trace);
        CHECK(got.spec.cuts == want.cuts);
    }
}

TEST_CASE("chimerge never cuts inside a pure region") {
    // Exhaustive check at desk scale: random two-class columns with few
    // distinct values; wherever a contiguous value range is single-label the
    // fitted cuts must not fall strictly inside it.
    Rng rng(23);
    for (int t = 0; t < 120; ++t) {
        const size_t distinct = 2 + rng.uniform_index(11);
        std::vector<double> values;
        std::vector<int32_t> labels;
        for (size_t v = 0; v < distinct; ++v) {
            const size_t reps = 1 + rng.uniform_index(3);
            const auto label = static_cast<int32_t>(rng.uniform_index(2));
            for (size_t r = 0; r < reps; ++r) {
                values.push_back(static_cast<double>(v));
                labels.push_back(label);
            }
        }
        // Count maximal pure runs over distinct values.
        std::vector<int32_t> label_of_value(distinct);
        for (size_t i = 0; i < values.size(); ++i)
            label_of_value[static_cast<size_t>(values[i])] = labels[i];
        size_t pure_runs = 1;
        for (size_t v = 1; v < distinct; ++v)
            if (label_of_value[v] != label_of_value[v - 1]) ++pure_runs;

        BinningConfig cfg;
        cfg.max_bins = pure_runs + rng.uniform_index(4);
        BinningSpec s = fit_chimerge(values, labels, cfg);
        for (double cut : s.cuts) {
            const auto left = static_cast<size_t>(std::floor(cut));
            const size_t right = left + 1;
            REQUIRE(right < distinct);
            CHECK(label_of_value[left] != label_of_value[right]);
        }
    }
}

TEST_CASE("apply_binning: membership, outliers, monotonicity") {
    BinningSpec s;
    s.cuts = {2.5};
    CHECK(bin_of(1.0, s) == 0);
    CHECK(bin_of(3.0, s) == 1);
    CHECK(bin_of(2.5, s) == 1); // half-open intervals
    CHECK(bin_of(-1e9, s) == 0);
    CHECK(bin_of(1e9, s) == 1);

    BinningSpec empty;
    CHECK(bin_of(123.0, empty) == 0);

    Rng rng(31);
    BinningSpec multi;
    multi.cuts = {-2.0, 0.5, 3.25, 9.0};
    double prev_v = -1e12;
    for (int i = 0; i < 200; ++i) {
        const double v = prev_v + rng.uniform_real() * 1e11;
        CHECK(bin_of(prev_v, multi) <= bin_of(v, multi));
        prev_v = v;
    }
}
