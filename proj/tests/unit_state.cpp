#include <doctest.h>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/state.hpp"
#include "oracles.hpp"

using namespace crossforge;

namespace {

HashedTable random_table(Rng& rng, size_t features, size_t rows, int32_t modulus) {
    HashedTable t;
    t.columns.resize(features);
    for (auto& col : t.columns) {
        col.resize(rows);
        for (auto& v : col) v = static_cast<int32_t>(rng.uniform_index(modulus));
    }
    return t;
}

} // namespace

TEST_CASE("describe: constant list") {
    FeatureRep r = describe(std::vector<double>{5, 5, 5});
    CHECK(r == FeatureRep{3, 5, 0, 5, 5, 5, 5, 5});
}

TEST_CASE("describe: 1..4 matches the independent statistics oracle") {
    const std::vector<double> v{1, 2, 3, 4};
    FeatureRep r = describe(v);
    auto expect = oracle::describe(v);
    for (size_t i = 0; i < 8; ++i) CHECK(r[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    CHECK(r[0] == 4);
    CHECK(r[1] == doctest::Approx(2.5));
    CHECK(r[2] == doctest::Approx(1.118033988749895));
    CHECK(r[4] == doctest::Approx(1.75));
    CHECK(r[5] == doctest::Approx(2.5));
    CHECK(r[6] == doctest::Approx(3.25));
}

TEST_CASE("describe: permutation gives bit-identical output") {
    const std::vector<double> a{3.25, -1, 7, 0.5, 0.5, 12};
    const std::vector<double> b{12, 0.5, 3.25, 7, -1, 0.5};
    CHECK(describe(a) == describe(b));
}

TEST_CASE("describe: empty input rejected") {
    CHECK_THROWS_AS(describe(std::vector<double>{}), Error);
}

TEST_CASE("feature_rep examples") {
    std::vector<int32_t> constant{7, 7, 7, 7};
    CHECK(feature_rep(constant) == FeatureRep{4, 7, 0, 7, 7, 7, 7, 7});

    std::vector<int32_t> pair{0, 1};
    FeatureRep r = feature_rep(pair);
    CHECK(r == FeatureRep{2, 0.5, 0.5, 0, 0.25, 0.5, 0.75, 1});

    CHECK(feature_rep(pair) == feature_rep(pair));
}

TEST_CASE("state length is 64 regardless of feature count") {
    Rng rng(2);
    HashedTable t3 = random_table(rng, 3, 20, 64);
    HashedTable t9 = random_table(rng, 9, 20, 64);
    CHECK(state_vector(t3).size() == 64);
    CHECK(state_vector(t9).size() == 64);
}

TEST_CASE("state of an all-constant table") {
    HashedTable t;
    t.columns.assign(4, std::vector<int32_t>(10, 13));
    StateVector s = state_vector(t);
    // Layout: entries [8j .. 8j+7] describe step-A statistic j. Mean-of-means
    // is the constant; every std entry is zero.
    CHECK(s[1 * 8 + 1] == doctest::Approx(13.0)); // mean of row means
    for (size_t j = 0; j < 8; ++j) CHECK(s[j * 8 + 2] == doctest::Approx(0.0));
    // Step-A count column is the feature count; its mean is 4.
    CHECK(s[0 * 8 + 1] == doctest::Approx(4.0));
}

TEST_CASE("duplicating rows only rescales the count entries") {
    Rng rng(9);
    HashedTable t = random_table(rng, 5, 17, 64);
    HashedTable doubled = t;
    for (size_t f = 0; f < t.columns.size(); ++f)
        doubled.columns[f].insert(doubled.columns[f].end(), t.columns[f].begin(),
                                  t.columns[f].end());
    StateVector a = state_vector(t);
    StateVector b = state_vector(doubled);
    for (size_t j = 0; j < 8; ++j) {
        CHECK(b[j * 8 + 0] == doctest::Approx(2.0 * a[j * 8 + 0])); // counts double
        CHECK(b[j * 8 + 1] == doctest::Approx(a[j * 8 + 1]));       // means unchanged
        CHECK(b[j * 8 + 2] == doctest::Approx(a[j * 8 + 2]));       // stds unchanged
        CHECK(b[j * 8 + 3] == doctest::Approx(a[j * 8 + 3]));       // min
        CHECK(b[j * 8 + 7] == doctest::Approx(a[j * 8 + 7]));       // max
    }
}

TEST_CASE("state invariances: sample and feature permutation are exact") {
    Rng rng(4);
    for (int trial = 0; trial < 25; ++trial) {
        const size_t features = 1 + rng.uniform_index(12);
        const size_t rows = 2 + rng.uniform_index(30);
        HashedTable t = random_table(rng, features, rows, 64);
        const StateVector base = state_vector(t);

        std::vector<size_t> rperm(rows);
        for (size_t i = 0; i < rows; ++i) rperm[i] = i;
        rng.shuffle(rperm);
        HashedTable rows_shuffled;
        rows_shuffled.columns.assign(features, std::vector<int32_t>(rows));
        for (size_t f = 0; f < features; ++f)
            for (size_t r = 0; r < rows; ++r)
                rows_shuffled.columns[f][r] = t.columns[f][rperm[r]];
        CHECK(state_vector(rows_shuffled) == base);

        HashedTable cols_shuffled = t;
        rng.shuffle(cols_shuffled.columns);
        CHECK(state_vector(cols_shuffled) == base);
    }
}

TEST_CASE("state against a from-scratch two-pass oracle") {
    Rng rng(6);
    HashedTable t = random_table(rng, 7, 23, 64);

    std::vector<std::array<double, 8>> row_stats;
    for (size_t r = 0; r < 23; ++r) {
        std::vector<double> row;
        for (size_t f = 0; f < 7; ++f) row.push_back(t.columns[f][r]);
        row_stats.push_back(oracle::describe(row));
    }
    StateVector got = state_vector(t);
    for (size_t j = 0; j < 8; ++j) {
        std::vector<double> col;
        for (const auto& rs : row_stats) col.push_back(rs[j]);
        auto meta = oracle::describe(col);
        for (size_t i = 0; i < 8; ++i)
            CHECK(got[j * 8 + i] == doctest::Approx(meta[i]).epsilon(1e-12));
    }
}

TEST_CASE("state rejects empty tables") {
    HashedTable empty;
    CHECK_THROWS_AS(state_vector(empty), Error);
}
