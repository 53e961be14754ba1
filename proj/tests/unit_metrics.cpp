#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

using namespace crossforge;

TEST_CASE("mi: identical uniform binary column carries one bit") {
    std::vector<int32_t> x{0, 1, 0, 1, 0, 1};
    CHECK(mutual_information(x, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mi: constant column carries nothing") {
    std::vector<int32_t> x{2, 2, 2, 2};
    std::vector<int32_t> y{0, 1, 0, 1};
    CHECK(mutual_information(x, y) == doctest::Approx(0.0));
}

TEST_CASE("mi: 2x2 joint [[2,1],[1,2]] golden value") {
    // Oracle value 5/3 - log2(3), pinned via the entropy identity.
    std::vector<int32_t> x{0, 0, 0, 1, 1, 1};
    std::vector<int32_t> y{0, 0, 1, 0, 1, 1};
    const double expect = 5.0 / 3.0 - std::log2(3.0);
    CHECK(mutual_information(x, y) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(oracle::mutual_information(x, y) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mi: length mismatch rejected") {
    std::vector<int32_t> x{0, 1};
    std::vector<int32_t> y{0};
    CHECK_THROWS_AS(mutual_information(x, y), Error);
}

TEST_CASE("mi properties: symmetry, non-negativity, I(x,x)=H(x)") {
    Rng rng(41);
    for (int t = 0; t < 60; ++t) {
        const size_t n = 1 + rng.uniform_index(30);
        std::vector<int32_t> x(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = static_cast<int32_t>(rng.uniform_index(4));
            y[i] = static_cast<int32_t>(rng.uniform_index(4));
        }
        const double xy = mutual_information(x, y);
        CHECK(xy == mutual_information(y, x));
        CHECK(xy >= 0.0);
        CHECK(mutual_information(x, x) ==
              doctest::Approx(oracle::mutual_information(x, x)).epsilon(1e-12));
    }
}

TEST_CASE("mi matches the entropy-identity oracle exhaustively at desk scale") {
    // Every pair of columns over <=3 symbols and <=8 samples would be 9^16
    // tables; instead enumerate every joint COLUMN pattern for n<=5 fully and
    // sample the rest, which covers the same value set.
    for (int n = 1; n <= 5; ++n) {
        const int total = static_cast<int>(std::pow(9, n));
        for (int code = 0; code < total; ++code) {
            int c = code;
            std::vector<int32_t> x(n), y(n);
            for (int i = 0; i < n; ++i) {
                x[i] = (c % 9) / 3;
                y[i] = (c % 9) % 3;
                c /= 9;
            }
            CHECK(mutual_information(x, y) ==
                  doctest::Approx(oracle::mutual_information(x, y)).epsilon(1e-12));
        }
    }
    Rng rng(7);
    for (int t = 0; t < 4000; ++t) {
        const size_t n = 6 + rng.uniform_index(3); // 6..8 samples
        std::vector<int32_t> x(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = static_cast<int32_t>(rng.uniform_index(3));
            y[i] = static_cast<int32_t>(rng.uniform_index(3));
        }
        const double got = mutual_information(x, y);
        const double want = oracle::mutual_information(x, y);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(std::abs(got - want) < 1e-12);
    }
}

TEST_CASE("redundancy: single and duplicated uniform binary features") {
    std::vector<int32_t> f{0, 1, 0, 1};
    CHECK(redundancy({f}) == doctest::Approx(1.0)); // diagonal only: H(f)/1
    CHECK(redundancy({f, f}) == doctest::Approx(1.0)); // (1+1+1+1)/4
}

TEST_CASE("redundancy: independent-by-construction features") {
    // Product construction: every (a,b) combination appears exactly once, so
    // the two columns are exactly independent and only diagonal entropies
    // remain: (H(a) + 0 + 0 + H(b)) / 4.
    std::vector<int32_t> a, b;
    for (int32_t i = 0; i < 2; ++i)
        for (int32_t j = 0; j < 4; ++j) {
            a.push_back(i);
            b.push_back(j);
        }
    const double ha = mutual_information(a, a);
    const double hb = mutual_information(b, b);
    CHECK(mutual_information(a, b) == doctest::Approx(0.0));
    CHECK(redundancy({a, b}) == doctest::Approx((ha + hb) / 4.0).epsilon(1e-12));
}

TEST_CASE("relevance examples") {
    std::vector<int32_t> y{0, 1, 0, 1};
    std::vector<int32_t> constant{3, 3, 3, 3};
    CHECK(relevance({y}, y) == doctest::Approx(1.0));          // H(y)
    CHECK(relevance({constant}, y) == doctest::Approx(0.0));
    CHECK(relevance({y, constant}, y) == doctest::Approx(0.5)); // mean of 1 and 0
    CHECK_THROWS_AS(relevance({}, y), Error);
    CHECK_THROWS_AS(redundancy({}), Error);
}

TEST_CASE("relevance and redundancy are invariant under sample permutation") {
    Rng rng(13);
    const size_t n = 40;
    std::vector<int32_t> a(n), b(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        a[i] = static_cast<int32_t>(rng.uniform_index(5));
        b[i] = static_cast<int32_t>(rng.uniform_index(3));
        y[i] = static_cast<int32_t>(rng.uniform_index(2));
    }
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<int32_t> ap(n), bp(n), yp(n);
    for (size_t i = 0; i < n; ++i) {
        ap[i] = a[perm[i]];
        bp[i] = b[perm[i]];
        yp[i] = y[perm[i]];
    }
    CHECK(relevance({a, b}, y) == doctest::Approx(relevance({ap, bp}, yp)).epsilon(1e-12));
    CHECK(redundancy({a, b}) == doctest::Approx(redundancy({ap, bp})).epsilon(1e-12));
}

TEST_CASE("classification metrics: mixed binary confusion") {
    // TP=45 TN=45 FP=5 FN=5.
    std::vector<int32_t> pred, truth;
    auto add = [&](int32_t p, int32_t t, int n) {
        for (int i = 0; i < n; ++i) {
            pred.push_back(p);
            truth.push_back(t);
        }
    };
    add(1, 1, 45);
    add(0, 0, 45);
    add(1, 0, 5);
    add(0, 1, 5);
    ClassificationMetrics m = classification_metrics(pred, truth);
    CHECK(m.accuracy == doctest::Approx(0.90));
    CHECK(m.precision == doctest::Approx(0.90));
    CHECK(m.recall == doctest::Approx(0.90));
    CHECK(m.f_measure == doctest::Approx(0.90));
}

TEST_CASE("classification metrics: perfect predictions") {
    std::vector<int32_t> v{0, 1, 1, 0, 1};
    ClassificationMetrics m = classification_metrics(v, v);
    CHECK(m.accuracy == 1.0);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f_measure == 1.0);
}

TEST_CASE("classification metrics: everything predicted positive") {
    std::vector<int32_t> truth{1, 1, 0, 0};
    std::vector<int32_t> pred{1, 1, 1, 1};
    ClassificationMetrics m = classification_metrics(pred, truth);
    CHECK(m.accuracy == doctest::Approx(0.5));
    CHECK(m.recall == doctest::Approx(1.0));
    CHECK(m.precision == doctest::Approx(0.5));
    CHECK(m.f_measure == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("classification metrics: macro average across three classes") {
    std::vector<int32_t> truth{0, 1, 2, 0, 1, 2};
    std::vector<int32_t> pred{0, 1, 1, 0, 2, 2};
    ClassificationMetrics m = classification_metrics(pred, truth);
    CHECK(m.accuracy == doctest::Approx(4.0 / 6.0));
    // class 0: P=1 R=1 F=1; class 1: P=.5 R=.5 F=.5; class 2: P=.5 R=.5 F=.5
    CHECK(m.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.recall == doctest::Approx(2.0 / 3.0));
    CHECK(m.f_measure == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(classification_metrics(pred, std::vector<int32_t>{0}), Error);
}
