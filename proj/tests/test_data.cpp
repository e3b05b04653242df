// Copyright (c) 2026, The LAWA Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include "catch_amalgamated.hpp"
#include "data/dataset.hpp"
#include "data/rng.hpp"
#include "param_core/errors.hpp"
#include "support.hpp"

using namespace lawa;

TEST_CASE("counter rng is a pure function of seed, purpose and stream") {
    CounterRng a(7, "init"), b(7, "init"), c(7, "shuffle"), d(8, "init"), e(7, "init", 1);
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
    CHECK(x != e.next_u64());
}

TEST_CASE("counter rng draws land in range") {
    CounterRng r(1, "range");
    double sum = 0.0, sq = 0.0;
    constexpr int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(r.below(7) < 7);
        const double z = r.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.05);
    CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("spirals split sizes") {
    const auto d = make_spirals(1, 1000, 2, 0.2);
    CHECK(d.rows == 2000);
    CHECK(d.dims == 2);
    CHECK(d.classes == 2);
    CHECK(d.train.size() == 1600);
    CHECK(d.val.size() == 400);
    std::size_t class0 = 0;
    for (auto i : d.train) class0 += d.labels[i] == 0;
    CHECK(class0 == 800);
}

TEST_CASE("spirals split is stratified within one sample") {
    const auto d = make_spirals(3, 37, 3, 0.1);
    for (int c = 0; c < 3; ++c) {
        const auto in_train = std::count_if(d.train.begin(), d.train.end(), [&](auto i) { return d.labels[i] == c; });
        CHECK(std::abs(static_cast<double>(in_train) - 0.8 * 37) <= 1.0);
    }
    std::set<std::size_t> all(d.train.begin(), d.train.end());
    all.insert(d.val.begin(), d.val.end());
    CHECK(all.size() == d.rows);
}

TEST_CASE("spirals are deterministic in the seed") {
    const auto a = make_spirals(5, 100, 2, 0.2);
    const auto b = make_spirals(5, 100, 2, 0.2);
    const auto c = make_spirals(6, 100, 2, 0.2);
    CHECK(a.features == b.features);
    CHECK(a.train == b.train);
    CHECK(a.features != c.features);
}

TEST_CASE("noise-free spiral arms are disjoint") {
    const auto d = make_spirals(1, 200, 2, 0.0);
    std::set<std::pair<double, double>> arm0, arm1;
    for (std::size_t i = 0; i < d.rows; ++i) {
        const std::pair<double, double> p{d.features[2 * i], d.features[2 * i + 1]};
        (d.labels[i] == 0 ? arm0 : arm1).insert(p);
    }
    for (const auto& p : arm0) CHECK_FALSE(arm1.count(p));
}

TEST_CASE("features are standardized on the training split") {
    const auto d = make_spirals(2, 300, 2, 0.2);
    for (std::size_t dim = 0; dim < 2; ++dim) {
        double mean = 0.0, var = 0.0;
        for (auto i : d.train) mean += d.features[i * 2 + dim];
        mean /= static_cast<double>(d.train.size());
        for (auto i : d.train) var += std::pow(d.features[i * 2 + dim] - mean, 2);
        var /= static_cast<double>(d.train.size());
        CHECK(std::abs(mean) < 1e-12);
        CHECK(var == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("spiral arguments are validated") {
    CHECK_THROWS_AS(make_spirals(1, 0, 2, 0.2), ConfigError);
    CHECK_THROWS_AS(make_spirals(1, 10, 1, 0.2), ConfigError);
    CHECK_THROWS_AS(make_spirals(1, 10, 2, -1.0), ConfigError);
}

TEST_CASE("csv with integer labels is a classification task") {
    const auto dir = lawa_test::scratch_dir("csv_small");
    lawa_test::spit(dir / "d.csv", "a,label,b\n1,0,2\n3,1,4\n5,0,6\n");
    const auto d = load_csv(dir / "d.csv", "label");
    CHECK(d.task == TaskKind::Classification);
    CHECK(d.classes == 2);
    CHECK(d.rows == 3);
    CHECK(d.dims == 2);
    CHECK(d.labels == std::vector<std::int32_t>{0, 1, 0});
}

TEST_CASE("csv with fractional labels is a regression task") {
    const auto dir = lawa_test::scratch_dir("csv_reg");
    lawa_test::spit(dir / "d.csv", "x,y\n1,0.5\n2,1.5\n3,2.0\n");
    const auto d = load_csv(dir / "d.csv", "y");
    CHECK(d.task == TaskKind::Regression);
    CHECK(d.targets == std::vector<double>{0.5, 1.5, 2.0});
}

TEST_CASE("csv errors carry their location") {
    const auto dir = lawa_test::scratch_dir("csv_bad");
    lawa_test::spit(dir / "d.csv", "a,label\n1,0\n2,x\n");
    CHECK_THROWS_AS(load_csv(dir / "d.csv", "target"), SchemaError);
    try {
        (void)load_csv(dir / "d.csv", "label");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
        CHECK(e.column() == 2);
    }
    CHECK_THROWS_AS(load_csv(dir / "missing.csv", "label"), IoError);
}

TEST_CASE("csv split is 80/20 and stable") {
    const auto dir = lawa_test::scratch_dir("csv_hundred");
    std::string text = "x,label\n";
    for (int i = 0; i < 100; ++i) text += std::to_string(i) + "," + std::to_string(i % 2) + "\n";
    lawa_test::spit(dir / "d.csv", text);
    const auto a = load_csv(dir / "d.csv", "label");
    const auto b = load_csv(dir / "d.csv", "label");
    CHECK(a.train.size() == 80);
    CHECK(a.val.size() == 20);
    CHECK(a.train == b.train);
}

TEST_CASE("gather copies the selected rows") {
    const auto d = make_spirals(1, 10, 2, 0.2);
    const std::vector<std::size_t> idx{3, 0};
    const auto b = d.gather(idx);
    CHECK(b.rows == 2);
    CHECK(b.features[0] == d.features[6]);
    CHECK(b.features[3] == d.features[1]);
    CHECK(b.labels[0] == d.labels[3]);
}
