#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gadepth/classical.hpp"
#include "test_util.hpp"

using namespace gadepth;

namespace {

Dataset from_rows(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
    Matrix x(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < rows[i].size(); ++c) x(i, c) = rows[i][c];
    std::vector<std::string> names;
    for (std::size_t c = 0; c < rows[0].size(); ++c) names.push_back("g" + std::to_string(c));
    return make_dataset(std::move(x), labels, std::move(names));
}

Dataset shuffled_rows(const Dataset& d, std::uint64_t seed) {
    std::vector<std::size_t> order(d.n_rows());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    Matrix x(d.n_rows(), d.n_features());
    std::vector<int> y(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        y[i] = d.labels[order[i]];
        for (std::size_t c = 0; c < d.n_features(); ++c) x(i, c) = d.features(order[i], c);
    }
    return make_dataset(std::move(x), std::move(y), d.feature_names);
}

Dataset label_swapped(const Dataset& d) {
    std::vector<int> y(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) y[i] = 1 - d.labels[i];
    return make_dataset(d.features, std::move(y), d.feature_names);
}

// XOR on het indicators of the first two genotype columns; separable since
// the label is a pure function of the features
Dataset xor_base(std::size_t n, std::uint64_t seed) {
    return testutil::xor_genotype_dataset(n, 4, 2, seed);
}

Dataset pad_lognormal(const Dataset& d, std::size_t extra, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(d.n_rows(), d.n_features() + extra);
    for (std::size_t i = 0; i < d.n_rows(); ++i)
        for (std::size_t c = 0; c < d.n_features(); ++c) x(i, c) = d.features(i, c);
    for (std::size_t c = 0; c < extra; ++c)
        for (std::size_t i = 0; i < d.n_rows(); ++i)
            x(i, d.n_features() + c) = std::exp(1.5 * rng.normal());
    std::vector<std::string> names = d.feature_names;
    for (std::size_t c = 0; c < extra; ++c) names.push_back("noise" + std::to_string(c));
    return make_dataset(std::move(x), d.labels, std::move(names));
}

}  // namespace

TEST_CASE("feature measures on disjoint and on identical class distributions") {
    // one feature, disjoint class value ranges
    const Dataset disjoint = from_rows({{0.0}, {0.5}, {5.0}, {6.0}}, {0, 0, 1, 1});
    auto f = feature_based_measures(disjoint);
    CHECK(f.at("f2") == 0.0);
    CHECK(f.at("f3") == 0.0);

    // identical class-conditional distributions on every feature
    const Dataset overlap =
        from_rows({{1, 5}, {2, 6}, {3, 7}, {1, 5}, {2, 6}, {3, 7}}, {0, 0, 0, 1, 1, 1});
    f = feature_based_measures(overlap);
    CHECK(f.at("f2") == 1.0);
    CHECK(f.at("f3") == 1.0);
    CHECK(f.at("f4") == 1.0);
    CHECK(f.at("f1") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f2 goes to zero under heavy-tailed noise padding") {
    const Dataset base = xor_base(400, 7);
    const auto f_base = feature_based_measures(base);
    CHECK(f_base.at("f2") >= 0.9);  // genotype features overlap almost completely

    const Dataset padded = pad_lognormal(base, 80, 11);
    const auto f_pad = feature_based_measures(padded);
    CHECK(f_pad.at("f2") <= 1e-6);
}

TEST_CASE("f2 never increases when an overlapping feature is appended") {
    Rng rng(40);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 20 + 2 * rng.uniform_index(30);
        const Dataset d = testutil::noise_dataset(n, 1 + rng.uniform_index(4), trial);
        const Dataset padded = pad_lognormal(d, 1, 1000 + trial);
        CHECK(feature_based_measures(padded).at("f2") <=
              feature_based_measures(d).at("f2") + 1e-15);
    }
}

TEST_CASE("linearity: separable data scores zero, XOR does not") {
    const Dataset separable = testutil::separated_clusters(40, 2, 12.0, 5);
    auto l = linearity_measures(separable);
    CHECK(l.at("l1") == 0.0);
    CHECK(l.at("l2") == 0.0);

    const Dataset xor_d = xor_base(200, 3);
    l = linearity_measures(xor_d);
    CHECK(l.at("l2") >= 0.4);

    // classifier symmetry under class swap
    const auto swapped = linearity_measures(label_swapped(xor_d));
    CHECK(swapped.at("l2") == doctest::Approx(l.at("l2")).epsilon(1e-9));
}

TEST_CASE("neighborhood: far clusters give one crossing edge and zero NN error") {
    const std::size_t per_class = 30;
    const Dataset d = testutil::separated_clusters(per_class, 3, 60.0, 9);
    const auto m = neighborhood_measures(d);
    CHECK(m.at("n1") == doctest::Approx(1.0 / (2.0 * per_class - 1)).epsilon(1e-12));
    CHECK(m.at("n3") == 0.0);
    CHECK(m.at("n2") <= 0.2);
}

TEST_CASE("neighborhood: random labels on one cloud sit at chance") {
    const Dataset d = testutil::noise_dataset(200, 3, 77);
    const auto m = neighborhood_measures(d);
    CHECK(std::abs(m.at("n3") - 0.5) <= 0.1);
}

TEST_CASE("neighborhood measures are invariant to feature scaling") {
    const Dataset d = testutil::noise_dataset(60, 3, 15);
    Matrix x = d.features;
    for (std::size_t i = 0; i < x.rows; ++i) x(i, 1) *= 1000.0;
    const Dataset scaled = make_dataset(std::move(x), d.labels, d.feature_names);

    const auto a = neighborhood_measures(d);
    const auto b = neighborhood_measures(scaled);
    CHECK(a.at("n1") == b.at("n1"));
    CHECK(a.at("n3") == b.at("n3"));
    CHECK(a.at("t1") == b.at("t1"));
    CHECK(a.at("lsc") == doctest::Approx(b.at("lsc")).epsilon(1e-12));
    CHECK(a.at("n2") == doctest::Approx(b.at("n2")).epsilon(1e-9));
}

TEST_CASE("network measures on degenerate graphs") {
    // complete graph: all points identical, single class via the graph routine
    std::vector<std::vector<std::size_t>> complete(6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j) complete[i].push_back(j);
    const GraphMeasures full = network_measures_from_adjacency(complete);
    CHECK(full.density == 0.0);
    CHECK(full.cls_coef == 0.0);

    const GraphMeasures empty = network_measures_from_adjacency(
        std::vector<std::vector<std::size_t>>(5));
    CHECK(empty.density == 1.0);
    CHECK(empty.hubs == 1.0);
}

TEST_CASE("hub scores of a star graph match the closed form") {
    std::vector<std::vector<std::size_t>> star(5);
    for (std::size_t leaf = 1; leaf < 5; ++leaf) {
        star[0].push_back(leaf);
        star[leaf].push_back(0);
    }
    const auto scores = hub_scores(star);
    // principal eigenvector of A^2 for K_{1,4}: center 1, leaves 1/2
    const double peak = *std::max_element(scores.begin(), scores.end());
    CHECK(scores[0] == peak);
    for (std::size_t leaf = 1; leaf < 5; ++leaf)
        CHECK(scores[leaf] / peak == doctest::Approx(0.5).epsilon(1e-8));

    const GraphMeasures gm = network_measures_from_adjacency(star);
    CHECK(gm.hubs == doctest::Approx(1.0 - (1.0 + 4 * 0.5) / 5.0).epsilon(1e-8));
}

TEST_CASE("network measures on a real dataset stay in range and prune enemy edges") {
    const Dataset d = testutil::separated_clusters(20, 2, 4.0, 2);
    const auto m = network_measures(d);
    for (const auto& key : {"density", "cls_coef", "hubs"}) {
        CHECK(m.at(key) >= 0.0);
        CHECK(m.at(key) <= 1.0);
    }
}

TEST_CASE("dimensionality measures") {
    // data on a line in 5-D: one component carries everything
    Matrix x(40, 5);
    Rng rng(6);
    for (std::size_t i = 0; i < 40; ++i) {
        const double t = rng.uniform01();
        for (std::size_t c = 0; c < 5; ++c) x(i, c) = t * (static_cast<double>(c) + 1.0);
    }
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 40; ++i) y[i] = i % 2 == 0 ? 0 : 1;
    const Dataset line = make_dataset(std::move(x), std::move(y), {"a", "b", "c", "d", "e"});
    auto m = dimensionality_measures(line);
    CHECK(m.at("t2") == 0.125);
    CHECK(m.at("t3") == doctest::Approx(1.0 / 40.0));
    CHECK(m.at("t4") == doctest::Approx(0.2));

    // isotropic 4-D gaussian: all four components are needed for 95%
    Matrix g(2000, 4);
    Rng rng2(8);
    for (std::size_t i = 0; i < 2000; ++i)
        for (std::size_t c = 0; c < 4; ++c) g(i, c) = rng2.normal();
    std::vector<int> gy(2000);
    for (std::size_t i = 0; i < 2000; ++i) gy[i] = i % 2 == 0 ? 0 : 1;
    const Dataset iso = make_dataset(std::move(g), std::move(gy), {"a", "b", "c", "d"});
    m = dimensionality_measures(iso);
    CHECK(m.at("t4") == 1.0);  // m* = 4

    // zero-variance data: zero components
    Matrix z(10, 3);
    std::vector<int> zy = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const Dataset flat = make_dataset(std::move(z), std::move(zy), {"a", "b", "c"});
    m = dimensionality_measures(flat);
    CHECK(m.at("t3") == 0.0);
    CHECK(m.at("t4") == 0.0);
}

TEST_CASE("class imbalance closed forms") {
    auto balanced = class_imbalance_measures(testutil::noise_dataset(100, 2, 1));
    CHECK(balanced.at("c1") == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(balanced.at("c2") == doctest::Approx(0.0).epsilon(1e-12));

    Matrix x(100, 1);
    std::vector<int> y(100, 0);
    Rng rng(2);
    for (std::size_t i = 0; i < 100; ++i) {
        x(i, 0) = rng.uniform01();
        if (i < 90) y[i] = 1;
    }
    const Dataset nine_to_one = make_dataset(std::move(x), std::move(y), {"a"});
    CHECK(class_imbalance_measures(nine_to_one).at("c2") ==
          doctest::Approx(0.7804878048780488).epsilon(1e-6));

    Matrix x2(100, 1);
    std::vector<int> y2(100, 0);
    Rng rng2(3);
    for (std::size_t i = 0; i < 100; ++i) {
        x2(i, 0) = rng2.uniform01();
        if (i < 75) y2[i] = 1;
    }
    const Dataset three_to_one = make_dataset(std::move(x2), std::move(y2), {"a"});
    CHECK(class_imbalance_measures(three_to_one).at("c1") ==
          doctest::Approx(0.18872187554086717).epsilon(1e-6));
}

TEST_CASE("full_report: separable data scores below its label-shuffled twin") {
    const Dataset d = testutil::separated_clusters(40, 3, 8.0, 21);
    std::vector<int> y = d.labels;
    Rng rng(31);
    rng.shuffle(y);
    const Dataset shuffled = make_dataset(d.features, std::move(y), d.feature_names);

    ClassicalConfig cfg;
    cfg.hinge_epochs = 500;
    const ClassicalReport clean = full_report(d, cfg);
    const ClassicalReport noisy = full_report(shuffled, cfg);
    CHECK(clean.score < noisy.score);
}

TEST_CASE("full_report: noise padding strictly decreases the score") {
    const Dataset base = xor_base(240, 19);
    const Dataset padded = pad_lognormal(base, 40, 23);
    ClassicalConfig cfg;
    cfg.hinge_epochs = 500;
    const ClassicalReport a = full_report(base, cfg);
    const ClassicalReport b = full_report(padded, cfg);
    CHECK(b.values.at("f2") <= 1e-6);
    CHECK(b.score < a.score);
}

TEST_CASE("full_report is deterministic and serializes 23 columns") {
    const Dataset d = testutil::noise_dataset(50, 4, 47);
    const ClassicalReport a = full_report(d);
    const ClassicalReport b = full_report(d);
    CHECK(classical_report_to_json(a) == classical_report_to_json(b));

    const std::string csv = classical_report_to_csv(a);
    const std::string header = csv.substr(0, csv.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') == 22);  // 23 columns
    CHECK(header.substr(header.rfind(',') + 1) == "score");
    CHECK(a.values.size() == 22);
}

TEST_CASE("row permutation changes no metric value") {
    const Dataset d = testutil::xor_genotype_dataset(80, 5, 2, 61);
    const Dataset p = shuffled_rows(d, 5);
    const ClassicalReport a = full_report(d);
    const ClassicalReport b = full_report(p);
    for (const auto& [key, value] : a.values) CHECK(value == b.values.at(key));
    CHECK(a.score == b.score);
}

TEST_CASE("label swap leaves the symmetric metrics unchanged") {
    const Dataset d = testutil::noise_dataset(70, 3, 53);
    const ClassicalReport a = full_report(d);
    const ClassicalReport b = full_report(label_swapped(d));
    for (const auto& key :
         {"f1", "f2", "f3", "n1", "n2", "n3", "t1", "t2", "c1", "c2", "density"})
        CHECK(a.values.at(key) == doctest::Approx(b.values.at(key)).epsilon(1e-9));
}

TEST_CASE("fuzz: ranged metrics stay in range over random datasets") {
    const std::vector<std::string> unit_ranged = {"f1v", "f2", "f3", "f4", "l2", "l3",
                                                  "n1", "n2", "n3", "n4", "t1", "lsc",
                                                  "density", "cls_coef", "hubs", "t4",
                                                  "c1", "c2"};
    ClassicalConfig cfg;
    cfg.hinge_epochs = 150;
    Rng rng(2025);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 10 + rng.uniform_index(91);
        const std::size_t d = 1 + rng.uniform_index(30);
        Matrix x(n, d);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.bernoulli(0.3 + 0.4 * rng.uniform01()) ? 1 : 0;
            for (std::size_t c = 0; c < d; ++c) {
                // mix of discrete, uniform and heavy-tailed columns
                const int kind = static_cast<int>(c % 3);
                x(i, c) = kind == 0 ? static_cast<double>(rng.uniform_index(3))
                          : kind == 1 ? rng.uniform01()
                                      : std::exp(rng.normal());
            }
        }
        y[0] = 0;
        y[1] = 1;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const ClassicalReport rep =
            full_report(make_dataset(std::move(x), std::move(y), [&] {
                            std::vector<std::string> names;
                            for (std::size_t c = 0; c < d; ++c)
                                names.push_back("g" + std::to_string(c));
                            return names;
                        }()),
                        cfg);
        for (const auto& key : unit_ranged) {
            CHECK(rep.values.at(key) >= -1e-12);
            CHECK(rep.values.at(key) <= 1.0 + 1e-12);
        }
        CHECK(rep.values.at("l1") >= 0.0);
        CHECK(rep.values.at("t2") >= 0.0);
        CHECK(rep.values.at("t3") >= 0.0);
        CHECK(std::isfinite(rep.score));
    }
}
