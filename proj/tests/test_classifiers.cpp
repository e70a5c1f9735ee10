#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "rosterflow/ml/model.hpp"
#include "rosterflow/util/random.hpp"
#include "toy.hpp"

using namespace rosterflow;
using namespace rosterflow::ml;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

using support::random_toy;
using support::Toy;

namespace {

Hyperparameters small_hp() {
    Hyperparameters hp;
    hp.forest.trees = 15;
    hp.extra_trees.trees = 15;
    hp.adaboost.rounds = 20;
    hp.gboost.rounds = 10;
    hp.gboost.max_depth = 3;
    hp.softmax.max_iterations = 200;
    return hp;
}

double sum(const ClassDistribution& p) { return std::accumulate(p.begin(), p.end(), 0.0); }

} // namespace

TEST_CASE("decision tree fits a separable toy exactly", "[classifiers]") {
    Toy t;
    t.n = 8;
    t.d = 2;
    t.X = {0, 0, 1, 0, 0, 1, 1, 1, 5, 5, 6, 5, 5, 6, 6, 6};
    t.y = {3, 3, 3, 3, 7, 7, 7, 7};
    auto model = fit(Algorithm::DecisionTree, t.view(), t.y, 42, 1);
    for (std::size_t i = 0; i < t.n; ++i) {
        CHECK(predict(model, t.view().row(i), 42, kNoMask) == t.y[i]);
    }
}

TEST_CASE("SAMME stage weight", "[classifiers]") {
    CHECK_THAT(samme_alpha(0.25, 29), WithinAbs(std::log(84.0), 1e-12));
    CHECK_THAT(samme_alpha(0.25, 29), WithinAbs(4.4308, 1e-4));
    CHECK_THAT(samme_alpha(0.25, 2), WithinAbs(std::log(3.0), 1e-12));
}

TEST_CASE("softmax gradient matches central differences", "[classifiers]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed * 31);
        std::size_t n = 5 + rng.below(10), d = 2 + rng.below(4), K = 2 + rng.below(4);
        if (seed == 1) {
            n = 5;
            d = 4;
            K = 3;
        }
        auto t = random_toy(seed, n, d, K);
        std::vector<double> W(K * (d + 1));
        for (double& w : W) {
            w = rng.normal();
        }
        const double l2 = 0.1;
        auto obj = softmax_objective(W, t.view(), t.y, K, l2);
        const double h = 1e-5;
        double num2 = 0.0, diff2 = 0.0;
        for (std::size_t j = 0; j < W.size(); ++j) {
            auto Wp = W, Wm = W;
            Wp[j] += h;
            Wm[j] -= h;
            double fd = (softmax_objective(Wp, t.view(), t.y, K, l2).loss -
                         softmax_objective(Wm, t.view(), t.y, K, l2).loss) /
                        (2.0 * h);
            diff2 += (fd - obj.gradient[j]) * (fd - obj.gradient[j]);
            num2 += fd * fd;
        }
        INFO("seed " << seed);
        CHECK(std::sqrt(diff2) / std::sqrt(num2) < 1e-5);
    }
}

TEST_CASE("boosting and softmax training loss never increases", "[classifiers]") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto t = random_toy(seed, 150, 4, 4, 1.0);
        GradientBoost gb;
        GradientBoostOptions opt;
        opt.rounds = 60;
        opt.learning_rate = 0.3;
        gb.fit(t.training(4), opt);
        const auto& trace = gb.loss_trace();
        REQUIRE(trace.size() == opt.rounds + 1);
        for (std::size_t i = 1; i < trace.size(); ++i) {
            CHECK(trace[i] <= trace[i - 1]);
        }
        CHECK(trace.back() < trace.front());

        SoftmaxRegression sm;
        sm.fit(t.training(4), SoftmaxOptions{});
        const auto& st = sm.loss_trace();
        for (std::size_t i = 1; i < st.size(); ++i) {
            CHECK(st[i] <= st[i - 1]);
        }
    }
}

TEST_CASE("single unbagged all-feature forest equals a decision tree", "[classifiers]") {
    Hyperparameters hp;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto t = random_toy(seed, 120, 5, 4, 1.0);
        hp.forest.trees = 1;
        hp.forest.bootstrap = false;
        hp.forest.max_features = t.d;
        auto tree = fit(Algorithm::DecisionTree, t.view(), t.y, 9, seed, hp);
        auto forest = fit(Algorithm::RandomForest, t.view(), t.y, 9, seed, hp);
        auto probe = random_toy(seed + 100, 200, 5, 4);
        for (std::size_t i = 0; i < probe.n; ++i) {
            auto row = probe.view().row(i);
            CHECK(tree.raw_distribution(row) == forest.raw_distribution(row));
        }
    }
}

TEST_CASE("AdaBoost sample weights stay a distribution", "[classifiers]") {
    auto t = random_toy(3, 200, 4, 5, 1.0);
    AdaBoost ada;
    std::size_t rounds_seen = 0;
    ada.fit(t.training(5), AdaBoostOptions{50, 1.0}, 7, [&](std::size_t, std::span<const double> w) {
        ++rounds_seen;
        double s = 0.0;
        for (double v : w) {
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK_THAT(s, WithinAbs(1.0, 1e-9));
    });
    CHECK(rounds_seen > 0);
}

TEST_CASE("masking contract on forest votes", "[classifiers]") {
    Toy t;
    t.n = 6;
    t.d = 1;
    t.X = {0, 0.1, 0.2, 10, 10.1, 10.2};
    t.y = {4, 4, 4, 9, 9, 9};
    auto model = fit(Algorithm::ExtraTrees, t.view(), t.y, 1, 3, small_hp());
    std::vector<double> x{0.05};
    auto p = predict_proba(model, x, 1, 9);
    CHECK(p[4] == 1.0);
    CHECK(p[9] == 0.0);

    auto masked = predict_proba(model, x, 1, 4);
    CHECK(masked[4] == 0.0);
    for (std::size_t team = 0; team < 30; ++team) {
        if (team != 4) {
            CHECK_THAT(masked[team], WithinAbs(1.0 / 29.0, 1e-15));
        }
    }
    CHECK_THAT(sum(masked), WithinAbs(1.0, 1e-12));
    CHECK(predict(model, x, 1, 4) == 0);
}

TEST_CASE("KNN probability is the neighbor label share", "[classifiers]") {
    Toy t;
    t.n = 7;
    t.d = 1;
    t.X = {0.0, 0.1, 0.2, 0.3, 100, 101, 102};
    t.y = {0, 0, 1, 2, 5, 5, 5};
    Hyperparameters hp;
    hp.knn.k = 4;
    hp.knn.standardize = false;
    auto model = fit(Algorithm::KNN, t.view(), t.y, 0, 0, hp);
    std::vector<double> x{0.15};
    auto p = predict_proba(model, x, 0, 3);
    CHECK(p[0] == 0.5);
    CHECK(p[1] == 0.25);
    CHECK(p[2] == 0.25);
    CHECK(p[3] == 0.0);
    CHECK(p[5] == 0.0);

    // k = 1 recalls every distinct training row.
    auto u = random_toy(8, 80, 3, 6);
    Hyperparameters one;
    one.knn.k = 1;
    auto m1 = fit(Algorithm::KNN, u.view(), u.y, 0, 0, one);
    for (std::size_t i = 0; i < u.n; ++i) {
        CHECK(predict(m1, u.view().row(i), 0, kNoMask) == u.y[i]);
    }
}

TEST_CASE("argmax picks the larger share and breaks ties by lower code", "[classifiers]") {
    ClassDistribution p{};
    p[2] = 0.6;
    p[7] = 0.4;
    CHECK(argmax(p) == 2);
    ClassDistribution tie{};
    tie[11] = 0.5;
    tie[3] = 0.5;
    CHECK(argmax(tie) == 3);

    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        ClassDistribution raw{};
        for (double& v : raw) {
            v = rng.bernoulli(0.3) ? 0.0 : static_cast<double>(rng.below(5));
        }
        int mask = static_cast<int>(rng.below(30));
        auto q = apply_mask(raw, mask);
        int best = -1;
        for (int t = 0; t < 30; ++t) {
            if (t != mask && (best < 0 || q[static_cast<std::size_t>(t)] > q[static_cast<std::size_t>(best)])) {
                best = t;
            }
        }
        CHECK(argmax(q) == best);
        CHECK(q[static_cast<std::size_t>(mask)] == 0.0);
        CHECK_THAT(sum(q), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("Gini split decrease", "[classifiers]") {
    Toy t;
    t.n = 4;
    t.d = 1;
    t.X = {0, 1, 2, 3};
    t.y = {0, 0, 1, 1};
    std::vector<std::size_t> rows{0, 1, 2, 3};
    CHECK_THAT(gini_split(t.training(2), rows, 0, 1.5), WithinAbs(0.5, 1e-15));
    CHECK(gini_split(t.training(2), rows, 0, 10.0) == 0.0);

    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto u = random_toy(seed, 60, 3, 3, 2.0);
        Rng rng(seed);
        std::vector<std::size_t> all(u.n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        rng.shuffle(all);
        std::vector<std::size_t> subset(all.begin(), all.begin() + 20);
        std::vector<std::size_t> features{0, 1, 2};
        auto best = best_gini_split(u.training(3), subset, {}, features);

        double oracle = -1.0;
        for (std::size_t f = 0; f < u.d; ++f) {
            std::vector<double> values;
            for (std::size_t r : subset) {
                values.push_back(u.X[r * u.d + f]);
            }
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            for (std::size_t i = 0; i + 1 < values.size(); ++i) {
                oracle = std::max(oracle, gini_split(u.training(3), subset, f, 0.5 * (values[i] + values[i + 1])));
            }
        }
        REQUIRE(best.valid);
        CHECK_THAT(best.decrease, WithinAbs(oracle, 1e-12));
        CHECK(best.decrease >= 0.0);
        CHECK_THAT(gini_split(u.training(3), subset, best.feature, best.threshold), WithinAbs(oracle, 1e-12));
    }
}

TEST_CASE("every algorithm is deterministic and round-trips through JSON", "[classifiers]") {
    auto t = random_toy(12, 90, 4, 5, 0.8);
    auto probe = random_toy(13, 40, 4, 5);
    auto dir = std::filesystem::temp_directory_path() / "rosterflow_model_test";
    std::filesystem::create_directories(dir);
    for (Algorithm alg : kAllAlgorithms) {
        INFO(to_string(alg));
        auto a = fit(alg, t.view(), t.y, 5, 77, small_hp());
        auto b = fit(alg, t.view(), t.y, 5, 77, small_hp());
        auto path = (dir / (std::string(cli_name(alg)) + ".json")).string();
        save_model(a, path);
        auto c = load_model(path);
        for (std::size_t i = 0; i < probe.n; ++i) {
            auto row = probe.view().row(i);
            auto pa = predict_proba(a, row, 5, 2);
            CHECK(pa == predict_proba(b, row, 5, 2));
            CHECK(pa == predict_proba(c, row, 5, 2));
            CHECK(pa[2] == 0.0);
            CHECK_THAT(sum(pa), WithinAbs(1.0, 1e-9));
        }
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("classifier errors", "[classifiers]") {
    auto t = random_toy(1, 20, 2, 3);
    auto kind = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Empty;
    };
    std::vector<int> same(t.n, 4);
    CHECK(kind([&] { fit(Algorithm::KNN, t.view(), same, 0, 0); }) == ErrorKind::DegenerateLabels);
    auto bad = t;
    bad.X[3] = std::nan("");
    CHECK(kind([&] { fit(Algorithm::KNN, bad.view(), bad.y, 0, 0); }) == ErrorKind::NonFiniteFeature);
    auto model = fit(Algorithm::KNN, t.view(), t.y, 11, 0);
    CHECK(kind([&] { predict_proba(model, t.view().row(0), 12, kNoMask); }) == ErrorKind::ManifestMismatch);
    std::vector<double> wide(3, 0.0);
    CHECK(kind([&] { predict_proba(model, wide, 11, kNoMask); }) == ErrorKind::ManifestMismatch);
    Hyperparameters hp;
    hp.knn.k = 0;
    CHECK(kind([&] { fit(Algorithm::KNN, t.view(), t.y, 0, 0, hp); }) == ErrorKind::InvalidHyperparameter);
    hp = {};
    hp.gboost.learning_rate = 0.0;
    CHECK(kind([&] { fit(Algorithm::GradientBoost, t.view(), t.y, 0, 0, hp); }) ==
          ErrorKind::InvalidHyperparameter);
}

TEST_CASE("algorithm names parse", "[classifiers]") {
    CHECK(parse_algorithm("xgb-like") == Algorithm::GradientBoost);
    CHECK(parse_algorithm("forest") == Algorithm::RandomForest);
    CHECK(parse_algorithm("ExtraTrees") == Algorithm::ExtraTrees);
    CHECK(parse_algorithms("all").size() == 6);
    CHECK(parse_algorithms("knn,logreg") == std::vector<Algorithm>{Algorithm::KNN, Algorithm::SoftmaxRegression});
    CHECK_THROWS_AS(parse_algorithm("svm"), Error);
}
