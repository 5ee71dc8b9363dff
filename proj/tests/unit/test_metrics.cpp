#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "lexrel/errors.hpp"
#include "lexrel/metrics.hpp"
#include "lexrel/rng.hpp"

using namespace lexrel;

namespace {

// Independent oracle: pair counting, (wins + ties/2) / (P*N).
double auc_brute(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0, ties = 0.0;
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        ++pos;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] == 1) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) ties += 1.0;
        }
    }
    for (int y : labels) neg += (y != 1);
    return (wins + 0.5 * ties) / (static_cast<double>(pos) * static_cast<double>(neg));
}

// Independent ROC sweep: thresholds at every distinct score, trapezoid area.
double auc_roc_trapezoid(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::set<double> uniq(scores.begin(), scores.end());
    std::vector<double> thresholds(uniq.begin(), uniq.end());
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());

    double pos = 0, neg = 0;
    for (int y : labels) (y == 1 ? pos : neg) += 1.0;

    std::vector<std::pair<double, double>> curve = {{0.0, 0.0}}; // (fpr, tpr)
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= t) (labels[i] == 1 ? tp : fp) += 1.0;
        }
        curve.emplace_back(fp / neg, tp / pos);
    }
    curve.emplace_back(1.0, 1.0);
    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i)
        area += (curve[i].first - curve[i - 1].first) * (curve[i].second + curve[i - 1].second) / 2.0;
    return area;
}

} // namespace

TEST_CASE("confusion matrix counts and the threshold boundary") {
    const std::vector<double> s1 = {0.9, 0.2};
    const std::vector<int> l1 = {1, 0};
    const ConfusionMatrix perfect = confusion(s1, l1, 0.5);
    CHECK(perfect.tp == 1);
    CHECK(perfect.tn == 1);
    CHECK(perfect.fp == 0);
    CHECK(perfect.fn == 0);

    // A score exactly at the threshold is predicted positive.
    const std::vector<double> s2 = {0.5};
    const std::vector<int> l2 = {1};
    CHECK(confusion(s2, l2, 0.5).tp == 1);

    const std::vector<double> s3 = {0.6, 0.6, 0.4};
    const std::vector<int> l3 = {1, 0, 1};
    const ConfusionMatrix cm = confusion(s3, l3, 0.5);
    CHECK(cm.tp == 1);
    CHECK(cm.fp == 1);
    CHECK(cm.fn == 1);
    CHECK(cm.tn == 0);

    const std::vector<int> short_labels = {1};
    CHECK_THROWS_AS(confusion(s3, short_labels, 0.5), PreconditionError);
}

TEST_CASE("precision/recall/f1 with undefined cases") {
    const Prf ok = prf({2, 1, 1, 2});
    CHECK(*ok.precision == doctest::Approx(2.0 / 3.0));
    CHECK(*ok.recall == doctest::Approx(2.0 / 3.0));
    CHECK(*ok.f1 == doctest::Approx(2.0 / 3.0));

    const Prf perfect = prf({5, 0, 0, 5});
    CHECK(*perfect.precision == 1.0);
    CHECK(*perfect.recall == 1.0);
    CHECK(*perfect.f1 == 1.0);

    // No positive predictions: precision undefined, not zero.
    const Prf no_pred = prf({0, 0, 3, 4});
    CHECK_FALSE(no_pred.precision.has_value());
    CHECK(no_pred.recall.has_value());
    CHECK_FALSE(no_pred.f1.has_value());
}

TEST_CASE("mcc hand cases and conventions") {
    CHECK(mcc({2, 1, 1, 2}) == doctest::Approx(3.0 / 9.0).epsilon(1e-12));
    CHECK(mcc({5, 0, 0, 5}) == 1.0);
    CHECK(mcc({0, 2, 2, 0}) == -1.0);
    CHECK(mcc({3, 0, 2, 0}) == 0.0); // zero factor -> 0 by convention
}

TEST_CASE("mcc is symmetric under class swap") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const ConfusionMatrix cm{rng.below(40), rng.below(40), rng.below(40), rng.below(40)};
        const ConfusionMatrix swapped{cm.tn, cm.fn, cm.fp, cm.tp};
        CHECK(mcc(cm) == doctest::Approx(mcc(swapped)).epsilon(1e-12));
    }
}

TEST_CASE("auc hand cases") {
    CHECK(auc(std::vector<double>{0.9, 0.8, 0.4, 0.3}, std::vector<int>{1, 1, 0, 0}) == 1.0);
    CHECK(auc(std::vector<double>{0.7, 0.7, 0.7, 0.7}, std::vector<int>{1, 0, 1, 0}) == 0.5);
    // pos {0.8, 0.4}, neg {0.6, 0.2}: wins 3 of 4 pairs.
    CHECK(auc(std::vector<double>{0.8, 0.4, 0.6, 0.2}, std::vector<int>{1, 1, 0, 0}) == 0.75);
    CHECK_THROWS_AS(auc(std::vector<double>{0.5, 0.6}, std::vector<int>{1, 1}), PreconditionError);
}

TEST_CASE("auc equals brute-force pair counting and the roc trapezoid") {
    Rng rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(49);
        std::vector<double> scores;
        std::vector<int> labels;
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < n; ++i) {
            // Coarse score grid so ties actually happen.
            scores.push_back(static_cast<double>(rng.below(8)) / 8.0);
            labels.push_back(static_cast<int>(rng.below(2)));
            has0 |= labels.back() == 0;
            has1 |= labels.back() == 1;
        }
        if (!has0) labels[0] = 0;
        if (!has1) labels[labels.size() - 1] = 1;

        const double fast = auc(scores, labels);
        CHECK(std::abs(fast - auc_brute(scores, labels)) < 1e-12);
        CHECK(std::abs(fast - auc_roc_trapezoid(scores, labels)) < 1e-9);
        CHECK(fast >= 0.0);
        CHECK(fast <= 1.0);

        // Invariance under a strictly monotone transform.
        std::vector<double> transformed;
        for (double s : scores) transformed.push_back(std::exp(3.0 * s) - 2.0);
        CHECK(auc(transformed, labels) == doctest::Approx(fast).epsilon(1e-12));
    }
}

TEST_CASE("evaluate bundles the metric suite") {
    const std::vector<double> scores = {0.9, 0.8, 0.3, 0.6};
    const std::vector<int> labels = {1, 1, 0, 0};
    const EvalReport r = evaluate(scores, labels, 0.5, "hate");
    CHECK(r.task == "hate");
    CHECK(r.n == 4);
    CHECK(*r.precision == doctest::Approx(2.0 / 3.0));
    CHECK(*r.recall == 1.0);
    CHECK(r.auc.has_value());

    // Single-class labels leave auc undefined instead of failing.
    const std::vector<int> ones = {1, 1, 1, 1};
    const EvalReport single = evaluate(scores, ones, 0.5, "hate");
    CHECK_FALSE(single.auc.has_value());
    CHECK(single.recall.has_value());
}

TEST_CASE("compare reproduces the published change arithmetic") {
    EvalReport base, treat;
    base.task = treat.task = "hate";
    base.threshold = treat.threshold = 0.5;
    base.recall = 0.769;
    treat.recall = 0.866;
    base.f1 = 0.756;
    treat.f1 = 0.816;

    const DeltaReport d = compare(base, treat);
    CHECK(*d.d_recall == doctest::Approx(9.7).epsilon(1e-9));
    CHECK(*d.d_f1 == doctest::Approx(6.0).epsilon(1e-9));
    CHECK_FALSE(d.d_precision.has_value()); // undefined on both sides

    SUBCASE("identical reports give all-zero changes") {
        const DeltaReport zero = compare(base, base);
        CHECK(*zero.d_recall == 0.0);
        CHECK(*zero.d_f1 == 0.0);
    }
    SUBCASE("mismatched task or threshold is rejected") {
        EvalReport other = treat;
        other.task = "sarcasm";
        CHECK_THROWS_AS(compare(base, other), PreconditionError);
        other = treat;
        other.threshold = 0.7;
        CHECK_THROWS_AS(compare(base, other), PreconditionError);
    }
}

TEST_CASE("undefined metrics serialize as null") {
    EvalReport r;
    r.task = "hate";
    r.mcc = 0.25;
    const nlohmann::json j = r.to_json();
    CHECK(j["precision"].is_null());
    CHECK(j["auc"].is_null());
    CHECK(j["mcc"] == 0.25);

    EvalReport other = r;
    other.mcc = 0.5;
    const DeltaReport d = compare(r, other);
    const nlohmann::json dj = d.to_json();
    CHECK(dj["change"]["precision"].is_null());
    CHECK(dj["change"]["mcc"] == doctest::Approx(25.0));
    CHECK(d.to_csv().find("precision,,,") != std::string::npos);
}
