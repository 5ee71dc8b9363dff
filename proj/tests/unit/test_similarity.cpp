#include <doctest.h>

#include <cmath>

#include "lexrel/errors.hpp"
#include "lexrel/rng.hpp"
#include "lexrel/similarity.hpp"

#include "helpers.hpp"

using namespace lexrel;
using testutil::corpus_of;
using testutil::doc;

namespace {

// Independent oracle: literal enumeration of intersection and union.
double jaccard_brute(const NgramSet& a, const NgramSet& b) {
    NgramSet uni = a;
    uni.insert(b.begin(), b.end());
    if (uni.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : uni) inter += (a.count(x) && b.count(x));
    return static_cast<double>(inter) / static_cast<double>(uni.size());
}

// Independent oracle: JSD via the entropy identity H(M) - (H(P)+H(Q))/2, base 2.
double jsd_brute(const UnigramDistribution& p, const UnigramDistribution& q) {
    auto entropy = [](const std::unordered_map<std::string, double>& probs) {
        double h = 0.0;
        for (const auto& [k, v] : probs)
            if (v > 0.0) h -= v * std::log2(v);
        return h;
    };
    std::unordered_map<std::string, double> m;
    for (const auto& [k, v] : p.probs) m[k] += 0.5 * v;
    for (const auto& [k, v] : q.probs) m[k] += 0.5 * v;
    return entropy(m) - 0.5 * entropy(p.probs) - 0.5 * entropy(q.probs);
}

UnigramDistribution random_distribution(Rng& rng, std::size_t max_support) {
    UnigramDistribution d;
    const std::size_t support = 1 + rng.below(max_support);
    double total = 0.0;
    std::vector<std::pair<std::string, double>> raw;
    for (std::size_t i = 0; i < support; ++i) {
        const double w = rng.unit() + 1e-3;
        raw.emplace_back("w" + std::to_string(rng.below(2 * max_support)), w);
    }
    for (auto& [k, v] : raw) {
        auto [it, inserted] = d.probs.emplace(k, v);
        if (!inserted) it->second += v;
    }
    for (auto& [k, v] : d.probs) total += v;
    for (auto& [k, v] : d.probs) v /= total;
    return d;
}

} // namespace

TEST_CASE("jaccard hand cases") {
    CHECK(jaccard({"a", "b", "c"}, {"b", "c", "d"}) == doctest::Approx(0.5));
    CHECK(jaccard({"x", "y"}, {"x", "y"}) == 1.0);
    CHECK(jaccard({"x"}, {"y"}) == 0.0);
    CHECK(jaccard({}, {}) == 1.0);
    CHECK(jaccard({}, {"a"}) == 0.0);
}

TEST_CASE("jaccard matches brute force on random small sets") {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        NgramSet a, b;
        const std::size_t na = rng.below(21), nb = rng.below(21);
        for (std::size_t i = 0; i < na; ++i) a.insert("e" + std::to_string(rng.below(30)));
        for (std::size_t i = 0; i < nb; ++i) b.insert("e" + std::to_string(rng.below(30)));
        const double fast = jaccard(a, b);
        CHECK(fast == doctest::Approx(jaccard_brute(a, b)).epsilon(1e-12));
        CHECK(fast == jaccard(b, a));
        CHECK(fast >= 0.0);
        CHECK(fast <= 1.0);
    }
}

TEST_CASE("jsd hand cases") {
    UnigramDistribution p{{{"x", 1.0}}};
    UnigramDistribution q{{{"x", 0.5}, {"y", 0.5}}};
    // H(0.75, 0.25) - 0.5 = 0.811278... - 0.5
    CHECK(std::abs(jsd(p, q) - 0.31128) < 1e-4);

    CHECK(jsd(q, q) == 0.0);
    UnigramDistribution r{{{"z", 1.0}}};
    CHECK(jsd(p, r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jsd rejects unnormalized input") {
    UnigramDistribution bad{{{"x", 0.7}}};
    UnigramDistribution ok{{{"x", 1.0}}};
    CHECK_THROWS_AS(jsd(bad, ok), PreconditionError);
    CHECK_THROWS_AS(jsd(ok, bad), PreconditionError);
}

TEST_CASE("jsd matches the entropy-identity oracle and is symmetric") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_distribution(rng, 10);
        const auto q = random_distribution(rng, 10);
        const double v = jsd(p, q);
        CHECK(std::abs(v - jsd_brute(p, q)) < 1e-9);
        CHECK(std::abs(v - jsd(q, p)) < 1e-12);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(jsd(p, p) == 0.0);
    }
}

TEST_CASE("jsd distance variant is bounded by sqrt(ln 2)") {
    UnigramDistribution p{{{"x", 1.0}}};
    UnigramDistribution q{{{"y", 1.0}}};
    CHECK(jsd(p, q, JsdVariant::DistanceBaseE) ==
          doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-12));
    CHECK(jsd(p, p, JsdVariant::DistanceBaseE) == 0.0);
}

TEST_CASE("overlap_counts partitions exactly") {
    const OverlapCount oc = overlap_counts({"a", "b"}, {"b", "c", "d"});
    CHECK(oc.shared == 1);
    CHECK(oc.unique_a == 1);
    CHECK(oc.unique_b == 2);

    const OverlapCount same = overlap_counts({"x", "y", "z"}, {"x", "y", "z"});
    CHECK(same.shared == 3);
    CHECK(same.unique_a == 0);
    CHECK(same.unique_b == 0);
}

TEST_CASE("overlap_counts reproduces the venn arithmetic") {
    // Two top-1000 style sets sharing 542 elements.
    NgramSet a, b;
    for (int i = 0; i < 542; ++i) {
        a.insert("shared" + std::to_string(i));
        b.insert("shared" + std::to_string(i));
    }
    for (int i = 0; i < 458; ++i) {
        a.insert("only_a" + std::to_string(i));
        b.insert("only_b" + std::to_string(i));
    }
    const OverlapCount oc = overlap_counts(a, b);
    CHECK(oc.shared == 542);
    CHECK(oc.unique_a == 458);
    CHECK(oc.unique_b == 458);
    CHECK(oc.shared + oc.unique_a == a.size());
    CHECK(oc.shared + oc.unique_b == b.size());
}

namespace {

Corpus synthetic_corpus(const std::string& name, std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<Document> docs;
    for (std::size_t i = 0; i < n; ++i) {
        std::string text;
        const std::size_t len = 5 + rng.below(10);
        for (std::size_t k = 0; k < len; ++k) {
            if (!text.empty()) text.push_back(' ');
            text += "w" + std::to_string(rng.below(200));
        }
        docs.push_back(doc(name + std::to_string(i), text));
    }
    return corpus_of(std::move(docs), CorpusSource::Combined, name);
}

} // namespace

TEST_CASE("bootstrap determinism and report consistency") {
    const Corpus a = synthetic_corpus("a", 1, 120);
    const Corpus b = synthetic_corpus("b", 2, 120);
    BootstrapSpec spec;
    spec.iterations = 40;
    spec.sample_size = 30;
    spec.top_k = 100;
    spec.seed = 9;

    const SimilarityReport r1 = bootstrap_similarity(a, b, spec, 1, true);
    const SimilarityReport r2 = bootstrap_similarity(a, b, spec, 1, true);
    REQUIRE(r1.per_iteration.has_value());
    CHECK(*r1.per_iteration == *r2.per_iteration);

    SUBCASE("parallel run matches sequential bit for bit") {
        const SimilarityReport r4 = bootstrap_similarity(a, b, spec, 4, true);
        CHECK(*r4.per_iteration == *r1.per_iteration);
        CHECK(r4.mean == r1.mean);
        CHECK(r4.std_dev == r1.std_dev);
    }

    SUBCASE("summary recomputes exactly from per_iteration") {
        const auto& values = *r1.per_iteration;
        double sum = 0.0, mn = values[0], mx = values[0];
        for (double v : values) {
            sum += v;
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        const double mean = sum / static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        CHECK(r1.mean == mean);
        CHECK(r1.std_dev == std::sqrt(var / static_cast<double>(values.size())));
        CHECK(r1.min == mn);
        CHECK(r1.max == mx);
        CHECK(r1.min <= r1.mean);
        CHECK(r1.mean <= r1.max);
    }
}

TEST_CASE("bootstrap self-comparison is the identity") {
    const Corpus a = synthetic_corpus("self", 5, 60);
    BootstrapSpec spec;
    spec.iterations = 10;
    spec.sample_size = 60; // the whole corpus every iteration
    spec.top_k = 10000;
    spec.seed = 1;

    spec.metric = SimilarityMetric::Jaccard;
    const SimilarityReport jac = bootstrap_similarity(a, a, spec, 1, true);
    for (double v : *jac.per_iteration) CHECK(v == 1.0);

    spec.metric = SimilarityMetric::Jsd;
    const SimilarityReport div = bootstrap_similarity(a, a, spec, 1, true);
    for (double v : *div.per_iteration) CHECK(v == 0.0);
}

TEST_CASE("bootstrap without replacement rejects oversized samples by name") {
    const Corpus a = synthetic_corpus("big", 1, 50);
    const Corpus b = synthetic_corpus("tiny", 2, 10);
    BootstrapSpec spec;
    spec.sample_size = 20;
    try {
        bootstrap_similarity(a, b, spec);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("tiny") != std::string::npos);
    }
    spec.with_replacement = true;
    CHECK_NOTHROW(bootstrap_similarity(a, b, spec));
}

TEST_CASE("bootstrap_topk_sets matches the reported iteration") {
    const Corpus a = synthetic_corpus("a", 3, 80);
    const Corpus b = synthetic_corpus("b", 4, 80);
    BootstrapSpec spec;
    spec.iterations = 5;
    spec.sample_size = 40;
    spec.top_k = 60;
    spec.seed = 21;

    const SimilarityReport report = bootstrap_similarity(a, b, spec, 1, true);
    for (std::uint64_t i = 0; i < spec.iterations; ++i) {
        const auto [ta, tb] = bootstrap_topk_sets(a, b, spec, i);
        const NgramSet sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end());
        CHECK(jaccard(sa, sb) == (*report.per_iteration)[i]);
        const OverlapCount oc = overlap_counts(sa, sb);
        CHECK(oc.shared + oc.unique_a == sa.size());
        CHECK(oc.shared + oc.unique_b == sb.size());
    }
}
