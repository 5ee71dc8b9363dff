#include "lexrel/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lexrel/errors.hpp"
#include "lexrel/rng.hpp"

namespace lexrel {

double jaccard(const NgramSet& a, const NgramSet& b) {
    if (a.empty() && b.empty()) return 1.0;
    const NgramSet& small = a.size() <= b.size() ? a : b;
    const NgramSet& large = a.size() <= b.size() ? b : a;
    std::size_t inter = 0;
    for (const std::string& x : small)
        if (large.count(x)) ++inter;
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

void check_normalized(const UnigramDistribution& d, const char* side) {
    double sum = 0.0;
    for (const auto& [token, p] : d.probs) {
        if (!(p > 0.0) || p > 1.0)
            throw PreconditionError(std::string("jsd: ") + side +
                                    " has a probability outside (0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw PreconditionError(std::string("jsd: ") + side + " does not sum to 1");
}

// Sum of p * log(p/m) over the support of p, natural log.
double kl_to_mixture(const UnigramDistribution& p, const UnigramDistribution& q) {
    double acc = 0.0;
    for (const auto& [token, pp] : p.probs) {
        const auto it = q.probs.find(token);
        const double qq = it == q.probs.end() ? 0.0 : it->second;
        const double m = 0.5 * (pp + qq);
        acc += pp * std::log(pp / m);
    }
    return acc;
}

} // namespace

double jsd(const UnigramDistribution& p, const UnigramDistribution& q, JsdVariant variant) {
    check_normalized(p, "p");
    check_normalized(q, "q");
    const double nats = 0.5 * kl_to_mixture(p, q) + 0.5 * kl_to_mixture(q, p);
    if (variant == JsdVariant::DivergenceBase2) {
        const double bits = nats / std::log(2.0);
        return std::clamp(bits, 0.0, 1.0);
    }
    const double ln2 = std::log(2.0);
    return std::sqrt(std::clamp(nats, 0.0, ln2));
}

double jsd(const UnigramDistribution& p, const UnigramDistribution& q) {
    return jsd(p, q, JsdVariant::DivergenceBase2);
}

OverlapCount overlap_counts(const NgramSet& a, const NgramSet& b) {
    OverlapCount out;
    for (const std::string& x : a) {
        if (b.count(x))
            ++out.shared;
        else
            ++out.unique_a;
    }
    out.unique_b = b.size() - out.shared;
    return out;
}

std::string_view to_string(SimilarityMetric m) {
    return m == SimilarityMetric::Jaccard ? "jaccard" : "jsd";
}

SimilarityMetric similarity_metric_from_string(std::string_view s) {
    if (s == "jaccard") return SimilarityMetric::Jaccard;
    if (s == "jsd") return SimilarityMetric::Jsd;
    throw ConfigError("unknown similarity metric: " + std::string(s));
}

nlohmann::json SimilarityReport::to_json() const {
    nlohmann::json j{{"pair", {corpus_a, corpus_b}},
                     {"metric", metric},
                     {"mean", mean},
                     {"std", std_dev},
                     {"min", min},
                     {"max", max},
                     {"iterations", iterations},
                     {"sample_size", sample_size},
                     {"top_k", top_k},
                     {"seed", seed}};
    if (per_iteration) j["per_iteration"] = *per_iteration;
    return j;
}

std::string SimilarityReport::csv_header() {
    return "corpus_a,corpus_b,metric,mean,std,min,max";
}

std::string SimilarityReport::to_csv_row() const {
    std::ostringstream out;
    out.precision(17);
    out << corpus_a << ',' << corpus_b << ',' << metric << ',' << mean << ',' << std_dev << ','
        << min << ',' << max;
    return out.str();
}

namespace {

struct TokenCache {
    std::vector<std::vector<std::string>> docs;

    explicit TokenCache(const Corpus& corpus) {
        docs.reserve(corpus.documents.size());
        for (const Document& d : corpus.documents) docs.push_back(tokenize(d.text));
    }
};

std::vector<std::size_t> draw(Rng& rng, std::size_t corpus_size, const BootstrapSpec& spec) {
    const auto k = static_cast<std::size_t>(spec.sample_size);
    if (spec.with_replacement) return rng.sample_with_replacement(corpus_size, k);
    return rng.sample_without_replacement(corpus_size, k);
}

NgramSet topk_set_of_sample(const TokenCache& cache, const std::vector<std::size_t>& sample,
                            std::uint64_t k) {
    NgramTable table;
    const NgramOrders both{};
    for (std::size_t idx : sample) table.add_tokens(cache.docs[idx], both);
    auto ranked = top_k(table, static_cast<std::size_t>(k));
    return NgramSet(ranked.begin(), ranked.end());
}

UnigramDistribution dist_of_sample(const TokenCache& cache, const std::vector<std::size_t>& sample) {
    std::vector<std::vector<std::string>> subset;
    subset.reserve(sample.size());
    for (std::size_t idx : sample) subset.push_back(cache.docs[idx]);
    return unigram_distribution_from_tokens(subset);
}

void validate_bootstrap(const Corpus& a, const Corpus& b, const BootstrapSpec& spec) {
    if (spec.iterations < 1) throw ConfigError("bootstrap: iterations must be >= 1");
    if (spec.sample_size < 1) throw ConfigError("bootstrap: sample_size must be >= 1");
    if (a.documents.empty()) throw PreconditionError("bootstrap: corpus '" + a.name + "' is empty");
    if (b.documents.empty()) throw PreconditionError("bootstrap: corpus '" + b.name + "' is empty");
    if (!spec.with_replacement) {
        for (const Corpus* c : {&a, &b}) {
            if (spec.sample_size > c->documents.size())
                throw PreconditionError("bootstrap: sample_size " +
                                        std::to_string(spec.sample_size) + " exceeds corpus '" +
                                        c->name + "' size " +
                                        std::to_string(c->documents.size()) +
                                        " (without replacement)");
        }
    }
}

// One iteration: sample side a, then side b, from the same per-iteration
// stream, and score. Must stay in lockstep with bootstrap_topk_sets.
double run_iteration(const TokenCache& ca, const TokenCache& cb, std::size_t na, std::size_t nb,
                     const BootstrapSpec& spec, std::uint64_t iteration) {
    Rng rng(spec.seed ^ iteration);
    const auto sample_a = draw(rng, na, spec);
    const auto sample_b = draw(rng, nb, spec);
    if (spec.metric == SimilarityMetric::Jaccard) {
        const NgramSet sa = topk_set_of_sample(ca, sample_a, spec.top_k);
        const NgramSet sb = topk_set_of_sample(cb, sample_b, spec.top_k);
        return jaccard(sa, sb);
    }
    return jsd(dist_of_sample(ca, sample_a), dist_of_sample(cb, sample_b), spec.jsd_variant);
}

} // namespace

SimilarityReport bootstrap_similarity(const Corpus& a, const Corpus& b, const BootstrapSpec& spec,
                                      int threads, bool keep_per_iteration) {
    validate_bootstrap(a, b, spec);

    const TokenCache cache_a(a);
    const TokenCache cache_b(b);
    const std::size_t na = a.documents.size();
    const std::size_t nb = b.documents.size();
    const auto iters = static_cast<std::size_t>(spec.iterations);

    std::vector<double> values(iters);
    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(iters)));
    if (n_threads == 1) {
        for (std::size_t i = 0; i < iters; ++i)
            values[i] = run_iteration(cache_a, cache_b, na, nb, spec, i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t]() {
                for (std::size_t i = static_cast<std::size_t>(t); i < iters;
                     i += static_cast<std::size_t>(n_threads))
                    values[i] = run_iteration(cache_a, cache_b, na, nb, spec, i);
            });
        }
        for (std::thread& th : pool) th.join();
    }

    SimilarityReport report;
    report.corpus_a = a.name;
    report.corpus_b = b.name;
    report.metric = std::string(to_string(spec.metric));
    report.iterations = spec.iterations;
    report.sample_size = spec.sample_size;
    report.top_k = spec.top_k;
    report.seed = spec.seed;

    double sum = 0.0;
    report.min = values[0];
    report.max = values[0];
    for (double v : values) {
        sum += v;
        report.min = std::min(report.min, v);
        report.max = std::max(report.max, v);
    }
    report.mean = sum / static_cast<double>(iters);
    double var = 0.0;
    for (double v : values) var += (v - report.mean) * (v - report.mean);
    report.std_dev = std::sqrt(var / static_cast<double>(iters));
    if (keep_per_iteration) report.per_iteration = std::move(values);
    return report;
}

std::pair<std::vector<std::string>, std::vector<std::string>> bootstrap_topk_sets(
    const Corpus& a, const Corpus& b, const BootstrapSpec& spec, std::uint64_t iteration) {
    validate_bootstrap(a, b, spec);
    if (iteration >= spec.iterations)
        throw ConfigError("bootstrap iteration index out of range");

    const TokenCache cache_a(a);
    const TokenCache cache_b(b);
    Rng rng(spec.seed ^ iteration);
    const auto sample_a = draw(rng, a.documents.size(), spec);
    const auto sample_b = draw(rng, b.documents.size(), spec);

    NgramTable ta, tb;
    const NgramOrders both{};
    for (std::size_t idx : sample_a) ta.add_tokens(cache_a.docs[idx], both);
    for (std::size_t idx : sample_b) tb.add_tokens(cache_b.docs[idx], both);
    return {top_k(ta, static_cast<std::size_t>(spec.top_k)),
            top_k(tb, static_cast<std::size_t>(spec.top_k))};
}

void write_overlap_csv(const std::filesystem::path& path, const NgramSet& a, const NgramSet& b) {
    std::vector<std::string> shared, unique_a, unique_b;
    for (const std::string& x : a) (b.count(x) ? shared : unique_a).push_back(x);
    for (const std::string& x : b)
        if (!a.count(x)) unique_b.push_back(x);
    std::sort(shared.begin(), shared.end());
    std::sort(unique_a.begin(), unique_a.end());
    std::sort(unique_b.begin(), unique_b.end());

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "section,ngram\n";
    auto emit = [&](const char* section, const std::vector<std::string>& items) {
        for (const std::string& x : items) {
            out << section << ",\"";
            for (char c : x) {
                if (c == '"') out << "\"\"";
                else out << c;
            }
            out << "\"\n";
        }
    };
    emit("shared", shared);
    emit("unique_a", unique_a);
    emit("unique_b", unique_b);
}

} // namespace lexrel
