#include <doctest.h>

#include <numeric>

#include "lexrel/errors.hpp"
#include "lexrel/rng.hpp"
#include "lexrel/text.hpp"

#include "helpers.hpp"

using namespace lexrel;

TEST_CASE("tokenize basic rules") {
    CHECK(tokenize("If it's white, it's right") ==
          std::vector<std::string>{"if", "it's", "white", "it's", "right"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("  HELLO!!  ") == std::vector<std::string>{"hello"});
    CHECK(tokenize("don't stop-gap ...") == std::vector<std::string>{"don't", "stop-gap"});
    CHECK(tokenize("'''") .empty());
    // NBSP and tabs are separators; curly quotes strip from edges.
    CHECK(tokenize("a b\tc") == std::vector<std::string>{"a", "b", "c"});
    CHECK(tokenize("“quoted”") == std::vector<std::string>{"quoted"});
}

TEST_CASE("tokenize survives invalid utf-8") {
    const std::string garbage = "ok \xFF\xFE then";
    const auto tokens = tokenize(garbage);
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0] == "ok");
    CHECK(tokens[2] == "then");
}

TEST_CASE("tokenize is idempotent on its own space-joined output") {
    Rng rng(7);
    const std::string alphabet = "aAzZ09'!-.,é ";
    std::vector<std::string> alpha_cps = tokenize("x"); // warm-up, not used
    for (int trial = 0; trial < 200; ++trial) {
        std::string text;
        const std::size_t len = rng.below(40);
        for (std::size_t i = 0; i < len; ++i) {
            static const char* pieces[] = {"a", "B",  "7", "'", "-", "!", ".",
                                           " ", "  ", "É", "it's", "..."};
            text += pieces[rng.below(std::size(pieces))];
        }
        const auto once = tokenize(text);
        std::string joined;
        for (const auto& t : once) {
            if (!joined.empty()) joined.push_back(' ');
            joined += t;
        }
        CHECK(tokenize(joined) == once);
    }
}

TEST_CASE("extract_ngrams counts and totals") {
    const std::vector<std::string> aba = {"a", "b", "a"};
    const NgramTable t = extract_ngrams(aba, {true, true});
    CHECK(t.total == 5);
    CHECK(t.counts.at("a") == 2);
    CHECK(t.counts.at("b") == 1);
    CHECK(t.counts.at("a b") == 1);
    CHECK(t.counts.at("b a") == 1);

    CHECK(extract_ngrams({}, {true, true}).total == 0);
    const std::vector<std::string> solo = {"x"};
    CHECK(extract_ngrams(solo, {false, true}).total == 0);
    CHECK_THROWS_AS(extract_ngrams(solo, {false, false}), PreconditionError);
}

TEST_CASE("extract_ngrams total is 2k-1 for both orders") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 1 + rng.below(30);
        std::vector<std::string> tokens;
        for (std::size_t i = 0; i < k; ++i) tokens.push_back("t" + std::to_string(rng.below(5)));
        CHECK(extract_ngrams(tokens, {true, true}).total == 2 * k - 1);
    }
}

TEST_CASE("top_k ranking and tie-breaking") {
    NgramTable t;
    t.counts = {{"a", 5}, {"b", 3}, {"c", 3}};
    t.total = 11;
    CHECK(top_k(t, 2) == std::vector<std::string>{"a", "b"});
    CHECK(top_k(t, 10) == std::vector<std::string>{"a", "b", "c"});
    CHECK(top_k(NgramTable{}, 1000).empty());
}

TEST_CASE("top_k is independent of construction order") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<std::string, std::uint64_t>> items;
        const std::size_t n = 2 + rng.below(40);
        for (std::size_t i = 0; i < n; ++i)
            items.emplace_back("g" + std::to_string(i), 1 + rng.below(6));

        NgramTable forward, backward;
        for (const auto& [k, c] : items) forward.counts[k] = c;
        for (auto it = items.rbegin(); it != items.rend(); ++it) backward.counts[it->first] = it->second;
        CHECK(top_k(forward, n / 2) == top_k(backward, n / 2));
    }
}

TEST_CASE("ngram table csv export follows the ranking rule") {
    NgramTable t;
    t.counts = {{"b, with comma", 4}, {"a", 4}, {"c", 1}};
    t.total = 9;
    testutil::TempDir tmp;
    const auto path = tmp.path / "ngrams.csv";
    write_ngram_csv(path, t);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "ngram,count");
    std::getline(in, line);
    CHECK(line == "\"a\",4"); // count ties break lexicographically
    std::getline(in, line);
    CHECK(line == "\"b, with comma\",4");
    std::getline(in, line);
    CHECK(line == "\"c\",1");
}

TEST_CASE("unigram_distribution") {
    using testutil::doc;
    SUBCASE("hand counts") {
        std::vector<Document> docs = {doc("1", "a a"), doc("2", "b")};
        const auto dist = unigram_distribution(docs);
        CHECK(dist.probs.at("a") == doctest::Approx(2.0 / 3.0));
        CHECK(dist.probs.at("b") == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("degenerate support") {
        std::vector<Document> docs = {doc("1", "x")};
        CHECK(unigram_distribution(docs).probs.at("x") == 1.0);
        std::vector<Document> two = {doc("1", "a"), doc("2", "a")};
        CHECK(unigram_distribution(two).probs.at("a") == 1.0);
    }
    SUBCASE("parent text excluded, zero tokens error") {
        Document d = doc("1", "...");
        d.parent_text = "words in parent";
        std::vector<Document> docs = {d};
        CHECK_THROWS_AS(unigram_distribution(docs), PreconditionError);
    }
    SUBCASE("sums to one on random corpora") {
        Rng rng(99);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<Document> docs;
            const std::size_t n = 1 + rng.below(20);
            for (std::size_t i = 0; i < n; ++i) {
                std::string text = "w" + std::to_string(rng.below(50));
                const std::size_t extra = rng.below(15);
                for (std::size_t k = 0; k < extra; ++k)
                    text += " w" + std::to_string(rng.below(50));
                docs.push_back(testutil::doc(std::to_string(i), text));
            }
            const auto dist = unigram_distribution(docs);
            const double sum = std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0,
                                               [](double acc, const auto& kv) { return acc + kv.second; });
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
}
