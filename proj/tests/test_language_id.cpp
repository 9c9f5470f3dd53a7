#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "curator/language_id.hpp"

using namespace curator;

namespace {

// Deterministic toy corpora: template sentences over small word lists.
std::vector<std::string> english_sentences() {
    const char* subjects[] = {"the teacher", "a child", "my neighbour", "the old man",
                              "our friend"};
    const char* verbs[] = {"reads", "writes", "watches", "describes"};
    const char* objects[] = {"a long letter", "the evening news",    "an interesting book",
                             "the quiet street", "a difficult question"};
    const char* tails[] = {"every single morning", "after dinner with great care"};
    std::vector<std::string> out;
    for (const char* s : subjects)
        for (const char* v : verbs)
            for (const char* o : objects)
                for (const char* t : tails)
                    out.push_back(std::string(s) + " " + v + " " + o + " " + t + ".");
    return out; // 5*4*5*2 = 200
}

std::vector<std::string> german_sentences() {
    const char* subjects[] = {"der lehrer", "ein kind", "mein nachbar", "der alte mann",
                              "unser freund"};
    const char* verbs[] = {"liest", "schreibt", "beobachtet", "beschreibt"};
    const char* objects[] = {"einen langen brief", "die abendnachrichten", "ein spannendes buch",
                             "die ruhige strasse", "eine schwierige frage"};
    const char* tails[] = {"jeden einzelnen morgen", "nach dem abendessen mit grosser sorgfalt"};
    std::vector<std::string> out;
    for (const char* s : subjects)
        for (const char* v : verbs)
            for (const char* o : objects)
                for (const char* t : tails)
                    out.push_back(std::string(s) + " " + v + " " + o + " " + t + ".");
    return out;
}

std::vector<std::pair<std::string, std::string>> toy_corpus() {
    std::vector<std::pair<std::string, std::string>> samples;
    for (const std::string& s : english_sentences()) samples.emplace_back(s, "en");
    for (const std::string& s : german_sentences()) samples.emplace_back(s, "de");
    return samples;
}

TrainOptions toy_options() {
    TrainOptions opts;
    opts.epochs = 12;
    opts.learning_rate = 0.5;
    opts.seed = 42;
    opts.hash_dim = 1u << 16; // plenty for the toy vocabulary, keeps tests fast
    return opts;
}

std::string serialize(const LangModel& m) {
    std::ostringstream out;
    save_model(m, out);
    return out.str();
}

const TrainResult& toy_model() {
    static const TrainResult r = train_language_model(toy_corpus(), toy_options());
    return r;
}

} // namespace

TEST_CASE("toy bilingual corpus trains to high held-out accuracy") {
    const TrainResult& r = toy_model();
    CHECK(r.holdout_accuracy >= 0.95);
    CHECK(r.skipped_empty == 0);

    Classification en = classify(r.model, "the teacher reads an interesting book after dinner.");
    CHECK(en.label == "en");
    CHECK(en.score > 0.65);

    Classification de =
        classify(r.model, "der lehrer liest ein spannendes buch nach dem abendessen.");
    CHECK(de.label == "de");
}

TEST_CASE("training sentences classify as their own label") {
    const TrainResult& r = toy_model();
    int checked = 0, correct = 0;
    for (const auto& [text, label] : toy_corpus()) {
        Classification c = classify(r.model, text);
        ++checked;
        if (c.label == label) ++correct;
    }
    CHECK(correct == checked);
}

TEST_CASE("fixed seed trains identical weights twice") {
    TrainResult a = train_language_model(toy_corpus(), toy_options());
    TrainResult b = train_language_model(toy_corpus(), toy_options());
    CHECK(a.model.weights == b.model.weights);
    CHECK(a.model.bias == b.model.bias);
    CHECK(serialize(a.model) == serialize(b.model));
}

TEST_CASE("input order does not matter: the shuffle is owned by train") {
    auto samples = toy_corpus();
    TrainResult a = train_language_model(samples, toy_options());
    std::reverse(samples.begin(), samples.end());
    TrainResult b = train_language_model(samples, toy_options());
    CHECK(a.model.weights == b.model.weights);
    CHECK(a.model.bias == b.model.bias);
}

TEST_CASE("single-label corpus is an error") {
    std::vector<std::pair<std::string, std::string>> samples;
    for (int i = 0; i < 20; ++i)
        samples.emplace_back("only english here " + std::to_string(i), "en");
    CHECK_THROWS_AS(train_language_model(samples, toy_options()), std::invalid_argument);
}

TEST_CASE("empty samples are skipped with a count") {
    auto samples = toy_corpus();
    samples.emplace_back("", "en");
    samples.emplace_back("   ", "de");
    TrainResult r = train_language_model(samples, toy_options());
    CHECK(r.skipped_empty == 2);
}

TEST_CASE("classify rejects empty and whitespace-only text") {
    const TrainResult& r = toy_model();
    CHECK_THROWS_AS(classify(r.model, ""), std::invalid_argument);
    CHECK_THROWS_AS(classify(r.model, "  \n "), std::invalid_argument);
}

TEST_CASE("score map sums to one with all entries in range") {
    const TrainResult& r = toy_model();
    const char* probes[] = {"completely neutral words", "der the mixed ein text",
                            "zzzz qqqq xxxx"};
    for (const char* p : probes) {
        Classification c = classify(r.model, p);
        double sum = 0.0;
        for (const auto& [label, prob] : c.scores) {
            CHECK(prob >= 0.0);
            CHECK(prob <= 1.0);
            sum += prob;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(c.score >= 0.5); // argmax of two labels
    }
}

TEST_CASE("serialization round-trip reproduces bit-identical scores") {
    const TrainResult& r = toy_model();
    std::string blob = serialize(r.model);
    std::istringstream in(blob);
    LangModel loaded = load_model(in);

    CHECK(loaded.labels == r.model.labels);
    const char* probes[] = {"the teacher reads", "der lehrer liest", "mixed der the text"};
    for (const char* p : probes) {
        Classification a = classify(r.model, p);
        Classification b = classify(loaded, p);
        REQUIRE(a.scores.size() == b.scores.size());
        for (size_t i = 0; i < a.scores.size(); ++i)
            CHECK(a.scores[i].second == b.scores[i].second); // exact, not approx
    }
    CHECK(serialize(loaded) == blob);
}

TEST_CASE("model file with bad magic is rejected") {
    std::istringstream in("NOTAMODEL");
    CHECK_THROWS(load_model(in));
}

TEST_CASE("gate is inclusive at the threshold") {
    CHECK(passes_gate(0.65));
    CHECK(!passes_gate(0.649));
    CHECK(passes_gate(1.0));
    CHECK(passes_gate(0.0, 0.0));
    CHECK(!passes_gate(0.0));
}

TEST_CASE("gate monotonicity") {
    for (double s = 0.0; s <= 1.0; s += 0.01) {
        if (passes_gate(s)) {
            CHECK(passes_gate(std::min(1.0, s + 0.01)));
            CHECK(passes_gate(1.0));
        }
    }
}

TEST_CASE("external score file parses") {
    std::istringstream in(
        "<urn:uuid:1>\ten\t0.98\n"
        "<urn:uuid:2>\tde\t0.71\n"
        "\n"
        "<urn:uuid:3>\ten\t0.3\n");
    auto scores = read_language_scores(in);
    REQUIRE(scores.size() == 3);
    CHECK(scores.at("<urn:uuid:1>").label == "en");
    CHECK(scores.at("<urn:uuid:2>").score == doctest::Approx(0.71));
}

TEST_CASE("malformed score line throws") {
    std::istringstream in("id-without-tabs\n");
    CHECK_THROWS(read_language_scores(in));
}
