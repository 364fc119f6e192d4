#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "onematch/blocking.hpp"
#include "onematch/errors.hpp"
#include "onematch/synth.hpp"

using namespace onematch;

namespace {

SynthConfig small_config() {
    SynthConfig cfg;
    cfg.seed = 11;
    cfg.n_left = 60;
    cfg.n_right = 60;
    cfg.overlap = 1.0;
    return cfg;
}

bool within_3_sigma(double observed, double n, double rate) {
    double sigma = std::sqrt(n * rate * (1 - rate));
    return std::abs(observed - n * rate) <= 3 * sigma;
}

}  // namespace

TEST_CASE("config validation") {
    SynthConfig cfg;
    CHECK_NOTHROW(validate_config(cfg));

    SynthConfig bad = cfg;
    bad.overlap = 1.2;
    CHECK_THROWS_AS(validate_config(bad), Error);

    bad = cfg;
    bad.n_left = 0;
    CHECK_THROWS_AS(validate_config(bad), Error);

    // more shared movies than the right side can hold
    bad = cfg;
    bad.n_left = 1000;
    bad.n_right = 500;
    bad.overlap = 0.8;
    CHECK_THROWS_WITH_AS(validate_config(bad),
                         "synth:ConfigError: overlap requires 800 shared movies but the right "
                         "side holds only 500",
                         Error);

    bad = cfg;
    bad.year_jitter = -1;
    CHECK_THROWS_AS(validate_config(bad), Error);

    bad = cfg;
    bad.token_pool = 0;
    CHECK_THROWS_AS(validate_config(bad), Error);

    bad = cfg;
    bad.missing.cast = 1.5;
    CHECK_THROWS_AS(validate_config(bad), Error);
}

TEST_CASE("generation is deterministic under the seed") {
    SynthConfig cfg = small_config();
    cfg.title_noise_rate = 0.4;
    cfg.duplicate_rate = 0.1;
    cfg.satellite_probability = 0.2;
    cfg.missing.year = 0.2;
    SynthCorpus a = generate(cfg);
    SynthCorpus b = generate(cfg);
    CHECK(a.left == b.left);
    CHECK(a.right == b.right);
    CHECK(a.truth.positives == b.truth.positives);

    cfg.seed = 12;
    SynthCorpus c = generate(cfg);
    CHECK(!(a.left == c.left));  // the seed actually matters
}

TEST_CASE("noiseless full-overlap corpus has identical rows and perfect truth") {
    SynthConfig cfg = small_config();
    SynthCorpus corpus = generate(cfg);
    REQUIRE(corpus.left.size() == 60);
    REQUIRE(corpus.right.size() == 60);
    CHECK(corpus.truth.positives.size() == 60);
    CHECK(corpus.truth.complete);

    for (std::size_t i = 0; i < 60; ++i) {
        const Entity& l = corpus.left[i];
        const Entity& r = corpus.right[i];
        CHECK(corpus.truth.is_positive({l.id, r.id}));
        // no noise: the right copy differs only in id
        CHECK(l.titles == r.titles);
        CHECK(l.year == r.year);
        CHECK(l.runtime == r.runtime);
        CHECK(l.cast == r.cast);
        CHECK(l.directors == r.directors);
    }
}

TEST_CASE("partial overlap yields exactly the rounded share of positives") {
    SynthConfig cfg = small_config();
    cfg.n_left = 100;
    cfg.n_right = 120;
    cfg.overlap = 0.35;
    SynthCorpus corpus = generate(cfg);
    CHECK(corpus.truth.positives.size() == 35);
    CHECK(corpus.left.size() == 100);
    CHECK(corpus.right.size() == 120);
    // unmatched rights are movies in their own right, not residue
    for (const auto& p : corpus.truth.positives) {
        CHECK(corpus.left.handle_of(p.left).has_value());
        CHECK(corpus.right.handle_of(p.right).has_value());
    }
}

TEST_CASE("truth is closed-world over the cross product") {
    SynthCorpus corpus = generate(small_config());
    const auto& some_left = corpus.left[0].id;
    const auto& other_right = corpus.right[5].id;
    CHECK(corpus.truth.is_negative({some_left, other_right}));
    CHECK(!corpus.truth.is_negative({some_left, corpus.right[0].id}));
}

TEST_CASE("satellites reproduce the bonus-material shape") {
    SynthConfig cfg;
    cfg.seed = 3;
    cfg.n_left = 1;
    cfg.n_right = 1;
    cfg.overlap = 1.0;
    cfg.satellite_probability = 1.0;
    SynthCorpus corpus = generate(cfg);
    REQUIRE(corpus.left.size() == 2);
    REQUIRE(corpus.right.size() == 2);
    CHECK(corpus.truth.positives.size() == 2);

    const Entity& parent_l = corpus.left[0];
    const Entity& sat_l = corpus.left[1];
    const Entity& parent_r = corpus.right[0];
    const Entity& sat_r = corpus.right[1];
    CHECK(sat_l.titles[0] == "Making of " + parent_l.titles[0]);
    CHECK(sat_r.titles[0] == parent_r.titles[0] + " Bonus Material");
    CHECK(corpus.truth.is_positive({parent_l.id, parent_r.id}));
    CHECK(corpus.truth.is_positive({sat_l.id, sat_r.id}));
    CHECK(sat_l.directors.empty());  // satellites carry no directing credit
    // satellite cast is drawn from the parent's
    for (const auto& name : sat_l.cast)
        CHECK(std::find(parent_l.cast.begin(), parent_l.cast.end(), name) !=
              parent_l.cast.end());
}

TEST_CASE("satellite volume tracks its probability") {
    SynthConfig cfg;
    cfg.seed = 21;
    cfg.n_left = 2000;
    cfg.n_right = 2000;
    cfg.overlap = 1.0;
    cfg.satellite_probability = 0.1;
    SynthCorpus corpus = generate(cfg);
    double extras = static_cast<double>(corpus.left.size()) - 2000;
    CHECK(within_3_sigma(extras, 2000, 0.1));
    CHECK(corpus.left.size() == corpus.right.size());  // satellites come in pairs
    CHECK(corpus.truth.positives.size() == corpus.left.size());
}

TEST_CASE("duplicates are near-identical rows that inherit the original's match") {
    SynthConfig cfg = small_config();
    cfg.n_left = 1000;
    cfg.n_right = 1000;
    cfg.duplicate_rate = 0.05;
    SynthCorpus corpus = generate(cfg);
    CHECK(corpus.left.size() > 1000);
    CHECK(within_3_sigma(static_cast<double>(corpus.left.size()) - 1000, 1000, 0.05));

    // positives now exceed the base matching: duplicated sides share partners
    CHECK(corpus.truth.positives.size() > 1000);
    Matching as_matching;
    for (const auto& p : corpus.truth.positives) as_matching.pairs.push_back({p.left, p.right, 0.5});
    as_matching.constrained = true;
    CHECK(!validate_matching(as_matching).empty());  // one-to-one only up to duplicates
}

TEST_CASE("without duplicates the truth is a perfect matching even with satellites") {
    SynthConfig cfg = small_config();
    cfg.satellite_probability = 0.3;
    cfg.title_noise_rate = 0.5;
    cfg.initialism_rate = 0.3;
    SynthCorpus corpus = generate(cfg);
    Matching as_matching;
    for (const auto& p : corpus.truth.positives) as_matching.pairs.push_back({p.left, p.right, 0.5});
    as_matching.constrained = true;
    CHECK(validate_matching(as_matching).empty());
}

TEST_CASE("missing rates land within binomial bounds") {
    SynthConfig cfg;
    cfg.seed = 5;
    cfg.n_left = 2000;
    cfg.n_right = 2000;
    cfg.overlap = 0.5;
    cfg.missing.year = 0.3;
    cfg.missing.runtime = 0.15;
    cfg.missing.cast = 0.05;
    cfg.missing.directors = 0.5;
    SynthCorpus corpus = generate(cfg);
    double no_year = 0, no_runtime = 0, no_cast = 0, no_directors = 0;
    for (const auto& e : corpus.left.entities()) {
        no_year += !e.year.has_value();
        no_runtime += !e.runtime.has_value();
        no_cast += e.cast.empty();
        no_directors += e.directors.empty();
    }
    double n = static_cast<double>(corpus.left.size());
    CHECK(within_3_sigma(no_year, n, 0.3));
    CHECK(within_3_sigma(no_runtime, n, 0.15));
    CHECK(within_3_sigma(no_cast, n, 0.05));
    CHECK(within_3_sigma(no_directors, n, 0.5));
}

TEST_CASE("year jitter is bounded and runtimes never go negative") {
    SynthConfig cfg = small_config();
    cfg.n_left = 500;
    cfg.n_right = 500;
    cfg.year_jitter = 2;
    cfg.runtime_jitter = 500;  // absurd, to probe the clamp
    SynthCorpus corpus = generate(cfg);
    for (std::size_t i = 0; i < corpus.left.size(); ++i) {
        const Entity& l = corpus.left[i];
        const Entity& r = corpus.right[i];
        if (l.year && r.year) CHECK(std::abs(*l.year - *r.year) <= 2);
        if (r.runtime) CHECK(*r.runtime >= 0);
    }
}

TEST_CASE("title noise always leaves a shared blocking token") {
    SynthConfig cfg = small_config();
    cfg.n_left = 800;
    cfg.n_right = 800;
    cfg.title_noise_rate = 1.0;
    cfg.alt_title_rate = 0.3;
    SynthCorpus corpus = generate(cfg);
    Tokenizer tok;
    TokenIndex li = build_index(corpus.left, tok);
    TokenIndex ri = build_index(corpus.right, tok);
    auto cands = candidate_pairs(li, ri);
    std::set<std::pair<std::string, std::string>> blocked;
    for (const auto& p : cands.pairs)
        blocked.insert({corpus.left[p.left].id, corpus.right[p.right].id});
    for (const auto& p : corpus.truth.positives)
        CHECK(blocked.count({p.left, p.right}));
}

TEST_CASE("generated titles never collapse to special tokens") {
    SynthConfig cfg = small_config();
    cfg.n_left = 300;
    cfg.n_right = 300;
    cfg.title_noise_rate = 0.5;
    SynthCorpus corpus = generate(cfg);
    Tokenizer tok;
    for (const Dataset* d : {&corpus.left, &corpus.right}) {
        for (const auto& e : d->entities()) {
            for (const auto& t : e.titles) {
                for (const auto& token : tok.normalize_tokens(t)) {
                    CHECK(token != std::string(kEmptyNormalizedTitle));
                    CHECK(token != std::string(kStopwordsOnly));
                }
            }
        }
    }
}

TEST_CASE("initialisms abbreviate first names") {
    SynthConfig cfg = small_config();
    cfg.initialism_rate = 1.0;
    SynthCorpus corpus = generate(cfg);
    bool saw_dot = false;
    for (const auto& e : corpus.right.entities())
        for (const auto& name : e.cast)
            if (name.size() > 1 && name[1] == '.') saw_dot = true;
    CHECK(saw_dot);
}

TEST_CASE("config json round-trip and unknown-key rejection") {
    SynthConfig cfg;
    cfg.seed = 99;
    cfg.n_left = 123;
    cfg.overlap = 0.6;
    cfg.missing.runtime = 0.25;
    cfg.zipf_exponent = 1.2;
    std::ostringstream out;
    write_synth_config(out, cfg);
    std::istringstream in(out.str());
    SynthConfig back = read_synth_config(in);
    CHECK(back.seed == 99);
    CHECK(back.n_left == 123);
    CHECK(back.overlap == 0.6);
    CHECK(back.missing.runtime == 0.25);
    CHECK(back.zipf_exponent == 1.2);

    std::istringstream bad("{\"n_lfet\": 5}");
    CHECK_THROWS_AS(read_synth_config(bad), Error);
    std::istringstream bad_nested("{\"missing\": {\"yaer\": 0.5}}");
    CHECK_THROWS_AS(read_synth_config(bad_nested), Error);
}
