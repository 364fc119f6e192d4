#include <doctest.h>

#include <sstream>

#include "onematch/errors.hpp"
#include "onematch/features.hpp"
#include "onematch/rng.hpp"

using namespace onematch;

namespace {

const Tokenizer kTok;
const FeatureParams kParams;

PreparedEntity prep(std::vector<std::string> titles, std::optional<int> year = {},
                    std::optional<int> runtime = {}, std::vector<std::string> cast = {},
                    std::vector<std::string> directors = {}) {
    Entity e;
    e.id = "x";
    e.titles = std::move(titles);
    e.year = year;
    e.runtime = runtime;
    e.cast = std::move(cast);
    e.directors = std::move(directors);
    return prepare_entity(e, kTok);
}

std::vector<std::vector<std::string>> names(std::vector<std::string> raw) {
    std::vector<std::vector<std::string>> out;
    for (const auto& n : raw) out.push_back(Tokenizer::name_tokens(n));
    return out;
}

}  // namespace

TEST_CASE("title: exact match scores 1") {
    CHECK(score_title(prep({"Die Hard"}), prep({"Die Hard"}), kParams) == 1.0);
    // normalization differences don't break exactness
    CHECK(score_title(prep({"Die Hard"}), prep({"DIE HARD!"}), kParams) == 1.0);
}

TEST_CASE("title: partial overlap is the discounted common fraction") {
    // {die,hard} vs {die,hard,2}: 2 common / max(2,3), discounted
    CHECK(score_title(prep({"Die Hard"}), prep({"Die Hard 2"}), kParams) ==
          doctest::Approx(0.9 * 2.0 / 3.0));
    CHECK(score_title(prep({"Alpha"}), prep({"Beta"}), kParams) == 0.0);
}

TEST_CASE("title: best alternative title wins") {
    CHECK(score_title(prep({"Se7en", "Seven"}), prep({"Seven"}), kParams) == 1.0);
    CHECK(score_title(prep({"Se7en"}), prep({"Seven"}), kParams) == 0.0);
}

TEST_CASE("title: common tokens count distinctly") {
    // {oz} vs {oz}: repeated words collapse, still exact
    CHECK(score_title(prep({"Oz Oz"}), prep({"Oz Oz"}), kParams) == 1.0);
    // {oz} vs {oz,wizard}: one distinct common token over max distinct count 2
    CHECK(score_title(prep({"Oz Oz"}), prep({"Oz Wizard"}), kParams) ==
          doctest::Approx(0.9 * 1.0 / 2.0));
}

TEST_CASE("year distance caps at 30 and propagates absence") {
    CHECK(score_year(1988, 1990, kParams) == 2.0);
    CHECK(score_year(1950, 2010, kParams) == 30.0);
    CHECK(!score_year(2001, std::nullopt, kParams).has_value());
    CHECK(!score_year(std::nullopt, std::nullopt, kParams).has_value());
}

TEST_CASE("runtime distance caps at 60 and propagates absence") {
    CHECK(score_runtime(120, 115, kParams) == 5.0);
    CHECK(score_runtime(90, 200, kParams) == 60.0);
    CHECK(!score_runtime(std::nullopt, 100, kParams).has_value());
}

TEST_CASE("cast: one exact shared name scores 1") {
    CHECK(score_cast(prep({"T"}, {}, {}, {"Bruce Willis", "Alan Rickman"}),
                     prep({"T"}, {}, {}, {"Bruce Willis"}), kParams) == 1.0);
}

TEST_CASE("cast: surname-only match earns partial credit") {
    CHECK(score_cast(prep({"T"}, {}, {}, {"B. Willis"}),
                     prep({"T"}, {}, {}, {"Bruce Willis"}), kParams) == 0.5);
}

TEST_CASE("cast: sum caps at five") {
    std::vector<std::string> six = {"A One", "B Two", "C Three", "D Four", "E Five", "F Six"};
    CHECK(score_cast(prep({"T"}, {}, {}, six), prep({"T"}, {}, {}, six), kParams) == 5.0);
}

TEST_CASE("cast: each name is consumed once") {
    // two left copies of a name cannot both claim the single right name
    CHECK(score_cast(prep({"T"}, {}, {}, {"Bruce Willis", "Bruce Willis"}),
                     prep({"T"}, {}, {}, {"Bruce Willis"}), kParams) == 1.0);
}

TEST_CASE("cast: full matches are claimed before surname matches") {
    // "Bruce Willis" must pair with its exact twin, leaving the partial
    // for "B. Willis" -- order in the list must not break this
    CHECK(score_cast(prep({"T"}, {}, {}, {"B. Willis", "Bruce Willis"}),
                     prep({"T"}, {}, {}, {"Bruce Willis"}), kParams) == 1.0);
    CHECK(score_cast(prep({"T"}, {}, {}, {"B. Willis", "Bruce Willis"}),
                     prep({"T"}, {}, {}, {"Bruce Willis", "Bob Willis"}), kParams) == 1.5);
}

TEST_CASE("cast: empty lists score zero") {
    CHECK(score_cast(prep({"T"}), prep({"T"}, {}, {}, {"Bruce Willis"}), kParams) == 0.0);
}

TEST_CASE("align_names is greedy in list order") {
    // both rights share the surname; the first left takes the first right
    double credit = align_names(names({"B. Willis"}), names({"Bruce Willis", "Bill Willis"}),
                                kParams);
    CHECK(credit == 0.5);
}

TEST_CASE("directors: matched count over the shorter list") {
    CHECK(score_directors(prep({"T"}, {}, {}, {}, {"Peter Jackson"}),
                          prep({"T"}, {}, {}, {}, {"Peter Jackson"}), kParams) == 1.0);
    CHECK(score_directors(prep({"T"}, {}, {}, {}, {"A X", "B Y"}),
                          prep({"T"}, {}, {}, {}, {"A X"}), kParams) == 1.0);
    CHECK(score_directors(prep({"T"}, {}, {}, {}, {"A X", "B Y"}),
                          prep({"T"}, {}, {}, {}, {"A X", "C Z"}), kParams) == 0.5);
}

TEST_CASE("directors: an empty list scores zero") {
    CHECK(score_directors(prep({"T"}), prep({"T"}, {}, {}, {}, {"A X"}), kParams) == 0.0);
    CHECK(score_directors(prep({"T"}), prep({"T"}), kParams) == 0.0);
}

TEST_CASE("feature vector of identical entities") {
    auto e = prep({"Die Hard"}, 1988, 131, {"Bruce Willis", "Alan Rickman", "Bonnie Bedelia"},
                  {"John McTiernan"});
    FeatureVector f = feature_vector(e, e, kParams);
    CHECK(f.cast == 3.0);
    CHECK(f.title == 1.0);
    CHECK(f.year == 0.0);
    CHECK(f.directors == 1.0);
    CHECK(f.runtime == 0.0);
}

TEST_CASE("feature vector of disjoint entities hits the caps") {
    auto a = prep({"Alpha"}, 1950, 60, {"A One"}, {"D One"});
    auto b = prep({"Beta"}, 2020, 200, {"B Two"}, {"D Two"});
    FeatureVector f = feature_vector(a, b, kParams);
    CHECK(f.cast == 0.0);
    CHECK(f.title == 0.0);
    CHECK(f.year == 30.0);
    CHECK(f.directors == 0.0);
    CHECK(f.runtime == 60.0);
}

TEST_CASE("die hard pair composes the scorer examples") {
    auto dh = prep({"Die Hard"}, 1988, 131, {"Bruce Willis", "Alan Rickman"}, {"John McTiernan"});
    auto dh2 = prep({"Die Hard 2"}, 1990, 124, {"Bruce Willis", "William Atherton"},
                    {"Renny Harlin"});
    FeatureVector f = feature_vector(dh, dh2, kParams);
    CHECK(f.title == doctest::Approx(0.6));
    CHECK(f.year == 2.0);
    CHECK(f.cast == 1.0);
    CHECK(f.directors == 0.0);
    CHECK(f.runtime == 7.0);
}

TEST_CASE("feature accessors agree with the pinned order") {
    FeatureVector f;
    f.cast = 1.0;
    f.title = 0.5;
    f.year = 3.0;
    f.directors = 0.25;
    f.runtime = 7.0;
    CHECK(feature_value(f, 0) == 1.0);
    CHECK(feature_value(f, 1) == 0.5);
    CHECK(feature_value(f, 2) == 3.0);
    CHECK(feature_value(f, 3) == 0.25);
    CHECK(feature_value(f, 4) == 7.0);
    CHECK_THROWS_AS(feature_value(f, 5), Error);

    set_feature(f, 2, std::nullopt);
    CHECK(!f.year.has_value());
    CHECK(std::string(kFeatureNames[0]) == "cast");
    CHECK(std::string(kFeatureNames[4]) == "runtime");
}

namespace {

Entity random_entity(Rng& rng, const std::string& id) {
    static const std::vector<std::string> words = {"oz",   "wizard", "dark", "city",
                                                   "hard", "seven",  "rain", "storm"};
    static const std::vector<std::string> people = {"Ana Stone",  "Bo Stone",  "Cy Reed",
                                                    "Dee Marsh",  "Ed Marsh",  "Fay Wolfe",
                                                    "Gus Pryce",  "Hal Reed"};
    Entity e;
    e.id = id;
    std::size_t nt = 1 + rng.below(2);
    for (std::size_t i = 0; i < nt; ++i) {
        std::string t;
        std::size_t nw = 1 + rng.below(3);
        for (std::size_t w = 0; w < nw; ++w) {
            if (w) t += ' ';
            t += words[rng.below(words.size())];
        }
        e.titles.push_back(t);
    }
    if (rng.bernoulli(0.8)) e.year = 1920 + static_cast<int>(rng.below(100));
    if (rng.bernoulli(0.8)) e.runtime = 60 + static_cast<int>(rng.below(120));
    std::size_t nc = rng.below(7);
    for (std::size_t i = 0; i < nc; ++i) e.cast.push_back(people[rng.below(people.size())]);
    std::size_t nd = rng.below(3);
    for (std::size_t i = 0; i < nd; ++i) e.directors.push_back(people[rng.below(people.size())]);
    return e;
}

}  // namespace

TEST_CASE("every feature scorer is symmetric") {
    Rng rng(2024);
    for (int i = 0; i < 200; ++i) {
        Entity a = random_entity(rng, "a"), b = random_entity(rng, "b");
        FeatureVector ab = feature_vector(a, b, kTok, kParams);
        FeatureVector ba = feature_vector(b, a, kTok, kParams);
        CHECK(ab == ba);
    }
}

TEST_CASE("feature outputs stay inside their declared ranges") {
    Rng rng(515);
    for (int i = 0; i < 200; ++i) {
        Entity a = random_entity(rng, "a"), b = random_entity(rng, "b");
        FeatureVector f = feature_vector(a, b, kTok, kParams);
        CHECK(f.cast >= 0.0);
        CHECK(f.cast <= 5.0);
        CHECK(f.title >= 0.0);
        CHECK(f.title <= 1.0);
        if (f.year) {
            CHECK(*f.year >= 0.0);
            CHECK(*f.year <= 30.0);
        }
        CHECK(f.directors >= 0.0);
        CHECK(f.directors <= 1.0);
        if (f.runtime) {
            CHECK(*f.runtime >= 0.0);
            CHECK(*f.runtime <= 60.0);
        }
        // self-comparison identities
        FeatureVector self = feature_vector(a, a, kTok, kParams);
        CHECK(self.title == 1.0);
        if (self.year) CHECK(*self.year == 0.0);
        if (self.runtime) CHECK(*self.runtime == 0.0);
    }
}

TEST_CASE("appending a mutually matching cast member never lowers the score") {
    Rng rng(808);
    for (int i = 0; i < 50; ++i) {
        Entity a = random_entity(rng, "a"), b = random_entity(rng, "b");
        double before = feature_vector(a, b, kTok, kParams).cast;
        a.cast.push_back("Zed Unique");
        b.cast.push_back("Zed Unique");
        double after = feature_vector(a, b, kTok, kParams).cast;
        CHECK(after >= before);
    }
}

TEST_CASE("scores csv round-trips features, absences, and scores") {
    std::vector<ScoresRow> rows;
    ScoresRow r1{"a", "b", {}, {}};
    r1.features.cast = 2.0;
    r1.features.title = 0.6;
    r1.features.year = 2.0;
    r1.features.directors = 0.0;
    r1.features.runtime = std::nullopt;
    r1.score = 0.875;
    ScoresRow r2{"c", "d", {}, {}};
    r2.features.year = std::nullopt;  // absent both optionals, no score
    rows = {r1, r2};

    std::ostringstream out;
    write_scores_csv(out, rows);
    std::istringstream in(out.str());
    auto back = read_scores_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].left == "a");
    CHECK(back[0].features == r1.features);
    CHECK(back[0].score == 0.875);
    CHECK(!back[1].features.year.has_value());
    CHECK(!back[1].features.runtime.has_value());
    CHECK(!back[1].score.has_value());
}

TEST_CASE("scores csv rejects a wrong header") {
    std::istringstream in("id1,id2,title\na,b,1\n");
    CHECK_THROWS_AS(read_scores_csv(in), Error);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_scores_csv(empty), Error);
}
