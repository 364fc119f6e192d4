#include "onematch/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "onematch/csv.hpp"
#include "onematch/errors.hpp"
#include "onematch/io.hpp"

namespace onematch {

std::optional<double> feature_value(const FeatureVector& f, std::size_t i) {
    switch (i) {
        case 0: return f.cast;
        case 1: return f.title;
        case 2: return f.year;
        case 3: return f.directors;
        case 4: return f.runtime;
        default: throw Error("features", "BadIndex", std::to_string(i));
    }
}

void set_feature(FeatureVector& f, std::size_t i, std::optional<double> v) {
    switch (i) {
        case 0: f.cast = v.value_or(0.0); return;
        case 1: f.title = v.value_or(0.0); return;
        case 2: f.year = v; return;
        case 3: f.directors = v.value_or(0.0); return;
        case 4: f.runtime = v; return;
        default: throw Error("features", "BadIndex", std::to_string(i));
    }
}

PreparedEntity prepare_entity(const Entity& e, const Tokenizer& tok) {
    PreparedEntity p;
    p.title_tokens.reserve(e.titles.size());
    for (const auto& t : e.titles) p.title_tokens.push_back(tok.normalize_tokens(t));
    p.cast_tokens.reserve(e.cast.size());
    for (const auto& n : e.cast) p.cast_tokens.push_back(Tokenizer::name_tokens(n));
    p.director_tokens.reserve(e.directors.size());
    for (const auto& n : e.directors) p.director_tokens.push_back(Tokenizer::name_tokens(n));
    p.year = e.year;
    p.runtime = e.runtime;
    return p;
}

namespace {

std::vector<std::string> distinct_sorted(const std::vector<std::string>& tokens) {
    std::vector<std::string> s = tokens;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

std::size_t intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t n = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = a[i].compare(b[j]);
        if (c == 0) { ++n; ++i; ++j; }
        else if (c < 0) ++i;
        else ++j;
    }
    return n;
}

}  // namespace

double token_sequence_score(const std::vector<std::string>& a, const std::vector<std::string>& b,
                            const FeatureParams& p) {
    if (a == b) return 1.0;
    auto da = distinct_sorted(a);
    auto db = distinct_sorted(b);
    std::size_t common = intersection_size(da, db);
    std::size_t denom = std::max(da.size(), db.size());
    if (denom == 0) return 0.0;
    return p.title_discount * static_cast<double>(common) / static_cast<double>(denom);
}

double score_title(const PreparedEntity& a, const PreparedEntity& b, const FeatureParams& p) {
    double best = 0.0;
    for (const auto& ta : a.title_tokens)
        for (const auto& tb : b.title_tokens)
            best = std::max(best, token_sequence_score(ta, tb, p));
    return best;
}

std::optional<double> score_year(std::optional<int> a, std::optional<int> b,
                                 const FeatureParams& p) {
    if (!a || !b) return std::nullopt;
    return std::min(static_cast<double>(std::abs(*a - *b)), p.year_cap);
}

std::optional<double> score_runtime(std::optional<int> a, std::optional<int> b,
                                    const FeatureParams& p) {
    if (!a || !b) return std::nullopt;
    return std::min(static_cast<double>(std::abs(*a - *b)), p.runtime_cap);
}

double align_names(const std::vector<std::vector<std::string>>& a,
                   const std::vector<std::vector<std::string>>& b, const FeatureParams& p) {
    std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
    double credit = 0.0;
    // Pass 1: whole-name matches.
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].empty()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used_b[j] || b[j].empty()) continue;
            if (a[i] == b[j]) {
                used_a[i] = used_b[j] = true;
                credit += 1.0;
                break;
            }
        }
    }
    // Pass 2: surname-only matches among the leftovers.
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (used_a[i] || a[i].empty()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used_b[j] || b[j].empty()) continue;
            if (a[i].back() == b[j].back()) {
                used_a[i] = used_b[j] = true;
                credit += p.partial_name_credit;
                break;
            }
        }
    }
    return credit;
}

double score_cast(const PreparedEntity& a, const PreparedEntity& b, const FeatureParams& p) {
    return std::min(align_names(a.cast_tokens, b.cast_tokens, p), p.cast_cap);
}

double score_directors(const PreparedEntity& a, const PreparedEntity& b, const FeatureParams& p) {
    if (a.director_tokens.empty() || b.director_tokens.empty()) return 0.0;
    double credit = align_names(a.director_tokens, b.director_tokens, p);
    double denom = static_cast<double>(std::min(a.director_tokens.size(), b.director_tokens.size()));
    return credit / denom;
}

FeatureVector feature_vector(const PreparedEntity& a, const PreparedEntity& b,
                             const FeatureParams& p) {
    FeatureVector f;
    f.cast = score_cast(a, b, p);
    f.title = score_title(a, b, p);
    f.year = score_year(a.year, b.year, p);
    f.directors = score_directors(a, b, p);
    f.runtime = score_runtime(a.runtime, b.runtime, p);
    return f;
}

FeatureVector feature_vector(const Entity& a, const Entity& b, const Tokenizer& tok,
                             const FeatureParams& p) {
    return feature_vector(prepare_entity(a, tok), prepare_entity(b, tok), p);
}

namespace {

std::optional<double> parse_opt_double(const std::string& s, long row, const char* field) {
    if (s.empty()) return std::nullopt;
    return parse_double_field(s, row, field);
}

}  // namespace

std::vector<ScoresRow> read_scores_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> rec;
    if (!reader.next(rec))
        throw Error("features", "SchemaError", "scores file is empty");
    const std::vector<std::string> expect = {"id1",  "id2",       "cast",    "title",
                                             "year", "directors", "runtime", "score"};
    if (rec != expect)
        throw Error("features", "SchemaError",
                    "scores header must be id1,id2,cast,title,year,directors,runtime,score");
    std::vector<ScoresRow> rows;
    while (reader.next(rec)) {
        long row = reader.row();
        if (rec.size() != expect.size())
            throw Error("features", "SchemaError",
                        "row " + std::to_string(row) + ": expected 8 fields, got " +
                            std::to_string(rec.size()));
        ScoresRow r;
        r.left = rec[0];
        r.right = rec[1];
        if (r.left.empty() || r.right.empty())
            throw Error("features", "SchemaError", "row " + std::to_string(row) + ": empty id");
        r.features.cast = parse_double_field(rec[2], row, "cast");
        r.features.title = parse_double_field(rec[3], row, "title");
        r.features.year = parse_opt_double(rec[4], row, "year");
        r.features.directors = parse_double_field(rec[5], row, "directors");
        r.features.runtime = parse_opt_double(rec[6], row, "runtime");
        r.score = parse_opt_double(rec[7], row, "score");
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_scores_csv(std::ostream& out, const std::vector<ScoresRow>& rows) {
    write_csv_row(out, {"id1", "id2", "cast", "title", "year", "directors", "runtime", "score"});
    auto opt = [](const std::optional<double>& v) {
        return v ? format_score(*v) : std::string();
    };
    for (const auto& r : rows) {
        write_csv_row(out, {r.left, r.right, format_score(r.features.cast),
                            format_score(r.features.title), opt(r.features.year),
                            format_score(r.features.directors), opt(r.features.runtime),
                            opt(r.score)});
    }
}

}  // namespace onematch
