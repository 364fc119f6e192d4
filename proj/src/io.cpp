#include "onematch/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

#include "onematch/csv.hpp"
#include "onematch/errors.hpp"

namespace onematch {

namespace {

using nlohmann::json;

std::vector<std::string> split_multi(const std::string& field) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= field.size()) {
        std::size_t bar = field.find('|', start);
        if (bar == std::string::npos) bar = field.size();
        if (bar > start) parts.push_back(field.substr(start, bar - start));
        start = bar + 1;
    }
    return parts;
}

std::string join_multi(const std::vector<std::string>& parts, const std::string& what) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].find('|') != std::string::npos)
            throw Error("model", "FieldError", what + " value contains '|', not expressible in CSV");
        if (i) out.push_back('|');
        out += parts[i];
    }
    return out;
}

std::optional<int> parse_int_field(const std::string& field, long row, const char* name) {
    if (field.empty()) return std::nullopt;
    int value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw Error("model", "FieldError", "row " + std::to_string(row) + ", " + name);
    return value;
}

Dataset parse_dataset_csv(std::istream& in, Side side, const std::string& name) {
    CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw Error("model", "SchemaError", "empty input");

    auto column = [&](const char* col) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), col);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    auto id_col = column("id");
    auto titles_col = column("titles");
    if (!id_col || !titles_col) throw Error("model", "SchemaError", "missing id or titles column");
    auto year_col = column("year");
    auto runtime_col = column("runtime");
    auto cast_col = column("cast");
    auto directors_col = column("directors");

    auto field = [&](const std::vector<std::string>& rowv, std::optional<std::size_t> col) -> std::string {
        if (!col || *col >= rowv.size()) return "";
        return rowv[*col];
    };

    std::vector<Entity> entities;
    std::vector<std::string> rowv;
    while (reader.next(rowv)) {
        if (rowv.size() == 1 && rowv[0].empty()) continue;  // blank line
        long row = reader.row();
        Entity e;
        e.id = field(rowv, id_col);
        if (e.id.empty()) throw Error("model", "FieldError", "row " + std::to_string(row) + ", id");
        e.titles = split_multi(field(rowv, titles_col));
        if (e.titles.empty()) throw Error("model", "FieldError", "row " + std::to_string(row) + ", titles");
        e.year = parse_int_field(field(rowv, year_col), row, "year");
        e.runtime = parse_int_field(field(rowv, runtime_col), row, "runtime");
        if (e.runtime && *e.runtime < 0)
            throw Error("model", "FieldError", "row " + std::to_string(row) + ", runtime");
        e.cast = split_multi(field(rowv, cast_col));
        e.directors = split_multi(field(rowv, directors_col));
        entities.push_back(std::move(e));
    }
    return Dataset(name, side, std::move(entities));
}

std::vector<std::string> parse_string_array(const json& value, long row, const char* name) {
    if (!value.is_array())
        throw Error("model", "FieldError", "row " + std::to_string(row) + ", " + name);
    std::vector<std::string> out;
    for (const auto& item : value) {
        if (!item.is_string())
            throw Error("model", "FieldError", "row " + std::to_string(row) + ", " + name);
        out.push_back(item.get<std::string>());
    }
    return out;
}

Dataset parse_dataset_json(std::istream& in, Side side, const std::string& name) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("model", "SchemaError", e.what());
    }
    if (!doc.is_array()) throw Error("model", "SchemaError", "expected a JSON array of entities");

    std::vector<Entity> entities;
    long row = 0;
    for (const auto& obj : doc) {
        ++row;
        if (!obj.is_object())
            throw Error("model", "FieldError", "row " + std::to_string(row) + ", entity");
        if (!obj.contains("id") || !obj.contains("titles"))
            throw Error("model", "SchemaError", "row " + std::to_string(row) + ": missing id or titles");
        Entity e;
        if (!obj["id"].is_string() || obj["id"].get<std::string>().empty())
            throw Error("model", "FieldError", "row " + std::to_string(row) + ", id");
        e.id = obj["id"].get<std::string>();
        e.titles = parse_string_array(obj["titles"], row, "titles");
        if (e.titles.empty()) throw Error("model", "FieldError", "row " + std::to_string(row) + ", titles");
        if (obj.contains("year") && !obj["year"].is_null()) {
            if (!obj["year"].is_number_integer())
                throw Error("model", "FieldError", "row " + std::to_string(row) + ", year");
            e.year = obj["year"].get<int>();
        }
        if (obj.contains("runtime") && !obj["runtime"].is_null()) {
            if (!obj["runtime"].is_number_integer() || obj["runtime"].get<long long>() < 0)
                throw Error("model", "FieldError", "row " + std::to_string(row) + ", runtime");
            e.runtime = obj["runtime"].get<int>();
        }
        if (obj.contains("cast")) e.cast = parse_string_array(obj["cast"], row, "cast");
        if (obj.contains("directors")) e.directors = parse_string_array(obj["directors"], row, "directors");
        entities.push_back(std::move(e));
    }
    return Dataset(name, side, std::move(entities));
}

}  // namespace

Dataset parse_dataset(std::istream& in, DatasetFormat format, Side side, const std::string& name) {
    return format == DatasetFormat::Csv ? parse_dataset_csv(in, side, name)
                                        : parse_dataset_json(in, side, name);
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
    write_csv_row(out, {"id", "titles", "year", "runtime", "cast", "directors"});
    for (const Entity& e : d.entities()) {
        write_csv_row(out, {e.id, join_multi(e.titles, "titles"),
                            e.year ? std::to_string(*e.year) : "",
                            e.runtime ? std::to_string(*e.runtime) : "",
                            join_multi(e.cast, "cast"), join_multi(e.directors, "directors")});
    }
}

void write_dataset_json(std::ostream& out, const Dataset& d) {
    json arr = json::array();
    for (const Entity& e : d.entities()) {
        json obj;
        obj["id"] = e.id;
        obj["titles"] = e.titles;
        if (e.year) obj["year"] = *e.year;
        if (e.runtime) obj["runtime"] = *e.runtime;
        if (!e.cast.empty()) obj["cast"] = e.cast;
        if (!e.directors.empty()) obj["directors"] = e.directors;
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
}

namespace {

TruthSet parse_truth_impl(std::istream& in, const Dataset* left, const Dataset* right) {
    CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw Error("model", "SchemaError", "empty input");
    auto find_col = [&](const char* col) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), col);
        if (it == header.end())
            throw Error("model", "SchemaError", std::string("missing column ") + col);
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t c1 = find_col("id1"), c2 = find_col("id2"), cl = find_col("label");

    TruthSet t;
    std::vector<std::string> rowv;
    while (reader.next(rowv)) {
        if (rowv.size() == 1 && rowv[0].empty()) continue;
        long row = reader.row();
        if (rowv.size() <= std::max({c1, c2, cl}))
            throw Error("model", "FieldError", "row " + std::to_string(row) + ": too few fields");
        IdPair pair{rowv[c1], rowv[c2]};
        const std::string& label = rowv[cl];
        if (left && !left->handle_of(pair.left)) throw Error("model", "DanglingReference", pair.left);
        if (right && !right->handle_of(pair.right)) throw Error("model", "DanglingReference", pair.right);
        bool positive;
        if (label == "+" || label == "1") positive = true;
        else if (label == "-" || label == "0") positive = false;
        else throw Error("model", "FieldError", "row " + std::to_string(row) + ", label");
        if (positive) {
            if (t.negatives.count(pair))
                throw Error("model", "ConflictingLabel", "(" + pair.left + "," + pair.right + ")");
            t.positives.insert(std::move(pair));
        } else {
            if (t.positives.count(pair))
                throw Error("model", "ConflictingLabel", "(" + pair.left + "," + pair.right + ")");
            t.negatives.insert(std::move(pair));
        }
    }
    return t;
}

}  // namespace

TruthSet parse_truth_set(std::istream& in) { return parse_truth_impl(in, nullptr, nullptr); }

TruthSet parse_truth_set(std::istream& in, const Dataset& left, const Dataset& right) {
    return parse_truth_impl(in, &left, &right);
}

void write_truth_csv(std::ostream& out, const TruthSet& t) {
    write_csv_row(out, {"id1", "id2", "label"});
    auto sorted = [](const IdPairSet& s) {
        std::vector<IdPair> v(s.begin(), s.end());
        std::sort(v.begin(), v.end());
        return v;
    };
    for (const IdPair& p : sorted(t.positives)) write_csv_row(out, {p.left, p.right, "+"});
    for (const IdPair& p : sorted(t.negatives)) write_csv_row(out, {p.left, p.right, "-"});
}

std::string format_score(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double_field(const std::string& s, long row, const char* field) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error("model", "FieldError", "row " + std::to_string(row) + ", " + field);
    return value;
}

Matching read_matching_csv(std::istream& in, bool constrained) {
    CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw Error("model", "SchemaError", "empty input");
    auto find_col = [&](const char* col) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), col);
        if (it == header.end())
            throw Error("model", "SchemaError", std::string("missing column ") + col);
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t c1 = find_col("id1"), c2 = find_col("id2"), cs = find_col("score");

    Matching m;
    m.constrained = constrained;
    IdPairSet seen;
    std::vector<std::string> rowv;
    while (reader.next(rowv)) {
        if (rowv.size() == 1 && rowv[0].empty()) continue;
        long row = reader.row();
        if (rowv.size() <= std::max({c1, c2, cs}))
            throw Error("model", "FieldError", "row " + std::to_string(row) + ": too few fields");
        double score = parse_double_field(rowv[cs], row, "score");
        if (!seen.insert({rowv[c1], rowv[c2]}).second)
            throw Error("model", "DuplicatePair", "(" + rowv[c1] + "," + rowv[c2] + ")");
        m.pairs.push_back({rowv[c1], rowv[c2], score});
    }
    return m;
}

void write_matching_csv(std::ostream& out, const Matching& m) {
    write_csv_row(out, {"id1", "id2", "score"});
    for (const auto& p : m.pairs) write_csv_row(out, {p.left, p.right, format_score(p.score)});
}

std::vector<IdPair> read_pairs_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> header;
    if (!reader.next(header)) throw Error("model", "SchemaError", "empty input");
    auto find_col = [&](const char* col) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), col);
        if (it == header.end())
            throw Error("model", "SchemaError", std::string("missing column ") + col);
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t c1 = find_col("id1"), c2 = find_col("id2");

    std::vector<IdPair> pairs;
    std::vector<std::string> rowv;
    while (reader.next(rowv)) {
        if (rowv.size() == 1 && rowv[0].empty()) continue;
        if (rowv.size() <= std::max(c1, c2))
            throw Error("model", "FieldError", "row " + std::to_string(reader.row()) + ": too few fields");
        pairs.push_back({rowv[c1], rowv[c2]});
    }
    return pairs;
}

void write_pairs_csv(std::ostream& out, const std::vector<IdPair>& pairs) {
    write_csv_row(out, {"id1", "id2"});
    for (const IdPair& p : pairs) write_csv_row(out, {p.left, p.right});
}

}  // namespace onematch
