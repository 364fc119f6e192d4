#include "onematch/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "onematch/errors.hpp"
#include "onematch/rng.hpp"
#include "onematch/text.hpp"

namespace onematch {

namespace {

// Pronounceable synthetic vocabulary: two syllables per word, unique
// for indices below 32400. Words are >= 4 chars so none collides with
// the built-in stopwords.
const char* kOnsets[] = {"b", "d", "f", "g", "h", "k", "l", "m", "n",
                         "p", "r", "s", "t", "v", "w", "z", "ch", "st"};
const char* kNuclei[] = {"a", "e", "i", "o", "u", "ar", "en", "il", "on", "ur"};
constexpr std::size_t kSyllables = 18 * 10;
constexpr std::size_t kMaxWords = kSyllables * kSyllables;

std::string syllable(std::size_t j) {
    return std::string(kOnsets[j % 18]) + kNuclei[(j / 18) % 10];
}

std::string word(std::size_t i) {
    return syllable(i % kSyllables) + syllable((i / kSyllables) % kSyllables);
}

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

struct Proto {
    std::vector<std::size_t> title_tokens;
    int year = 0;
    int runtime = 0;
    std::vector<std::size_t> cast;
    std::vector<std::size_t> directors;
};

struct NamePool {
    std::vector<std::string> names;

    explicit NamePool(std::size_t size) {
        const std::size_t nf = 200;
        std::vector<std::string> firsts, lasts;
        for (std::size_t i = 0; i < nf; ++i) firsts.push_back(capitalize(word(i)));
        std::size_t nl = (size + nf - 1) / nf;
        for (std::size_t i = 0; i < nl; ++i) lasts.push_back(capitalize(word(16000 + i)));
        names.reserve(size);
        for (std::size_t i = 0; i < size; ++i)
            names.push_back(firsts[i % nf] + " " + lasts[i / nf]);
    }
};

std::string title_from_tokens(const std::vector<std::size_t>& tokens,
                              const std::vector<std::string>& pool) {
    std::string out;
    for (std::size_t t : tokens) {
        if (!out.empty()) out += ' ';
        out += capitalize(pool[t]);
    }
    return out;
}

// Distinct draws with bounded retries; a rare duplicate is harmless.
std::size_t draw_distinct(Rng& rng, const ZipfTable& zipf, const std::vector<std::size_t>& taken) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::size_t t = zipf.sample(rng);
        if (std::find(taken.begin(), taken.end(), t) == taken.end()) return t;
    }
    return zipf.sample(rng);
}

std::size_t draw_distinct_uniform(Rng& rng, std::size_t n, const std::vector<std::size_t>& taken) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::size_t t = rng.below(n);
        if (std::find(taken.begin(), taken.end(), t) == taken.end()) return t;
    }
    return rng.below(n);
}

std::vector<std::size_t> mutate_tokens(const std::vector<std::size_t>& tokens, Rng& rng,
                                       std::size_t token_pool) {
    std::vector<std::size_t> out = tokens;
    bool drop = out.size() >= 2 && rng.bernoulli(0.5);
    if (drop) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(rng.below(out.size())));
    } else {
        std::size_t pos = rng.below(out.size() + 1);
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(pos), rng.below(token_pool));
    }
    return out;
}

std::string initialism(const std::string& name) {
    auto words = split_whitespace(name);
    if (words.size() < 2) return name;
    std::string out = words[0].substr(0, 1) + ".";
    for (std::size_t i = 1; i < words.size(); ++i) out += " " + words[i];
    return out;
}

struct Generator {
    const SynthConfig& cfg;
    Rng rng;
    ZipfTable zipf;
    std::vector<std::string> token_pool;
    NamePool names;

    explicit Generator(const SynthConfig& c)
        : cfg(c), rng(c.seed), zipf(c.token_pool, c.zipf_exponent), names(c.cast_pool) {
        token_pool.reserve(c.token_pool);
        for (std::size_t i = 0; i < c.token_pool; ++i) token_pool.push_back(word(i));
    }

    Proto make_proto() {
        Proto p;
        std::size_t n_tokens = 1 + rng.below(4);
        for (std::size_t i = 0; i < n_tokens; ++i)
            p.title_tokens.push_back(draw_distinct(rng, zipf, p.title_tokens));
        p.year = 1925 + static_cast<int>(rng.below(91));
        p.runtime = 70 + static_cast<int>(rng.below(121));
        std::size_t n_cast = 2 + rng.below(7);
        for (std::size_t i = 0; i < n_cast; ++i)
            p.cast.push_back(draw_distinct_uniform(rng, cfg.cast_pool, p.cast));
        std::size_t n_dir = 1 + rng.below(2);
        for (std::size_t i = 0; i < n_dir; ++i)
            p.directors.push_back(draw_distinct_uniform(rng, cfg.cast_pool, p.directors));
        return p;
    }

    std::string render_name(std::size_t idx, bool allow_noise) {
        const std::string& full = names.names[idx];
        if (allow_noise && cfg.initialism_rate > 0 && rng.bernoulli(cfg.initialism_rate))
            return initialism(full);
        return full;
    }

    // The left copy is canonical (missing fields only); the right copy
    // additionally takes title/year/runtime/name noise.
    Entity render(const Proto& p, bool noisy) {
        Entity e;
        std::vector<std::size_t> primary = p.title_tokens;
        if (noisy && cfg.title_noise_rate > 0 && rng.bernoulli(cfg.title_noise_rate))
            primary = mutate_tokens(p.title_tokens, rng, cfg.token_pool);
        e.titles.push_back(title_from_tokens(primary, token_pool));
        if (noisy && cfg.alt_title_rate > 0 && rng.bernoulli(cfg.alt_title_rate))
            e.titles.push_back(
                title_from_tokens(mutate_tokens(p.title_tokens, rng, cfg.token_pool), token_pool));

        if (!rng.bernoulli(cfg.missing.year)) {
            int y = p.year;
            if (noisy && cfg.year_jitter > 0)
                y += static_cast<int>(rng.range(-cfg.year_jitter, cfg.year_jitter));
            e.year = y;
        }
        if (!rng.bernoulli(cfg.missing.runtime)) {
            int r = p.runtime;
            if (noisy && cfg.runtime_jitter > 0)
                r += static_cast<int>(rng.range(-cfg.runtime_jitter, cfg.runtime_jitter));
            e.runtime = std::max(r, 0);
        }
        if (!rng.bernoulli(cfg.missing.cast))
            for (std::size_t idx : p.cast) e.cast.push_back(render_name(idx, noisy));
        if (!rng.bernoulli(cfg.missing.directors))
            for (std::size_t idx : p.directors) e.directors.push_back(render_name(idx, noisy));
        return e;
    }

    std::vector<std::size_t> half_cast(const Proto& p) {
        std::size_t k = (p.cast.size() + 1) / 2;
        auto idx = rng.sample_indices(p.cast.size(), k);
        std::sort(idx.begin(), idx.end());
        std::vector<std::size_t> out;
        for (std::size_t i : idx) out.push_back(p.cast[i]);
        return out;
    }
};

std::string make_id(char prefix, std::size_t seq) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%c%06zu", prefix, seq);
    return buf;
}

}  // namespace

void validate_config(const SynthConfig& c) {
    auto rate = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw Error("synth", "ConfigError", std::string(name) + " must lie in [0,1]");
    };
    rate(c.overlap, "overlap");
    rate(c.duplicate_rate, "duplicate_rate");
    rate(c.satellite_probability, "satellite_probability");
    rate(c.title_noise_rate, "title_noise_rate");
    rate(c.alt_title_rate, "alt_title_rate");
    rate(c.initialism_rate, "initialism_rate");
    rate(c.missing.year, "missing.year");
    rate(c.missing.runtime, "missing.runtime");
    rate(c.missing.cast, "missing.cast");
    rate(c.missing.directors, "missing.directors");
    if (c.n_left == 0 || c.n_right == 0)
        throw Error("synth", "ConfigError", "n_left and n_right must be positive");
    if (c.year_jitter < 0 || c.runtime_jitter < 0)
        throw Error("synth", "ConfigError", "jitter ranges must be non-negative");
    if (c.token_pool == 0 || c.token_pool > kMaxWords)
        throw Error("synth", "ConfigError",
                    "token_pool must lie in [1, " + std::to_string(kMaxWords) + "]");
    if (c.cast_pool == 0 || c.cast_pool > 16000)
        throw Error("synth", "ConfigError", "cast_pool must lie in [1, 16000]");
    if (!(c.zipf_exponent >= 0.0))
        throw Error("synth", "ConfigError", "zipf_exponent must be non-negative");
    auto n_common = static_cast<std::size_t>(std::llround(c.overlap * static_cast<double>(c.n_left)));
    if (n_common > c.n_right)
        throw Error("synth", "ConfigError",
                    "overlap requires " + std::to_string(n_common) +
                        " shared movies but the right side holds only " +
                        std::to_string(c.n_right));
}

SynthCorpus generate(const SynthConfig& cfg) {
    validate_config(cfg);
    Generator gen(cfg);

    const std::size_t n_common =
        static_cast<std::size_t>(std::llround(cfg.overlap * static_cast<double>(cfg.n_left)));
    const std::size_t n_protos = cfg.n_left + cfg.n_right - n_common;

    std::vector<Proto> protos;
    protos.reserve(n_protos);
    for (std::size_t i = 0; i < n_protos; ++i) protos.push_back(gen.make_proto());

    std::vector<Entity> left_rows, right_rows;
    std::vector<IdPair> positives;

    auto add_left = [&](Entity e) {
        e.id = make_id('L', left_rows.size());
        left_rows.push_back(std::move(e));
        return left_rows.back().id;
    };
    auto add_right = [&](Entity e) {
        e.id = make_id('R', right_rows.size());
        right_rows.push_back(std::move(e));
        return right_rows.back().id;
    };

    // Base rows: left i uses proto i; right j uses proto j when shared,
    // else one of the right-only protos.
    for (std::size_t i = 0; i < cfg.n_left; ++i) add_left(gen.render(protos[i], false));
    for (std::size_t j = 0; j < cfg.n_right; ++j) {
        std::size_t pi = j < n_common ? j : cfg.n_left + (j - n_common);
        add_right(gen.render(protos[pi], true));
    }
    for (std::size_t i = 0; i < n_common; ++i)
        positives.push_back({left_rows[i].id, right_rows[i].id});

    // Satellite companions of shared movies: high title/cast overlap
    // with the parent pair, low overlap with each other.
    for (std::size_t i = 0; i < n_common; ++i) {
        if (!gen.rng.bernoulli(cfg.satellite_probability)) continue;
        const Proto& parent = protos[i];
        std::string parent_title = title_from_tokens(parent.title_tokens, gen.token_pool);

        Entity ls;
        ls.titles.push_back("Making of " + parent_title);
        ls.year = parent.year;
        ls.runtime = 25 + static_cast<int>(gen.rng.below(31));
        for (std::size_t idx : gen.half_cast(parent)) ls.cast.push_back(gen.names.names[idx]);

        Entity rs;
        rs.titles.push_back(parent_title + " Bonus Material");
        rs.year = parent.year;
        rs.runtime = 25 + static_cast<int>(gen.rng.below(31));
        for (std::size_t idx : gen.half_cast(parent)) rs.cast.push_back(gen.names.names[idx]);

        positives.push_back({add_left(std::move(ls)), add_right(std::move(rs))});
    }

    // Within-side duplicates; truth positives carry over to the copy.
    std::unordered_map<std::string, std::vector<std::string>> pos_by_left, pos_by_right;
    for (const auto& p : positives) {
        pos_by_left[p.left].push_back(p.right);
        pos_by_right[p.right].push_back(p.left);
    }
    auto duplicate_side = [&](std::vector<Entity>& rows, bool is_left) {
        std::size_t base = rows.size();
        for (std::size_t k = 0; k < base; ++k) {
            if (!gen.rng.bernoulli(cfg.duplicate_rate)) continue;
            Entity copy = rows[k];
            std::string orig_id = copy.id;
            if (copy.year && gen.rng.bernoulli(0.5))
                *copy.year += gen.rng.bernoulli(0.5) ? 1 : -1;
            std::string new_id = is_left ? add_left(std::move(copy)) : add_right(std::move(copy));
            const auto& carried = is_left ? pos_by_left[orig_id] : pos_by_right[orig_id];
            for (const auto& other : carried)
                positives.push_back(is_left ? IdPair{new_id, other} : IdPair{other, new_id});
        }
    };
    duplicate_side(left_rows, true);
    duplicate_side(right_rows, false);

    SynthCorpus corpus;
    corpus.left = Dataset("left", Side::Left, std::move(left_rows));
    corpus.right = Dataset("right", Side::Right, std::move(right_rows));
    corpus.truth.positives.insert(positives.begin(), positives.end());
    corpus.truth.complete = true;
    return corpus;
}

SynthConfig read_synth_config(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("synth", "ConfigError", e.what());
    }
    SynthConfig c;
    try {
        const std::vector<std::string> known = {
            "seed",          "n_left",          "n_right",        "overlap",
            "duplicate_rate","satellite_probability", "title_noise_rate", "alt_title_rate",
            "initialism_rate","year_jitter",    "runtime_jitter", "missing",
            "token_pool",    "zipf_exponent",   "cast_pool"};
        for (const auto& [key, _] : j.items())
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw Error("synth", "ConfigError", "unknown config key: " + key);
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("n_left")) c.n_left = j["n_left"].get<std::size_t>();
        if (j.contains("n_right")) c.n_right = j["n_right"].get<std::size_t>();
        if (j.contains("overlap")) c.overlap = j["overlap"].get<double>();
        if (j.contains("duplicate_rate")) c.duplicate_rate = j["duplicate_rate"].get<double>();
        if (j.contains("satellite_probability"))
            c.satellite_probability = j["satellite_probability"].get<double>();
        if (j.contains("title_noise_rate")) c.title_noise_rate = j["title_noise_rate"].get<double>();
        if (j.contains("alt_title_rate")) c.alt_title_rate = j["alt_title_rate"].get<double>();
        if (j.contains("initialism_rate")) c.initialism_rate = j["initialism_rate"].get<double>();
        if (j.contains("year_jitter")) c.year_jitter = j["year_jitter"].get<int>();
        if (j.contains("runtime_jitter")) c.runtime_jitter = j["runtime_jitter"].get<int>();
        if (j.contains("missing")) {
            const auto& m = j["missing"];
            for (const auto& [key, _] : m.items())
                if (key != "year" && key != "runtime" && key != "cast" && key != "directors")
                    throw Error("synth", "ConfigError", "unknown config key: missing." + key);
            if (m.contains("year")) c.missing.year = m["year"].get<double>();
            if (m.contains("runtime")) c.missing.runtime = m["runtime"].get<double>();
            if (m.contains("cast")) c.missing.cast = m["cast"].get<double>();
            if (m.contains("directors")) c.missing.directors = m["directors"].get<double>();
        }
        if (j.contains("token_pool")) c.token_pool = j["token_pool"].get<std::size_t>();
        if (j.contains("zipf_exponent")) c.zipf_exponent = j["zipf_exponent"].get<double>();
        if (j.contains("cast_pool")) c.cast_pool = j["cast_pool"].get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("synth", "ConfigError", e.what());
    }
    validate_config(c);
    return c;
}

void write_synth_config(std::ostream& out, const SynthConfig& c) {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["n_left"] = c.n_left;
    j["n_right"] = c.n_right;
    j["overlap"] = c.overlap;
    j["duplicate_rate"] = c.duplicate_rate;
    j["satellite_probability"] = c.satellite_probability;
    j["title_noise_rate"] = c.title_noise_rate;
    j["alt_title_rate"] = c.alt_title_rate;
    j["initialism_rate"] = c.initialism_rate;
    j["year_jitter"] = c.year_jitter;
    j["runtime_jitter"] = c.runtime_jitter;
    j["missing"] = {{"year", c.missing.year},
                    {"runtime", c.missing.runtime},
                    {"cast", c.missing.cast},
                    {"directors", c.missing.directors}};
    j["token_pool"] = c.token_pool;
    j["zipf_exponent"] = c.zipf_exponent;
    j["cast_pool"] = c.cast_pool;
    out << j.dump(2) << '\n';
}

}  // namespace onematch
