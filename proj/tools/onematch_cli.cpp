// Command-line front end: each pipeline stage is a subcommand reading
// and writing plain files, so stages can be re-run and diffed in
// isolation. All file outputs are written atomically (temp + rename).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "onematch/blocking.hpp"
#include "onematch/combiner.hpp"
#include "onematch/csv.hpp"
#include "onematch/errors.hpp"
#include "onematch/eval.hpp"
#include "onematch/features.hpp"
#include "onematch/io.hpp"
#include "onematch/matchers.hpp"
#include "onematch/pipeline.hpp"
#include "onematch/synth.hpp"

namespace {

using namespace onematch;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("model", "FileNotFound", path);
    return in;
}

// Write-to-temp-then-rename so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cli", "WriteError", tmp);
        out << content;
        out.flush();
        if (!out) throw Error("cli", "WriteError", tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cli", "WriteError", path + ": " + ec.message());
}

void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path)
        atomic_write(*out_path, content);
    else
        std::cout << content;
}

DatasetFormat format_for(const std::string& path, const std::string& explicit_format) {
    if (explicit_format == "csv") return DatasetFormat::Csv;
    if (explicit_format == "json") return DatasetFormat::Json;
    return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? DatasetFormat::Json
                                                                       : DatasetFormat::Csv;
}

Dataset load_dataset(const std::string& path, Side side, const std::string& explicit_format) {
    auto in = open_input(path);
    return parse_dataset(in, format_for(path, explicit_format), side,
                         side == Side::Left ? "left" : "right");
}

std::vector<std::string> load_stopwords(const std::string& path) {
    auto in = open_input(path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) words.push_back(line);
    }
    return words;
}

LogisticModel load_model(const std::string& path) {
    auto in = open_input(path);
    return read_model_json(in);
}

// Optional config file carrying the knobs shared by several
// subcommands; explicit flags override its values.
struct PipelineConfig {
    std::vector<std::string> stopwords = Tokenizer::default_stopwords();
    FeatureParams features;
    TrainConfig combiner;
    BlockingOptions blocking;
};

PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg;
    if (path.empty()) return cfg;
    auto in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("cli", "ConfigError", e.what());
    }
    try {
        for (const auto& [key, value] : j.items()) {
            (void)value;
            if (key != "stopwords" && key != "features" && key != "combiner" &&
                key != "blocking" && key != "seed")
                throw Error("cli", "ConfigError", "unknown config key: " + key);
        }
        if (j.contains("stopwords")) cfg.stopwords = j["stopwords"].get<std::vector<std::string>>();
        if (j.contains("features")) {
            const auto& f = j["features"];
            if (f.contains("title_discount"))
                cfg.features.title_discount = f["title_discount"].get<double>();
            if (f.contains("year_cap")) cfg.features.year_cap = f["year_cap"].get<double>();
            if (f.contains("runtime_cap"))
                cfg.features.runtime_cap = f["runtime_cap"].get<double>();
            if (f.contains("cast_cap")) cfg.features.cast_cap = f["cast_cap"].get<double>();
            if (f.contains("partial_name_credit"))
                cfg.features.partial_name_credit = f["partial_name_credit"].get<double>();
        }
        if (j.contains("combiner")) {
            const auto& c = j["combiner"];
            if (c.contains("lambda")) cfg.combiner.lambda = c["lambda"].get<double>();
            if (c.contains("tolerance")) cfg.combiner.tolerance = c["tolerance"].get<double>();
            if (c.contains("max_iters")) cfg.combiner.max_iters = c["max_iters"].get<int>();
            if (c.contains("optimizer"))
                cfg.combiner.optimizer = c["optimizer"].get<std::string>() == "newton"
                                             ? Optimizer::Newton
                                             : Optimizer::GradientAscent;
        }
        if (j.contains("blocking")) {
            const auto& b = j["blocking"];
            if (b.contains("max_pairs_per_token"))
                cfg.blocking.max_pairs_per_token = b["max_pairs_per_token"].get<std::size_t>();
        }
        if (j.contains("seed")) cfg.combiner.seed = j["seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error("cli", "ConfigError", e.what());
    }
    return cfg;
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "many-many") return Algorithm::ManyMany;
    if (name == "first-choice") return Algorithm::FirstChoice;
    if (name == "mutual") return Algorithm::MutualFirstChoice;
    if (name == "greedy") return Algorithm::Greedy;
    return Algorithm::MaxWeight;
}

std::string counts_json(const OutcomeCounts& c) {
    nlohmann::ordered_json j;
    j["tp"] = c.tp;
    j["fn"] = c.fn;
    j["fp"] = c.fp;
    j["fp_truth_negative"] = c.fp_truth_negative;
    j["fp_left_inferred"] = c.fp_left_inferred;
    j["fp_right_inferred"] = c.fp_right_inferred;
    j["precision"] = precision(c);
    j["recall"] = recall(c);
    return j.dump(2) + "\n";
}

std::vector<double> parse_grid(const std::string& spec) {
    double lo, hi, step;
    char sep1, sep2;
    std::istringstream ss(spec);
    if (!(ss >> lo >> sep1 >> hi >> sep2 >> step) || sep1 != ':' || sep2 != ':' || !ss.eof())
        throw Error("cli", "BadGrid", "expected lo:hi:step, got " + spec);
    return threshold_grid(lo, hi, step);
}

struct DatasetArgs {
    std::string left_path, right_path, format;

    void attach(CLI::App* cmd) {
        cmd->add_option("--left", left_path, "left dataset file")->required();
        cmd->add_option("--right", right_path, "right dataset file")->required();
        cmd->add_option("--format", format, "force dataset format (csv|json)")
            ->check(CLI::IsMember({"csv", "json"}));
    }

    Dataset left() const { return load_dataset(left_path, Side::Left, format); }
    Dataset right() const { return load_dataset(right_path, Side::Right, format); }
};

struct CommonArgs {
    std::string config_path, stopwords_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "pipeline config JSON");
        cmd->add_option("--stopwords", stopwords_path, "stopword list, one per line");
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg = load_config(config_path);
        if (!stopwords_path.empty()) cfg.stopwords = load_stopwords(stopwords_path);
        return cfg;
    }
};

int run(int argc, char** argv) {
    CLI::App app{"one-to-one entity resolution pipeline"};
    app.require_subcommand(1);

    // ingest ----------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "parse a dataset and re-emit it canonically");
    std::string in_path, in_format, in_side = "left", out_format = "json";
    std::optional<std::string> ingest_out;
    ingest->add_option("--input", in_path, "dataset file")->required();
    ingest->add_option("--side", in_side, "left|right")->check(CLI::IsMember({"left", "right"}));
    ingest->add_option("--format", in_format, "input format (csv|json)")
        ->check(CLI::IsMember({"csv", "json"}));
    ingest->add_option("--out-format", out_format, "output format (csv|json)")
        ->check(CLI::IsMember({"csv", "json"}));
    ingest->add_option("--out", ingest_out, "output file (default stdout)");
    ingest->callback([&] {
        Side side = in_side == "right" ? Side::Right : Side::Left;
        Dataset d = load_dataset(in_path, side, in_format);
        std::ostringstream out;
        if (out_format == "csv")
            write_dataset_csv(out, d);
        else
            write_dataset_json(out, d);
        emit(ingest_out, out.str());
    });

    // block -----------------------------------------------------------
    auto* block = app.add_subcommand("block", "emit candidate id pairs sharing a title token");
    DatasetArgs block_ds;
    CommonArgs block_common;
    std::optional<std::size_t> block_cap;
    std::optional<std::string> block_out;
    block_ds.attach(block);
    block_common.attach(block);
    block->add_option("--max-pairs-per-token", block_cap,
                      "skip tokens crossing more pairs than this (0 = no cap)");
    block->add_option("--out", block_out, "output pairs CSV (default stdout)");
    block->callback([&] {
        PipelineConfig cfg = block_common.resolve();
        if (block_cap) cfg.blocking.max_pairs_per_token = *block_cap;
        Dataset left = block_ds.left();
        Dataset right = block_ds.right();
        Tokenizer tok(cfg.stopwords);
        CandidatePairSet cands =
            candidate_pairs(build_index(left, tok), build_index(right, tok), cfg.blocking);
        std::vector<IdPair> pairs;
        pairs.reserve(cands.pairs.size());
        for (const auto& p : cands.pairs)
            pairs.push_back({left[p.left].id, right[p.right].id});
        std::ostringstream out;
        write_pairs_csv(out, pairs);
        emit(block_out, out.str());
    });

    // score -----------------------------------------------------------
    auto* score = app.add_subcommand("score", "feature-score candidate pairs");
    DatasetArgs score_ds;
    CommonArgs score_common;
    std::string score_pairs_path, score_model_path;
    std::optional<std::string> score_out;
    int score_threads = 1;
    score_ds.attach(score);
    score_common.attach(score);
    score->add_option("--pairs", score_pairs_path, "candidate pairs CSV")->required();
    score->add_option("--model", score_model_path, "trained model JSON (adds combined score)");
    score->add_option("--threads", score_threads, "worker threads")->check(CLI::Range(1, 64));
    score->add_option("--out", score_out, "output scores CSV (default stdout)");
    score->callback([&] {
        PipelineConfig cfg = score_common.resolve();
        Dataset left = score_ds.left();
        Dataset right = score_ds.right();
        auto pairs_in = open_input(score_pairs_path);
        std::vector<IdPair> pairs = read_pairs_csv(pairs_in);
        std::optional<LogisticModel> model;
        if (!score_model_path.empty()) model = load_model(score_model_path);
        Tokenizer tok(cfg.stopwords);
        auto rows = score_id_pairs(left, right, pairs, tok, cfg.features,
                                   model ? &*model : nullptr, score_threads);
        std::ostringstream out;
        write_scores_csv(out, rows);
        emit(score_out, out.str());
    });

    // train -----------------------------------------------------------
    auto* train = app.add_subcommand("train", "fit the logistic score combiner");
    DatasetArgs train_ds;
    CommonArgs train_common;
    std::string train_truth, train_out;
    std::optional<double> train_lambda, train_tol;
    std::optional<int> train_iters;
    std::optional<std::string> train_opt;
    std::optional<std::uint64_t> train_seed;
    train_ds.attach(train);
    train_common.attach(train);
    train->add_option("--truth", train_truth, "labeled truth CSV")->required();
    train->add_option("--out", train_out, "model JSON output")->required();
    train->add_option("--lambda", train_lambda, "L2 penalty");
    train->add_option("--tolerance", train_tol, "gradient tolerance");
    train->add_option("--max-iters", train_iters, "iteration cap");
    train->add_option("--optimizer", train_opt, "gd|newton")
        ->check(CLI::IsMember({"gd", "newton"}));
    train->add_option("--seed", train_seed, "recorded training seed");
    train->callback([&] {
        PipelineConfig cfg = train_common.resolve();
        if (train_lambda) cfg.combiner.lambda = *train_lambda;
        if (train_tol) cfg.combiner.tolerance = *train_tol;
        if (train_iters) cfg.combiner.max_iters = *train_iters;
        if (train_opt)
            cfg.combiner.optimizer =
                *train_opt == "newton" ? Optimizer::Newton : Optimizer::GradientAscent;
        if (train_seed) cfg.combiner.seed = *train_seed;
        Dataset left = train_ds.left();
        Dataset right = train_ds.right();
        auto truth_in = open_input(train_truth);
        TruthSet truth = parse_truth_set(truth_in, left, right);
        Tokenizer tok(cfg.stopwords);
        auto examples = make_labeled_examples(truth, left, right, tok, cfg.features);
        LogisticModel model = train_logistic(examples, cfg.combiner);
        std::ostringstream out;
        write_model_json(out, model);
        atomic_write(train_out, out.str());
    });

    // match -----------------------------------------------------------
    auto* match = app.add_subcommand("match", "resolve scored pairs at a threshold");
    std::string match_scores, match_algo, match_dir = "l2r";
    double match_theta = 0.0;
    std::optional<std::string> match_out;
    match->add_option("--scores", match_scores, "scores CSV")->required();
    match
        ->add_option("--algorithm", match_algo,
                     "many-many|first-choice|mutual|greedy|max-weight")
        ->required()
        ->check(CLI::IsMember({"many-many", "first-choice", "mutual", "greedy", "max-weight"}));
    match->add_option("--direction", match_dir, "first-choice direction (l2r|r2l)")
        ->check(CLI::IsMember({"l2r", "r2l"}));
    match->add_option("--threshold", match_theta, "score threshold")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    match->add_option("--out", match_out, "output matching CSV (default stdout)");
    match->callback([&] {
        auto scores_in = open_input(match_scores);
        ScoredGraph g = graph_from_scores(rows_to_matched_pairs(read_scores_csv(scores_in)));
        Direction dir = match_dir == "r2l" ? Direction::RightToLeft : Direction::LeftToRight;
        Matching m = run_matcher(g, parse_algorithm(match_algo), match_theta, dir);
        std::ostringstream out;
        write_matching_csv(out, m);
        emit(match_out, out.str());
    });

    // eval --------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "precision/recall of a matching against truth");
    std::string eval_matching, eval_truth;
    bool eval_complete = false, eval_dedup = false;
    std::optional<std::string> eval_out;
    eval->add_option("--matching", eval_matching, "matching CSV")->required();
    eval->add_option("--truth", eval_truth, "truth CSV")->required();
    eval->add_flag("--complete-truth", eval_complete,
                   "closed-world truth: unlisted pairs are negative");
    eval->add_flag("--fp-dedup", eval_dedup, "count each wrong pair once instead of per clause");
    eval->add_option("--out", eval_out, "output JSON (default stdout)");
    eval->callback([&] {
        auto matching_in = open_input(eval_matching);
        Matching m = read_matching_csv(matching_in, false);
        auto truth_in = open_input(eval_truth);
        TruthSet t = parse_truth_set(truth_in);
        t.complete = eval_complete;
        OutcomeCounts c =
            count_outcomes(m, t, eval_dedup ? FpMode::Deduplicated : FpMode::Literal);
        emit(eval_out, counts_json(c));
    });

    // pr-curve ------------------------------------------------------------
    auto* pr = app.add_subcommand("pr-curve", "precision/recall sweep over thresholds");
    std::string pr_scores, pr_truth, pr_algo, pr_dir = "l2r", pr_grid = "0:1:0.01";
    bool pr_at_scores = false, pr_complete = false, pr_dedup = false;
    std::optional<std::string> pr_out;
    pr->add_option("--scores", pr_scores, "scores CSV")->required();
    pr->add_option("--truth", pr_truth, "truth CSV")->required();
    pr->add_option("--algorithm", pr_algo, "matcher")
        ->required()
        ->check(CLI::IsMember({"many-many", "first-choice", "mutual", "greedy", "max-weight"}));
    pr->add_option("--direction", pr_dir, "first-choice direction (l2r|r2l)")
        ->check(CLI::IsMember({"l2r", "r2l"}));
    pr->add_option("--grid", pr_grid, "lo:hi:step threshold grid");
    pr->add_flag("--at-scores", pr_at_scores, "use every distinct score as a threshold");
    pr->add_flag("--complete-truth", pr_complete, "closed-world truth");
    pr->add_flag("--fp-dedup", pr_dedup, "count each wrong pair once");
    pr->add_option("--out", pr_out, "output CSV (default stdout)");
    pr->callback([&] {
        auto scores_in = open_input(pr_scores);
        ScoredGraph g = graph_from_scores(rows_to_matched_pairs(read_scores_csv(scores_in)));
        auto truth_in = open_input(pr_truth);
        TruthSet t = parse_truth_set(truth_in);
        t.complete = pr_complete;
        std::vector<double> grid =
            pr_at_scores ? thresholds_at_scores(g) : parse_grid(pr_grid);
        Direction dir = pr_dir == "r2l" ? Direction::RightToLeft : Direction::LeftToRight;
        auto points = pr_curve(g, parse_algorithm(pr_algo), t, grid, dir,
                               pr_dedup ? FpMode::Deduplicated : FpMode::Literal);
        std::ostringstream out;
        write_csv_row(out, {"theta", "tp", "fp", "fn", "precision", "recall", "weight", "size"});
        for (const auto& p : points)
            write_csv_row(out, {format_score(p.theta), std::to_string(p.counts.tp),
                                std::to_string(p.counts.fp), std::to_string(p.counts.fn),
                                format_score(p.precision), format_score(p.recall),
                                format_score(p.weight), std::to_string(p.size)});
        emit(pr_out, out.str());
    });

    // dedupe-scan ---------------------------------------------------------
    auto* dedupe = app.add_subcommand("dedupe-scan", "rank within-dataset near-duplicates");
    CommonArgs dedupe_common;
    std::string dedupe_dataset, dedupe_model, dedupe_format;
    std::size_t dedupe_head = 100, dedupe_stride = 100;
    std::optional<std::string> dedupe_out;
    dedupe_common.attach(dedupe);
    dedupe->add_option("--dataset", dedupe_dataset, "dataset file")->required();
    dedupe->add_option("--format", dedupe_format, "dataset format (csv|json)")
        ->check(CLI::IsMember({"csv", "json"}));
    dedupe->add_option("--model", dedupe_model, "trained model JSON")->required();
    dedupe->add_option("--head", dedupe_head, "report every pair in the top N");
    dedupe->add_option("--stride", dedupe_stride, "then every Nth pair");
    dedupe->add_option("--out", dedupe_out, "output CSV (default stdout)");
    dedupe->callback([&] {
        PipelineConfig cfg = dedupe_common.resolve();
        Dataset d = load_dataset(dedupe_dataset, Side::Left, dedupe_format);
        LogisticModel model = load_model(dedupe_model);
        Tokenizer tok(cfg.stopwords);
        auto samples = self_duplicate_scan(d, model, tok, cfg.features,
                                           {dedupe_head, dedupe_stride}, cfg.blocking);
        std::ostringstream out;
        write_csv_row(out, {"rank", "id1", "id2", "score"});
        for (const auto& s : samples)
            write_csv_row(out, {std::to_string(s.rank), s.id1, s.id2, format_score(s.score)});
        emit(dedupe_out, out.str());
    });

    // synth ----------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic corpus");
    std::string synth_config, synth_dir;
    std::optional<std::uint64_t> synth_seed;
    synth->add_option("--config", synth_config, "generator config JSON");
    synth->add_option("--out-dir", synth_dir, "output directory")->required();
    synth->add_option("--seed", synth_seed, "override the config seed");
    synth->callback([&] {
        SynthConfig cfg;
        if (!synth_config.empty()) {
            auto in = open_input(synth_config);
            cfg = read_synth_config(in);
        }
        if (synth_seed) cfg.seed = *synth_seed;
        validate_config(cfg);
        SynthCorpus corpus = generate(cfg);
        std::filesystem::create_directories(synth_dir);
        auto path = [&](const char* name) {
            return (std::filesystem::path(synth_dir) / name).string();
        };
        std::ostringstream left_out, right_out, truth_out, cfg_out;
        write_dataset_json(left_out, corpus.left);
        write_dataset_json(right_out, corpus.right);
        write_truth_csv(truth_out, corpus.truth);
        write_synth_config(cfg_out, cfg);
        atomic_write(path("left.json"), left_out.str());
        atomic_write(path("right.json"), right_out.str());
        atomic_write(path("truth.csv"), truth_out.str());
        atomic_write(path("config.echo.json"), cfg_out.str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "cli:Internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
