#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "textclust/cluster.hpp"
#include "textclust/corpus.hpp"
#include "textclust/elbow.hpp"
#include "textclust/error.hpp"
#include "textclust/features.hpp"
#include "textclust/ngram.hpp"
#include "textclust/normalize.hpp"
#include "textclust/parallel.hpp"
#include "textclust/report.hpp"
#include "textclust/stemmer.hpp"
#include "textclust/variants.hpp"

namespace textclust {

// Every knob of an end-to-end run. The manifest echoes all of it back,
// so an output directory is self-describing.
struct PipelineConfig {
    std::string input;
    std::string text_column = "headline_text";
    std::string date_column = "publish_date";  // empty disables date parsing
    std::string stemmer = "porter";            // porter | identity | table:PATH
    std::string stopwords;                     // path; empty uses the built-in English list
    std::vector<int> ngrams{1};
    std::uint32_t min_freq = 10;
    std::uint32_t k = 0;                       // single-k mode when nonzero
    std::uint32_t k_min = 0, k_max = 0;        // elbow mode when nonzero
    std::string distance = "sql2";
    std::string variant = "means";
    std::string init = "kpp";
    std::uint32_t restarts = 1;
    std::uint32_t max_iter = 300;
    double tol = 1e-4;
    std::uint32_t batch_size = 100;
    std::uint32_t n_batches = 100;
    std::uint64_t seed = 0;
    std::uint32_t top_limit = 20;              // terms kept per cluster in terms.csv
    std::string out_dir = "out";
    unsigned threads = 0;                      // 0 defers to default_threads()
    bool svg = false;
};

// Flat key=value file mirroring the CLI flags. '#' starts a comment;
// unknown keys are errors so typos cannot silently fall back to
// defaults.
inline PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open config: " + path);
    PipelineConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw data_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        auto as_u32 = [&](const std::string& v) {
            char* end = nullptr;
            const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
            if (end != v.c_str() + v.size() || v.empty())
                throw data_error(path + ":" + std::to_string(lineno) + ": bad number '" + v + "'");
            return static_cast<std::uint32_t>(x);
        };
        if (key == "input") cfg.input = val;
        else if (key == "text-column") cfg.text_column = val;
        else if (key == "date-column") cfg.date_column = val;
        else if (key == "stemmer") cfg.stemmer = val;
        else if (key == "stopwords") cfg.stopwords = val;
        else if (key == "ngram") {
            cfg.ngrams.clear();
            std::size_t begin = 0;
            for (std::size_t i = 0; i <= val.size(); ++i) {
                if (i == val.size() || val[i] == ',') {
                    const std::string part = trim(val.substr(begin, i - begin));
                    if (!part.empty()) cfg.ngrams.push_back(static_cast<int>(as_u32(part)));
                    begin = i + 1;
                }
            }
            if (cfg.ngrams.empty())
                throw data_error(path + ":" + std::to_string(lineno) + ": empty ngram list");
        }
        else if (key == "min-freq") cfg.min_freq = as_u32(val);
        else if (key == "k") cfg.k = as_u32(val);
        else if (key == "k-min") cfg.k_min = as_u32(val);
        else if (key == "k-max") cfg.k_max = as_u32(val);
        else if (key == "distance") cfg.distance = val;
        else if (key == "variant") cfg.variant = val;
        else if (key == "init") cfg.init = val;
        else if (key == "restarts") cfg.restarts = as_u32(val);
        else if (key == "max-iter") cfg.max_iter = as_u32(val);
        else if (key == "tol") {
            char* end = nullptr;
            cfg.tol = std::strtod(val.c_str(), &end);
            if (end != val.c_str() + val.size() || val.empty())
                throw data_error(path + ":" + std::to_string(lineno) + ": bad number '" + val + "'");
        }
        else if (key == "batch-size") cfg.batch_size = as_u32(val);
        else if (key == "batches") cfg.n_batches = as_u32(val);
        else if (key == "seed") {
            char* end = nullptr;
            cfg.seed = std::strtoull(val.c_str(), &end, 10);
            if (end != val.c_str() + val.size() || val.empty())
                throw data_error(path + ":" + std::to_string(lineno) + ": bad number '" + val + "'");
        }
        else if (key == "top-limit") cfg.top_limit = as_u32(val);
        else if (key == "out") cfg.out_dir = val;
        else if (key == "threads") cfg.threads = as_u32(val);
        else if (key == "svg") {
            if (val == "true" || val == "1") cfg.svg = true;
            else if (val == "false" || val == "0") cfg.svg = false;
            else throw data_error(path + ":" + std::to_string(lineno) + ": svg must be true or false");
        }
        else throw data_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

namespace detail {

inline nlohmann::ordered_json config_json(const PipelineConfig& c, unsigned threads) {
    nlohmann::ordered_json j;
    j["input"] = c.input;
    j["text_column"] = c.text_column;
    j["date_column"] = c.date_column;
    j["stemmer"] = c.stemmer;
    j["stopwords"] = c.stopwords.empty() ? "builtin-english" : c.stopwords;
    j["ngrams"] = c.ngrams;
    j["min_freq"] = c.min_freq;
    j["k"] = c.k;
    j["k_min"] = c.k_min;
    j["k_max"] = c.k_max;
    j["distance"] = c.distance;
    j["variant"] = c.variant;
    j["init"] = c.init;
    j["restarts"] = c.restarts;
    j["max_iter"] = c.max_iter;
    j["tol"] = c.tol;
    j["batch_size"] = c.batch_size;
    j["n_batches"] = c.n_batches;
    j["seed"] = c.seed;
    j["top_limit"] = c.top_limit;
    j["out_dir"] = c.out_dir;
    j["threads"] = threads;
    j["svg"] = c.svg;
    return j;
}

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write: " + path);
    out << body;
    if (!out) throw io_error("failed writing: " + path);
}

}  // namespace detail

// Runs ingest, normalize, dict, featurize, then either one clustering
// (k set) or an elbow sweep (k_min..k_max), leaving every intermediate
// artifact plus manifest.json in out_dir. On a stage failure the
// manifest still lands, marked failed with the stage name, and the
// error propagates. Wall-clock numbers live only under "timing_ms" so
// determinism checks can drop that one key.
inline nlohmann::ordered_json run_pipeline(const PipelineConfig& cfg) {
    namespace fs = std::filesystem;
    using clock = std::chrono::steady_clock;

    const unsigned threads = cfg.threads ? cfg.threads : default_threads();
    nlohmann::ordered_json manifest;
    manifest["status"] = "ok";
    manifest["config"] = detail::config_json(cfg, threads);
    nlohmann::ordered_json timing = nlohmann::ordered_json::object();
    std::vector<std::string> artifacts;
    std::string stage = "setup";

    const fs::path dir(cfg.out_dir);
    auto emit_manifest = [&]() {
        manifest["artifacts"] = artifacts;
        manifest["timing_ms"] = timing;
        detail::write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    };

    try {
        fs::create_directories(dir);
        if (cfg.input.empty()) throw data_error("config has no input path");
        const bool single_k = cfg.k > 0;
        const bool sweep = cfg.k_min > 0 || cfg.k_max > 0;
        if (single_k == sweep)
            throw data_error("config needs exactly one of k or k-min/k-max");
        if (sweep && (cfg.k_min == 0 || cfg.k_max == 0 || cfg.k_min > cfg.k_max))
            throw data_error("bad k range");

        stage = "ingest";
        auto t0 = clock::now();
        std::optional<std::string> date_col;
        if (!cfg.date_column.empty()) date_col = cfg.date_column;
        const Corpus corpus = load_csv(cfg.input, cfg.text_column, date_col);
        manifest["corpus_size"] = corpus.documents.size();
        manifest["skipped_rows"] = corpus.skipped_rows;
        manifest["malformed_dates"] = corpus.malformed_dates;
        timing[stage] = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0)
                            .count();

        stage = "normalize";
        t0 = clock::now();
        NormalizerConfig norm = NormalizerConfig::english();
        if (!cfg.stopwords.empty()) norm.stopwords = load_stopwords(cfg.stopwords);
        norm.stemmer = Stemmer::parse(cfg.stemmer);
        const std::vector<TokenSeq> tokens = normalize_corpus(corpus, norm, threads);
        timing[stage] = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0)
                            .count();

        stage = "dict";
        t0 = clock::now();
        NGramDictionary dict;
        for (const int n : cfg.ngrams) dict = merge_dictionaries(dict, build_dictionary(tokens, n));
        const std::string dict_path = (dir / "dictionary.tsv").string();
        save_dictionary_tsv(dict, dict_path);
        artifacts.push_back(dict_path);
        manifest["dictionary_size"] = dict.size();
        timing[stage] = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0)
                            .count();

        stage = "featurize";
        t0 = clock::now();
        const FeatureSpace space = select_features(dict, cfg.min_freq);
        if (space.empty()) throw data_error("no features selected");
        const FeatureMatrix matrix = vectorize_corpus(tokens, space, threads);
        const std::string matrix_path = (dir / "matrix.tsv").string();
        save_matrix(matrix, matrix_path);
        artifacts.push_back(matrix_path);
        manifest["feature_count"] = space.size();
        timing[stage] = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0)
                            .count();

        FitConfig fit_cfg;
        fit_cfg.variant = parse_variant(cfg.variant);
        fit_cfg.distance = parse_distance(cfg.distance);
        fit_cfg.params.init = parse_init(cfg.init);
        fit_cfg.params.max_iter = cfg.max_iter;
        fit_cfg.params.tol = cfg.tol;
        fit_cfg.params.threads = threads;
        fit_cfg.batch_size = std::min<std::uint32_t>(
            cfg.batch_size, static_cast<std::uint32_t>(matrix.n_rows()));
        fit_cfg.n_batches = cfg.n_batches;
        fit_cfg.restarts = cfg.restarts;
        fit_cfg.seed = cfg.seed;

        if (single_k) {
            stage = "cluster";
            t0 = clock::now();
            const ClusteringResult res = fit_best(matrix, cfg.k, fit_cfg);
            std::string assign_body;
            for (std::size_t r = 0; r < res.assignments.size(); ++r)
                assign_body += std::to_string(corpus.documents[r].id) + "\t" +
                               std::to_string(res.assignments[r]) + "\n";
            const std::string assign_path = (dir / "assignments.tsv").string();
            detail::write_text(assign_path, assign_body);
            artifacts.push_back(assign_path);
            nlohmann::ordered_json run;
            run["k"] = res.k;
            run["seed"] = res.seed;
            run["inertia"] = res.inertia;
            run["iterations"] = res.iterations_run;
            run["distance"] = distance_name(res.distance);
            run["variant"] = cfg.variant;
            run["converged"] = res.converged;
            run["empty_rows"] = res.empty_rows.size();
            const std::string run_path = (dir / "run.json").string();
            detail::write_text(run_path, run.dump(2) + "\n");
            artifacts.push_back(run_path);
            manifest["result"] = run;
            timing[stage] =
                std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();

            stage = "report";
            t0 = clock::now();
            const ClusterSizeTable table = cluster_sizes(res);
            const std::string sizes_path = (dir / "sizes.csv").string();
            emit_csv(table, sizes_path);
            artifacts.push_back(sizes_path);
            FeatureMatrix with_space = matrix;
            std::string terms_body = "cluster,term,count\n";
            for (std::uint32_t c = 0; c < res.k; ++c) {
                const TermRanking ranking = top_terms(with_space, res, c, cfg.top_limit);
                for (const auto& [term, count] : ranking.terms)
                    terms_body +=
                        std::to_string(c) + "," + term + "," + std::to_string(count) + "\n";
            }
            const std::string terms_path = (dir / "terms.csv").string();
            detail::write_text(terms_path, terms_body);
            artifacts.push_back(terms_path);
            if (cfg.svg) {
                const std::string sizes_svg = (dir / "sizes.svg").string();
                emit_svg(table, sizes_svg);
                artifacts.push_back(sizes_svg);
            }
            timing[stage] =
                std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
        } else {
            stage = "elbow";
            t0 = clock::now();
            const ElbowCurve curve = elbow_curve(matrix, cfg.k_min, cfg.k_max, fit_cfg);
            const std::string elbow_path = (dir / "elbow.csv").string();
            emit_csv(curve, elbow_path);
            artifacts.push_back(elbow_path);
            if (cfg.svg) {
                const std::string elbow_svg = (dir / "elbow.svg").string();
                emit_svg(curve, elbow_svg);
                artifacts.push_back(elbow_svg);
            }
            nlohmann::ordered_json points = nlohmann::ordered_json::array();
            for (const ElbowPoint& p : curve.points) {
                nlohmann::ordered_json pj;
                pj["k"] = p.k;
                pj["inertia"] = p.inertia;
                pj["restarts"] = p.restarts;
                pj["seed"] = p.seed;
                points.push_back(pj);
            }
            manifest["elbow"] = points;
            timing[stage] =
                std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
        }

        emit_manifest();
        return manifest;
    } catch (const std::exception& e) {
        manifest["status"] = "failed";
        manifest["failed_stage"] = stage;
        manifest["error"] = e.what();
        try {
            if (fs::exists(dir)) emit_manifest();
        } catch (...) {
            // The manifest is best-effort once the stage itself failed.
        }
        throw;
    }
}

}  // namespace textclust
