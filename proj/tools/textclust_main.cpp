#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "textclust/textclust.hpp"

namespace tc = textclust;

namespace {

struct CorpusOpts {
    std::string input;
    std::string text_column = "headline_text";
    std::string date_column = "publish_date";
};

struct NormOpts {
    std::string stemmer = "porter";
    std::string stopwords;
};

struct FitOpts {
    std::string distance = "sql2";
    std::string init = "kpp";
    std::string variant = "means";
    std::uint32_t restarts = 1;
    std::uint32_t max_iter = 300;
    double tol = 1e-4;
    std::uint32_t batch_size = 100;
    std::uint32_t n_batches = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 defers to TEXTCLUST_THREADS or 1
};

void add_corpus_opts(CLI::App* cmd, CorpusOpts& o) {
    cmd->add_option("--input", o.input, "input CSV file")->required();
    cmd->add_option("--text-column", o.text_column, "column holding the document text");
    cmd->add_option("--date-column", o.date_column,
                    "column holding YYYYMMDD dates; empty disables date parsing");
}

void add_norm_opts(CLI::App* cmd, NormOpts& o) {
    cmd->add_option("--stemmer", o.stemmer, "porter, identity, or table:PATH");
    cmd->add_option("--stopwords", o.stopwords,
                    "stopword file, one word per line (default: built-in English list)");
}

void add_fit_opts(CLI::App* cmd, FitOpts& o) {
    cmd->add_option("--distance", o.distance, "sql2, l2, l1, or cosine");
    cmd->add_option("--init", o.init, "kpp, random, or firstk");
    cmd->add_option("--variant", o.variant, "means, medoids, median, or minibatch");
    cmd->add_option("--restarts", o.restarts, "independent restarts, best kept");
    cmd->add_option("--max-iter", o.max_iter, "iteration cap per run");
    cmd->add_option("--tol", o.tol, "relative objective-change stopping threshold");
    cmd->add_option("--batch-size", o.batch_size, "minibatch sample size");
    cmd->add_option("--batches", o.n_batches, "minibatch count");
    cmd->add_option("--seed", o.seed, "base RNG seed");
    cmd->add_option("--threads", o.threads, "worker threads (0 = TEXTCLUST_THREADS or 1)");
}

tc::NormalizerConfig make_normalizer(const NormOpts& o) {
    tc::NormalizerConfig cfg = tc::NormalizerConfig::english();
    if (!o.stopwords.empty()) cfg.stopwords = tc::load_stopwords(o.stopwords);
    cfg.stemmer = tc::Stemmer::parse(o.stemmer);
    return cfg;
}

tc::FitConfig make_fit_config(const FitOpts& o) {
    tc::FitConfig cfg;
    cfg.variant = tc::parse_variant(o.variant);
    cfg.distance = tc::parse_distance(o.distance);
    cfg.params.init = tc::parse_init(o.init);
    cfg.params.max_iter = o.max_iter;
    cfg.params.tol = o.tol;
    cfg.params.threads = o.threads ? o.threads : tc::default_threads();
    cfg.batch_size = o.batch_size;
    cfg.n_batches = o.n_batches;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    return cfg;
}

tc::Corpus load_corpus(const CorpusOpts& o) {
    std::optional<std::string> date_col;
    if (!o.date_column.empty()) date_col = o.date_column;
    return tc::load_csv(o.input, o.text_column, date_col);
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// "doc_id<TAB>cluster" lines in row order.
std::vector<std::uint32_t> load_assignments(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tc::io_error("cannot open assignments: " + path);
    std::vector<std::uint32_t> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw tc::data_error(path + ":" + std::to_string(lineno) +
                                 ": expected 'doc_id<TAB>cluster'");
        char* end = nullptr;
        const unsigned long long c = std::strtoull(line.c_str() + tab + 1, &end, 10);
        if (end == line.c_str() + tab + 1)
            throw tc::data_error(path + ":" + std::to_string(lineno) + ": bad cluster index");
        out.push_back(static_cast<std::uint32_t>(c));
    }
    return out;
}

void write_assignments(const std::string& path, const std::vector<std::uint32_t>& assignments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tc::io_error("cannot write assignments: " + path);
    for (std::size_t r = 0; r < assignments.size(); ++r)
        out << r << '\t' << assignments[r] << '\n';
    if (!out) throw tc::io_error("failed writing assignments: " + path);
}

std::string svg_sibling(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".svg");
    return p.string();
}

tc::ClusteringResult result_from_assignments(const std::vector<std::uint32_t>& assignments,
                                             std::uint32_t k) {
    if (k == 0) {
        for (const std::uint32_t c : assignments) k = std::max(k, c + 1);
        if (k == 0) throw tc::data_error("assignments file has no rows");
    }
    tc::ClusteringResult res;
    res.k = k;
    res.assignments = assignments;
    return res;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corpus-to-clusters toolkit: ingest, n-gram features, k-means, reports"};
    app.require_subcommand(1);

    // ingest
    CorpusOpts ing_corpus;
    std::string ing_out;
    CLI::App* ingest = app.add_subcommand("ingest", "load a CSV corpus and report/export it");
    add_corpus_opts(ingest, ing_corpus);
    ingest->add_option("--out", ing_out, "write the parsed corpus as id,date,text CSV");
    ingest->callback([&] {
        const tc::Corpus corpus = load_corpus(ing_corpus);
        if (!ing_out.empty()) {
            std::ofstream out(ing_out, std::ios::binary);
            if (!out) throw tc::io_error("cannot write: " + ing_out);
            out << "id,date,text\n";
            for (const tc::Document& d : corpus.documents) {
                out << d.id << ',';
                if (d.date) {
                    char buf[16];
                    std::snprintf(buf, sizeof buf, "%04d%02d%02d", d.date->year, d.date->month,
                                  d.date->day);
                    out << buf;
                }
                out << ',' << csv_quote(d.text) << '\n';
            }
            if (!out) throw tc::io_error("failed writing: " + ing_out);
        }
        std::printf("documents=%zu skipped_rows=%zu malformed_dates=%zu\n",
                    corpus.documents.size(), corpus.skipped_rows, corpus.malformed_dates);
    });

    // dict
    CorpusOpts dict_corpus;
    NormOpts dict_norm;
    std::vector<int> dict_ngrams{1};
    std::string dict_out;
    unsigned dict_threads = 0;
    CLI::App* dict = app.add_subcommand("dict", "build an n-gram frequency dictionary");
    add_corpus_opts(dict, dict_corpus);
    add_norm_opts(dict, dict_norm);
    dict->add_option("--ngram", dict_ngrams, "n-gram arity, repeatable (default 1)");
    dict->add_option("--threads", dict_threads, "worker threads (0 = TEXTCLUST_THREADS or 1)");
    dict->add_option("--out", dict_out, "dictionary TSV path")->required();
    dict->callback([&] {
        const tc::Corpus corpus = load_corpus(dict_corpus);
        const tc::NormalizerConfig norm = make_normalizer(dict_norm);
        const unsigned threads = dict_threads ? dict_threads : tc::default_threads();
        const std::vector<tc::TokenSeq> tokens = tc::normalize_corpus(corpus, norm, threads);
        tc::NGramDictionary d;
        for (const int n : dict_ngrams)
            d = tc::merge_dictionaries(d, tc::build_dictionary(tokens, n));
        tc::save_dictionary_tsv(d, dict_out);
        std::printf("entries=%zu corpus_size=%zu\n", d.size(), d.corpus_size);
    });

    // featurize
    CorpusOpts feat_corpus;
    NormOpts feat_norm;
    std::string feat_dict, feat_out;
    std::uint32_t feat_min_freq = 10;
    unsigned feat_threads = 0;
    CLI::App* feat = app.add_subcommand("featurize", "vectorize a corpus against a dictionary");
    add_corpus_opts(feat, feat_corpus);
    add_norm_opts(feat, feat_norm);
    feat->add_option("--dict", feat_dict, "dictionary TSV from the dict command")->required();
    feat->add_option("--min-freq", feat_min_freq, "keep n-grams with count >= this");
    feat->add_option("--threads", feat_threads, "worker threads (0 = TEXTCLUST_THREADS or 1)");
    feat->add_option("--out", feat_out, "matrix file path")->required();
    feat->callback([&] {
        const tc::Corpus corpus = load_corpus(feat_corpus);
        const tc::NormalizerConfig norm = make_normalizer(feat_norm);
        const unsigned threads = feat_threads ? feat_threads : tc::default_threads();
        const std::vector<tc::TokenSeq> tokens = tc::normalize_corpus(corpus, norm, threads);
        const tc::NGramDictionary d = tc::load_dictionary_tsv(feat_dict);
        const tc::FeatureSpace space = tc::select_features(d, feat_min_freq);
        if (space.empty()) throw tc::data_error("no features selected");
        const tc::FeatureMatrix m = tc::vectorize_corpus(tokens, space, threads);
        tc::save_matrix(m, feat_out);
        std::printf("rows=%zu dim=%zu\n", m.n_rows(), m.dim);
    });

    // cluster
    FitOpts clu_fit;
    std::string clu_matrix, clu_out = "assignments.tsv", clu_meta = "run.json";
    std::uint32_t clu_k = 0;
    CLI::App* clu = app.add_subcommand("cluster", "fit a clustering to a feature matrix");
    clu->add_option("--matrix", clu_matrix, "matrix file from featurize")->required();
    clu->add_option("--k", clu_k, "cluster count")->required();
    add_fit_opts(clu, clu_fit);
    clu->add_option("--out", clu_out, "assignments file (doc_id<TAB>cluster)");
    clu->add_option("--meta", clu_meta, "run-metadata JSON path");
    clu->callback([&] {
        const tc::FeatureMatrix m = tc::load_matrix(clu_matrix);
        const tc::FitConfig cfg = make_fit_config(clu_fit);
        const tc::ClusteringResult res = tc::fit_best(m, clu_k, cfg);
        write_assignments(clu_out, res.assignments);
        nlohmann::ordered_json run;
        run["k"] = res.k;
        run["seed"] = res.seed;
        run["inertia"] = res.inertia;
        run["iterations"] = res.iterations_run;
        run["distance"] = tc::distance_name(res.distance);
        run["variant"] = clu_fit.variant;
        run["converged"] = res.converged;
        run["empty_rows"] = res.empty_rows.size();
        std::ofstream meta(clu_meta, std::ios::binary);
        if (!meta) throw tc::io_error("cannot write: " + clu_meta);
        meta << run.dump(2) << '\n';
        if (!meta) throw tc::io_error("failed writing: " + clu_meta);
        std::printf("k=%u inertia=%.12g iterations=%u seed=%llu\n", res.k, res.inertia,
                    res.iterations_run, static_cast<unsigned long long>(res.seed));
    });

    // elbow
    FitOpts elb_fit;
    std::string elb_matrix, elb_out = "elbow.csv";
    std::uint32_t elb_kmin = 0, elb_kmax = 0;
    bool elb_svg = false;
    CLI::App* elb = app.add_subcommand("elbow", "inertia-versus-k sweep");
    elb->add_option("--matrix", elb_matrix, "matrix file from featurize")->required();
    elb->add_option("--k-min", elb_kmin, "lowest k")->required();
    elb->add_option("--k-max", elb_kmax, "highest k")->required();
    add_fit_opts(elb, elb_fit);
    elb->add_option("--out", elb_out, "elbow CSV path");
    elb->add_flag("--svg", elb_svg, "also write an SVG line chart next to the CSV");
    elb->callback([&] {
        const tc::FeatureMatrix m = tc::load_matrix(elb_matrix);
        const tc::FitConfig cfg = make_fit_config(elb_fit);
        const tc::ElbowCurve curve = tc::elbow_curve(m, elb_kmin, elb_kmax, cfg);
        tc::emit_csv(curve, elb_out);
        if (elb_svg) tc::emit_svg(curve, svg_sibling(elb_out));
        std::printf("points=%zu\n", curve.points.size());
    });

    // yearly (also aliased under report)
    CorpusOpts yr_corpus;
    NormOpts yr_norm;
    FitOpts yr_fit;
    std::vector<int> yr_ngrams{1};
    std::uint32_t yr_min_freq = 10, yr_k = 19;
    bool yr_shared = false, yr_svg = false;
    std::string yr_out = "yearly.csv";
    auto add_yearly_opts = [&](CLI::App* cmd) {
        add_corpus_opts(cmd, yr_corpus);
        add_norm_opts(cmd, yr_norm);
        cmd->add_option("--ngram", yr_ngrams, "n-gram arity, repeatable (default 1)");
        cmd->add_option("--min-freq", yr_min_freq, "keep n-grams with count >= this");
        cmd->add_option("--k", yr_k, "cluster count per year");
        add_fit_opts(cmd, yr_fit);
        cmd->add_flag("--shared-dictionary", yr_shared,
                      "build one dictionary over all years instead of per year");
        cmd->add_option("--out", yr_out, "yearly CSV path");
        cmd->add_flag("--svg", yr_svg, "also write an SVG line chart next to the CSV");
    };
    auto run_yearly = [&] {
        const tc::Corpus corpus = load_corpus(yr_corpus);
        const tc::NormalizerConfig norm = make_normalizer(yr_norm);
        tc::YearlyOptions opt;
        opt.arities = yr_ngrams;
        opt.min_freq = yr_min_freq;
        opt.k = yr_k;
        opt.fit = make_fit_config(yr_fit);
        opt.shared_dictionary = yr_shared;
        const tc::YearlySeries series = tc::yearly_report(corpus, norm, opt);
        for (const std::string& w : series.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
        tc::emit_csv(series, yr_out);
        if (yr_svg) tc::emit_svg(series, svg_sibling(yr_out));
        std::printf("years=%zu skipped=%zu\n", series.entries.size(), series.warnings.size());
    };
    CLI::App* yearly = app.add_subcommand("yearly", "per-year clustering series");
    add_yearly_opts(yearly);
    yearly->callback(run_yearly);

    // report
    CLI::App* report = app.add_subcommand("report", "tables and plot data from saved runs");
    report->require_subcommand(1);

    std::string rs_assignments, rs_out = "sizes.csv";
    std::uint32_t rs_k = 0;
    bool rs_svg = false;
    CLI::App* rsizes = report->add_subcommand("sizes", "cluster cardinality table");
    rsizes->add_option("--assignments", rs_assignments, "assignments file")->required();
    rsizes->add_option("--k", rs_k, "cluster count (default: max index + 1)");
    rsizes->add_option("--out", rs_out, "sizes CSV path");
    rsizes->add_flag("--svg", rs_svg, "also write an SVG bar chart next to the CSV");
    rsizes->callback([&] {
        const auto assignments = load_assignments(rs_assignments);
        const tc::ClusteringResult res = result_from_assignments(assignments, rs_k);
        const tc::ClusterSizeTable table = tc::cluster_sizes(res);
        tc::emit_csv(table, rs_out);
        if (rs_svg) tc::emit_svg(table, svg_sibling(rs_out));
        std::printf("clusters=%zu total=%zu largest_share=%.12g\n", table.sizes.size(),
                    table.total, table.largest_share);
    });

    std::string rt_matrix, rt_dict, rt_assignments, rt_out = "terms.csv";
    std::uint32_t rt_min_freq = 10, rt_cluster = 0, rt_k = 0;
    std::size_t rt_limit = 20;
    bool rt_svg = false;
    CLI::App* rterms = report->add_subcommand("terms", "top terms of one cluster by document frequency");
    rterms->add_option("--matrix", rt_matrix, "matrix file from featurize")->required();
    rterms->add_option("--dict", rt_dict, "dictionary TSV the matrix was built from")->required();
    rterms->add_option("--min-freq", rt_min_freq, "min-freq used at featurize time");
    rterms->add_option("--assignments", rt_assignments, "assignments file")->required();
    rterms->add_option("--cluster", rt_cluster, "cluster index")->required();
    rterms->add_option("--limit", rt_limit, "terms to keep");
    rterms->add_option("--k", rt_k, "cluster count (default: max index + 1)");
    rterms->add_option("--out", rt_out, "terms CSV path");
    rterms->add_flag("--svg", rt_svg, "also write an SVG bar chart next to the CSV");
    rterms->callback([&] {
        tc::FeatureMatrix m = tc::load_matrix(rt_matrix);
        const tc::NGramDictionary d = tc::load_dictionary_tsv(rt_dict);
        tc::attach_space(m, tc::select_features(d, rt_min_freq));
        const auto assignments = load_assignments(rt_assignments);
        const tc::ClusteringResult res = result_from_assignments(assignments, rt_k);
        const tc::TermRanking ranking = tc::top_terms(m, res, rt_cluster, rt_limit);
        tc::emit_csv(ranking, rt_out);
        if (rt_svg) tc::emit_svg(ranking, svg_sibling(rt_out));
        std::printf("cluster=%u terms=%zu top=%s\n", ranking.cluster_index, ranking.terms.size(),
                    ranking.top_term().c_str());
    });

    CLI::App* ryearly = report->add_subcommand("yearly", "per-year clustering series");
    add_yearly_opts(ryearly);
    ryearly->callback(run_yearly);

    // run
    std::string run_config;
    CLI::App* runp = app.add_subcommand("run", "full pipeline from a config file");
    runp->add_option("--config", run_config, "key = value config file")->required();
    tc::PipelineConfig ov;
    auto* o_input = runp->add_option("--input", ov.input, "override: input CSV");
    auto* o_text = runp->add_option("--text-column", ov.text_column, "override");
    auto* o_date = runp->add_option("--date-column", ov.date_column, "override");
    auto* o_stemmer = runp->add_option("--stemmer", ov.stemmer, "override");
    auto* o_stop = runp->add_option("--stopwords", ov.stopwords, "override");
    auto* o_ngram = runp->add_option("--ngram", ov.ngrams, "override, repeatable");
    auto* o_minfreq = runp->add_option("--min-freq", ov.min_freq, "override");
    auto* o_k = runp->add_option("--k", ov.k, "override");
    auto* o_kmin = runp->add_option("--k-min", ov.k_min, "override");
    auto* o_kmax = runp->add_option("--k-max", ov.k_max, "override");
    auto* o_dist = runp->add_option("--distance", ov.distance, "override");
    auto* o_variant = runp->add_option("--variant", ov.variant, "override");
    auto* o_init = runp->add_option("--init", ov.init, "override");
    auto* o_restarts = runp->add_option("--restarts", ov.restarts, "override");
    auto* o_maxiter = runp->add_option("--max-iter", ov.max_iter, "override");
    auto* o_tol = runp->add_option("--tol", ov.tol, "override");
    auto* o_bsize = runp->add_option("--batch-size", ov.batch_size, "override");
    auto* o_batches = runp->add_option("--batches", ov.n_batches, "override");
    auto* o_seed = runp->add_option("--seed", ov.seed, "override");
    auto* o_top = runp->add_option("--top-limit", ov.top_limit, "override");
    auto* o_out = runp->add_option("--out", ov.out_dir, "override: output directory");
    auto* o_threads = runp->add_option("--threads", ov.threads, "override");
    auto* o_svg = runp->add_flag("--svg", ov.svg, "override: emit SVG plots");
    runp->callback([&] {
        tc::PipelineConfig cfg = tc::parse_config_file(run_config);
        if (o_input->count()) cfg.input = ov.input;
        if (o_text->count()) cfg.text_column = ov.text_column;
        if (o_date->count()) cfg.date_column = ov.date_column;
        if (o_stemmer->count()) cfg.stemmer = ov.stemmer;
        if (o_stop->count()) cfg.stopwords = ov.stopwords;
        if (o_ngram->count()) cfg.ngrams = ov.ngrams;
        if (o_minfreq->count()) cfg.min_freq = ov.min_freq;
        if (o_k->count()) cfg.k = ov.k;
        if (o_kmin->count()) cfg.k_min = ov.k_min;
        if (o_kmax->count()) cfg.k_max = ov.k_max;
        if (o_dist->count()) cfg.distance = ov.distance;
        if (o_variant->count()) cfg.variant = ov.variant;
        if (o_init->count()) cfg.init = ov.init;
        if (o_restarts->count()) cfg.restarts = ov.restarts;
        if (o_maxiter->count()) cfg.max_iter = ov.max_iter;
        if (o_tol->count()) cfg.tol = ov.tol;
        if (o_bsize->count()) cfg.batch_size = ov.batch_size;
        if (o_batches->count()) cfg.n_batches = ov.n_batches;
        if (o_seed->count()) cfg.seed = ov.seed;
        if (o_top->count()) cfg.top_limit = ov.top_limit;
        if (o_out->count()) cfg.out_dir = ov.out_dir;
        if (o_threads->count()) cfg.threads = ov.threads;
        if (o_svg->count()) cfg.svg = ov.svg;
        const nlohmann::ordered_json manifest = tc::run_pipeline(cfg);
        std::printf("status=%s out=%s\n", manifest["status"].get<std::string>().c_str(),
                    cfg.out_dir.c_str());
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const tc::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const tc::data_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
}
