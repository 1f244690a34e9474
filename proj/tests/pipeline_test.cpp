#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "textclust/pipeline.hpp"

using namespace textclust;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "textclust_tests" / "pipeline" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kNewsCsv =
    "publish_date,headline_text\n"
    "20030219,police probe fatal crash\n"
    "20030219,police arrest crash driver\n"
    "20030220,fire crews battle blaze\n"
    "20040101,fire destroys old mill\n"
    "20040102,police charge man over crash\n"
    "20040103,firefighters contain bushfire blaze\n";

fs::path news_csv(const fs::path& dir) {
    const fs::path p = dir / "news.csv";
    write_file(p, kNewsCsv);
    return p;
}

PipelineConfig base_config(const fs::path& dir) {
    PipelineConfig cfg;
    cfg.input = news_csv(dir).string();
    cfg.min_freq = 2;
    cfg.k = 2;
    cfg.restarts = 5;
    cfg.seed = 7;
    cfg.out_dir = (dir / "out").string();
    return cfg;
}

json manifest_of(const fs::path& out_dir) {
    return json::parse(slurp(out_dir / "manifest.json"));
}

}  // namespace

TEST(ParseConfigFile, ReadsEveryKey) {
    const fs::path dir = scratch("cfg_full");
    const fs::path p = dir / "run.conf";
    write_file(p,
               "# full configuration\n"
               "input = data.csv\n"
               "text-column = title\n"
               "date-column = date\n"
               "stemmer = identity\n"
               "stopwords = sw.txt\n"
               "ngram = 1, 2\n"
               "min-freq = 3\n"
               "k = 4\n"
               "distance = cosine\n"
               "variant = minibatch\n"
               "init = random\n"
               "restarts = 6\n"
               "max-iter = 55\n"
               "tol = 0.001\n"
               "batch-size = 32\n"
               "batches = 17\n"
               "seed = 99\n"
               "top-limit = 5\n"
               "out = results\n"
               "threads = 2\n"
               "svg = true\n");
    const PipelineConfig cfg = parse_config_file(p.string());
    EXPECT_EQ(cfg.input, "data.csv");
    EXPECT_EQ(cfg.text_column, "title");
    EXPECT_EQ(cfg.date_column, "date");
    EXPECT_EQ(cfg.stemmer, "identity");
    EXPECT_EQ(cfg.stopwords, "sw.txt");
    EXPECT_EQ(cfg.ngrams, (std::vector<int>{1, 2}));
    EXPECT_EQ(cfg.min_freq, 3u);
    EXPECT_EQ(cfg.k, 4u);
    EXPECT_EQ(cfg.distance, "cosine");
    EXPECT_EQ(cfg.variant, "minibatch");
    EXPECT_EQ(cfg.init, "random");
    EXPECT_EQ(cfg.restarts, 6u);
    EXPECT_EQ(cfg.max_iter, 55u);
    EXPECT_DOUBLE_EQ(cfg.tol, 0.001);
    EXPECT_EQ(cfg.batch_size, 32u);
    EXPECT_EQ(cfg.n_batches, 17u);
    EXPECT_EQ(cfg.seed, 99u);
    EXPECT_EQ(cfg.top_limit, 5u);
    EXPECT_EQ(cfg.out_dir, "results");
    EXPECT_EQ(cfg.threads, 2u);
    EXPECT_TRUE(cfg.svg);
}

TEST(ParseConfigFile, DefaultsSurviveAnEmptyFile) {
    const fs::path dir = scratch("cfg_empty");
    const fs::path p = dir / "empty.conf";
    write_file(p, "# nothing but comments\n\n");
    const PipelineConfig cfg = parse_config_file(p.string());
    EXPECT_EQ(cfg.text_column, "headline_text");
    EXPECT_EQ(cfg.date_column, "publish_date");
    EXPECT_EQ(cfg.stemmer, "porter");
    EXPECT_EQ(cfg.ngrams, std::vector<int>{1});
    EXPECT_EQ(cfg.min_freq, 10u);
    EXPECT_EQ(cfg.k, 0u);
    EXPECT_FALSE(cfg.svg);
}

TEST(ParseConfigFile, RejectsMalformedLines) {
    const fs::path dir = scratch("cfg_bad");
    const auto conf = [&](const char* name, const std::string& body) {
        const fs::path p = dir / name;
        write_file(p, body);
        return p.string();
    };
    EXPECT_THROW(parse_config_file(conf("unknown.conf", "kk = 3\n")), data_error);
    EXPECT_THROW(parse_config_file(conf("noeq.conf", "just words\n")), data_error);
    EXPECT_THROW(parse_config_file(conf("badnum.conf", "k = four\n")), data_error);
    EXPECT_THROW(parse_config_file(conf("badtol.conf", "tol = tiny\n")), data_error);
    EXPECT_THROW(parse_config_file(conf("badsvg.conf", "svg = maybe\n")), data_error);
    EXPECT_THROW(parse_config_file(conf("badngram.conf", "ngram = ,\n")), data_error);
    EXPECT_THROW(parse_config_file("/nonexistent/run.conf"), io_error);
}

TEST(RunPipeline, SingleKLeavesTheFullArtifactTrail) {
    const fs::path dir = scratch("single_k");
    const PipelineConfig cfg = base_config(dir);
    const json manifest = run_pipeline(cfg);

    EXPECT_EQ(manifest["status"], "ok");
    EXPECT_EQ(manifest["corpus_size"], 6);
    EXPECT_EQ(manifest["skipped_rows"], 0);
    EXPECT_EQ(manifest["malformed_dates"], 0);
    EXPECT_EQ(manifest["feature_count"], 4);
    EXPECT_EQ(manifest["result"]["k"], 2);
    EXPECT_EQ(manifest["result"]["distance"], "sql2");
    EXPECT_EQ(manifest["result"]["variant"], "means");

    const fs::path out(cfg.out_dir);
    for (const char* name : {"manifest.json", "dictionary.tsv", "matrix.tsv",
                             "assignments.tsv", "run.json", "sizes.csv", "terms.csv"}) {
        EXPECT_TRUE(fs::exists(out / name)) << name;
    }
    EXPECT_FALSE(fs::exists(out / "sizes.svg"));

    // police rows (0, 1, 4) and fire rows (2, 3, 5) split cleanly
    const std::string assignments = slurp(out / "assignments.tsv");
    EXPECT_NE(assignments.find("0\t"), std::string::npos);
    std::vector<int> cluster_of(6, -1);
    std::size_t pos = 0;
    for (int row = 0; row < 6; ++row) {
        const auto tab = assignments.find('\t', pos);
        const auto nl = assignments.find('\n', tab);
        cluster_of[row] = std::stoi(assignments.substr(tab + 1, nl - tab - 1));
        pos = nl + 1;
    }
    EXPECT_EQ(cluster_of[0], cluster_of[1]);
    EXPECT_EQ(cluster_of[0], cluster_of[4]);
    EXPECT_EQ(cluster_of[2], cluster_of[3]);
    EXPECT_EQ(cluster_of[2], cluster_of[5]);
    EXPECT_NE(cluster_of[0], cluster_of[2]);

    const std::string terms = slurp(out / "terms.csv");
    EXPECT_EQ(terms.rfind("cluster,term,count\n", 0), 0u);
    EXPECT_NE(terms.find("polic"), std::string::npos);
    EXPECT_NE(terms.find("blaze"), std::string::npos);
}

TEST(RunPipeline, RerunsAreDeterministicUpToTiming) {
    const fs::path dir = scratch("determinism");
    PipelineConfig cfg = base_config(dir);
    cfg.out_dir = (dir / "out_a").string();
    json a = run_pipeline(cfg);
    cfg.out_dir = (dir / "out_b").string();
    json b = run_pipeline(cfg);

    for (json* m : {&a, &b}) {
        m->erase("timing_ms");
        m->erase("artifacts");
        (*m)["config"].erase("out_dir");
    }
    EXPECT_EQ(a.dump(), b.dump());

    for (const char* name : {"dictionary.tsv", "matrix.tsv", "assignments.tsv", "run.json",
                             "sizes.csv", "terms.csv"}) {
        EXPECT_EQ(slurp(dir / "out_a" / name), slurp(dir / "out_b" / name)) << name;
    }
}

TEST(RunPipeline, EmptyFeatureSelectionFailsAtTheFeaturizeStage) {
    const fs::path dir = scratch("no_features");
    PipelineConfig cfg = base_config(dir);
    cfg.min_freq = 99;
    EXPECT_THROW(run_pipeline(cfg), data_error);
    const json manifest = manifest_of(cfg.out_dir);
    EXPECT_EQ(manifest["status"], "failed");
    EXPECT_EQ(manifest["failed_stage"], "featurize");
    EXPECT_EQ(manifest["error"], "no features selected");
}

TEST(RunPipeline, RequiresExactlyOneOfKOrKRange) {
    const fs::path dir = scratch("k_conflict");
    PipelineConfig both = base_config(dir);
    both.k_min = 1;
    both.k_max = 3;
    EXPECT_THROW(run_pipeline(both), data_error);

    PipelineConfig neither = base_config(dir);
    neither.k = 0;
    EXPECT_THROW(run_pipeline(neither), data_error);

    PipelineConfig inverted = base_config(dir);
    inverted.k = 0;
    inverted.k_min = 3;
    inverted.k_max = 2;
    EXPECT_THROW(run_pipeline(inverted), data_error);
    const json manifest = manifest_of(inverted.out_dir);
    EXPECT_EQ(manifest["status"], "failed");
    EXPECT_EQ(manifest["failed_stage"], "setup");
}

TEST(RunPipeline, ElbowModeSweepsTheRange) {
    const fs::path dir = scratch("elbow_mode");
    PipelineConfig cfg = base_config(dir);
    cfg.k = 0;
    cfg.k_min = 1;
    cfg.k_max = 3;
    cfg.svg = true;
    const json manifest = run_pipeline(cfg);
    EXPECT_EQ(manifest["status"], "ok");
    ASSERT_TRUE(manifest.contains("elbow"));
    ASSERT_EQ(manifest["elbow"].size(), 3u);
    EXPECT_EQ(manifest["elbow"][0]["k"], 1);
    EXPECT_EQ(manifest["elbow"][2]["k"], 3);
    const double j1 = manifest["elbow"][0]["inertia"].get<double>();
    const double j3 = manifest["elbow"][2]["inertia"].get<double>();
    EXPECT_LE(j3, j1 + 1e-9);
    const fs::path out(cfg.out_dir);
    EXPECT_TRUE(fs::exists(out / "elbow.csv"));
    EXPECT_TRUE(fs::exists(out / "elbow.svg"));
    EXPECT_FALSE(fs::exists(out / "assignments.tsv"));
    const std::string csv = slurp(out / "elbow.csv");
    EXPECT_EQ(csv.rfind("k,inertia,restarts\n", 0), 0u);
}

TEST(RunPipeline, SvgFlagAddsTheSizesChart) {
    const fs::path dir = scratch("svg_flag");
    PipelineConfig cfg = base_config(dir);
    cfg.svg = true;
    run_pipeline(cfg);
    const fs::path svg = fs::path(cfg.out_dir) / "sizes.svg";
    ASSERT_TRUE(fs::exists(svg));
    EXPECT_NE(slurp(svg).find("<svg "), std::string::npos);
}

TEST(RunPipeline, MissingInputFailsAtIngest) {
    const fs::path dir = scratch("missing_input");
    PipelineConfig cfg = base_config(dir);
    cfg.input = (dir / "absent.csv").string();
    EXPECT_THROW(run_pipeline(cfg), io_error);
    const json manifest = manifest_of(cfg.out_dir);
    EXPECT_EQ(manifest["status"], "failed");
    EXPECT_EQ(manifest["failed_stage"], "ingest");
}
