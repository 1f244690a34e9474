#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#ifndef TEXTCLUST_CLI_PATH
#error "TEXTCLUST_CLI_PATH must point at the CLI binary"
#endif

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(TEXTCLUST_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    CliResult res;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

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

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / "textclust_tests" / "cli" /
               ::testing::UnitTest::GetInstance()->current_test_info()->name();
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        news_ = dir_ / "news.csv";
        std::ofstream out(news_, std::ios::binary);
        out << kNewsCsv;
    }

    fs::path dir_;
    fs::path news_;
};

}  // namespace

TEST_F(CliTest, HelpExitsZeroAndListsSubcommands) {
    const CliResult res = run_cli("--help");
    EXPECT_EQ(res.exit_code, 0);
    for (const char* name : {"ingest", "dict", "featurize", "cluster", "elbow", "report", "run"}) {
        EXPECT_NE(res.output.find(name), std::string::npos) << name;
    }
}

TEST_F(CliTest, UsageErrorsExitOne) {
    EXPECT_EQ(run_cli("").exit_code, 1);
    EXPECT_EQ(run_cli("ingest --input x.csv --no-such-flag").exit_code, 1);
    EXPECT_EQ(run_cli("frobnicate").exit_code, 1);
    EXPECT_EQ(run_cli("cluster --matrix m.tsv").exit_code, 1);  // missing required --k
}

TEST_F(CliTest, MissingFilesExitTwo) {
    const CliResult res = run_cli("ingest --input " + q(dir_ / "absent.csv"));
    EXPECT_EQ(res.exit_code, 2);
    EXPECT_NE(res.output.find("error:"), std::string::npos);
    EXPECT_EQ(run_cli("cluster --matrix " + q(dir_ / "absent.tsv") + " --k 2").exit_code, 2);
}

TEST_F(CliTest, BadEnumValuesExitTwo) {
    const CliResult dict = run_cli("dict --input " + q(news_) + " --stemmer snowball --out " +
                                   q(dir_ / "d.tsv"));
    EXPECT_EQ(dict.exit_code, 2);
    EXPECT_NE(dict.output.find("error:"), std::string::npos);
}

TEST_F(CliTest, IngestReportsCorpusCounters) {
    const fs::path parsed = dir_ / "parsed.csv";
    const CliResult res =
        run_cli("ingest --input " + q(news_) + " --out " + q(parsed));
    EXPECT_EQ(res.exit_code, 0);
    EXPECT_NE(res.output.find("documents=6 skipped_rows=0 malformed_dates=0"),
              std::string::npos);
    const std::string body = slurp(parsed);
    EXPECT_EQ(body.rfind("id,date,text\n", 0), 0u);
    EXPECT_NE(body.find("0,20030219,\"police probe fatal crash\""), std::string::npos);
}

TEST_F(CliTest, FullChainFromCsvToReports) {
    const fs::path dict = dir_ / "dict.tsv";
    const fs::path matrix = dir_ / "matrix.tsv";
    const fs::path assign = dir_ / "assignments.tsv";
    const fs::path meta = dir_ / "run.json";

    const CliResult d =
        run_cli("dict --input " + q(news_) + " --ngram 1 --out " + q(dict));
    EXPECT_EQ(d.exit_code, 0);
    EXPECT_NE(d.output.find("entries=18 corpus_size=6"), std::string::npos);

    const CliResult f = run_cli("featurize --input " + q(news_) + " --dict " + q(dict) +
                                " --min-freq 2 --out " + q(matrix));
    EXPECT_EQ(f.exit_code, 0);
    EXPECT_NE(f.output.find("rows=6 dim=4"), std::string::npos);

    const CliResult c = run_cli("cluster --matrix " + q(matrix) +
                                " --k 2 --restarts 5 --seed 7 --out " + q(assign) +
                                " --meta " + q(meta));
    EXPECT_EQ(c.exit_code, 0);
    EXPECT_NE(c.output.find("k=2 "), std::string::npos);
    const std::string a = slurp(assign);
    ASSERT_FALSE(a.empty());
    // rows 0, 1, 4 are the police stories; 2, 3, 5 the fire ones
    std::vector<char> cluster_of;
    for (std::size_t pos = 0; pos < a.size();) {
        const auto tab = a.find('\t', pos);
        cluster_of.push_back(a[tab + 1]);
        pos = a.find('\n', tab) + 1;
    }
    ASSERT_EQ(cluster_of.size(), 6u);
    EXPECT_EQ(cluster_of[0], cluster_of[1]);
    EXPECT_EQ(cluster_of[0], cluster_of[4]);
    EXPECT_EQ(cluster_of[2], cluster_of[3]);
    EXPECT_EQ(cluster_of[2], cluster_of[5]);
    EXPECT_NE(cluster_of[0], cluster_of[2]);
    EXPECT_NE(slurp(meta).find("\"k\": 2"), std::string::npos);

    const CliResult sizes = run_cli("report sizes --assignments " + q(assign) + " --out " +
                                    q(dir_ / "sizes.csv"));
    EXPECT_EQ(sizes.exit_code, 0);
    EXPECT_NE(sizes.output.find("clusters=2 total=6 largest_share=0.5"), std::string::npos);
    EXPECT_EQ(slurp(dir_ / "sizes.csv"), "cluster,count,share\n0,3,0.5\n1,3,0.5\n");

    const CliResult terms = run_cli("report terms --matrix " + q(matrix) + " --dict " + q(dict) +
                                    " --min-freq 2 --assignments " + q(assign) +
                                    " --cluster 0 --limit 3 --out " + q(dir_ / "terms.csv"));
    EXPECT_EQ(terms.exit_code, 0);
    EXPECT_EQ(slurp(dir_ / "terms.csv").rfind("term,count\n", 0), 0u);

    const CliResult elbow = run_cli("elbow --matrix " + q(matrix) +
                                    " --k-min 1 --k-max 3 --restarts 3 --svg --out " +
                                    q(dir_ / "elbow.csv"));
    EXPECT_EQ(elbow.exit_code, 0);
    EXPECT_NE(elbow.output.find("points=3"), std::string::npos);
    EXPECT_EQ(slurp(dir_ / "elbow.csv").rfind("k,inertia,restarts\n", 0), 0u);
    EXPECT_TRUE(fs::exists(dir_ / "elbow.svg"));

    const CliResult yearly = run_cli("yearly --input " + q(news_) +
                                     " --k 2 --min-freq 1 --restarts 3 --out " +
                                     q(dir_ / "yearly.csv"));
    EXPECT_EQ(yearly.exit_code, 0);
    EXPECT_NE(yearly.output.find("years=2 skipped=0"), std::string::npos);
    EXPECT_EQ(slurp(dir_ / "yearly.csv").rfind("year,inertia,total,largest_share,sizes\n", 0),
              0u);
}

TEST_F(CliTest, ClusteringRunsAreByteDeterministic) {
    const fs::path dict = dir_ / "dict.tsv";
    const fs::path matrix = dir_ / "matrix.tsv";
    ASSERT_EQ(run_cli("dict --input " + q(news_) + " --out " + q(dict)).exit_code, 0);
    ASSERT_EQ(run_cli("featurize --input " + q(news_) + " --dict " + q(dict) +
                      " --min-freq 2 --out " + q(matrix))
                  .exit_code,
              0);
    const std::string fit = "cluster --matrix " + q(matrix) + " --k 2 --restarts 4 --seed 11";
    ASSERT_EQ(run_cli(fit + " --out " + q(dir_ / "a.tsv") + " --meta " + q(dir_ / "a.json"))
                  .exit_code,
              0);
    ASSERT_EQ(run_cli(fit + " --out " + q(dir_ / "b.tsv") + " --meta " + q(dir_ / "b.json"))
                  .exit_code,
              0);
    EXPECT_EQ(slurp(dir_ / "a.tsv"), slurp(dir_ / "b.tsv"));
    EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
}

TEST_F(CliTest, RunSubcommandHonorsConfigAndOverrides) {
    const fs::path conf = dir_ / "run.conf";
    {
        std::ofstream out(conf, std::ios::binary);
        out << "input = " << news_.string() << "\n"
            << "min-freq = 2\n"
            << "k = 2\n"
            << "restarts = 5\n"
            << "seed = 7\n"
            << "out = " << (dir_ / "out").string() << "\n";
    }
    const CliResult res = run_cli("run --config " + q(conf));
    EXPECT_EQ(res.exit_code, 0);
    EXPECT_NE(res.output.find("status=ok"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "out" / "manifest.json"));
    EXPECT_TRUE(fs::exists(dir_ / "out" / "assignments.tsv"));

    // --k 0 plus a k range flips the same config into elbow mode
    const CliResult elbow = run_cli("run --config " + q(conf) +
                                    " --k 0 --k-min 1 --k-max 3 --out " +
                                    q(dir_ / "out_elbow"));
    EXPECT_EQ(elbow.exit_code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "out_elbow" / "elbow.csv"));
    EXPECT_FALSE(fs::exists(dir_ / "out_elbow" / "assignments.tsv"));

    // an unselective min-freq override fails at featurize with exit 2
    const CliResult fail = run_cli("run --config " + q(conf) + " --min-freq 99 --out " +
                                   q(dir_ / "out_fail"));
    EXPECT_EQ(fail.exit_code, 2);
    EXPECT_NE(fail.output.find("no features selected"), std::string::npos);
    EXPECT_NE(slurp(dir_ / "out_fail" / "manifest.json").find("\"failed\""),
              std::string::npos);
}
