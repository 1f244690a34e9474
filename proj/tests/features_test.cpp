#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "textclust/error.hpp"
#include "textclust/features.hpp"

#include "fixtures.hpp"

using namespace textclust;
namespace fs = std::filesystem;

namespace {

FeatureMatrix sentence_matrix(std::uint32_t min_freq = 2, unsigned threads = 1) {
    const auto tokens =
        normalize_corpus(fixtures::sentence_corpus(), fixtures::sentence_normalizer());
    const NGramDictionary merged =
        merge_dictionaries(build_dictionary(tokens, 1), build_dictionary(tokens, 2));
    return vectorize_corpus(tokens, select_features(merged, min_freq), threads);
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "textclust_tests" / name;
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST(Vectorize, PresenceVectorsForTheTwoSentenceCorpus) {
    // Feature order at min_freq 2: gost, assist, film, joão, também,
    // "gost assist". Sentence 1 hits all six; sentence 2 misses film.
    const FeatureMatrix m = sentence_matrix();
    ASSERT_EQ(m.n_rows(), 2u);
    EXPECT_EQ(m.dim, 6u);
    EXPECT_EQ(m.rows[0].on, (std::vector<std::uint32_t>{0, 1, 2, 3, 4, 5}));
    EXPECT_EQ(m.rows[1].on, (std::vector<std::uint32_t>{0, 1, 3, 4, 5}));
    EXPECT_TRUE(m.rows[1].contains(3));
    EXPECT_FALSE(m.rows[1].contains(2));
    ASSERT_TRUE(m.space.has_value());
    EXPECT_EQ(m.space_hash, m.space->hash());
}

TEST(Vectorize, RepeatedFeaturesAppearOnce) {
    // "gost" occurs twice in sentence 1 but presence is binary.
    const FeatureMatrix m = sentence_matrix();
    EXPECT_EQ(std::count(m.rows[0].on.begin(), m.rows[0].on.end(), 0u), 1);
    EXPECT_TRUE(std::is_sorted(m.rows[0].on.begin(), m.rows[0].on.end()));
}

TEST(Vectorize, DocumentWithNoSelectedFeaturesIsAllZero) {
    TokenSeq doc;
    doc.tokens = {"unseen", "words"};
    const auto tokens =
        normalize_corpus(fixtures::sentence_corpus(), fixtures::sentence_normalizer());
    const FeatureSpace space = select_features(build_dictionary(tokens, 1), 2);
    EXPECT_EQ(vectorize(doc, space).nnz(), 0u);
}

TEST(VectorizeCorpus, ThreadCountDoesNotChangeRows) {
    const FeatureMatrix m1 = sentence_matrix(1, 1);
    const FeatureMatrix m2 = sentence_matrix(1, 2);
    const FeatureMatrix m8 = sentence_matrix(1, 8);
    ASSERT_EQ(m1.n_rows(), m2.n_rows());
    ASSERT_EQ(m1.n_rows(), m8.n_rows());
    for (std::size_t r = 0; r < m1.n_rows(); ++r) {
        EXPECT_EQ(m1.rows[r].on, m2.rows[r].on);
        EXPECT_EQ(m1.rows[r].on, m8.rows[r].on);
    }
    EXPECT_EQ(m1.space_hash, m8.space_hash);
}

TEST(MatrixFile, RoundTripsRowsDimAndHash) {
    const FeatureMatrix m = sentence_matrix();
    const fs::path p = scratch("features") / "matrix.tsv";
    save_matrix(m, p.string());
    const FeatureMatrix back = load_matrix(p.string());
    EXPECT_EQ(back.dim, m.dim);
    EXPECT_EQ(back.space_hash, m.space_hash);
    ASSERT_EQ(back.n_rows(), m.n_rows());
    for (std::size_t r = 0; r < m.n_rows(); ++r) EXPECT_EQ(back.rows[r].on, m.rows[r].on);
    EXPECT_FALSE(back.space.has_value());
}

TEST(MatrixFile, WritesDocIdThenCommaSeparatedIndices) {
    FeatureMatrix m = fixtures::make_matrix({{0, 2}, {}, {1}}, 3);
    m.space_hash = 42;
    const fs::path p = scratch("features") / "explicit.tsv";
    save_matrix(m, p.string());
    EXPECT_EQ(slurp(p), "# textclust-matrix\tdim=3\tspace_hash=42\n0\t0,2\n1\t\n2\t1\n");
}

TEST(MatrixFile, LoadRejectsMalformedInput) {
    const fs::path dir = scratch("features");
    const auto write = [&](const char* name, const char* body) {
        const fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << body;
        return p.string();
    };
    EXPECT_THROW(load_matrix(write("nohdr.tsv", "0\t0,1\n")), data_error);
    EXPECT_THROW(load_matrix(write("empty.tsv", "")), data_error);
    const char* hdr = "# textclust-matrix\tdim=3\tspace_hash=7\n";
    EXPECT_THROW(load_matrix(write("order.tsv", (std::string(hdr) + "1\t0\n").c_str())),
                 data_error);
    EXPECT_THROW(load_matrix(write("range.tsv", (std::string(hdr) + "0\t5\n").c_str())),
                 data_error);
    EXPECT_THROW(load_matrix(write("unsorted.tsv", (std::string(hdr) + "0\t2,1\n").c_str())),
                 data_error);
    EXPECT_THROW(load_matrix(write("badid.tsv", (std::string(hdr) + "x\t0\n").c_str())),
                 data_error);
    EXPECT_THROW(load_matrix(write("badidx.tsv", (std::string(hdr) + "0\t1,x\n").c_str())),
                 data_error);
    EXPECT_THROW(load_matrix("/nonexistent/matrix.tsv"), io_error);
}

TEST(AttachSpace, RestoresTheVocabularyAfterLoad) {
    const auto tokens =
        normalize_corpus(fixtures::sentence_corpus(), fixtures::sentence_normalizer());
    const NGramDictionary merged =
        merge_dictionaries(build_dictionary(tokens, 1), build_dictionary(tokens, 2));
    const FeatureSpace space = select_features(merged, 2);
    const fs::path p = scratch("features") / "attach.tsv";
    save_matrix(vectorize_corpus(tokens, space, 1), p.string());

    FeatureMatrix loaded = load_matrix(p.string());
    attach_space(loaded, space);
    ASSERT_TRUE(loaded.space.has_value());
    EXPECT_EQ(loaded.space->features[0].text, "gost");

    FeatureMatrix wrong = load_matrix(p.string());
    EXPECT_THROW(attach_space(wrong, select_features(merged, 1)), data_error);
}
