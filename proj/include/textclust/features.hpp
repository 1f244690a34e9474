#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "textclust/error.hpp"
#include "textclust/ngram.hpp"
#include "textclust/parallel.hpp"

namespace textclust {

// Binary presence vector: sorted unique indices of the features that
// occur in one document. Presence, not counts.
struct SparseBinaryVector {
    std::vector<std::uint32_t> on;

    std::size_t nnz() const { return on.size(); }
    bool contains(std::uint32_t i) const {
        return std::binary_search(on.begin(), on.end(), i);
    }
};

struct FeatureMatrix {
    std::vector<SparseBinaryVector> rows;
    std::size_t dim = 0;
    std::uint64_t space_hash = 0;
    // Present when the matrix was built in-process; absent after load.
    std::optional<FeatureSpace> space;

    std::size_t n_rows() const { return rows.size(); }
};

inline SparseBinaryVector vectorize(const TokenSeq& doc, const FeatureSpace& space) {
    SparseBinaryVector vec;
    std::set<int> widths = space.arities();
    for (const int n : widths) {
        const std::size_t width = static_cast<std::size_t>(n);
        if (doc.tokens.size() < width) continue;
        for (std::size_t i = 0; i + width <= doc.tokens.size(); ++i) {
            const auto it = space.index.find(detail::join_window(doc.tokens, i, width));
            if (it != space.index.end()) vec.on.push_back(it->second);
        }
    }
    std::sort(vec.on.begin(), vec.on.end());
    vec.on.erase(std::unique(vec.on.begin(), vec.on.end()), vec.on.end());
    return vec;
}

inline FeatureMatrix vectorize_corpus(const std::vector<TokenSeq>& corpus_tokens,
                                      const FeatureSpace& space, unsigned threads = 1) {
    FeatureMatrix m;
    m.dim = space.size();
    m.space_hash = space.hash();
    m.rows.resize(corpus_tokens.size());
    parallel_for(corpus_tokens.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) m.rows[i] = vectorize(corpus_tokens[i], space);
    });
    m.space = space;
    return m;
}

// Matrix file: a header line pinning dim and the feature-space hash,
// then "doc_id<TAB>i1,i2,..." per row (empty index list for all-zero
// rows). Row order is document order; doc_id is the row number.
inline void save_matrix(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write matrix: " + path);
    out << "# textclust-matrix\tdim=" << m.dim << "\tspace_hash=" << m.space_hash << '\n';
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        out << r << '\t';
        const auto& on = m.rows[r].on;
        for (std::size_t i = 0; i < on.size(); ++i) {
            if (i) out << ',';
            out << on[i];
        }
        out << '\n';
    }
    if (!out) throw io_error("failed writing matrix: " + path);
}

inline FeatureMatrix load_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open matrix: " + path);
    FeatureMatrix m;
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("dim=");
            if (pos != std::string::npos) {
                m.dim = std::strtoull(line.c_str() + pos + 4, nullptr, 10);
                saw_header = true;
            }
            pos = line.find("space_hash=");
            if (pos != std::string::npos)
                m.space_hash = std::strtoull(line.c_str() + pos + 11, nullptr, 10);
            continue;
        }
        if (!saw_header) throw data_error(path + ": missing matrix header");
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw data_error(path + ":" + std::to_string(lineno) + ": expected 'doc_id<TAB>indices'");
        char* end = nullptr;
        const std::uint64_t doc_id = std::strtoull(line.c_str(), &end, 10);
        if (end != line.c_str() + tab)
            throw data_error(path + ":" + std::to_string(lineno) + ": bad doc_id");
        if (doc_id != m.rows.size())
            throw data_error(path + ":" + std::to_string(lineno) + ": doc_id out of order");
        SparseBinaryVector vec;
        const char* p = line.c_str() + tab + 1;
        while (*p) {
            const std::uint64_t idx = std::strtoull(p, &end, 10);
            if (end == p) throw data_error(path + ":" + std::to_string(lineno) + ": bad index");
            if (idx >= m.dim)
                throw data_error(path + ":" + std::to_string(lineno) + ": index exceeds dim");
            vec.on.push_back(static_cast<std::uint32_t>(idx));
            p = (*end == ',') ? end + 1 : end;
        }
        if (!std::is_sorted(vec.on.begin(), vec.on.end()))
            throw data_error(path + ":" + std::to_string(lineno) + ": indices not ascending");
        m.rows.push_back(std::move(vec));
    }
    if (!saw_header) throw data_error(path + ": missing matrix header");
    return m;
}

// Re-associate a loaded matrix with the feature space it was built
// from; rejects a space whose ordered vocabulary does not match.
inline void attach_space(FeatureMatrix& m, FeatureSpace space) {
    if (space.hash() != m.space_hash)
        throw data_error("feature space does not match matrix (hash mismatch)");
    if (space.size() != m.dim) throw data_error("feature space dim does not match matrix");
    m.space = std::move(space);
}

}  // namespace textclust
