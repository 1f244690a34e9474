#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "textclust/cluster.hpp"
#include "textclust/corpus.hpp"
#include "textclust/elbow.hpp"
#include "textclust/error.hpp"
#include "textclust/features.hpp"
#include "textclust/ngram.hpp"
#include "textclust/normalize.hpp"
#include "textclust/variants.hpp"

namespace textclust {

struct ClusterSizeTable {
    struct Entry {
        std::uint32_t cluster = 0;
        std::size_t count = 0;
    };
    std::vector<Entry> sizes;  // count descending, then cluster ascending
    std::size_t total = 0;
    double largest_share = 0.0;
};

inline ClusterSizeTable cluster_sizes(const ClusteringResult& result) {
    std::vector<std::size_t> counts(result.k, 0);
    for (const std::uint32_t c : result.assignments) {
        if (c >= result.k) throw std::invalid_argument("assignment index out of range");
        ++counts[c];
    }
    ClusterSizeTable table;
    table.total = result.assignments.size();
    table.sizes.reserve(result.k);
    for (std::uint32_t j = 0; j < result.k; ++j)
        table.sizes.push_back(ClusterSizeTable::Entry{j, counts[j]});
    std::sort(table.sizes.begin(), table.sizes.end(), [](const auto& a, const auto& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.cluster < b.cluster;
    });
    if (table.total > 0)
        table.largest_share =
            static_cast<double>(table.sizes.front().count) / static_cast<double>(table.total);
    return table;
}

struct TermRanking {
    std::uint32_t cluster_index = 0;
    // (n-gram text, within-cluster document frequency), frequency
    // descending, ties lexicographic.
    std::vector<std::pair<std::string, std::size_t>> terms;

    const std::string& top_term() const {
        static const std::string none;
        return terms.empty() ? none : terms.front().first;
    }
};

// Ranks features by how many of the cluster's documents contain them.
// Needs the matrix's feature space for the term texts.
inline TermRanking top_terms(const FeatureMatrix& m, const ClusteringResult& result,
                             std::uint32_t cluster_index, std::size_t limit) {
    if (!m.space) throw std::invalid_argument("matrix has no attached feature space");
    if (result.assignments.size() != m.n_rows())
        throw std::invalid_argument("assignments length does not match row count");
    if (cluster_index >= result.k) throw std::invalid_argument("unknown cluster index");
    std::vector<std::size_t> df(m.dim, 0);
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        if (result.assignments[r] != cluster_index) continue;
        for (const std::uint32_t i : m.rows[r].on) ++df[i];
    }
    TermRanking ranking;
    ranking.cluster_index = cluster_index;
    for (std::size_t i = 0; i < m.dim; ++i) {
        if (df[i] > 0) ranking.terms.emplace_back(m.space->features[i].text, df[i]);
    }
    std::sort(ranking.terms.begin(), ranking.terms.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranking.terms.size() > limit) ranking.terms.resize(limit);
    return ranking;
}

struct YearEntry {
    int year = 0;
    double inertia = 0.0;
    ClusterSizeTable sizes;
};

struct YearlySeries {
    std::vector<YearEntry> entries;  // years strictly increasing
    std::vector<std::string> warnings;
};

struct YearlyOptions {
    std::vector<int> arities{1};
    std::uint32_t min_freq = 10;
    std::uint32_t k = 19;
    FitConfig fit;
    // Default rebuilds the vocabulary per year; the flag switches to one
    // dictionary built over the whole corpus.
    bool shared_dictionary = false;
};

// One clustering run per publication year. Years with fewer than k
// documents, or whose selected vocabulary is empty, are skipped with a
// warning rather than failing the series. Every year reuses the same
// base seed, so identical year contents give identical results.
inline YearlySeries yearly_report(const Corpus& corpus, const NormalizerConfig& norm,
                                  const YearlyOptions& opt) {
    if (opt.k < 1) throw std::invalid_argument("k must be >= 1");
    const std::map<int, YearSlice> slices = split_by_year(corpus);
    const unsigned threads = opt.fit.params.threads;

    std::map<int, std::vector<TokenSeq>> tokens_by_year;
    for (const auto& [year, slice] : slices)
        tokens_by_year[year] = normalize_corpus(slice.corpus, norm, threads);

    FeatureSpace shared_space;
    if (opt.shared_dictionary) {
        std::vector<TokenSeq> all;
        all.reserve(corpus.documents.size());
        for (const auto& [year, toks] : tokens_by_year)
            all.insert(all.end(), toks.begin(), toks.end());
        NGramDictionary dict;
        for (const int n : opt.arities) dict = merge_dictionaries(dict, build_dictionary(all, n));
        shared_space = select_features(dict, opt.min_freq);
        if (shared_space.empty()) throw data_error("no features selected");
    }

    YearlySeries series;
    for (const auto& [year, toks] : tokens_by_year) {
        if (toks.size() < opt.k) {
            series.warnings.push_back("year " + std::to_string(year) + " skipped: " +
                                      std::to_string(toks.size()) + " documents < k=" +
                                      std::to_string(opt.k));
            continue;
        }
        FeatureSpace space;
        if (opt.shared_dictionary) {
            space = shared_space;
        } else {
            NGramDictionary dict;
            for (const int n : opt.arities)
                dict = merge_dictionaries(dict, build_dictionary(toks, n));
            space = select_features(dict, opt.min_freq);
            if (space.empty()) {
                series.warnings.push_back("year " + std::to_string(year) +
                                          " skipped: no features selected");
                continue;
            }
        }
        const FeatureMatrix m = vectorize_corpus(toks, space, threads);
        FitConfig cfg = opt.fit;
        if (cfg.batch_size > m.n_rows())
            cfg.batch_size = static_cast<std::uint32_t>(m.n_rows());
        const ClusteringResult res = fit_best(m, opt.k, cfg);
        series.entries.push_back(YearEntry{year, res.inertia, cluster_sizes(res)});
    }
    return series;
}

namespace detail {

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt_coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write: " + path);
    return out;
}

constexpr int kSvgW = 640, kSvgH = 400;
constexpr int kMarL = 64, kMarR = 16, kMarT = 36, kMarB = 48;

inline void svg_open(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgW << "\" height=\"" << kSvgH
        << "\" viewBox=\"0 0 " << kSvgW << ' ' << kSvgH << "\">\n"
        << "<rect width=\"" << kSvgW << "\" height=\"" << kSvgH << "\" fill=\"#ffffff\"/>\n"
        << "<text x=\"" << kSvgW / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">"
        << xml_escape(title) << "</text>\n"
        << "<line x1=\"" << kMarL << "\" y1=\"" << kSvgH - kMarB << "\" x2=\"" << kSvgW - kMarR
        << "\" y2=\"" << kSvgH - kMarB << "\" stroke=\"#333333\"/>\n"
        << "<line x1=\"" << kMarL << "\" y1=\"" << kMarT << "\" x2=\"" << kMarL << "\" y2=\""
        << kSvgH - kMarB << "\" stroke=\"#333333\"/>\n";
}

inline void svg_line_chart(const std::string& path, const std::string& title,
                           const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<std::string>& x_labels) {
    std::ofstream out = open_out(path);
    svg_open(out, title);
    const double xmin = *std::min_element(xs.begin(), xs.end());
    const double xmax = *std::max_element(xs.begin(), xs.end());
    const double ymax = std::max(1e-300, *std::max_element(ys.begin(), ys.end()));
    const double plot_w = kSvgW - kMarL - kMarR;
    const double plot_h = kSvgH - kMarT - kMarB;
    const double xspan = (xmax > xmin) ? xmax - xmin : 1.0;
    auto px = [&](double x) { return kMarL + (x - xmin) / xspan * plot_w; };
    auto py = [&](double y) { return kSvgH - kMarB - (y / ymax) * plot_h; };
    out << "<polyline fill=\"none\" stroke=\"#3366cc\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ' ';
        out << fmt_coord(px(xs[i])) << ',' << fmt_coord(py(ys[i]));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out << "<circle cx=\"" << fmt_coord(px(xs[i])) << "\" cy=\"" << fmt_coord(py(ys[i]))
            << "\" r=\"3\" fill=\"#3366cc\"/>\n";
    }
    const std::size_t step = std::max<std::size_t>(1, xs.size() / 10);
    for (std::size_t i = 0; i < xs.size(); i += step) {
        out << "<text x=\"" << fmt_coord(px(xs[i])) << "\" y=\"" << kSvgH - kMarB + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
            << xml_escape(x_labels[i]) << "</text>\n";
    }
    out << "<text x=\"" << kMarL - 6 << "\" y=\"" << kSvgH - kMarB
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">0</text>\n"
        << "<text x=\"" << kMarL - 6 << "\" y=\"" << kMarT + 10
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_g(ymax)
        << "</text>\n</svg>\n";
    if (!out) throw io_error("failed writing: " + path);
}

inline void svg_bar_chart(const std::string& path, const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars) {
    std::ofstream out = open_out(path);
    svg_open(out, title);
    double vmax = 1e-300;
    for (const auto& [label, v] : bars) vmax = std::max(vmax, v);
    const double plot_w = kSvgW - kMarL - kMarR;
    const double plot_h = kSvgH - kMarT - kMarB;
    const double slot = plot_w / static_cast<double>(bars.size());
    const double width = slot * 0.7;
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double h = bars[i].second / vmax * plot_h;
        const double x = kMarL + slot * static_cast<double>(i) + (slot - width) / 2.0;
        const double y = kSvgH - kMarB - h;
        out << "<rect x=\"" << fmt_coord(x) << "\" y=\"" << fmt_coord(y) << "\" width=\""
            << fmt_coord(width) << "\" height=\"" << fmt_coord(h) << "\" fill=\"#3366cc\"/>\n";
        if (bars.size() <= 40) {
            out << "<text x=\"" << fmt_coord(x + width / 2.0) << "\" y=\"" << kSvgH - kMarB + 16
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
                << xml_escape(bars[i].first) << "</text>\n";
        }
    }
    out << "<text x=\"" << kMarL - 6 << "\" y=\"" << kMarT + 10
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt_g(vmax)
        << "</text>\n</svg>\n";
    if (!out) throw io_error("failed writing: " + path);
}

}  // namespace detail

inline void emit_csv(const ElbowCurve& curve, const std::string& path) {
    if (curve.points.empty()) throw std::invalid_argument("nothing to plot");
    std::ofstream out = detail::open_out(path);
    out << "k,inertia,restarts\n";
    for (const ElbowPoint& p : curve.points)
        out << p.k << ',' << detail::fmt_g(p.inertia) << ',' << p.restarts << '\n';
    if (!out) throw io_error("failed writing: " + path);
}

inline void emit_svg(const ElbowCurve& curve, const std::string& path) {
    if (curve.points.empty()) throw std::invalid_argument("nothing to plot");
    std::vector<double> xs, ys;
    std::vector<std::string> labels;
    for (const ElbowPoint& p : curve.points) {
        xs.push_back(p.k);
        ys.push_back(p.inertia);
        labels.push_back(std::to_string(p.k));
    }
    detail::svg_line_chart(path, "inertia by k", xs, ys, labels);
}

inline void emit_csv(const YearlySeries& series, const std::string& path) {
    if (series.entries.empty()) throw std::invalid_argument("nothing to plot");
    std::ofstream out = detail::open_out(path);
    out << "year,inertia,total,largest_share,sizes\n";
    for (const YearEntry& e : series.entries) {
        out << e.year << ',' << detail::fmt_g(e.inertia) << ',' << e.sizes.total << ','
            << detail::fmt_g(e.sizes.largest_share) << ',';
        for (std::size_t i = 0; i < e.sizes.sizes.size(); ++i) {
            if (i) out << ';';
            out << e.sizes.sizes[i].cluster << ':' << e.sizes.sizes[i].count;
        }
        out << '\n';
    }
    if (!out) throw io_error("failed writing: " + path);
}

inline void emit_svg(const YearlySeries& series, const std::string& path) {
    if (series.entries.empty()) throw std::invalid_argument("nothing to plot");
    std::vector<double> xs, ys;
    std::vector<std::string> labels;
    for (const YearEntry& e : series.entries) {
        xs.push_back(e.year);
        ys.push_back(e.inertia);
        labels.push_back(std::to_string(e.year));
    }
    detail::svg_line_chart(path, "inertia by year", xs, ys, labels);
}

inline void emit_csv(const ClusterSizeTable& table, const std::string& path) {
    if (table.sizes.empty()) throw std::invalid_argument("nothing to plot");
    std::ofstream out = detail::open_out(path);
    out << "cluster,count,share\n";
    for (const auto& e : table.sizes) {
        const double share =
            table.total ? static_cast<double>(e.count) / static_cast<double>(table.total) : 0.0;
        out << e.cluster << ',' << e.count << ',' << detail::fmt_g(share) << '\n';
    }
    if (!out) throw io_error("failed writing: " + path);
}

inline void emit_svg(const ClusterSizeTable& table, const std::string& path) {
    if (table.sizes.empty()) throw std::invalid_argument("nothing to plot");
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& e : table.sizes)
        bars.emplace_back(std::to_string(e.cluster), static_cast<double>(e.count));
    detail::svg_bar_chart(path, "cluster sizes", bars);
}

inline void emit_csv(const TermRanking& ranking, const std::string& path) {
    if (ranking.terms.empty()) throw std::invalid_argument("nothing to plot");
    std::ofstream out = detail::open_out(path);
    out << "term,count\n";
    for (const auto& [term, count] : ranking.terms) out << term << ',' << count << '\n';
    if (!out) throw io_error("failed writing: " + path);
}

inline void emit_svg(const TermRanking& ranking, const std::string& path) {
    if (ranking.terms.empty()) throw std::invalid_argument("nothing to plot");
    std::vector<std::pair<std::string, double>> bars;
    for (const auto& [term, count] : ranking.terms)
        bars.emplace_back(term, static_cast<double>(count));
    detail::svg_bar_chart(path, "top terms of cluster " + std::to_string(ranking.cluster_index),
                          bars);
}

}  // namespace textclust
