#pragma once

// Corpus-to-clusters toolkit: CSV ingest, text normalization, n-gram
// dictionaries, binary feature vectors, k-means and friends, and the
// reporting layer on top. Header-only; include this or the individual
// pieces.

#include "textclust/cluster.hpp"
#include "textclust/corpus.hpp"
#include "textclust/csv.hpp"
#include "textclust/distance.hpp"
#include "textclust/elbow.hpp"
#include "textclust/error.hpp"
#include "textclust/features.hpp"
#include "textclust/ngram.hpp"
#include "textclust/normalize.hpp"
#include "textclust/parallel.hpp"
#include "textclust/pipeline.hpp"
#include "textclust/report.hpp"
#include "textclust/rng.hpp"
#include "textclust/stemmer.hpp"
#include "textclust/unicode.hpp"
#include "textclust/variants.hpp"
