#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "gsc/graph.hpp"

namespace gsc {

/// Lowercases and splits on any non-alphabetic character; apostrophes are kept
/// only between two letters, so "don't" survives as one token while quoting
/// apostrophes fall away. Empty tokens are dropped.
std::vector<std::string> tokenize(const std::string& text);

/// Ordered lowercase word list with no duplicates; its order fixes the node
/// order of every graph built from it.
class WordList {
public:
    explicit WordList(std::vector<std::string> words);

    int size() const { return static_cast<int>(words_.size()); }
    const std::vector<std::string>& words() const { return words_; }
    /// Index of a word, or -1 when absent.
    int index_of(const std::string& word) const;

private:
    std::vector<std::string> words_;
    std::vector<int> order_;  // indices sorted by word for binary search
};

/// Newline-separated word file; lines are trimmed and lowercased, blank lines
/// skipped. Duplicate words raise FileFormatError.
WordList load_word_list(const std::string& path);

struct Document {
    std::string id;
    std::string text;
};

struct Corpus {
    std::vector<Document> documents;
    int excerpt_length = 1000;
};

/// Reads every regular file in a directory as one document, sorted by
/// filename for determinism.
Corpus load_corpus_dir(const std::string& dir, int excerpt_length = 1000);

/// Cuts one token stream into consecutive excerpts of `excerpt_length`
/// tokens; the final excerpt may be shorter but is never empty.
std::vector<std::vector<std::string>> split_excerpts(const std::vector<std::string>& tokens,
                                                     int excerpt_length);

/// All excerpts of all documents, in document order.
std::vector<std::vector<std::string>> corpus_excerpts(const Corpus& corpus);

struct WanResult {
    Graph graph;                            // node labels = kept words, original order
    std::vector<int> kept_indices;          // positions into the word list
    std::vector<std::string> dropped_words; // words outside the largest component
};

/// Word co-occurrence graph: for each pair of listed words at token distance
/// k <= window (self-pairs skipped to keep a zero diagonal), the directed
/// count D[u][v] gains decay^(k-1). The result is symmetrized as (D + D^T)/2,
/// normalized by its largest entry, and restricted to the largest connected
/// component when disconnected.
WanResult build_wan(const std::vector<std::vector<std::string>>& excerpts, const WordList& words,
                    int window = 10, double decay = 0.8);

/// Per-word frequency of the excerpt: count / token count, in word-list order.
Eigen::VectorXd frequency_signal(const std::vector<std::string>& excerpt,
                                 const std::vector<std::string>& words);

} // namespace gsc
