#include "gsc/wan.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "gsc/errors.hpp"

namespace gsc {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    const auto is_letter = [](unsigned char c) { return std::isalpha(c) != 0; };
    const auto flush = [&]() {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_letter(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (c == '\'' && !current.empty() && i + 1 < text.size() &&
                   is_letter(static_cast<unsigned char>(text[i + 1]))) {
            current.push_back('\'');
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

WordList::WordList(std::vector<std::string> words) : words_(std::move(words)) {
    if (words_.empty()) throw EmptyCorpusError("word list is empty");
    order_.resize(words_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(),
              [&](int a, int b) { return words_[a] < words_[b]; });
    for (std::size_t i = 1; i < order_.size(); ++i) {
        if (words_[order_[i]] == words_[order_[i - 1]]) {
            throw FileFormatError("duplicate word in list: " + words_[order_[i]]);
        }
    }
}

int WordList::index_of(const std::string& word) const {
    auto it = std::lower_bound(order_.begin(), order_.end(), word,
                               [&](int a, const std::string& w) { return words_[a] < w; });
    if (it == order_.end() || words_[*it] != word) return -1;
    return *it;
}

WordList load_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open word list " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        std::string word = line.substr(start);
        for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        words.push_back(std::move(word));
    }
    return WordList(std::move(words));
}

Corpus load_corpus_dir(const std::string& dir, int excerpt_length) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir);
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    Corpus corpus;
    corpus.excerpt_length = excerpt_length;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        corpus.documents.push_back({path.filename().string(), ss.str()});
    }
    if (corpus.documents.empty()) throw EmptyCorpusError("no files in " + dir);
    return corpus;
}

std::vector<std::vector<std::string>> split_excerpts(const std::vector<std::string>& tokens,
                                                     int excerpt_length) {
    if (excerpt_length < 1) throw DataError("excerpt length must be >= 1");
    std::vector<std::vector<std::string>> excerpts;
    for (std::size_t start = 0; start < tokens.size();
         start += static_cast<std::size_t>(excerpt_length)) {
        const std::size_t stop =
            std::min(tokens.size(), start + static_cast<std::size_t>(excerpt_length));
        excerpts.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                              tokens.begin() + static_cast<std::ptrdiff_t>(stop));
    }
    return excerpts;
}

std::vector<std::vector<std::string>> corpus_excerpts(const Corpus& corpus) {
    std::vector<std::vector<std::string>> all;
    for (const Document& doc : corpus.documents) {
        auto parts = split_excerpts(tokenize(doc.text), corpus.excerpt_length);
        all.insert(all.end(), std::make_move_iterator(parts.begin()),
                   std::make_move_iterator(parts.end()));
    }
    return all;
}

WanResult build_wan(const std::vector<std::vector<std::string>>& excerpts, const WordList& words,
                    int window, double decay) {
    if (window < 1) throw DataError("window must be >= 1");
    if (!(decay > 0.0) || decay > 1.0) throw DataError("decay must lie in (0, 1]");
    if (excerpts.empty()) throw EmptyCorpusError("no excerpts to build the graph from");
    const int n = words.size();
    std::vector<double> decay_pow(static_cast<std::size_t>(window));
    decay_pow[0] = 1.0;
    for (int k = 1; k < window; ++k) decay_pow[static_cast<std::size_t>(k)] = decay_pow[k - 1] * decay;

    Eigen::MatrixXd directed = Eigen::MatrixXd::Zero(n, n);
    bool any_token = false;
    for (const auto& excerpt : excerpts) {
        const int len = static_cast<int>(excerpt.size());
        if (len > 0) any_token = true;
        std::vector<int> ids(excerpt.size());
        for (int i = 0; i < len; ++i) ids[static_cast<std::size_t>(i)] = words.index_of(excerpt[i]);
        for (int i = 0; i < len; ++i) {
            const int u = ids[static_cast<std::size_t>(i)];
            if (u < 0) continue;
            const int stop = std::min(len - 1, i + window);
            for (int j = i + 1; j <= stop; ++j) {
                const int v = ids[static_cast<std::size_t>(j)];
                if (v < 0 || v == u) continue;  // self-pairs would put weight on the diagonal
                directed(u, v) += decay_pow[static_cast<std::size_t>(j - i - 1)];
            }
        }
    }
    if (!any_token) throw EmptyCorpusError("all excerpts are empty");

    Eigen::MatrixXd sym = (directed + directed.transpose()) / 2.0;
    const double peak = sym.maxCoeff();
    if (peak <= 0.0) throw NoCooccurrencesError("no word co-occurrences within the window");
    sym /= peak;

    Graph full = Graph::from_weights(sym, words.words());
    WanResult out;
    if (full.is_connected()) {
        out.graph = std::move(full);
        out.kept_indices.resize(static_cast<std::size_t>(n));
        std::iota(out.kept_indices.begin(), out.kept_indices.end(), 0);
        return out;
    }
    const std::vector<int> comp = full.component_ids();
    const int n_comp = *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> sizes(static_cast<std::size_t>(n_comp), 0);
    for (int c : comp) ++sizes[static_cast<std::size_t>(c)];
    const int keep = static_cast<int>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (int i = 0; i < n; ++i) {
        if (comp[static_cast<std::size_t>(i)] == keep) {
            out.kept_indices.push_back(i);
        } else {
            out.dropped_words.push_back(words.words()[static_cast<std::size_t>(i)]);
        }
    }
    out.graph = full.subgraph(out.kept_indices);
    return out;
}

Eigen::VectorXd frequency_signal(const std::vector<std::string>& excerpt,
                                 const std::vector<std::string>& words) {
    if (excerpt.empty()) throw EmptyExcerptError("cannot build a signal from an empty excerpt");
    std::unordered_map<std::string, int> pos;
    pos.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) pos.emplace(words[i], static_cast<int>(i));
    Eigen::VectorXd signal = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(words.size()));
    for (const std::string& token : excerpt) {
        auto it = pos.find(token);
        if (it != pos.end()) signal(it->second) += 1.0;
    }
    return signal / static_cast<double>(excerpt.size());
}

} // namespace gsc
