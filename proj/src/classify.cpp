#include "trendlab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "trendlab/parallel.hpp"
#include "trendlab/rng.hpp"
#include "trendlab/simd/kernels.hpp"

namespace trendlab::classify {

namespace {

constexpr double kEps = 1e-12;

std::size_t features_per_node(std::size_t n_features) {
    const auto m = static_cast<std::size_t>(std::lround(std::sqrt(
        static_cast<double>(n_features))));
    return std::max<std::size_t>(1, std::min(m, n_features));
}

double gini(const std::array<double, kClassCount>& weights, double total) {
    if (total <= 0.0) return 0.0;
    double acc = 1.0;
    for (double w : weights) {
        const double p = w / total;
        acc -= p * p;
    }
    return acc;
}

struct TreeBuilder {
    const SparseMatrix& X;
    std::span<const int> y;
    const std::array<double, kClassCount>& class_weights;
    const ForestOptions& options;
    Rng& rng;
    Tree& tree;
    std::vector<std::size_t> feature_scratch;

    int build(std::vector<std::size_t>& samples, int depth) {
        std::array<double, kClassCount> node_weights{};
        std::array<std::size_t, kClassCount> node_counts{};
        for (std::size_t i : samples) {
            node_weights[static_cast<std::size_t>(y[i])] +=
                class_weights[static_cast<std::size_t>(y[i])];
            ++node_counts[static_cast<std::size_t>(y[i])];
        }
        const double total_weight =
            std::accumulate(node_weights.begin(), node_weights.end(), 0.0);

        const auto make_leaf = [&] {
            TreeNode leaf;
            if (total_weight > 0.0) {
                for (std::size_t c = 0; c < kClassCount; ++c) {
                    leaf.distribution[c] = node_weights[c] / total_weight;
                }
            } else {
                leaf.distribution.fill(1.0 / kClassCount);
            }
            tree.nodes.push_back(leaf);
            return static_cast<int>(tree.nodes.size() - 1);
        };

        const std::size_t classes_present =
            static_cast<std::size_t>(std::count_if(node_counts.begin(), node_counts.end(),
                                                   [](std::size_t c) { return c > 0; }));
        if (depth >= options.max_depth || classes_present <= 1 ||
            samples.size() < static_cast<std::size_t>(options.min_samples_split)) {
            return make_leaf();
        }

        // Sample sqrt(V) distinct candidate features, sorted for determinism.
        const std::size_t m = features_per_node(X.n_cols);
        feature_scratch.clear();
        std::set<std::size_t> chosen;
        while (chosen.size() < m) chosen.insert(rng.next_index(X.n_cols));
        feature_scratch.assign(chosen.begin(), chosen.end());

        const double parent_impurity = gini(node_weights, total_weight);
        double best_score = parent_impurity - 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;

        std::vector<std::pair<double, int>> column(samples.size());
        for (std::size_t f : feature_scratch) {
            for (std::size_t r = 0; r < samples.size(); ++r) {
                column[r] = {X.at(samples[r], f), y[samples[r]]};
            }
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (column.front().first == column.back().first) continue;

            std::array<double, kClassCount> left{};
            double left_total = 0.0;
            for (std::size_t r = 0; r + 1 < column.size(); ++r) {
                const auto cls = static_cast<std::size_t>(column[r].second);
                left[cls] += class_weights[cls];
                left_total += class_weights[cls];
                if (column[r].first == column[r + 1].first) continue;
                const double right_total = total_weight - left_total;
                std::array<double, kClassCount> right{};
                for (std::size_t c = 0; c < kClassCount; ++c) {
                    right[c] = node_weights[c] - left[c];
                }
                const double score = (left_total * gini(left, left_total) +
                                      right_total * gini(right, right_total)) /
                                     total_weight;
                if (score < best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (column[r].first + column[r + 1].first);
                }
            }
        }
        if (best_feature < 0) return make_leaf();

        std::vector<std::size_t> left_samples, right_samples;
        for (std::size_t i : samples) {
            if (X.at(i, static_cast<std::size_t>(best_feature)) <= best_threshold) {
                left_samples.push_back(i);
            } else {
                right_samples.push_back(i);
            }
        }
        if (left_samples.empty() || right_samples.empty()) return make_leaf();

        TreeNode node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        tree.nodes.push_back(node);
        const int self = static_cast<int>(tree.nodes.size() - 1);
        const int left_id = build(left_samples, depth + 1);
        const int right_id = build(right_samples, depth + 1);
        tree.nodes[static_cast<std::size_t>(self)].left = left_id;
        tree.nodes[static_cast<std::size_t>(self)].right = right_id;
        return self;
    }
};

const TreeNode& descend(const Tree& tree, const SparseVector& x) {
    const TreeNode* node = &tree.nodes.front();
    while (!node->is_leaf()) {
        const auto it = std::lower_bound(
            x.entries.begin(), x.entries.end(), static_cast<std::size_t>(node->feature),
            [](const auto& entry, std::size_t f) { return entry.first < f; });
        const double value =
            (it != x.entries.end() && it->first == static_cast<std::size_t>(node->feature))
                ? it->second
                : 0.0;
        node = &tree.nodes[static_cast<std::size_t>(value <= node->threshold ? node->left
                                                                             : node->right)];
    }
    return *node;
}

}  // namespace

double TfidfVocabulary::idf(std::size_t term_index) const {
    return std::log((1.0 + static_cast<double>(n_docs)) /
                    (1.0 + static_cast<double>(document_frequency[term_index]))) +
           1.0;
}

std::vector<std::string> tokenize(std::string_view doc) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < doc.size()) {
        while (pos < doc.size() && doc[pos] == ' ') ++pos;
        std::size_t end = pos;
        while (end < doc.size() && doc[end] != ' ') ++end;
        if (end > pos) tokens.emplace_back(doc.substr(pos, end - pos));
        pos = end;
    }
    return tokens;
}

std::vector<std::string> extract_ngrams(std::string_view doc) {
    const auto tokens = tokenize(doc);
    std::vector<std::string> grams = tokens;
    grams.reserve(tokens.size() * 2);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        grams.push_back(tokens[i] + " " + tokens[i + 1]);
    }
    return grams;
}

TfidfVocabulary fit_tfidf(std::span<const std::string> docs) {
    if (docs.empty()) throw std::invalid_argument("fit_tfidf: empty corpus");
    std::map<std::string, std::size_t> df;  // ordered -> lexicographic indices
    for (const auto& doc : docs) {
        auto grams = extract_ngrams(doc);
        std::sort(grams.begin(), grams.end());
        grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
        for (auto& g : grams) ++df[g];
    }
    TfidfVocabulary vocab;
    vocab.n_docs = docs.size();
    vocab.terms.reserve(df.size());
    vocab.document_frequency.reserve(df.size());
    for (auto& [term, count] : df) {
        vocab.index.emplace(term, vocab.terms.size());
        vocab.terms.push_back(term);
        vocab.document_frequency.push_back(count);
    }
    return vocab;
}

SparseVector transform(const TfidfVocabulary& vocab, std::string_view doc) {
    std::map<std::size_t, double> tf;
    for (const auto& gram : extract_ngrams(doc)) {
        const auto it = vocab.index.find(gram);
        if (it != vocab.index.end()) tf[it->second] += 1.0;
    }
    SparseVector out;
    out.entries.reserve(tf.size());
    for (const auto& [idx, count] : tf) {
        out.entries.emplace_back(idx, count * vocab.idf(idx));
    }
    double norm_sq = 0.0;
    for (const auto& [idx, w] : out.entries) norm_sq += w * w;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [idx, w] : out.entries) w *= inv;
    }
    return out;
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
    const auto begin = columns.begin() + static_cast<std::ptrdiff_t>(row_begin[row]);
    const auto end = columns.begin() + static_cast<std::ptrdiff_t>(row_begin[row + 1]);
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) return 0.0;
    return values[static_cast<std::size_t>(it - columns.begin())];
}

SparseMatrix transform_all(const TfidfVocabulary& vocab,
                           std::span<const std::string> docs) {
    SparseMatrix m;
    m.n_rows = docs.size();
    m.n_cols = vocab.size();
    m.row_begin.push_back(0);
    for (const auto& doc : docs) {
        const auto vec = transform(vocab, doc);
        for (const auto& [idx, w] : vec.entries) {
            m.columns.push_back(idx);
            m.values.push_back(w);
        }
        m.row_begin.push_back(m.columns.size());
    }
    return m;
}

std::vector<FoldSplit> stratified_kfold(std::span<const int> labels, int k,
                                        std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    for (const auto& [cls, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(k)) {
            throw std::invalid_argument("stratified_kfold: class " + std::to_string(cls) +
                                        " has fewer than k members");
        }
    }
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (auto& [cls, members] : by_class) {
        rng.shuffle(members);
        for (std::size_t j = 0; j < members.size(); ++j) {
            folds[j % static_cast<std::size_t>(k)].push_back(members[j]);
        }
    }
    std::vector<FoldSplit> splits(static_cast<std::size_t>(k));
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::sort(folds[f].begin(), folds[f].end());
        splits[f].test = folds[f];
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            splits[f].train.insert(splits[f].train.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(splits[f].train.begin(), splits[f].train.end());
    }
    return splits;
}

std::array<double, kClassCount> balanced_class_weights(std::span<const int> y) {
    std::array<std::size_t, kClassCount> counts{};
    for (int label : y) ++counts[static_cast<std::size_t>(label)];
    std::array<double, kClassCount> weights{};
    for (std::size_t c = 0; c < kClassCount; ++c) {
        if (counts[c] > 0) {
            weights[c] = static_cast<double>(y.size()) /
                         (static_cast<double>(kClassCount) * static_cast<double>(counts[c]));
        }
    }
    return weights;
}

ForestModel train_forest(const SparseMatrix& features, std::span<const int> y,
                         const std::array<double, kClassCount>& class_weights,
                         std::uint64_t seed, const ForestOptions& options, unsigned jobs) {
    if (features.n_rows != y.size()) {
        throw std::invalid_argument("train_forest: feature/label size mismatch");
    }
    std::set<int> distinct(y.begin(), y.end());
    if (distinct.size() < 2) {
        throw std::invalid_argument("train_forest: needs at least 2 classes");
    }

    ForestModel model;
    model.class_weights = class_weights;
    model.seed = seed;
    model.n_features = features.n_cols;
    model.trees.resize(static_cast<std::size_t>(options.n_trees));

    parallel_for(model.trees.size(), jobs, [&](std::size_t t) {
        Rng rng(derive_seed(seed, "tree-" + std::to_string(t)));
        std::vector<std::size_t> bootstrap(features.n_rows);
        for (auto& idx : bootstrap) idx = rng.next_index(features.n_rows);
        std::sort(bootstrap.begin(), bootstrap.end());
        TreeBuilder builder{features, y, class_weights, options, rng, model.trees[t], {}};
        builder.build(bootstrap, 0);
    });
    return model;
}

std::array<double, kClassCount> predict_proba(const ForestModel& model,
                                              const SparseVector& x) {
    std::array<double, kClassCount> acc{};
    for (const auto& tree : model.trees) {
        const TreeNode& leaf = descend(tree, x);
        for (std::size_t c = 0; c < kClassCount; ++c) acc[c] += leaf.distribution[c];
    }
    const double total = std::accumulate(acc.begin(), acc.end(), 0.0);
    if (total > 0.0) {
        for (double& v : acc) v /= total;
    }
    return acc;
}

int predict(const ForestModel& model, const SparseVector& x) {
    const auto proba = predict_proba(model, x);
    int best = 0;
    for (int c = 1; c < static_cast<int>(kClassCount); ++c) {
        if (proba[static_cast<std::size_t>(c)] > proba[static_cast<std::size_t>(best)] + kEps) {
            best = c;
        }
    }
    return best;
}

EvalReport evaluate(std::span<const int> predictions, std::span<const int> truth) {
    if (predictions.size() != truth.size() || truth.empty()) {
        throw std::invalid_argument("evaluate: prediction/truth length mismatch");
    }
    EvalReport report;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++report.confusion[static_cast<std::size_t>(truth[i])]
                          [static_cast<std::size_t>(predictions[i])];
    }
    double correct = 0.0;
    for (std::size_t c = 0; c < kClassCount; ++c) {
        correct += static_cast<double>(report.confusion[c][c]);
        double row = 0.0, col = 0.0;
        for (std::size_t o = 0; o < kClassCount; ++o) {
            row += static_cast<double>(report.confusion[c][o]);
            col += static_cast<double>(report.confusion[o][c]);
        }
        const double diag = static_cast<double>(report.confusion[c][c]);
        report.recall[c] = row > 0.0 ? diag / row : 0.0;
        report.precision[c] = col > 0.0 ? diag / col : 0.0;
        const double pr = report.precision[c] + report.recall[c];
        report.f1[c] = pr > 0.0 ? 2.0 * report.precision[c] * report.recall[c] / pr : 0.0;
    }
    report.accuracy = correct / static_cast<double>(truth.size());
    report.balanced_accuracy =
        (report.recall[0] + report.recall[1] + report.recall[2]) / 3.0;
    report.macro_f1 = (report.f1[0] + report.f1[1] + report.f1[2]) / 3.0;
    return report;
}

CvResult cross_validate(std::span<const std::string> docs, std::span<const int> labels,
                        int k, std::uint64_t seed, const ForestOptions& options,
                        unsigned jobs) {
    if (docs.size() != labels.size()) {
        throw std::invalid_argument("cross_validate: docs/labels length mismatch");
    }
    const auto splits = stratified_kfold(labels, k, derive_seed(seed, "kfold"));
    CvResult result;
    result.oof_predictions.assign(docs.size(), 0);

    for (std::size_t f = 0; f < splits.size(); ++f) {
        const auto& split = splits[f];
        std::vector<std::string> train_docs;
        std::vector<int> train_labels;
        train_docs.reserve(split.train.size());
        for (std::size_t i : split.train) {
            train_docs.push_back(docs[i]);
            train_labels.push_back(labels[i]);
        }
        const auto vocab = fit_tfidf(train_docs);
        const auto X = transform_all(vocab, train_docs);
        const auto weights = balanced_class_weights(train_labels);
        const auto model = train_forest(X, train_labels, weights,
                                        derive_seed(seed, "fold-" + std::to_string(f)),
                                        options, jobs);
        for (std::size_t i : split.test) {
            result.oof_predictions[i] = predict(model, transform(vocab, docs[i]));
        }
    }
    result.report = evaluate(result.oof_predictions, labels);
    return result;
}

std::string serialize_model(const TfidfVocabulary& vocab, const ForestModel& model) {
    nlohmann::ordered_json doc;
    doc["format_version"] = 1;
    doc["n_docs"] = vocab.n_docs;
    doc["terms"] = vocab.terms;
    doc["document_frequency"] = vocab.document_frequency;
    doc["class_weights"] = model.class_weights;
    doc["seed"] = model.seed;
    doc["n_features"] = model.n_features;
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& tree : model.trees) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (const auto& node : tree.nodes) {
            nodes.push_back({node.feature, node.threshold, node.left, node.right,
                             node.distribution[0], node.distribution[1],
                             node.distribution[2]});
        }
        trees.push_back(std::move(nodes));
    }
    doc["trees"] = std::move(trees);
    return doc.dump(2) + "\n";
}

PersistedModel deserialize_model(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format_version").get<int>() != 1) {
        throw std::runtime_error("unsupported model format version");
    }
    PersistedModel out;
    out.vocabulary.n_docs = doc.at("n_docs").get<std::size_t>();
    out.vocabulary.terms = doc.at("terms").get<std::vector<std::string>>();
    out.vocabulary.document_frequency =
        doc.at("document_frequency").get<std::vector<std::size_t>>();
    if (out.vocabulary.terms.size() != out.vocabulary.document_frequency.size()) {
        throw std::runtime_error("model artifact: term/frequency size mismatch");
    }
    for (std::size_t i = 0; i < out.vocabulary.terms.size(); ++i) {
        out.vocabulary.index.emplace(out.vocabulary.terms[i], i);
    }
    out.forest.class_weights = doc.at("class_weights").get<std::array<double, kClassCount>>();
    out.forest.seed = doc.at("seed").get<std::uint64_t>();
    out.forest.n_features = doc.at("n_features").get<std::size_t>();
    for (const auto& tree_json : doc.at("trees")) {
        Tree tree;
        for (const auto& n : tree_json) {
            TreeNode node;
            node.feature = n.at(0).get<int>();
            node.threshold = n.at(1).get<double>();
            node.left = n.at(2).get<int>();
            node.right = n.at(3).get<int>();
            node.distribution = {n.at(4).get<double>(), n.at(5).get<double>(),
                                 n.at(6).get<double>()};
            tree.nodes.push_back(node);
        }
        out.forest.trees.push_back(std::move(tree));
    }
    return out;
}

}  // namespace trendlab::classify
