#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trendlab/types.hpp"

namespace trendlab::classify {

inline constexpr std::size_t kClassCount = kPolarityCount;

// ---------------------------------------------------------------------------
// TF-IDF features (unigrams + bigrams, smoothed idf, L2-normalized rows)
// ---------------------------------------------------------------------------

struct TfidfVocabulary {
    std::vector<std::string> terms;  ///< dense index -> term, sorted
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::size_t> document_frequency;
    std::size_t n_docs = 0;

    std::size_t size() const { return terms.size(); }
    double idf(std::size_t term_index) const;
};

/// Sparse feature vector, entries sorted by feature index.
struct SparseVector {
    std::vector<std::pair<std::size_t, double>> entries;
};

std::vector<std::string> tokenize(std::string_view doc);

/// Unigrams plus adjacent-token bigrams ("a b").
std::vector<std::string> extract_ngrams(std::string_view doc);

/// Build the vocabulary over all docs. Throws on an empty corpus.
TfidfVocabulary fit_tfidf(std::span<const std::string> docs);

/// tf * (ln((1+N)/(1+df)) + 1), L2-normalized; unseen terms are ignored and
/// the empty document maps to the zero vector.
SparseVector transform(const TfidfVocabulary& vocab, std::string_view doc);

/// Row-major sparse matrix of transformed documents.
struct SparseMatrix {
    std::vector<std::size_t> row_begin;  ///< size n_rows + 1
    std::vector<std::size_t> columns;
    std::vector<double> values;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;

    double at(std::size_t row, std::size_t col) const;
};

SparseMatrix transform_all(const TfidfVocabulary& vocab,
                           std::span<const std::string> docs);

// ---------------------------------------------------------------------------
// Stratified k-fold
// ---------------------------------------------------------------------------

struct FoldSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Shuffle each class's indices by the seed and deal them round-robin into
/// k folds. Per-fold class counts differ from exact proportionality by at
/// most one item. Throws when any class has fewer than k members.
std::vector<FoldSplit> stratified_kfold(std::span<const int> labels, int k,
                                        std::uint64_t seed);

// ---------------------------------------------------------------------------
// Random forest with class weights
// ---------------------------------------------------------------------------

struct ForestOptions {
    int n_trees = 100;
    int max_depth = 30;
    int min_samples_split = 5;
};

struct TreeNode {
    int feature = -1;  ///< -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::array<double, kClassCount> distribution{};

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;
};

struct ForestModel {
    std::vector<Tree> trees;
    std::array<double, kClassCount> class_weights{};
    std::uint64_t seed = 0;
    std::size_t n_features = 0;
};

/// The "balanced" scheme n_samples / (n_classes * class_count); classes
/// absent from y get weight 0.
std::array<double, kClassCount> balanced_class_weights(std::span<const int> y);

/// Bootstrap-sampled trees split greedily by weighted Gini impurity over
/// sqrt(V) features per node. Throws on single-class input.
ForestModel train_forest(const SparseMatrix& features, std::span<const int> y,
                         const std::array<double, kClassCount>& class_weights,
                         std::uint64_t seed, const ForestOptions& options = {},
                         unsigned jobs = 1);

std::array<double, kClassCount> predict_proba(const ForestModel& model,
                                              const SparseVector& x);

/// Argmax of the mean leaf distribution; ties go to the class earlier in
/// the negative < neutral < positive order.
int predict(const ForestModel& model, const SparseVector& x);

// ---------------------------------------------------------------------------
// Balanced evaluation
// ---------------------------------------------------------------------------

struct EvalReport {
    std::array<std::array<std::size_t, kClassCount>, kClassCount> confusion{};  // [truth][pred]
    std::array<double, kClassCount> precision{};
    std::array<double, kClassCount> recall{};
    std::array<double, kClassCount> f1{};
    double accuracy = 0.0;
    double balanced_accuracy = 0.0;
    double macro_f1 = 0.0;
};

/// Classes without support (or without predictions) score 0 on the
/// affected ratio rather than dividing by zero.
EvalReport evaluate(std::span<const int> predictions, std::span<const int> truth);

// ---------------------------------------------------------------------------
// Pooled cross-validation
// ---------------------------------------------------------------------------

struct CvResult {
    EvalReport report;                  ///< on pooled out-of-fold predictions
    std::vector<int> oof_predictions;   ///< aligned with the input docs
};

/// Stratified k-fold with per-fold vocabulary fitting (train docs only),
/// balanced class weights from the train labels, and pooled evaluation.
CvResult cross_validate(std::span<const std::string> docs, std::span<const int> labels,
                        int k, std::uint64_t seed, const ForestOptions& options = {},
                        unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Model persistence (versioned JSON artifact)
// ---------------------------------------------------------------------------

struct PersistedModel {
    TfidfVocabulary vocabulary;
    ForestModel forest;
};

std::string serialize_model(const TfidfVocabulary& vocab, const ForestModel& model);

/// Throws on a malformed document or an unsupported format version.
PersistedModel deserialize_model(const std::string& text);

}  // namespace trendlab::classify
