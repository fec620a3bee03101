#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "trendlab/sentiment.hpp"
#include "trendlab/types.hpp"

namespace trendlab::pipeline {

/// Raised when a required input file does not exist (exit code 2).
class MissingInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by a stage; carries the stage name for diagnostics.
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& message)
        : std::runtime_error("[" + stage + "] " + message), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct RunConfig {
    std::filesystem::path input;   ///< id,text corpus
    std::filesystem::path t4sa;    ///< TWID,NEG,NEU,POS scores
    std::filesystem::path keywords;            ///< optional keyword list
    std::filesystem::path taxonomy;            ///< optional theme taxonomy
    std::filesystem::path platform_profiles;   ///< optional panel profiles
    std::filesystem::path brands;              ///< optional brand lexicon
    std::filesystem::path out = "out";
    std::uint64_t seed = 42;
    sentiment::Rubric rubric = sentiment::Rubric::improved;
    bool hashtag_substring = false;
    unsigned jobs = 0;  ///< 0 = all hardware threads
    std::size_t panel_n = 1000;
    std::size_t top_k = 25;
    std::size_t ranking_min_count = 5;
    /// Also decompose the mean-sentiment series (absent weeks enter as 0).
    bool decompose_sentiment = false;
    std::set<ThemeId> seasonal_themes = {ThemeId::seasonal, ThemeId::accessories};
};

/// Stage names in execution order.
const std::vector<std::string>& all_stages();

/**
 * Run the requested stages in pipeline order. Stages communicate through
 * CSV/JSON artifacts in config.out, so any suffix of the pipeline can be
 * re-run on cached intermediates.
 */
void run_stages(const RunConfig& config, const std::vector<std::string>& stages);

/// Convenience: the full pipeline.
void run_all(const RunConfig& config);

}  // namespace trendlab::pipeline
