#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trendlab/pipeline.hpp"

namespace {

const char* kStageHelp[] = {
    "load, merge, clean, and keyword-filter the corpus",
    "tag records with fashion themes and rank hashtags",
    "score records and summarize sentiment distributions",
    "assign synthetic weeks and build weekly theme series",
    "additively decompose the weekly series (period 13)",
    "classify statistically validated theme trends",
    "fit (S)ARIMA models and emit 12-week forecasts",
    "run pairwise multi-lag causality tests and export the network",
    "train and evaluate the balanced text classifier",
    "generate synthetic platform and brand sentiment panels",
    "bundle the summary report and per-figure plot data",
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trendlab: statistically validated fashion-trend analytics over "
                 "pre-scored social posts"};
    app.fallthrough();
    app.set_config("--config", "",
                   "config file with key=value lines mirroring the long flags");

    trendlab::pipeline::RunConfig config;
    std::string rubric = "improved";

    app.add_option("--input", config.input, "text corpus CSV (id,text)");
    app.add_option("--t4sa", config.t4sa, "sentiment score CSV (TWID,NEG,NEU,POS)");
    app.add_option("--keywords", config.keywords,
                   "fashion keyword list, one per line (default: built-in 23 terms)");
    app.add_option("--taxonomy", config.taxonomy,
                   "theme taxonomy file 'theme: kw, kw' (default: built-in)");
    app.add_option("--profiles", config.platform_profiles,
                   "platform profile CSV 'platform,theme,target[,dispersion]'");
    app.add_option("--brands", config.brands,
                   "brand lexicon 'name|category|target|aliases'");
    app.add_option("--seed", config.seed, "root seed for every synthetic step")
        ->capture_default_str();
    app.add_option("--rubric", rubric, "sentiment rubric for reports")
        ->check(CLI::IsMember({"original", "improved"}))
        ->capture_default_str();
    app.add_option("--out", config.out, "output directory")->capture_default_str();
    app.add_option("--jobs", config.jobs, "worker threads (0 = all cores)")
        ->capture_default_str();
    app.add_option("--panel-n", config.panel_n, "samples per synthetic panel cell")
        ->capture_default_str();
    app.add_option("--top-k", config.top_k, "list length for hashtag rankings")
        ->capture_default_str();
    app.add_flag("--hashtag-substring", config.hashtag_substring,
                 "also match keywords as substrings inside hashtags");
    app.add_flag("--decompose-sentiment", config.decompose_sentiment,
                 "also decompose the mean-sentiment series");
    std::vector<std::string> seasonal;
    app.add_option("--seasonal-themes", seasonal,
                   "themes given a seasonal forecast grid (default: seasonal,accessories)")
        ->delimiter(',');

    std::vector<std::string> stages;
    const auto& names = trendlab::pipeline::all_stages();
    for (std::size_t i = 0; i < names.size(); ++i) {
        app.add_subcommand(names[i], kStageHelp[i]);
    }
    auto* all_cmd = app.add_subcommand("all", "run the full pipeline in order");
    all_cmd->add_option("--stages", stages,
                        "comma-separated stage subset to run on cached intermediates")
        ->delimiter(',');
    app.require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    if (!seasonal.empty()) {
        config.seasonal_themes.clear();
        for (const auto& name : seasonal) {
            const auto theme = trendlab::theme_from_string(name);
            if (!theme) {
                std::cerr << "error: unknown theme '" << name << "'\n";
                return 1;
            }
            config.seasonal_themes.insert(*theme);
        }
    }

    std::vector<std::string> to_run;
    if (all_cmd->parsed()) {
        to_run = stages.empty() ? names : stages;
    } else {
        for (const auto& name : names) {
            if (app.get_subcommand(name)->parsed()) to_run.push_back(name);
        }
    }

    try {
        trendlab::pipeline::run_stages(config, to_run);
    } catch (const trendlab::pipeline::MissingInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const trendlab::pipeline::StageError& e) {
        std::cerr << "error " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
