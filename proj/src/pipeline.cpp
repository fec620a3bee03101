#include "trendlab/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "trendlab/arima.hpp"
#include "trendlab/causality.hpp"
#include "trendlab/chronos.hpp"
#include "trendlab/classify.hpp"
#include "trendlab/csv.hpp"
#include "trendlab/ingest.hpp"
#include "trendlab/panels.hpp"
#include "trendlab/rng.hpp"
#include "trendlab/stats.hpp"
#include "trendlab/themes.hpp"
#include "trendlab/trends.hpp"

namespace trendlab::pipeline {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kRecordHeader = "id,raw_text,clean_text,hashtags,pos,neg,neu,themes,week";

std::string fmt(double value) { return csv::format_double(value); }

double parse_double(const std::string& field, const std::string& context) {
    double value = 0.0;
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::runtime_error(context + ": bad number '" + field + "'");
    }
    return value;
}

std::vector<std::string> split_list(const std::string& joined) {
    std::vector<std::string> parts;
    std::stringstream ss(joined);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

std::string join_list(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& part : parts) {
        if (!out.empty()) out += ';';
        out += part;
    }
    return out;
}

void require_input(const fs::path& path, const std::string& what) {
    if (path.empty()) {
        throw MissingInputError("no " + what + " file given");
    }
    if (!fs::exists(path)) {
        throw MissingInputError(what + " file not found: " + path.string());
    }
}

fs::path artifact(const RunConfig& config, const std::string& name) {
    return config.out / name;
}

void require_artifact(const RunConfig& config, const std::string& name,
                      const std::string& producing_stage) {
    if (!fs::exists(artifact(config, name))) {
        throw std::runtime_error("missing upstream artifact '" + name + "'; run the '" +
                                 producing_stage + "' stage first");
    }
}

std::ofstream open_out(const RunConfig& config, const std::string& name) {
    fs::create_directories(config.out);
    std::ofstream out(artifact(config, name), std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write artifact: " + artifact(config, name).string());
    }
    return out;
}

void write_json(const RunConfig& config, const std::string& name, const json& value) {
    auto out = open_out(config, name);
    out << value.dump(2) << '\n';
}

json read_json(const RunConfig& config, const std::string& name) {
    std::ifstream in(artifact(config, name));
    if (!in) throw std::runtime_error("cannot read artifact: " + name);
    json value;
    in >> value;
    return value;
}

void write_records(const RunConfig& config, const std::string& name,
                   const std::vector<MergedRecord>& records) {
    auto out = open_out(config, name);
    out << kRecordHeader << '\n';
    for (const auto& record : records) {
        std::string themes_joined;
        for (ThemeId theme : kAllThemes) {
            if (has_theme(record.themes, theme)) {
                if (!themes_joined.empty()) themes_joined += ';';
                themes_joined += to_string(theme);
            }
        }
        out << csv::escape(record.id) << ',' << csv::escape(record.raw_text) << ','
            << csv::escape(record.clean_text) << ','
            << csv::escape(join_list(record.hashtags)) << ',' << fmt(record.sentiment.pos)
            << ',' << fmt(record.sentiment.neg) << ',' << fmt(record.sentiment.neu) << ','
            << themes_joined << ','
            << (record.week ? std::to_string(*record.week) : std::string()) << '\n';
    }
}

std::vector<MergedRecord> read_records(const RunConfig& config, const std::string& name) {
    const csv::Table table = csv::read_file(artifact(config, name));
    const std::size_t id_col = table.column("id");
    const std::size_t raw_col = table.column("raw_text");
    const std::size_t clean_col = table.column("clean_text");
    const std::size_t tags_col = table.column("hashtags");
    const std::size_t pos_col = table.column("pos");
    const std::size_t neg_col = table.column("neg");
    const std::size_t neu_col = table.column("neu");
    const std::size_t themes_col = table.column("themes");
    const std::size_t week_col = table.column("week");

    std::vector<MergedRecord> records;
    records.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        MergedRecord record;
        record.id = row[id_col];
        record.raw_text = row[raw_col];
        record.clean_text = row[clean_col];
        record.hashtags = split_list(row[tags_col]);
        record.sentiment.pos = parse_double(row[pos_col], name);
        record.sentiment.neg = parse_double(row[neg_col], name);
        record.sentiment.neu = parse_double(row[neu_col], name);
        for (const auto& theme_name : split_list(row[themes_col])) {
            if (const auto theme = theme_from_string(theme_name)) {
                add_theme(record.themes, *theme);
            }
        }
        if (!row[week_col].empty()) {
            record.week = static_cast<WeekIndex>(parse_double(row[week_col], name));
        }
        records.push_back(std::move(record));
    }
    return records;
}

struct SeriesBundle {
    std::array<chronos::ThemeSeries, kThemeCount> by_theme;
};

SeriesBundle read_series(const RunConfig& config) {
    const csv::Table table = csv::read_file(artifact(config, "series.csv"));
    const std::size_t theme_col = table.column("theme");
    const std::size_t week_col = table.column("week");
    const std::size_t count_col = table.column("count");
    const std::size_t mean_col = table.column("mean_sentiment");

    SeriesBundle bundle;
    for (ThemeId theme : kAllThemes) {
        bundle.by_theme[static_cast<std::size_t>(theme)].theme = theme;
    }
    for (const auto& row : table.rows) {
        const auto theme = theme_from_string(row[theme_col]);
        if (!theme) throw std::runtime_error("series.csv: unknown theme " + row[theme_col]);
        auto& series = bundle.by_theme[static_cast<std::size_t>(*theme)];
        const auto week = static_cast<std::size_t>(parse_double(row[week_col], "series.csv"));
        series.counts[week] =
            static_cast<std::int64_t>(parse_double(row[count_col], "series.csv"));
        if (!row[mean_col].empty()) {
            series.mean_sentiment[week] = parse_double(row[mean_col], "series.csv");
        }
    }
    return bundle;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

void stage_ingest(const RunConfig& config) {
    require_input(config.input, "text corpus");
    require_input(config.t4sa, "sentiment score");

    const auto texts = ingest::load_text_corpus(config.input);
    const auto scores = ingest::load_t4sa(config.t4sa);
    auto [records, join_summary] = ingest::merge_by_id(texts, scores);

    const auto keywords = config.keywords.empty()
                              ? ingest::default_keywords()
                              : ingest::load_keywords(config.keywords);
    auto [kept, filter_summary] =
        ingest::filter_fashion(records, keywords, config.hashtag_substring);

    write_records(config, "merged.csv", kept);
    json summary;
    summary["texts_loaded"] = texts.size();
    summary["scores_loaded"] = scores.size();
    summary["merged"] = join_summary.kept;
    summary["texts_without_score"] = join_summary.texts_without_score;
    summary["scores_without_text"] = join_summary.scores_without_text;
    summary["filter"] = {{"total", filter_summary.total},
                         {"kept", filter_summary.kept},
                         {"kept_fraction", filter_summary.kept_fraction}};
    write_json(config, "join_summary.json", summary);
}

void stage_themes(const RunConfig& config) {
    require_artifact(config, "merged.csv", "ingest");
    auto records = read_records(config, "merged.csv");
    const themes::Taxonomy taxonomy = config.taxonomy.empty()
                                          ? themes::default_taxonomy()
                                          : themes::load_taxonomy(config.taxonomy);
    themes::tag_all(records, taxonomy, config.hashtag_substring);
    write_records(config, "themed.csv", records);

    const auto counts = themes::theme_counts(records);
    {
        auto out = open_out(config, "theme_counts.csv");
        out << "theme,count\n";
        for (ThemeId theme : kAllThemes) {
            out << to_string(theme) << ',' << counts[static_cast<std::size_t>(theme)] << '\n';
        }
    }
    {
        auto out = open_out(config, "hashtag_frequency.csv");
        out << "tag,count\n";
        for (const auto& tc : themes::hashtag_frequency(records, config.top_k)) {
            out << csv::escape(tc.tag) << ',' << tc.count << '\n';
        }
    }
    {
        auto out = open_out(config, "cooccurrence.csv");
        out << "tag_a,tag_b,count\n";
        for (const auto& pair : themes::cooccurrence_pairs(records, config.top_k)) {
            out << csv::escape(pair.tag_a) << ',' << csv::escape(pair.tag_b) << ','
                << pair.count << '\n';
        }
    }
}

void stage_sentiment(const RunConfig& config) {
    require_artifact(config, "themed.csv", "themes");
    auto records = read_records(config, "themed.csv");
    sentiment::score_records(records);

    {
        auto out = open_out(config, "scored.csv");
        out << "id,compound,improved,category_original,category_improved\n";
        for (const auto& record : records) {
            const auto& s = *record.scores;
            out << csv::escape(record.id) << ',' << fmt(s.compound) << ',' << fmt(s.improved)
                << ',' << to_string(s.category_original) << ','
                << to_string(s.category_improved) << '\n';
        }
    }

    json dist;
    for (const auto rubric : {sentiment::Rubric::original, sentiment::Rubric::improved}) {
        const auto d = sentiment::distribution(records, rubric);
        const char* key = rubric == sentiment::Rubric::original ? "original" : "improved";
        json five, three;
        for (std::size_t c = 0; c < kCategoryCount; ++c) {
            five[std::string(to_string(static_cast<SentimentCategory>(c)))] = d.fractions[c];
        }
        for (std::size_t c = 0; c < kPolarityCount; ++c) {
            three[std::string(to_string(static_cast<Polarity>(c)))] = d.three_class[c];
        }
        dist[key] = {{"five_class", five}, {"three_class", three}, {"n", d.n}};
    }
    write_json(config, "distribution.json", dist);

    const auto field = config.rubric == sentiment::Rubric::improved
                           ? themes::ScoreField::improved
                           : themes::ScoreField::compound;
    const auto ranking = themes::hashtag_sentiment_ranking(records, config.ranking_min_count,
                                                           field, config.top_k);
    auto out = open_out(config, "hashtag_sentiment.csv");
    out << "list,tag,mean_score,count\n";
    for (const auto& entry : ranking.most_positive) {
        out << "positive," << csv::escape(entry.tag) << ',' << fmt(entry.mean_score) << ','
            << entry.count << '\n';
    }
    for (const auto& entry : ranking.most_negative) {
        out << "negative," << csv::escape(entry.tag) << ',' << fmt(entry.mean_score) << ','
            << entry.count << '\n';
    }
}

void stage_series(const RunConfig& config) {
    require_artifact(config, "themed.csv", "themes");
    auto records = read_records(config, "themed.csv");
    chronos::assign_synthetic_timestamps(records, chronos::default_fashion_weights(),
                                         derive_seed(config.seed, "chronos"));
    write_records(config, "dated.csv", records);

    auto out = open_out(config, "series.csv");
    out << "theme,week,week_start,count,mean_sentiment\n";
    for (ThemeId theme : kAllThemes) {
        const auto series = chronos::build_weekly_series(records, theme, config.rubric);
        for (WeekIndex week = 0; week < kWeekCount; ++week) {
            const auto w = static_cast<std::size_t>(week);
            out << to_string(theme) << ',' << week << ',' << chronos::week_start_date(week)
                << ',' << series.counts[w] << ','
                << (series.mean_sentiment[w] ? fmt(*series.mean_sentiment[w]) : std::string())
                << '\n';
        }
    }
}

void write_decomposition(std::ofstream& out, ThemeId theme,
                         const std::vector<double>& observed,
                         const chronos::Decomposition& decomposition) {
    for (std::size_t w = 0; w < observed.size(); ++w) {
        out << to_string(theme) << ',' << w << ',' << fmt(observed[w]) << ','
            << (decomposition.trend[w] ? fmt(*decomposition.trend[w]) : std::string()) << ','
            << fmt(decomposition.seasonal[w]) << ','
            << (decomposition.residual[w] ? fmt(*decomposition.residual[w]) : std::string())
            << '\n';
    }
}

void stage_decompose(const RunConfig& config) {
    require_artifact(config, "series.csv", "series");
    const auto bundle = read_series(config);
    auto out = open_out(config, "decomposition.csv");
    out << "theme,week,observed,trend,seasonal,residual\n";
    for (ThemeId theme : kAllThemes) {
        const auto& series = bundle.by_theme[static_cast<std::size_t>(theme)];
        const auto observed = series.counts_as_doubles();
        write_decomposition(out, theme, observed, chronos::decompose_additive(observed, 13));
    }
    if (!config.decompose_sentiment) return;
    auto sent_out = open_out(config, "decomposition_sentiment.csv");
    sent_out << "theme,week,observed,trend,seasonal,residual\n";
    for (ThemeId theme : kAllThemes) {
        const auto& series = bundle.by_theme[static_cast<std::size_t>(theme)];
        std::vector<double> observed(kWeekCount, 0.0);  // absent weeks as neutral
        for (std::size_t w = 0; w < kWeekCount; ++w) {
            if (series.mean_sentiment[w]) observed[w] = *series.mean_sentiment[w];
        }
        write_decomposition(sent_out, theme, observed,
                            chronos::decompose_additive(observed, 13));
    }
}

void stage_trends(const RunConfig& config) {
    require_artifact(config, "series.csv", "series");
    const auto bundle = read_series(config);

    json reports = json::array();
    std::cout << "theme           direction                 signif.   conf.    R^2      p\n";
    for (ThemeId theme : kAllThemes) {
        const auto& series = bundle.by_theme[static_cast<std::size_t>(theme)];
        json entry;
        entry["theme"] = std::string(to_string(theme));
        try {
            const auto report = trends::classify_trend(series);
            entry["slope"] = report.slope;
            entry["p_value"] = report.p_value;
            entry["r_squared"] = report.r_squared;
            entry["direction"] = std::string(to_string(report.direction));
            entry["significant"] = report.significant;
            entry["confidence"] = std::string(to_string(report.confidence));
            entry["record_count"] = report.record_count;
            char line[128];
            std::snprintf(line, sizeof(line), "%-15s %-25s %-9s %-8s %-8.3f %.4f",
                          std::string(to_string(theme)).c_str(),
                          std::string(to_string(report.direction)).c_str(),
                          report.significant ? "yes" : "no",
                          std::string(to_string(report.confidence)).c_str(),
                          report.r_squared, report.p_value);
            std::cout << line << '\n';
        } catch (const std::invalid_argument& e) {
            entry["skipped"] = e.what();
            std::cout << to_string(theme) << "  (skipped: " << e.what() << ")\n";
        }
        reports.push_back(entry);
    }
    write_json(config, "trend_reports.json", reports);
}

void stage_forecast(const RunConfig& config) {
    require_artifact(config, "series.csv", "series");
    const auto bundle = read_series(config);

    json models;
    auto out = open_out(config, "forecasts.csv");
    out << "theme,week,mean,lower95,upper95,pct_of_peak\n";
    for (ThemeId theme : kAllThemes) {
        const auto& series = bundle.by_theme[static_cast<std::size_t>(theme)];
        const auto history = series.counts_as_doubles();
        const std::string name(to_string(theme));
        json entry;
        try {
            const bool seasonal = config.seasonal_themes.count(theme) > 0;
            const auto fit = arima::grid_search(history, seasonal, config.jobs);
            const auto fc = arima::forecast(fit, history);

            entry["spec"] = fit.spec.label();
            entry["p"] = fit.spec.p;
            entry["d"] = fit.spec.d;
            entry["q"] = fit.spec.q;
            if (fit.spec.seasonal) {
                entry["P"] = fit.spec.P;
                entry["D"] = fit.spec.D;
                entry["Q"] = fit.spec.Q;
                entry["s"] = fit.spec.s;
            }
            entry["mean"] = fit.mean;
            entry["ar"] = fit.ar;
            entry["ma"] = fit.ma;
            entry["seasonal_ar"] = fit.sar;
            entry["seasonal_ma"] = fit.sma;
            entry["sigma2"] = fit.sigma2;
            entry["log_likelihood"] = fit.log_likelihood;
            entry["aic"] = fit.aic;
            entry["bic"] = fit.bic;
            entry["converged"] = fit.converged;

            double peak = 0.0;
            for (double v : history) peak = std::max(peak, v);
            for (int h = 0; h < arima::Forecast::kHorizon; ++h) {
                // Counts cannot be negative: floor the reported path at 0.
                const double mean = std::max(0.0, fc.mean[static_cast<std::size_t>(h)]);
                const double lo = std::max(0.0, fc.lower95[static_cast<std::size_t>(h)]);
                const double hi = std::max(mean, fc.upper95[static_cast<std::size_t>(h)]);
                out << name << ',' << (kWeekCount + h) << ',' << fmt(mean) << ',' << fmt(lo)
                    << ',' << fmt(hi) << ','
                    << (peak > 0.0 ? fmt(100.0 * mean / peak) : std::string()) << '\n';
            }
        } catch (const std::exception& e) {
            entry["skipped"] = e.what();
        }
        models[name] = entry;
    }
    write_json(config, "forecast_models.json", models);
}

void stage_causality(const RunConfig& config) {
    require_artifact(config, "series.csv", "series");
    const auto bundle = read_series(config);

    std::vector<std::pair<ThemeId, std::vector<double>>> stationary;
    json differencing;
    for (ThemeId theme : kAllThemes) {
        const auto counts =
            bundle.by_theme[static_cast<std::size_t>(theme)].counts_as_doubles();
        const int d = arima::select_d(counts);
        stationary.emplace_back(theme, stats::difference(counts, d));
        differencing[std::string(to_string(theme))] = d;
    }
    const auto network = causality::build_network(stationary, 0.05, config.jobs);

    {
        auto out = open_out(config, "edges.csv");
        out << "source,target,p_lag1,p_lag2,p_lag3,p_lag4,min_p,significant_lags,strength\n";
        for (const auto& edge : network.edges) {
            std::string lags;
            for (int lag : edge.significant_lags) {
                if (!lags.empty()) lags += ';';
                lags += std::to_string(lag);
            }
            out << to_string(edge.source) << ',' << to_string(edge.target);
            for (double p : edge.p_by_lag) out << ',' << fmt(p);
            out << ',' << fmt(edge.min_p) << ',' << lags << ',' << to_string(edge.strength)
                << '\n';
        }
    }
    {
        json net;
        net["differencing"] = differencing;
        net["nodes"] = json::array();
        for (ThemeId theme : network.nodes) {
            net["nodes"].push_back(std::string(to_string(theme)));
        }
        net["edges"] = json::array();
        for (const auto& edge : network.edges) {
            json e;
            e["source"] = std::string(to_string(edge.source));
            e["target"] = std::string(to_string(edge.target));
            e["min_p"] = edge.min_p;
            e["significant_lags"] = edge.significant_lags;
            e["strength"] = std::string(to_string(edge.strength));
            net["edges"].push_back(e);
        }
        net["bidirectional"] = json::array();
        for (const auto& [a, b] : network.bidirectional_pairs) {
            net["bidirectional"].push_back(
                {std::string(to_string(a)), std::string(to_string(b))});
        }
        write_json(config, "network.json", net);
    }
    auto out = open_out(config, "network.dot");
    out << causality::export_dot(network);
}

json eval_report_to_json(const classify::EvalReport& report) {
    json value;
    json confusion = json::array();
    for (std::size_t t = 0; t < classify::kClassCount; ++t) {
        confusion.push_back(report.confusion[t]);
    }
    value["confusion"] = confusion;
    for (std::size_t c = 0; c < classify::kClassCount; ++c) {
        const std::string name(to_string(static_cast<Polarity>(c)));
        value["per_class"][name] = {{"precision", report.precision[c]},
                                    {"recall", report.recall[c]},
                                    {"f1", report.f1[c]}};
    }
    value["accuracy"] = report.accuracy;
    value["balanced_accuracy"] = report.balanced_accuracy;
    value["macro_f1"] = report.macro_f1;
    return value;
}

void stage_classify(const RunConfig& config) {
    require_artifact(config, "themed.csv", "themes");
    auto records = read_records(config, "themed.csv");
    sentiment::score_records(records);

    std::vector<std::string> docs;
    std::vector<int> labels;
    docs.reserve(records.size());
    for (const auto& record : records) {
        docs.push_back(record.clean_text);
        labels.push_back(static_cast<int>(
            sentiment::collapse(record.scores->category_improved)));
    }
    std::array<std::size_t, classify::kClassCount> class_counts{};
    for (int label : labels) ++class_counts[static_cast<std::size_t>(label)];
    for (std::size_t c = 0; c < classify::kClassCount; ++c) {
        if (class_counts[c] < 5) {
            throw std::runtime_error(
                "class '" + std::string(to_string(static_cast<Polarity>(c))) +
                "' has fewer than 5 records; cannot stratify 5 folds");
        }
    }

    const auto cv = classify::cross_validate(docs, labels, 5,
                                             derive_seed(config.seed, "classify"), {},
                                             config.jobs);
    write_json(config, "eval_report.json", eval_report_to_json(cv.report));

    {
        auto out = open_out(config, "confusion.csv");
        out << "truth\\pred,negative,neutral,positive\n";
        for (std::size_t t = 0; t < classify::kClassCount; ++t) {
            out << to_string(static_cast<Polarity>(t));
            for (std::size_t p = 0; p < classify::kClassCount; ++p) {
                out << ',' << cv.report.confusion[t][p];
            }
            out << '\n';
        }
    }

    // Final model on the full corpus, persisted as a versioned artifact.
    const auto vocab = classify::fit_tfidf(docs);
    const auto X = classify::transform_all(vocab, docs);
    const auto weights = classify::balanced_class_weights(labels);
    const auto model = classify::train_forest(X, labels, weights,
                                              derive_seed(config.seed, "model"), {},
                                              config.jobs);
    auto out = open_out(config, "model.json");
    out << classify::serialize_model(vocab, model);
}

void stage_panels(const RunConfig& config) {
    const auto profiles = config.platform_profiles.empty()
                              ? panels::default_platform_profiles()
                              : panels::load_platform_profiles(config.platform_profiles);
    const auto panel = panels::generate_platform_panel(profiles, config.panel_n,
                                                       derive_seed(config.seed, "panels"));
    {
        auto out = open_out(config, "platform_panel.csv");
        out << "platform,theme,score\n";
        for (const auto& row : panel) {
            out << panels::to_string(row.platform) << ',' << to_string(row.theme) << ','
                << fmt(row.score) << '\n';
        }
    }
    {
        const auto means = panels::panel_cell_means(panel);
        auto out = open_out(config, "platform_heatmap.csv");
        out << "platform";
        for (ThemeId theme : kAllThemes) out << ',' << to_string(theme);
        out << '\n';
        for (panels::Platform platform : panels::kAllPlatforms) {
            out << panels::to_string(platform);
            for (ThemeId theme : kAllThemes) {
                out << ','
                    << fmt(means[static_cast<std::size_t>(platform)]
                                [static_cast<std::size_t>(theme)]);
            }
            out << '\n';
        }
    }

    const auto lexicon = config.brands.empty() ? panels::default_brand_lexicon()
                                               : panels::load_brand_lexicon(config.brands);
    const auto brand_panel = panels::generate_brand_panel(
        lexicon, config.panel_n, 0.15, derive_seed(config.seed, "brands"));
    {
        auto out = open_out(config, "brand_panel.csv");
        out << "brand,category,score\n";
        for (const auto& row : brand_panel) {
            out << csv::escape(row.brand) << ',' << panels::to_string(row.category) << ','
                << fmt(row.score) << '\n';
        }
    }
    {
        const auto summary = panels::summarize_brand_panel(brand_panel, lexicon);
        json value;
        for (const auto& [name, mean] : summary.brand_means) value["brands"][name] = mean;
        for (std::size_t c = 0; c < panels::kBrandCategoryCount; ++c) {
            if (summary.category_means[c]) {
                value["categories"][std::string(
                    panels::to_string(static_cast<panels::BrandCategory>(c)))] =
                    *summary.category_means[c];
            }
        }
        write_json(config, "brand_summary.json", value);
    }

    // Real-record brand aggregation when the corpus is available.
    if (fs::exists(artifact(config, "themed.csv"))) {
        auto records = read_records(config, "themed.csv");
        sentiment::score_records(records);
        const auto summary = panels::brand_sentiment(records, lexicon);
        json value;
        for (const auto& [name, mean] : summary.brand_means) value["brands"][name] = mean;
        for (std::size_t c = 0; c < panels::kBrandCategoryCount; ++c) {
            if (summary.category_means[c]) {
                value["categories"][std::string(
                    panels::to_string(static_cast<panels::BrandCategory>(c)))] =
                    *summary.category_means[c];
            }
        }
        write_json(config, "brand_sentiment_records.json", value);
    }
}

void stage_report(const RunConfig& config) {
    for (const char* needed : {"join_summary.json", "theme_counts.csv", "distribution.json",
                               "series.csv", "decomposition.csv", "trend_reports.json",
                               "forecasts.csv", "network.json", "eval_report.json",
                               "platform_heatmap.csv", "brand_summary.json"}) {
        const std::string producer =
            std::string(needed) == "join_summary.json"      ? "ingest"
            : std::string(needed) == "theme_counts.csv"     ? "themes"
            : std::string(needed) == "distribution.json"    ? "sentiment"
            : std::string(needed) == "series.csv"           ? "series"
            : std::string(needed) == "decomposition.csv"    ? "decompose"
            : std::string(needed) == "trend_reports.json"   ? "trends"
            : std::string(needed) == "forecasts.csv"        ? "forecast"
            : std::string(needed) == "network.json"         ? "causality"
            : std::string(needed) == "eval_report.json"     ? "classify"
                                                            : "panels";
        require_artifact(config, needed, producer);
    }

    // fig_sentiment_distribution.csv
    {
        const json dist = read_json(config, "distribution.json");
        auto out = open_out(config, "fig_sentiment_distribution.csv");
        out << "rubric,category,fraction\n";
        for (const auto& [rubric, value] : dist.items()) {
            for (const auto& [category, fraction] : value.at("five_class").items()) {
                out << rubric << ',' << category << ',' << fmt(fraction.get<double>()) << '\n';
            }
            for (const auto& [category, fraction] : value.at("three_class").items()) {
                out << rubric << "_3class," << category << ','
                    << fmt(fraction.get<double>()) << '\n';
            }
        }
    }

    // Per-theme decomposition panels.
    {
        const csv::Table table = csv::read_file(artifact(config, "decomposition.csv"));
        const std::size_t theme_col = table.column("theme");
        for (ThemeId theme : kAllThemes) {
            auto out = open_out(config,
                                "fig_decomposition_" + std::string(to_string(theme)) + ".csv");
            out << "week,observed,trend,seasonal,residual\n";
            for (const auto& row : table.rows) {
                if (row[theme_col] != to_string(theme)) continue;
                out << row[1] << ',' << row[2] << ',' << row[3] << ',' << row[4] << ','
                    << row[5] << '\n';
            }
        }
    }

    // fig_validated_trends.csv
    {
        const json reports = read_json(config, "trend_reports.json");
        auto out = open_out(config, "fig_validated_trends.csv");
        out << "theme,slope,p_value,r_squared,direction,significant,confidence\n";
        for (const auto& entry : reports) {
            if (entry.contains("skipped")) continue;
            out << entry.at("theme").get<std::string>() << ','
                << fmt(entry.at("slope").get<double>()) << ','
                << fmt(entry.at("p_value").get<double>()) << ','
                << fmt(entry.at("r_squared").get<double>()) << ','
                << entry.at("direction").get<std::string>() << ','
                << (entry.at("significant").get<bool>() ? "yes" : "no") << ','
                << entry.at("confidence").get<std::string>() << '\n';
        }
    }

    // fig_normalized_forecasts.csv: history and forecast as percent of the
    // historical peak.
    {
        const auto bundle = read_series(config);
        const csv::Table fc = csv::read_file(artifact(config, "forecasts.csv"));
        const std::size_t theme_col = fc.column("theme");
        const std::size_t week_col = fc.column("week");
        const std::size_t pct_col = fc.column("pct_of_peak");
        auto out = open_out(config, "fig_normalized_forecasts.csv");
        out << "theme,week,pct_of_peak,kind\n";
        for (ThemeId theme : kAllThemes) {
            const auto history =
                bundle.by_theme[static_cast<std::size_t>(theme)].counts_as_doubles();
            double peak = 0.0;
            for (double v : history) peak = std::max(peak, v);
            if (peak <= 0.0) continue;
            const auto normalized = arima::normalize_to_peak(history, history);
            for (std::size_t w = 0; w < normalized.size(); ++w) {
                out << to_string(theme) << ',' << w << ',' << fmt(normalized[w])
                    << ",history\n";
            }
            for (const auto& row : fc.rows) {
                if (row[theme_col] != to_string(theme) || row[pct_col].empty()) continue;
                out << to_string(theme) << ',' << row[week_col] << ',' << row[pct_col]
                    << ",forecast\n";
            }
        }
    }

    // Figure copies with the documented names.
    for (const auto& [from, to] : std::vector<std::pair<std::string, std::string>>{
             {"platform_heatmap.csv", "fig_platform_heatmap.csv"},
             {"brand_panel.csv", "fig_brand_distribution.csv"},
             {"confusion.csv", "fig_confusion_matrix.csv"},
             {"network.dot", "fig_causal_network.dot"}}) {
        if (!fs::exists(artifact(config, from))) continue;
        std::ifstream in(artifact(config, from), std::ios::binary);
        auto out = open_out(config, to);
        out << in.rdbuf();
    }

    // summary.json pulls the headline numbers together.
    json summary;
    summary["join"] = read_json(config, "join_summary.json");
    {
        const csv::Table counts = csv::read_file(artifact(config, "theme_counts.csv"));
        json theme_counts;
        for (const auto& row : counts.rows) theme_counts[row[0]] = std::stoll(row[1]);
        summary["theme_counts"] = theme_counts;
    }
    summary["sentiment"] = read_json(config, "distribution.json");
    summary["trends"] = read_json(config, "trend_reports.json");
    summary["forecast_models"] = read_json(config, "forecast_models.json");
    summary["causality"] = read_json(config, "network.json");
    summary["classifier"] = read_json(config, "eval_report.json");
    summary["brand_panel"] = read_json(config, "brand_summary.json");
    summary["config"] = {{"seed", config.seed},
                         {"rubric", config.rubric == sentiment::Rubric::improved
                                        ? "improved"
                                        : "original"},
                         {"hashtag_substring", config.hashtag_substring}};
    write_json(config, "summary.json", summary);
}

}  // namespace

const std::vector<std::string>& all_stages() {
    static const std::vector<std::string> names = {
        "ingest", "themes", "sentiment", "series", "decompose", "trends",
        "forecast", "causality", "classify", "panels", "report"};
    return names;
}

void run_stages(const RunConfig& config, const std::vector<std::string>& stages) {
    using StageFn = void (*)(const RunConfig&);
    static const std::map<std::string, StageFn> dispatch = {
        {"ingest", stage_ingest},     {"themes", stage_themes},
        {"sentiment", stage_sentiment}, {"series", stage_series},
        {"decompose", stage_decompose}, {"trends", stage_trends},
        {"forecast", stage_forecast}, {"causality", stage_causality},
        {"classify", stage_classify}, {"panels", stage_panels},
        {"report", stage_report},
    };
    for (const auto& stage : stages) {
        if (dispatch.find(stage) == dispatch.end()) {
            throw std::invalid_argument("unknown stage '" + stage + "'");
        }
    }
    // Execute in canonical pipeline order regardless of request order.
    for (const auto& stage : all_stages()) {
        if (std::find(stages.begin(), stages.end(), stage) == stages.end()) continue;
        try {
            dispatch.at(stage)(config);
        } catch (const MissingInputError&) {
            throw;
        } catch (const StageError&) {
            throw;
        } catch (const std::exception& e) {
            throw StageError(stage, e.what());
        }
    }
}

void run_all(const RunConfig& config) { run_stages(config, all_stages()); }

}  // namespace trendlab::pipeline
