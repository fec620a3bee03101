#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trendlab/types.hpp"

namespace trendlab::panels {

enum class Platform : std::uint8_t { twitter, instagram, pinterest, tiktok, reddit };

inline constexpr std::size_t kPlatformCount = 5;

inline constexpr std::array<Platform, kPlatformCount> kAllPlatforms = {
    Platform::twitter, Platform::instagram, Platform::pinterest, Platform::tiktok,
    Platform::reddit,
};

std::string_view to_string(Platform platform);
std::optional<Platform> platform_from_string(std::string_view name);

/// Target mean sentiment and dispersion per (platform, theme) cell.
struct PlatformProfiles {
    std::array<std::array<double, kThemeCount>, kPlatformCount> target{};
    std::array<std::array<double, kThemeCount>, kPlatformCount> dispersion{};

    double cell_target(Platform platform, ThemeId theme) const {
        return target[static_cast<std::size_t>(platform)][static_cast<std::size_t>(theme)];
    }
};

PlatformProfiles default_platform_profiles();

/// "platform,theme,target[,dispersion]" lines; '#' comments allowed.
PlatformProfiles load_platform_profiles(const std::filesystem::path& path);

struct PanelRow {
    Platform platform;
    ThemeId theme;
    double score;
};

/**
 * Per (platform, theme) cell, n scores from a clipped normal whose
 * location is adjusted so the clipped mean equals the cell target (plain
 * clipping would bias extreme cells inward). Deterministic per seed with
 * per-cell derived substreams.
 */
std::vector<PanelRow> generate_platform_panel(const PlatformProfiles& profiles,
                                              std::size_t n_per_cell,
                                              std::uint64_t seed);

/// Mean score per (platform, theme) over a generated panel.
std::array<std::array<double, kThemeCount>, kPlatformCount>
panel_cell_means(std::span<const PanelRow> panel);

// ---------------------------------------------------------------------------
// Brands
// ---------------------------------------------------------------------------

enum class BrandCategory : std::uint8_t { luxury, fast_fashion, sportswear, sustainable };

inline constexpr std::size_t kBrandCategoryCount = 4;

std::string_view to_string(BrandCategory category);
std::optional<BrandCategory> brand_category_from_string(std::string_view name);

struct Brand {
    std::string name;
    BrandCategory category;
    double target = 0.0;  ///< synthetic-panel mean sentiment
    std::vector<std::string> aliases;  ///< lowercase whole-word match terms
};

using BrandLexicon = std::vector<Brand>;

/// Built-in lexicon whose per-category target means reproduce the reported
/// category averages (sustainable 0.76, sportswear 0.69, luxury 0.62,
/// fast fashion 0.46).
const BrandLexicon& default_brand_lexicon();

/// "name|category|target|alias,alias,..." lines; '#' comments allowed.
BrandLexicon load_brand_lexicon(const std::filesystem::path& path);

struct BrandPanelRow {
    std::string brand;
    BrandCategory category;
    double score;
};

std::vector<BrandPanelRow> generate_brand_panel(const BrandLexicon& lexicon,
                                                std::size_t n_per_brand,
                                                double dispersion, std::uint64_t seed);

struct BrandSummary {
    std::vector<std::pair<std::string, double>> brand_means;  ///< lexicon order
    std::array<std::optional<double>, kBrandCategoryCount> category_means;
};

/// Category mean = unweighted mean over its brand means.
BrandSummary summarize_brand_panel(std::span<const BrandPanelRow> panel,
                                   const BrandLexicon& lexicon);

/// Aggregate real scored records: a record counts toward every brand whose
/// alias appears as a whole word in its clean text.
BrandSummary brand_sentiment(std::span<const MergedRecord> records,
                             const BrandLexicon& lexicon);

namespace detail {
/// Mean of clamp(N(mu, sigma), lo, hi) in closed form.
double clipped_normal_mean(double mu, double sigma, double lo, double hi);
/// Location whose clipped mean equals `target` (bisection).
double location_for_target(double target, double sigma, double lo, double hi);
}  // namespace detail

}  // namespace trendlab::panels
