#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>

#include "trendlab/ingest.hpp"
#include "trendlab/rng.hpp"

namespace ingest = trendlab::ingest;
namespace fs = std::filesystem;
using trendlab::MergedRecord;
using trendlab::Rng;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

MergedRecord record_from_text(const std::string& text) {
    MergedRecord r;
    r.raw_text = text;
    r.clean_text = ingest::clean_text(text);
    r.hashtags = ingest::extract_hashtags(text);
    return r;
}

/// Regex oracle for hashtag extraction: "#(\w+)", lowercased, deduplicated.
std::vector<std::string> hashtag_oracle(const std::string& text) {
    static const std::regex pattern("#(\\w+)");
    std::vector<std::string> tags;
    std::set<std::string> seen;
    for (std::sregex_iterator it(text.begin(), text.end(), pattern), end; it != end; ++it) {
        std::string tag = (*it)[1].str();
        std::transform(tag.begin(), tag.end(), tag.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (seen.insert(tag).second) tags.push_back(tag);
    }
    return tags;
}

}  // namespace

TEST_CASE("load_text_corpus basics") {
    const auto path = write_temp("tl_texts.csv", "id,text\n1,hello\n2,world\n");
    const auto rows = ingest::load_text_corpus(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].id == "1");
    CHECK(rows[0].text == "hello");
    CHECK(rows[1].id == "2");
}

TEST_CASE("load_text_corpus error paths") {
    CHECK_THROWS_WITH_AS(ingest::load_text_corpus("/nonexistent/file.csv"),
                         doctest::Contains("/nonexistent/file.csv"), std::runtime_error);

    const auto dup = write_temp("tl_dup.csv", "id,text\n7,a\n7,b\n");
    CHECK_THROWS_WITH_AS(ingest::load_text_corpus(dup), doctest::Contains("'7'"),
                         std::runtime_error);

    const auto missing = write_temp("tl_missing.csv", "idx,text\n1,a\n");
    CHECK_THROWS_AS(ingest::load_text_corpus(missing), std::runtime_error);

    const auto empty = write_temp("tl_empty.csv", "id,text\n");
    CHECK(ingest::load_text_corpus(empty).empty());
}

TEST_CASE("load_text_corpus handles quoted fields") {
    const auto path =
        write_temp("tl_quotes.csv", "id,text\n1,\"hello, world\"\n2,\"say \"\"hi\"\"\"\n");
    const auto rows = ingest::load_text_corpus(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].text == "hello, world");
    CHECK(rows[1].text == "say \"hi\"");

    const auto broken = write_temp("tl_broken.csv", "id,text\n1,\"unterminated\n");
    CHECK_THROWS_WITH_AS(ingest::load_text_corpus(broken),
                         doctest::Contains("unterminated"), std::runtime_error);
}

TEST_CASE("load_t4sa parses and validates") {
    const auto path = write_temp("tl_t4sa.csv", "TWID,NEG,NEU,POS\n42,0.1,0.2,0.7\n");
    const auto scores = ingest::load_t4sa(path);
    REQUIRE(scores.size() == 1);
    const auto& triple = scores.at("42");
    CHECK(triple.pos == doctest::Approx(0.7));
    CHECK(triple.neg == doctest::Approx(0.1));
    CHECK(triple.neu == doctest::Approx(0.2));

    const auto range = write_temp("tl_range.csv", "TWID,NEG,NEU,POS\n1,1.5,0.2,0.3\n");
    CHECK_THROWS_WITH_AS(ingest::load_t4sa(range), doctest::Contains("[0,1]"),
                         std::runtime_error);

    const auto bad = write_temp("tl_bad.csv", "TWID,NEG,NEU,POS\n1,0.1,0.2,abc\n");
    CHECK_THROWS_WITH_AS(ingest::load_t4sa(bad), doctest::Contains("abc"),
                         std::runtime_error);

    const auto dup = write_temp("tl_dupt.csv",
                                "TWID,NEG,NEU,POS\n9,0.1,0.2,0.7\n9,0.2,0.2,0.6\n");
    CHECK_THROWS_WITH_AS(ingest::load_t4sa(dup), doctest::Contains("'9'"),
                         std::runtime_error);

    const auto simplex = write_temp("tl_simplex.csv", "TWID,NEG,NEU,POS\n1,0.5,0.5,0.5\n");
    CHECK_THROWS_WITH_AS(ingest::load_t4sa(simplex), doctest::Contains("tolerance"),
                         std::runtime_error);
}

TEST_CASE("merge_by_id inner-join semantics") {
    std::vector<ingest::RawText> texts = {{"1", "a"}, {"2", "b"}, {"3", "c"}};
    std::unordered_map<std::string, trendlab::SentimentTriple> scores = {
        {"1", {0.5, 0.2, 0.3}},
        {"3", {0.1, 0.1, 0.8}},
    };
    const auto [merged, summary] = ingest::merge_by_id(texts, scores);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].id == "1");
    CHECK(merged[1].id == "3");
    CHECK(summary.kept == 2);
    CHECK(summary.texts_without_score == 1);
    CHECK(summary.scores_without_text == 0);
}

TEST_CASE("merge_by_id disjoint and identical id sets") {
    std::vector<ingest::RawText> texts = {{"1", "a"}, {"2", "b"}};
    std::unordered_map<std::string, trendlab::SentimentTriple> disjoint = {
        {"8", {0.5, 0.2, 0.3}},
        {"9", {0.5, 0.2, 0.3}},
    };
    const auto [none, summary] = ingest::merge_by_id(texts, disjoint);
    CHECK(none.empty());
    CHECK(summary.texts_without_score == 2);
    CHECK(summary.scores_without_text == 2);

    std::unordered_map<std::string, trendlab::SentimentTriple> all = {
        {"1", {0.5, 0.2, 0.3}},
        {"2", {0.5, 0.2, 0.3}},
    };
    const auto [both, summary2] = ingest::merge_by_id(texts, all);
    CHECK(both.size() == 2);
    CHECK(summary2.texts_without_score == 0);
    CHECK(summary2.scores_without_text == 0);
}

TEST_CASE("clean_text rules") {
    CHECK(ingest::clean_text("Check https://x.co @bob NEW Dress!!") == "check new dress");
    CHECK(ingest::clean_text("#Vintage STYLE") == "#vintage style");
    CHECK(ingest::clean_text("") == "");
    CHECK(ingest::clean_text("  spaces\t\teverywhere\n ") == "spaces everywhere");
    CHECK(ingest::clean_text("WWW.shop.example サンプル rocks") == "rocks");
    CHECK(ingest::clean_text("@only @mentions") == "");
}

TEST_CASE("clean_text is idempotent") {
    Rng rng(77);
    const std::string alphabet =
        "AZaz09#@:/.!? \t\nhttps://www.example.com @user #Tag éü";
    for (int i = 0; i < 300; ++i) {
        std::string s;
        const std::size_t len = rng.next_index(60);
        for (std::size_t j = 0; j < len; ++j) s += alphabet[rng.next_index(alphabet.size())];
        const std::string once = ingest::clean_text(s);
        CHECK(ingest::clean_text(once) == once);
    }
}

TEST_CASE("extract_hashtags per-tweet dedup and adjacency") {
    CHECK(ingest::extract_hashtags("love #Fashion and #fashion week") ==
          std::vector<std::string>{"fashion"});
    CHECK(ingest::extract_hashtags("#boho#style") ==
          std::vector<std::string>{"boho", "style"});
    CHECK(ingest::extract_hashtags("no tags here").empty());
}

TEST_CASE("extract_hashtags agrees with the regex oracle") {
    const std::string cases[] = {
        "#boho#style",
        "#a #b #a",
        "nothing",
        "#mixedCASE and #MIXEDcase",
        "trailing #",
        "#with_underscore_123",
        "#1 #2 #3",
        "email@host #tag",
        "##double",
        "#end",
        "#tag!punct",
        "(#wrapped)",
        "#tag#tag#tag",
        "#Tag,#tAg",
        "# spaced",
        "text #one more #two then #three",
        "#ALLCAPS",
        "#y2k #Y2K",
        "unicode #café edge",
        "#tag\n#newline",
    };
    for (const auto& text : cases) {
        CAPTURE(text);
        CHECK(ingest::extract_hashtags(text) == hashtag_oracle(text));
    }
}

TEST_CASE("filter_fashion whole-word semantics") {
    std::vector<MergedRecord> records = {record_from_text("new dress day"),
                                         record_from_text("stock market")};
    const std::vector<std::string> keywords = {"dress"};
    const auto [kept, summary] = ingest::filter_fashion(records, keywords);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].clean_text == "new dress day");
    CHECK(summary.kept_fraction == doctest::Approx(0.5));

    // Tokenizer oracle: "style" must not match inside "hairstyle".
    std::vector<MergedRecord> tricky = {record_from_text("hairstyle tips")};
    const auto [kept2, s2] = ingest::filter_fashion(tricky, {"style"});
    CHECK(kept2.empty());

    CHECK_THROWS_AS(ingest::filter_fashion(records, {}), std::invalid_argument);
}

TEST_CASE("filter_fashion hashtag substring flag") {
    std::vector<MergedRecord> records = {record_from_text("rocking #streetstyle today")};
    const std::vector<std::string> keywords = {"style"};
    CHECK(ingest::filter_fashion(records, keywords, false).first.empty());
    CHECK(ingest::filter_fashion(records, keywords, true).first.size() == 1);
    // Exact tag match works without the flag.
    std::vector<MergedRecord> exact = {record_from_text("rocking #style today")};
    CHECK(ingest::filter_fashion(exact, keywords, false).first.size() == 1);
}

TEST_CASE("filter_fashion keyword union is monotone") {
    Rng rng(13);
    const std::vector<std::string> vocab = {"dress", "style",  "shoes", "market",
                                            "rain",  "summer", "bag",   "vintage"};
    std::vector<MergedRecord> records;
    for (int i = 0; i < 200; ++i) {
        std::string text;
        const std::size_t words = 1 + rng.next_index(6);
        for (std::size_t w = 0; w < words; ++w) {
            if (!text.empty()) text += ' ';
            text += vocab[rng.next_index(vocab.size())];
        }
        records.push_back(record_from_text(text));
    }
    const std::vector<std::string> k1 = {"dress", "bag"};
    const std::vector<std::string> k2 = {"style", "rain"};
    std::vector<std::string> k12 = k1;
    k12.insert(k12.end(), k2.begin(), k2.end());

    auto ids_of = [](const std::vector<MergedRecord>& v) {
        std::set<std::string> ids;
        for (const auto& r : v) ids.insert(r.clean_text);
        return ids;
    };
    const auto kept1 = ids_of(ingest::filter_fashion(records, k1).first);
    const auto kept12 = ids_of(ingest::filter_fashion(records, k12).first);
    CHECK(std::includes(kept12.begin(), kept12.end(), kept1.begin(), kept1.end()));
}

TEST_CASE("default keyword list has the documented 23 terms") {
    const auto& kws = ingest::default_keywords();
    CHECK(kws.size() == 23);
    for (const char* named : {"fashion", "style", "outfit", "dress"}) {
        CHECK(std::find(kws.begin(), kws.end(), named) != kws.end());
    }
}

TEST_CASE("load_keywords skips blanks and comments") {
    const auto path = write_temp("tl_kw.txt", "# comment\n\nDress\nstyle \n");
    const auto kws = ingest::load_keywords(path);
    CHECK(kws == std::vector<std::string>{"dress", "style"});
}
