#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>
#include <string>

#include "csei/config.hpp"

namespace {

std::map<std::string, std::string> parse_str(const std::string& text) {
  std::istringstream in(text);
  return csei::parse_config_file(in);
}

void apply(csei::RunConfig& cfg, const std::string& key,
           const std::string& value) {
  csei::apply_config_entry(cfg, key, value);
}

void check_config_rejects(csei::RunConfig cfg, const std::string& substring) {
  try {
    csei::validate_config(cfg);
    FAIL("expected validate_config to reject: " << substring);
  } catch (const csei::Error& e) {
    CHECK(e.kind() == csei::ErrorKind::config);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring(substring));
  }
}

}  // namespace

TEST_CASE("config file parsing: key = value with comments") {
  const auto entries = parse_str(
      "# leading comment\n"
      "\n"
      "posts = data/posts.csv\r\n"
      "  seed=7\n"
      "   # indented comment\n"
      "output_dir =   out dir  \n"
      "expr = a=b\n");
  REQUIRE(entries.size() == 4);
  CHECK(entries.at("posts") == "data/posts.csv");
  CHECK(entries.at("seed") == "7");
  CHECK(entries.at("output_dir") == "out dir");
  // Only the first '=' splits; the rest is value text.
  CHECK(entries.at("expr") == "a=b");
}

TEST_CASE("config file parsing: empty values and failures") {
  CHECK(parse_str("external_scores =\n").at("external_scores").empty());

  CHECK_THROWS_WITH(parse_str("just a line\n"),
                    Catch::Matchers::ContainsSubstring("expected key = value"));
  CHECK_THROWS_WITH(parse_str(" = value\n"),
                    Catch::Matchers::ContainsSubstring("empty key"));
  CHECK_THROWS_WITH(parse_str("a = 1\na = 2\n"),
                    Catch::Matchers::ContainsSubstring("duplicate key"));
  // Line numbers point at the offender.
  CHECK_THROWS_WITH(parse_str("a = 1\n\nbroken\n"),
                    Catch::Matchers::ContainsSubstring("line 3"));
}

TEST_CASE("defaults: paths, window, and stage parameters") {
  const csei::RunConfig cfg;
  CHECK(cfg.posts.empty());
  CHECK(cfg.format == csei::PostFormat::csv);
  CHECK_THAT(cfg.lexicon,
             Catch::Matchers::EndsWith("sentiment_lexicon.tsv"));
  CHECK_THAT(cfg.events, Catch::Matchers::EndsWith("covid_events.csv"));
  CHECK(cfg.min_date == csei::Date::parse("2020-02-11").value());
  CHECK(cfg.max_date == csei::Date::parse("2021-10-25").value());
  CHECK(cfg.english_threshold == 0.3);
  CHECK(cfg.emotion_agg == csei::EmotionAgg::mean_prob);
  CHECK(cfg.diversity == csei::DiversityMode::distinct);
  CHECK(cfg.outlier_level == csei::OutlierLevel::daily);
  CHECK(cfg.n_trees == 100);
  CHECK(cfg.subsample_size == 0);
  CHECK(cfg.seed == 42);
  CHECK(cfg.contamination == 0.005);
  CHECK(cfg.pc1_max == 25.0);
  CHECK(cfg.pc2_min == 7.5);
  CHECK(cfg.normalization == "minmax");
  CHECK(cfg.weight_mode == csei::WeightMode::derive);
  CHECK(cfg.window == 7);
  CHECK(cfg.distance == 7);
  CHECK_FALSE(cfg.prominence.has_value());
  CHECK(cfg.event_correlate == csei::EventCorrelate::delta);
  CHECK(cfg.output_dir == "out");
  CHECK_FALSE(cfg.plots);
  CHECK_FALSE(cfg.log_timestamps);
  CHECK_NOTHROW(csei::validate_config(cfg));
}

TEST_CASE("config entries: enum and typed values") {
  csei::RunConfig cfg;

  apply(cfg, "format", "jsonl");
  CHECK(cfg.format == csei::PostFormat::jsonl);
  CHECK_THROWS_WITH([&] { apply(cfg, "format", "xml"); }(),
                    Catch::Matchers::ContainsSubstring("csv or jsonl"));

  apply(cfg, "emotion_agg", "label_share");
  CHECK(cfg.emotion_agg == csei::EmotionAgg::label_share);
  CHECK_THROWS_AS([&] { apply(cfg, "emotion_agg", "sum"); }(), csei::Error);

  apply(cfg, "diversity", "shannon_entropy");
  CHECK(cfg.diversity == csei::DiversityMode::shannon_entropy);
  CHECK_THROWS_AS([&] { apply(cfg, "diversity", "simpson"); }(), csei::Error);

  apply(cfg, "outlier_level", "post");
  CHECK(cfg.outlier_level == csei::OutlierLevel::post);
  CHECK_THROWS_AS([&] { apply(cfg, "outlier_level", "weekly"); }(),
                  csei::Error);

  apply(cfg, "weight_mode", "load");
  CHECK(cfg.weight_mode == csei::WeightMode::load);
  CHECK_THROWS_AS([&] { apply(cfg, "weight_mode", "fixed"); }(), csei::Error);

  apply(cfg, "event_correlate", "abs_delta");
  CHECK(cfg.event_correlate == csei::EventCorrelate::abs_delta);
  apply(cfg, "event_correlate", "smoothed");
  CHECK(cfg.event_correlate == csei::EventCorrelate::smoothed);
  CHECK_THROWS_AS([&] { apply(cfg, "event_correlate", "raw"); }(),
                  csei::Error);

  apply(cfg, "min_date", "2020-06-15");
  CHECK(cfg.min_date == csei::Date::parse("2020-06-15").value());
  CHECK_THROWS_WITH([&] { apply(cfg, "min_date", "June 15"); }(),
                    Catch::Matchers::ContainsSubstring("YYYY-MM-DD"));

  apply(cfg, "n_trees", "250");
  CHECK(cfg.n_trees == 250);
  CHECK_THROWS_WITH([&] { apply(cfg, "n_trees", "-3"); }(),
                    Catch::Matchers::ContainsSubstring("non-negative integer"));
  CHECK_THROWS_AS([&] { apply(cfg, "n_trees", "many"); }(), csei::Error);

  apply(cfg, "contamination", "0.01");
  CHECK(cfg.contamination == 0.01);
  CHECK_THROWS_AS([&] { apply(cfg, "contamination", "one"); }(), csei::Error);

  apply(cfg, "prominence", "0.25");
  REQUIRE(cfg.prominence.has_value());
  CHECK(*cfg.prominence == 0.25);
  apply(cfg, "prominence", "auto");
  CHECK_FALSE(cfg.prominence.has_value());

  apply(cfg, "plots", "true");
  CHECK(cfg.plots);
  apply(cfg, "plots", "false");
  CHECK_FALSE(cfg.plots);
  CHECK_THROWS_WITH([&] { apply(cfg, "plots", "yes please"); }(),
                    Catch::Matchers::ContainsSubstring("true or false"));

  apply(cfg, "log_timestamps", "true");
  CHECK(cfg.log_timestamps);

  CHECK_THROWS_WITH([&] { apply(cfg, "colour_scheme", "mauve"); }(),
                    Catch::Matchers::ContainsSubstring(
                        "unknown config key 'colour_scheme'"));
}

TEST_CASE("config map application") {
  const csei::RunConfig cfg = csei::config_from_map({
      {"posts", "p.csv"},
      {"format", "jsonl"},
      {"seed", "9"},
      {"window", "3"},
  });
  CHECK(cfg.posts == "p.csv");
  CHECK(cfg.format == csei::PostFormat::jsonl);
  CHECK(cfg.seed == 9);
  CHECK(cfg.window == 3);
  // Untouched keys keep their defaults.
  CHECK(cfg.distance == 7);
}

TEST_CASE("config validation: every range rule") {
  csei::RunConfig cfg;

  cfg.min_date = csei::Date::parse("2021-01-01").value();
  cfg.max_date = csei::Date::parse("2020-01-01").value();
  check_config_rejects(cfg, "window is empty");

  cfg = csei::RunConfig{};
  cfg.english_threshold = -0.01;
  check_config_rejects(cfg, "english_threshold");
  cfg.english_threshold = 1.01;
  check_config_rejects(cfg, "english_threshold");
  cfg.english_threshold = 1.0;
  CHECK_NOTHROW(csei::validate_config(cfg));
  cfg.english_threshold = 0.0;
  CHECK_NOTHROW(csei::validate_config(cfg));

  cfg = csei::RunConfig{};
  cfg.n_trees = 0;
  check_config_rejects(cfg, "n_trees");

  cfg = csei::RunConfig{};
  cfg.subsample_size = 1;
  check_config_rejects(cfg, "subsample_size");
  cfg.subsample_size = 2;
  CHECK_NOTHROW(csei::validate_config(cfg));

  cfg = csei::RunConfig{};
  cfg.contamination = -0.001;
  check_config_rejects(cfg, "contamination");
  cfg.contamination = 1.0;
  check_config_rejects(cfg, "contamination");
  cfg.contamination = 0.999;
  CHECK_NOTHROW(csei::validate_config(cfg));

  cfg = csei::RunConfig{};
  cfg.normalization = "zscore";
  check_config_rejects(cfg, "normalization");

  cfg = csei::RunConfig{};
  cfg.window = 0;
  check_config_rejects(cfg, "window");

  cfg = csei::RunConfig{};
  cfg.distance = 0;
  check_config_rejects(cfg, "distance");

  cfg = csei::RunConfig{};
  cfg.prominence = -0.5;
  check_config_rejects(cfg, "prominence");
  cfg.prominence = 0.0;
  CHECK_NOTHROW(csei::validate_config(cfg));

  cfg = csei::RunConfig{};
  cfg.output_dir.clear();
  check_config_rejects(cfg, "output_dir");
}
