#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "csei/scoring.hpp"

using csei::attach_external_scores;
using csei::CleanPost;
using csei::Error;
using csei::ErrorKind;
using csei::ExternalScores;
using csei::load_external_scores;

namespace {

const char* kScoresHeader =
    "id,fear,surprise,joy,sadness,anger,disgust,neutral,offensive\n";

CleanPost make_post(const std::string& id, const std::string& title,
                    const std::string& selftext) {
  CleanPost p;
  p.id = id;
  p.title = title;
  p.selftext = selftext;
  return p;
}

csei::Lexicon tiny_lexicon() {
  csei::Lexicon lex;
  lex.entries = {{"good", 2.0}, {"bad", -2.5}};
  return lex;
}

}  // namespace

TEST_CASE("external score table parses and rejects defects") {
  std::istringstream good(std::string(kScoresHeader) +
                          "a,0.1,0.1,0.2,0.1,0.1,0.1,0.3,0.25\n");
  const auto table = load_external_scores(good);
  REQUIRE(table.size() == 1);
  CHECK(table.at("a").emotions[0] == 0.1);   // fear
  CHECK(table.at("a").emotions[6] == 0.3);   // neutral
  CHECK(table.at("a").offensive == 0.25);

  std::istringstream empty("");
  CHECK_THROWS_AS(load_external_scores(empty), Error);

  std::istringstream bad_header("id,fear\nx,1\n");
  CHECK_THROWS_AS(load_external_scores(bad_header), Error);

  std::istringstream dup(std::string(kScoresHeader) +
                         "a,0,0,0,0,0,0,1,0\na,0,0,0,0,0,0,1,0\n");
  CHECK_THROWS_AS(load_external_scores(dup), Error);

  std::istringstream bad_value(std::string(kScoresHeader) +
                               "a,x,0,0,0,0,0,1,0\n");
  CHECK_THROWS_AS(load_external_scores(bad_value), Error);
}

TEST_CASE("attach joins scores and fills builtin scorers") {
  std::istringstream in(std::string(kScoresHeader) +
                        "a,0.1,0.1,0.2,0.1,0.1,0.1,0.3,0.25\n");
  const auto table = load_external_scores(in);
  const auto out = attach_external_scores(
      {make_post("a", "good news.", "very good day.")}, table, tiny_lexicon());
  REQUIRE(out.posts.size() == 1);
  CHECK(out.defaulted == 0);
  CHECK(out.renormalized == 0);
  const csei::ScoredPost& p = out.posts[0];
  CHECK(p.emotions[2] == 0.2);
  CHECK(p.offensive == 0.25);
  CHECK_FALSE(p.external_defaulted);
  CHECK_FALSE(p.external_renormalized);
  // Scorers run on "title selftext" concatenation.
  CHECK(p.compound ==
        csei::compound_sentiment("good news. very good day.", tiny_lexicon()));
  CHECK(p.readability ==
        csei::flesch_reading_ease("good news. very good day.").score);
}

TEST_CASE("posts missing from the table get the neutral default") {
  const auto out = attach_external_scores({make_post("nope", "good", "day")},
                                          {}, tiny_lexicon());
  REQUIRE(out.posts.size() == 1);
  CHECK(out.defaulted == 1);
  const csei::ScoredPost& p = out.posts[0];
  CHECK(p.external_defaulted);
  CHECK(p.emotions[6] == 1.0);  // neutral
  for (std::size_t e = 0; e < 6; ++e) CHECK(p.emotions[e] == 0.0);
  CHECK(p.offensive == 0.0);
}

TEST_CASE("emotion vectors off unit sum are renormalized") {
  std::istringstream in(std::string(kScoresHeader) +
                        "a,0.08,0.08,0.16,0.08,0.08,0.08,0.24,0.5\n");
  const auto table = load_external_scores(in);  // sums to 0.8
  const auto out = attach_external_scores({make_post("a", "t", "s")}, table,
                                          tiny_lexicon());
  CHECK(out.renormalized == 1);
  const csei::ScoredPost& p = out.posts[0];
  CHECK(p.external_renormalized);
  double sum = 0.0;
  for (double e : p.emotions) sum += e;
  CHECK(sum == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(p.emotions[2] == Catch::Approx(0.16 * 1.25).epsilon(1e-12));
  CHECK(p.offensive == 0.5);
}

TEST_CASE("attach rejects invalid score rows with the post id") {
  auto run = [&](const std::string& row) {
    std::istringstream in(std::string(kScoresHeader) + row);
    const auto table = load_external_scores(in);
    attach_external_scores({make_post("a", "t", "s")}, table, tiny_lexicon());
  };
  try {
    run("a,-0.1,0.2,0.2,0.2,0.2,0.2,0.1,0\n");
    FAIL("expected data error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::data);
    CHECK(std::string(e.what()).find("a") != std::string::npos);
  }
  CHECK_THROWS_AS(run("a,0,0,0,0,0,0,0,0\n"), Error);     // all-zero vector
  CHECK_THROWS_AS(run("a,0,0,0,0,0,0,1,1.5\n"), Error);   // offensive range
  CHECK_THROWS_AS(run("a,0,0,0,0,0,0,1,-0.1\n"), Error);  // offensive range
}

TEST_CASE("extra ids in the table are ignored") {
  std::istringstream in(std::string(kScoresHeader) +
                        "other,0,0,0,0,0,0,1,0\n");
  const auto table = load_external_scores(in);
  const auto out =
      attach_external_scores({make_post("a", "t", "s")}, table, tiny_lexicon());
  CHECK(out.defaulted == 1);
}
