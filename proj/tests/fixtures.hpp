#pragma once

// Deterministic synthetic corpus used by the pipeline and ledger tests:
// 1,000 posts with planted removals (3 deleted, 2 removed, 4 bot posts,
// 5 outside the date window) and an external score table covering ~70% of
// ids. All text is drawn from the bundled lexicon, its zero-valence coverage
// rows, and the stopword list, so nothing trips the language filter.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "csei/csv.hpp"
#include "csei/date.hpp"

namespace fixtures {

inline const std::vector<std::string>& valenced_words() {
  static const std::vector<std::string> words = {
      "hope",  "fear",     "happy",  "sad",   "safe",   "death",
      "help",  "love",     "panic",  "relief", "grateful", "scared",
      "strong", "tired",   "sick",   "amazing", "awful", "calm",
      "care",  "celebrate", "chaos", "better", "bad",   "best"};
  return words;
}

inline const std::vector<std::string>& coverage_words() {
  static const std::vector<std::string> words = {
      "covid", "virus", "pandemic", "people", "cases", "city",
      "world", "vaccine", "news",   "masks",  "home",  "week"};
  return words;
}

inline const std::vector<std::string>& filler_stopwords() {
  static const std::vector<std::string> words = {"the", "and", "of",  "to",
                                                 "in",  "is",  "for", "with"};
  return words;
}

struct PostsFixture {
  std::string posts_csv;
  std::string scores_csv;

  std::uint64_t total = 0;
  std::uint64_t deleted = 0;
  std::uint64_t removed = 0;
  std::uint64_t bot = 0;
  std::uint64_t out_of_window = 0;

  // Among survivors: ids absent from the score table / scaled to sum 0.8.
  std::uint64_t external_missing = 0;
  std::uint64_t external_renormalized = 0;

  int day_span = 60;  // survivors land on 2020-03-01 .. 2020-04-29

  std::uint64_t survivors() const {
    return total - deleted - removed - bot - out_of_window;
  }
};

namespace detail {

inline std::string post_id(std::size_t i) {
  std::string suffix = std::to_string(i);
  return "p" + std::string(4 - suffix.size(), '0') + suffix;
}

inline std::string pick(const std::vector<std::string>& pool, std::size_t k) {
  return pool[k % pool.size()];
}

// Unpunctuated word soup; every token resolves against the English set.
inline std::string make_sentence(std::size_t i, std::size_t words) {
  std::string text;
  for (std::size_t k = 0; k < words; ++k) {
    if (!text.empty()) text += ' ';
    const std::size_t slot = (i * 7 + k * 3 + 1) % 5;
    if (slot == 0) {
      text += pick(filler_stopwords(), i + k);
    } else if (slot <= 2) {
      text += pick(coverage_words(), i * 5 + k);
    } else {
      text += pick(valenced_words(), i * 11 + k * 2);
    }
  }
  return text;
}

}  // namespace detail

inline PostsFixture make_posts_fixture() {
  using csei::format_double;
  using csei::write_csv_row;

  PostsFixture fx;
  fx.total = 1000;

  const std::int64_t in_window_base =
      static_cast<std::int64_t>(csei::Date::parse("2020-03-01")->days) * 86400;
  const std::int64_t before_window =
      static_cast<std::int64_t>(csei::Date::parse("2019-12-15")->days) * 86400;
  const std::int64_t after_window =
      static_cast<std::int64_t>(csei::Date::parse("2021-11-05")->days) * 86400;

  const std::vector<std::string> domains = {
      "reddit.com",  "news.example.com", "twitter.com",
      "youtube.com", "imgur.com",        "cdc.gov",
      "who.int",     "medium.com",       "example.org"};
  const std::vector<std::string> subreddits = {
      "Coronavirus", "COVID19", "news", "AskReddit", "worldnews"};

  std::ostringstream posts;
  write_csv_row(posts, {"type", "id", "subreddit.id", "subreddit.name",
                        "subreddit.nsfw", "created_utc", "permalink", "domain",
                        "url", "selftext", "title", "score"});

  std::ostringstream scores;
  write_csv_row(scores, {"id", "fear", "surprise", "joy", "sadness", "anger",
                         "disgust", "neutral", "offensive"});

  for (std::size_t i = 0; i < fx.total; ++i) {
    const std::string id = detail::post_id(i);
    enum class Role { normal, deleted, removed, bot, out_of_window };
    Role role = Role::normal;
    if (i < 3) {
      role = Role::deleted;
    } else if (i < 5) {
      role = Role::removed;
    } else if (i < 9) {
      role = Role::bot;
    } else if (i < 14) {
      role = Role::out_of_window;
    }

    std::int64_t created = in_window_base +
                           static_cast<std::int64_t>(i % 60) * 86400 + 43200 +
                           static_cast<std::int64_t>((i * 131) % 977);
    if (role == Role::out_of_window) {
      created = (i % 2 == 0 ? before_window : after_window) +
                static_cast<std::int64_t>(i) * 3600;
    }

    std::string title = detail::make_sentence(i, 3 + i % 3);
    if (i % 13 == 0) title += "!";
    std::string selftext = detail::make_sentence(i * 3 + 1, 6 + i % 7) + ". " +
                           detail::make_sentence(i * 5 + 2, 4 + i % 4) + ".";
    if (i % 17 == 0) {
      selftext += " we said \"stay home, stay safe\" this week.";
    }
    switch (role) {
      case Role::deleted:
        selftext = "[deleted]";
        ++fx.deleted;
        break;
      case Role::removed:
        selftext = i % 2 == 0 ? "[removed]" : "  [removed]  ";
        ++fx.removed;
        break;
      case Role::bot:
        selftext = "I am a bot, beep boop. " + selftext;
        ++fx.bot;
        break;
      case Role::out_of_window:
        ++fx.out_of_window;
        break;
      case Role::normal:
        break;
    }

    write_csv_row(
        posts,
        {"rs", id, "t5_" + std::to_string(1000 + i % 5),
         subreddits[i % subreddits.size()], i % 25 == 0 ? "true" : "false",
         std::to_string(created),
         "/r/" + subreddits[i % subreddits.size()] + "/comments/" + id,
         domains[(i * 5 + 3) % domains.size()],
         i % 3 == 0 ? "https://" + domains[(i * 5 + 3) % domains.size()] +
                          "/p/" + id
                    : "",
         selftext, title,
         std::to_string(static_cast<std::int64_t>((i * 137) % 1001) - 200)});

    const bool survivor = role == Role::normal;
    const bool in_table = i % 10 < 7;
    if (!in_table) {
      if (survivor) ++fx.external_missing;
      continue;
    }
    double raw[7];
    double sum = 0.0;
    for (std::size_t e = 0; e < 7; ++e) {
      raw[e] = 1.0 + static_cast<double>((i * 7 + e * 13) % 9);
      sum += raw[e];
    }
    const bool shrink = i % 20 == 3;
    if (shrink && survivor) ++fx.external_renormalized;
    std::vector<std::string> row = {id};
    for (std::size_t e = 0; e < 7; ++e) {
      const double value = raw[e] / sum * (shrink ? 0.8 : 1.0);
      row.push_back(format_double(value));
    }
    row.push_back(format_double(static_cast<double>((i * 3) % 101) / 100.0));
    write_csv_row(scores, row);
  }

  fx.posts_csv = posts.str();
  fx.scores_csv = scores.str();
  return fx;
}

}  // namespace fixtures
