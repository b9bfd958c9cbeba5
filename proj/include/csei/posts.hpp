#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "csei/date.hpp"

namespace csei {

// Fixed emotion order used by every emotion-probability array in the project.
inline constexpr std::array<const char*, 7> kEmotionNames = {
    "fear", "surprise", "joy", "sadness", "anger", "disgust", "neutral"};
inline constexpr std::size_t kEmotionCount = kEmotionNames.size();

struct RawPost {
  std::string id;
  std::string type;
  std::string subreddit_name;
  bool nsfw = false;
  std::int64_t created_utc = 0;
  std::string domain;
  std::string url;
  std::string selftext;
  std::string title;
  std::int64_t score = 0;
};

struct CleanPost : RawPost {
  std::string clean_text;  // cleaned "title selftext" concatenation
  Date post_date;          // UTC day bucket of created_utc
};

struct ScoredPost : CleanPost {
  double compound = 0.0;
  double readability = 0.0;
  bool readability_degenerate = false;
  std::array<double, kEmotionCount> emotions{};  // order: kEmotionNames
  double offensive = 0.0;
  bool external_defaulted = false;     // no external row; neutral fallback
  bool external_renormalized = false;  // row present but rescaled to sum 1
};

}  // namespace csei
