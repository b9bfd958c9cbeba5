#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "csei/csv.hpp"
#include "csei/date.hpp"
#include "csei/errors.hpp"
#include "csei/posts.hpp"
#include "csei/text.hpp"

namespace csei {

enum class PostFormat { csv, jsonl };

inline std::optional<PostFormat> parse_post_format(std::string_view s) {
  if (s == "csv") return PostFormat::csv;
  if (s == "jsonl") return PostFormat::jsonl;
  return std::nullopt;
}

struct ParseResult {
  std::vector<RawPost> posts;
  std::uint64_t malformed = 0;
  std::vector<std::string> malformed_notes;  // first few, for the run report
};

namespace detail {

inline constexpr std::size_t kMaxMalformedNotes = 20;

inline void note_malformed(ParseResult& out, std::string msg) {
  ++out.malformed;
  if (out.malformed_notes.size() < kMaxMalformedNotes) {
    out.malformed_notes.push_back(std::move(msg));
  }
}

inline bool parse_bool_field(std::string_view raw, bool& out) {
  const std::string v = to_lower(trim(raw));
  if (v == "true" || v == "1" || v == "t" || v == "yes") {
    out = true;
    return true;
  }
  if (v == "false" || v == "0" || v == "f" || v == "no" || v.empty()) {
    out = false;
    return true;
  }
  return false;
}

// Dumps sometimes carry integer fields as floats ("1.6e9", "12.0").
inline bool parse_int_field(std::string_view raw, std::int64_t& out) {
  const std::string_view v = trim(raw);
  if (parse_int64(v, out)) return true;
  double d = 0.0;
  if (!parse_double(v, d)) return false;
  if (!std::isfinite(d) || d != std::floor(d)) return false;
  if (d < -9.2e18 || d > 9.2e18) return false;
  out = static_cast<std::int64_t>(d);
  return true;
}

// Table 1 header names with their accepted aliases.
struct ColumnSpec {
  const char* canonical;
  const char* alias;  // nullptr when none
};

inline constexpr ColumnSpec kColumns[] = {
    {"id", nullptr},
    {"type", nullptr},
    {"subreddit.name", "subreddit_name"},
    {"subreddit.nsfw", "subreddit_nsfw"},
    {"created_utc", nullptr},
    {"domain", nullptr},
    {"url", nullptr},
    {"selftext", nullptr},
    {"title", nullptr},
    {"score", nullptr},
};

inline bool fill_post_fields(RawPost& p, const std::string& name,
                             const std::string& value, std::string& bad_field) {
  if (name == "id") {
    p.id = value;
  } else if (name == "type") {
    p.type = value;
  } else if (name == "subreddit.name") {
    p.subreddit_name = value;
  } else if (name == "subreddit.nsfw") {
    if (!parse_bool_field(value, p.nsfw)) {
      bad_field = "subreddit.nsfw";
      return false;
    }
  } else if (name == "created_utc") {
    if (!parse_int_field(value, p.created_utc)) {
      bad_field = "created_utc";
      return false;
    }
  } else if (name == "domain") {
    p.domain = value;
  } else if (name == "url") {
    p.url = value;
  } else if (name == "selftext") {
    p.selftext = value;
  } else if (name == "title") {
    p.title = value;
  } else if (name == "score") {
    if (!parse_int_field(value, p.score)) {
      bad_field = "score";
      return false;
    }
  }
  return true;
}

inline void parse_posts_csv(std::istream& in, ParseResult& out) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) {
    throw Error(ErrorKind::schema, "posts file is empty; expected header row");
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::string name(trim(fields[i]));
    for (const ColumnSpec& col : kColumns) {
      if (col.alias != nullptr && name == col.alias) name = col.canonical;
    }
    index.emplace(std::move(name), i);
  }
  std::string missing;
  for (const ColumnSpec& col : kColumns) {
    if (!index.contains(col.canonical)) {
      if (!missing.empty()) missing += ", ";
      missing += col.canonical;
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorKind::schema, "posts header missing columns: " + missing);
  }
  const std::size_t width = fields.size();

  std::unordered_set<std::string> seen_ids;
  std::uint64_t row = 1;  // header was row 1
  while (read_csv_record(in, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (fields.size() != width) {
      note_malformed(out, "row " + std::to_string(row) + ": expected " +
                              std::to_string(width) + " fields, got " +
                              std::to_string(fields.size()));
      continue;
    }
    RawPost p;
    std::string bad_field;
    bool ok = true;
    for (const ColumnSpec& col : kColumns) {
      const std::size_t i = index.at(col.canonical);
      if (!fill_post_fields(p, col.canonical, fields[i], bad_field)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      note_malformed(out, "row " + std::to_string(row) +
                              ": unparseable field " + bad_field);
      continue;
    }
    if (p.id.empty()) {
      note_malformed(out, "row " + std::to_string(row) + ": empty id");
      continue;
    }
    if (!seen_ids.insert(p.id).second) {
      note_malformed(out, "row " + std::to_string(row) + ": duplicate id " +
                              p.id);
      continue;
    }
    out.posts.push_back(std::move(p));
  }
}

inline const nlohmann::json* find_json_field(const nlohmann::json& obj,
                                             std::string_view canonical) {
  if (auto it = obj.find(canonical); it != obj.end()) return &*it;
  // subreddit.name is also accepted nested or with underscores
  const std::size_t dot = canonical.find('.');
  if (dot != std::string_view::npos) {
    const std::string head(canonical.substr(0, dot));
    const std::string tail(canonical.substr(dot + 1));
    if (auto h = obj.find(head); h != obj.end() && h->is_object()) {
      if (auto t = h->find(tail); t != h->end()) return &*t;
    }
    std::string flat = head + "_" + tail;
    if (auto it = obj.find(flat); it != obj.end()) return &*it;
  }
  return nullptr;
}

inline bool json_to_string(const nlohmann::json& v, std::string& out) {
  if (v.is_string()) {
    out = v.get<std::string>();
    return true;
  }
  if (v.is_null()) {
    out.clear();
    return true;
  }
  return false;
}

inline bool json_to_int(const nlohmann::json& v, std::int64_t& out) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    out = v.get<std::int64_t>();
    return true;
  }
  if (v.is_number_float()) {
    return parse_int_field(nlohmann::json(v).dump(), out);
  }
  if (v.is_string()) return parse_int_field(v.get<std::string>(), out);
  return false;
}

inline bool json_to_bool(const nlohmann::json& v, bool& out) {
  if (v.is_boolean()) {
    out = v.get<bool>();
    return true;
  }
  if (v.is_number_integer() || v.is_number_unsigned()) {
    const auto n = v.get<std::int64_t>();
    if (n == 0 || n == 1) {
      out = n == 1;
      return true;
    }
    return false;
  }
  if (v.is_string()) return parse_bool_field(v.get<std::string>(), out);
  if (v.is_null()) {
    out = false;
    return true;
  }
  return false;
}

inline void parse_posts_jsonl(std::istream& in, ParseResult& out) {
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::uint64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      note_malformed(out, "line " + std::to_string(row) + ": not a JSON object");
      continue;
    }
    RawPost p;
    std::string problem;
    for (const ColumnSpec& col : kColumns) {
      const nlohmann::json* v = find_json_field(obj, col.canonical);
      if (v == nullptr) {
        problem = std::string("missing key ") + col.canonical;
        break;
      }
      bool ok = true;
      const std::string name = col.canonical;
      if (name == "created_utc") {
        ok = json_to_int(*v, p.created_utc);
      } else if (name == "score") {
        ok = json_to_int(*v, p.score);
      } else if (name == "subreddit.nsfw") {
        ok = json_to_bool(*v, p.nsfw);
      } else {
        std::string s;
        ok = json_to_string(*v, s);
        if (ok) {
          std::string bad;
          fill_post_fields(p, name, s, bad);
        }
      }
      if (!ok) {
        problem = std::string("unparseable key ") + col.canonical;
        break;
      }
    }
    if (!problem.empty()) {
      note_malformed(out, "line " + std::to_string(row) + ": " + problem);
      continue;
    }
    if (p.id.empty()) {
      note_malformed(out, "line " + std::to_string(row) + ": empty id");
      continue;
    }
    if (!seen_ids.insert(p.id).second) {
      note_malformed(out, "line " + std::to_string(row) + ": duplicate id " +
                              p.id);
      continue;
    }
    out.posts.push_back(std::move(p));
  }
}

}  // namespace detail

// Reads RawPost records in input order. Malformed records are counted and
// skipped; a missing header column (CSV) is a schema error.
inline ParseResult parse_posts(std::istream& in, PostFormat format) {
  if (!in.good()) throw Error(ErrorKind::io, "posts stream is not readable");
  ParseResult out;
  if (format == PostFormat::csv) {
    detail::parse_posts_csv(in, out);
  } else {
    detail::parse_posts_jsonl(in, out);
  }
  return out;
}

inline bool is_deleted(const RawPost& post) {
  const std::string_view body = trim(post.selftext);
  return body == "[deleted]" || body == "[removed]";
}

inline bool is_bot(const RawPost& post) {
  return contains_ci(post.selftext, "i am a bot") ||
         contains_ci(post.title, "i am a bot");
}

inline bool in_date_window(const CleanPost& post, Date min_date,
                           Date max_date) {
  return min_date <= post.post_date && post.post_date <= max_date;
}

// One counter per removal rule; a post lands in exactly one bucket, decided
// in the order the rules run: deleted/removed, bot, non-English, window.
struct FilterCounts {
  std::uint64_t ingested = 0;
  std::uint64_t deleted = 0;
  std::uint64_t removed = 0;
  std::uint64_t bot = 0;
  std::uint64_t non_english = 0;
  std::uint64_t out_of_window = 0;
  std::uint64_t survivors = 0;

  bool balanced() const {
    return ingested ==
           survivors + deleted + removed + bot + non_english + out_of_window;
  }
};

struct FilterResult {
  std::vector<CleanPost> survivors;
  FilterCounts counts;
};

// English coverage is checked against lexicon tokens plus stopwords, per the
// preprocessing description; stopwords are already stripped by clean_text so
// they only matter through the emptiness rule.
inline FilterResult filter_posts(const std::vector<RawPost>& posts,
                                 const std::unordered_set<std::string>& stopwords,
                                 const std::unordered_set<std::string>& english_lexicon,
                                 double english_threshold, Date min_date,
                                 Date max_date) {
  FilterResult out;
  out.counts.ingested = posts.size();
  for (const RawPost& raw : posts) {
    if (is_deleted(raw)) {
      if (trim(raw.selftext) == "[deleted]") {
        ++out.counts.deleted;
      } else {
        ++out.counts.removed;
      }
      continue;
    }
    if (is_bot(raw)) {
      ++out.counts.bot;
      continue;
    }
    CleanPost post;
    static_cast<RawPost&>(post) = raw;
    post.clean_text = clean_text(raw.title + " " + raw.selftext, stopwords);
    post.post_date = Date::from_unix_seconds(raw.created_utc);
    if (!is_english(post.clean_text, english_lexicon, english_threshold)) {
      ++out.counts.non_english;
      continue;
    }
    if (!in_date_window(post, min_date, max_date)) {
      ++out.counts.out_of_window;
      continue;
    }
    ++out.counts.survivors;
    out.survivors.push_back(std::move(post));
  }
  return out;
}

// The clean-posts stage artifact: all raw fields plus clean_text/post_date.
inline const std::vector<std::string>& clean_posts_header() {
  static const std::vector<std::string> header = {
      "id",    "type",     "subreddit.name", "subreddit.nsfw",
      "created_utc", "domain", "url",        "selftext",
      "title", "score",    "clean_text",     "post_date"};
  return header;
}

inline void write_clean_posts(std::ostream& os,
                              const std::vector<CleanPost>& posts) {
  write_csv_row(os, clean_posts_header());
  std::vector<std::string> row(12);
  for (const CleanPost& p : posts) {
    row[0] = p.id;
    row[1] = p.type;
    row[2] = p.subreddit_name;
    row[3] = p.nsfw ? "true" : "false";
    row[4] = std::to_string(p.created_utc);
    row[5] = p.domain;
    row[6] = p.url;
    row[7] = p.selftext;
    row[8] = p.title;
    row[9] = std::to_string(p.score);
    row[10] = p.clean_text;
    row[11] = p.post_date.to_string();
    write_csv_row(os, row);
  }
}

// Strict reader for the artifact we wrote ourselves: any defect is an error,
// not a malformed-count, because this file is pipeline-internal.
inline std::vector<CleanPost> read_clean_posts(std::istream& in) {
  std::vector<std::string> fields;
  if (!read_csv_record(in, fields)) {
    throw Error(ErrorKind::schema, "clean-posts file is empty");
  }
  if (fields != clean_posts_header()) {
    throw Error(ErrorKind::schema, "clean-posts header mismatch");
  }
  std::vector<CleanPost> posts;
  std::uint64_t row = 1;
  while (read_csv_record(in, fields)) {
    ++row;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 12) {
      throw Error(ErrorKind::schema, "clean-posts row " + std::to_string(row) +
                                         ": wrong field count");
    }
    CleanPost p;
    p.id = fields[0];
    p.type = fields[1];
    p.subreddit_name = fields[2];
    bool ok = detail::parse_bool_field(fields[3], p.nsfw);
    ok = ok && parse_int64(fields[4], p.created_utc);
    p.domain = fields[5];
    p.url = fields[6];
    p.selftext = fields[7];
    p.title = fields[8];
    ok = ok && parse_int64(fields[9], p.score);
    p.clean_text = fields[10];
    const std::optional<Date> d = Date::parse(fields[11]);
    if (!ok || !d) {
      throw Error(ErrorKind::schema, "clean-posts row " + std::to_string(row) +
                                         ": unparseable field");
    }
    p.post_date = *d;
    posts.push_back(std::move(p));
  }
  return posts;
}

}  // namespace csei
