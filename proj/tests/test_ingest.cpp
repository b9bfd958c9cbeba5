#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <unordered_set>

#include "csei/ingest.hpp"

using csei::Date;
using csei::Error;
using csei::ErrorKind;
using csei::parse_posts;
using csei::ParseResult;
using csei::PostFormat;
using csei::RawPost;

namespace {

const char* kHeader =
    "type,id,subreddit.id,subreddit.name,subreddit.nsfw,created_utc,"
    "permalink,domain,url,selftext,title,score\n";

std::string row(const std::string& id, const std::string& selftext,
                const std::string& title, std::int64_t utc = 1583496000,
                std::int64_t score = 10) {
  std::ostringstream os;
  csei::write_csv_row(os, {"rs", id, "t5_1", "Coronavirus", "false",
                           std::to_string(utc), "/r/x", "reddit.com", "",
                           selftext, title, std::to_string(score)});
  return os.str();
}

ParseResult parse_csv(const std::string& body) {
  std::istringstream in(body);
  return parse_posts(in, PostFormat::csv);
}

}  // namespace

TEST_CASE("csv posts parse with extra and aliased columns") {
  std::istringstream in(
      "subreddit_name,id,type,subreddit_nsfw,created_utc,domain,url,selftext,"
      "title,score,extra\n"
      "Coronavirus,abc,rs,true,1583496000,reddit.com,,body text,Title "
      "here,42,ignored\n");
  const ParseResult out = parse_posts(in, PostFormat::csv);
  REQUIRE(out.posts.size() == 1);
  CHECK(out.malformed == 0);
  const RawPost& p = out.posts[0];
  CHECK(p.id == "abc");
  CHECK(p.subreddit_name == "Coronavirus");
  CHECK(p.nsfw);
  CHECK(p.created_utc == 1583496000);
  CHECK(p.score == 42);
  CHECK(p.title == "Title here");
}

TEST_CASE("csv quoting survives commas, quotes and newlines") {
  const std::string body = std::string(kHeader) +
                           row("q1", "line one\nline two, with comma",
                               "say \"hi\" now");
  const ParseResult out = parse_csv(body);
  REQUIRE(out.posts.size() == 1);
  CHECK(out.posts[0].selftext == "line one\nline two, with comma");
  CHECK(out.posts[0].title == "say \"hi\" now");
}

TEST_CASE("missing required columns is a schema error naming them") {
  std::istringstream in("id,type,title\na,rs,t\n");
  try {
    parse_posts(in, PostFormat::csv);
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::schema);
    CHECK(std::string(e.what()).find("created_utc") != std::string::npos);
    CHECK(std::string(e.what()).find("selftext") != std::string::npos);
  }
}

TEST_CASE("empty posts file is a schema error") {
  std::istringstream in("");
  CHECK_THROWS_AS(parse_posts(in, PostFormat::csv), Error);
}

TEST_CASE("malformed csv rows are counted, not fatal") {
  std::string body(kHeader);
  body += row("ok1", "text", "title");
  body += "rs,bad1,t5,Coronavirus,false,notanumber,/r/x,d,,s,t,5\n";  // utc
  body += "rs,bad2,t5,Coronavirus,maybe,1583496000,/r/x,d,,s,t,5\n";  // nsfw
  body += "rs,bad3,t5,Coronavirus,false,1583496000,/r/x,d,,s,t,xx\n"; // score
  body += "rs,,t5,Coronavirus,false,1583496000,/r/x,d,,s,t,5\n";      // id
  body += "too,few,fields\n";
  body += row("ok1", "dup", "dup");  // duplicate id
  body += row("ok2", "text", "title");
  const ParseResult out = parse_csv(body);
  CHECK(out.posts.size() == 2);
  CHECK(out.malformed == 6);
  REQUIRE(out.malformed_notes.size() == 6);
  CHECK(out.malformed_notes[0].find("created_utc") != std::string::npos);
  CHECK(out.malformed_notes[5].find("duplicate id") != std::string::npos);
}

TEST_CASE("integral created_utc accepts float-formatted values") {
  std::string body(kHeader);
  body += row("f1", "text", "title");
  body.replace(body.find("1583496000"), 10, "1583496000.0");
  const ParseResult out = parse_csv(body);
  REQUIRE(out.posts.size() == 1);
  CHECK(out.posts[0].created_utc == 1583496000);
}

TEST_CASE("jsonl posts parse nested and flat key spellings") {
  std::istringstream in(
      "{\"id\":\"j1\",\"type\":\"rs\",\"subreddit\":{\"name\":\"covid\","
      "\"nsfw\":false},\"created_utc\":1583496000,\"domain\":\"d\",\"url\":"
      "\"\",\"selftext\":\"body\",\"title\":\"t\",\"score\":3}\n"
      "\n"
      "{\"id\":\"j2\",\"type\":\"rs\",\"subreddit_name\":\"covid\","
      "\"subreddit_nsfw\":\"true\",\"created_utc\":\"1583496001\","
      "\"domain\":\"d\",\"url\":null,\"selftext\":\"b\",\"title\":\"t\","
      "\"score\":4.0}\n"
      "not json\n"
      "[1,2,3]\n"
      "{\"id\":\"j3\",\"type\":\"rs\"}\n");
  const ParseResult out = parse_posts(in, PostFormat::jsonl);
  REQUIRE(out.posts.size() == 2);
  CHECK(out.malformed == 3);
  CHECK(out.posts[0].id == "j1");
  CHECK_FALSE(out.posts[0].nsfw);
  CHECK(out.posts[1].nsfw);
  CHECK(out.posts[1].created_utc == 1583496001);
  CHECK(out.posts[1].score == 4);
  CHECK(out.posts[1].url.empty());
}

TEST_CASE("filters bucket posts in rule order") {
  std::vector<RawPost> posts;
  auto push = [&](const std::string& id, const std::string& selftext,
                  const std::string& title, std::int64_t utc) {
    RawPost p;
    p.id = id;
    p.selftext = selftext;
    p.title = title;
    p.created_utc = utc;
    posts.push_back(p);
  };
  const std::int64_t in_window =
      static_cast<std::int64_t>(Date::parse("2020-03-05")->days) * 86400;
  const std::int64_t before =
      static_cast<std::int64_t>(Date::parse("2020-01-01")->days) * 86400;
  push("d1", "[deleted]", "hope cases", in_window);
  push("d2", "  [removed] ", "hope cases", in_window);
  // Deletion wins over the bot rule; the bucket is decided by rule order.
  push("d3", "[deleted]", "I am a bot", in_window);
  push("b1", "I am a Bot, beep", "hope cases", in_window);
  push("b2", "ok text", "I AM A BOT in title", in_window);
  push("n1", "zz yy xx ww", "vv uu", in_window);
  push("w1", "hope cases virus", "hope cases", before);
  push("s1", "hope cases virus", "hope cases", in_window);
  push("s2", "hope the cases", "virus hope", in_window);

  const std::unordered_set<std::string> stop = {"the"};
  const std::unordered_set<std::string> english = {"hope", "cases", "virus"};
  const csei::FilterResult out =
      csei::filter_posts(posts, stop, english, 0.5, *Date::parse("2020-02-11"),
                         *Date::parse("2021-10-25"));
  CHECK(out.counts.ingested == 9);
  CHECK(out.counts.deleted == 2);
  CHECK(out.counts.removed == 1);
  CHECK(out.counts.bot == 2);
  CHECK(out.counts.non_english == 1);
  CHECK(out.counts.out_of_window == 1);
  CHECK(out.counts.survivors == 2);
  CHECK(out.counts.balanced());
  REQUIRE(out.survivors.size() == 2);
  CHECK(out.survivors[0].id == "s1");
  CHECK(out.survivors[0].clean_text == "hope cases hope cases virus");
  CHECK(out.survivors[0].post_date == *Date::parse("2020-03-05"));
  // Stopwords vanish from clean_text but posts stay English.
  CHECK(out.survivors[1].clean_text == "virus hope hope cases");
}

TEST_CASE("date window boundaries are inclusive") {
  std::vector<RawPost> posts;
  for (const char* day : {"2020-02-10", "2020-02-11", "2021-10-25",
                          "2021-10-26"}) {
    RawPost p;
    p.id = day;
    p.selftext = "hope";
    p.title = "cases";
    p.created_utc = static_cast<std::int64_t>(Date::parse(day)->days) * 86400;
    posts.push_back(p);
  }
  const csei::FilterResult out = csei::filter_posts(
      posts, {}, {"hope", "cases"}, 0.5, *Date::parse("2020-02-11"),
      *Date::parse("2021-10-25"));
  CHECK(out.counts.out_of_window == 2);
  REQUIRE(out.survivors.size() == 2);
  CHECK(out.survivors[0].id == "2020-02-11");
  CHECK(out.survivors[1].id == "2021-10-25");
}

TEST_CASE("clean posts artifact round-trips") {
  std::vector<RawPost> raw;
  RawPost p;
  p.id = "r1";
  p.type = "rs";
  p.subreddit_name = "covid";
  p.nsfw = true;
  p.created_utc =
      static_cast<std::int64_t>(Date::parse("2020-03-05")->days) * 86400 + 60;
  p.domain = "a.com";
  p.url = "https://a.com/x";
  p.selftext = "hope, cases\nand \"virus\"";
  p.title = "hope cases";
  p.score = -4;
  raw.push_back(p);
  const csei::FilterResult filtered = csei::filter_posts(
      raw, {}, {"hope", "cases", "virus"}, 0.3, *Date::parse("2020-02-11"),
      *Date::parse("2021-10-25"));
  REQUIRE(filtered.survivors.size() == 1);

  std::ostringstream os;
  csei::write_clean_posts(os, filtered.survivors);
  std::istringstream in(os.str());
  const std::vector<csei::CleanPost> back = csei::read_clean_posts(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].id == "r1");
  CHECK(back[0].nsfw);
  CHECK(back[0].created_utc == p.created_utc);
  CHECK(back[0].selftext == p.selftext);
  CHECK(back[0].score == -4);
  CHECK(back[0].clean_text == filtered.survivors[0].clean_text);
  CHECK(back[0].post_date == *Date::parse("2020-03-05"));
}

TEST_CASE("clean posts reader rejects defects outright") {
  std::istringstream empty("");
  CHECK_THROWS_AS(csei::read_clean_posts(empty), Error);

  std::istringstream bad_header("id,nope\n");
  CHECK_THROWS_AS(csei::read_clean_posts(bad_header), Error);

  std::ostringstream os;
  csei::write_clean_posts(os, {});
  std::string body = os.str();
  body += "x,rs,s,false,12,d,u,s,t,notint,c,2020-03-05\n";
  std::istringstream bad_row(body);
  CHECK_THROWS_AS(csei::read_clean_posts(bad_row), Error);
}
