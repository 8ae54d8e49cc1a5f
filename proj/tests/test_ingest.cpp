#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "remine/errors.hpp"
#include "remine/ingest.hpp"

using namespace remine::ingest;

namespace {

Corpus corpus_from(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return parse_dump(in, "test.jsonl");
}

RawPost make_post(const std::string& id, std::int64_t ts,
                  const std::string& body) {
  RawPost p;
  p.id = id;
  p.created_utc = ts;
  p.body = body;
  return p;
}

}  // namespace

TEST_CASE("parse_dump maps valid lines in order") {
  const auto c = corpus_from(
      R"({"id":"a","kind":"post","created_utc":100,"body":"first","title":"t"})"
      "\n"
      R"({"id":"b","kind":"comment","parent_id":"a","created_utc":101,"body":"second"})"
      "\n");
  REQUIRE(c.records.size() == 2);
  CHECK(c.records[0].id == "a");
  CHECK(c.records[1].id == "b");
  CHECK(c.records[0].kind == PostKind::post);
  CHECK(c.records[1].kind == PostKind::comment);
  CHECK(c.records[1].parent_id == "a");
  CHECK(c.post_count() == 1);
  CHECK(c.comment_count() == 1);
}

TEST_CASE("parse_dump skips and reports malformed lines") {
  std::istringstream in(
      R"({"id":"a","kind":"post","created_utc":100,"body":"ok"})"
      "\n"
      R"({"id":"b","kind":"post","created_utc":100})"
      "\n");
  ParseReport report;
  const auto c = parse_dump(in, "test.jsonl", &report);
  CHECK(c.records.size() == 1);
  CHECK(report.lines == 2);
  CHECK(report.parsed == 1);
  CHECK(report.skipped == 1);
  REQUIRE(report.skip_messages.size() == 1);
  CHECK(report.skip_messages[0].find("test.jsonl:2") != std::string::npos);
  CHECK(report.parsed + report.skipped == report.lines);
}

TEST_CASE("parse_dump fixture with parent links") {
  std::string dump;
  for (int i = 0; i < 10; ++i)
    dump += R"({"id":"p)" + std::to_string(i) +
            R"(","kind":"post","created_utc":100,"body":"post"})" "\n";
  for (int i = 0; i < 5; ++i)
    dump += R"({"id":"c)" + std::to_string(i) + R"(","kind":"comment","parent_id":"p)" +
            std::to_string(i) + R"(","created_utc":101,"body":"comment"})" "\n";
  const auto c = corpus_from(dump);
  CHECK(c.records.size() == 15);
  CHECK(c.post_count() == 10);
  CHECK(c.comment_count() == 5);
  CHECK(resolved_parent_links(c) == 5);
}

TEST_CASE("parse_dump rejects dumps that are mostly malformed") {
  std::istringstream in(
      "not json\n"
      "also not json\n"
      R"({"id":"a","kind":"post","created_utc":100,"body":"ok"})"
      "\n");
  CHECK_THROWS_AS(parse_dump(in, "bad.jsonl"), remine::validation_error);
  std::istringstream in2("not json\nalso not json\n");
  try {
    parse_dump(in2, "bad.jsonl");
    FAIL("expected validation_error");
  } catch (const remine::validation_error& e) {
    CHECK(std::string(e.what()).find("bad.jsonl:1") != std::string::npos);
  }
}

TEST_CASE("parse_dump treats duplicate ids and bad fields as skips") {
  std::string dump =
      R"({"id":"a","kind":"post","created_utc":100,"body":"x"})" "\n"
      R"({"id":"a","kind":"post","created_utc":100,"body":"x"})" "\n"
      R"({"id":"b","kind":"comment","created_utc":100,"body":"no parent"})" "\n"
      R"({"id":"c","kind":"post","created_utc":0,"body":"bad ts"})" "\n"
      R"({"id":"d","kind":"weird","created_utc":100,"body":"bad kind"})" "\n";
  for (int i = 0; i < 5; ++i)
    dump += R"({"id":"ok)" + std::to_string(i) +
            R"(","kind":"post","created_utc":100,"body":"ok"})" "\n";
  std::istringstream in(dump);
  ParseReport report;
  const auto c = parse_dump(in, "dups.jsonl", &report);
  CHECK(c.records.size() == 6);  // a (first occurrence) and the five ok rows
  CHECK(report.skipped == 4);
  CHECK(report.parsed + report.skipped == report.lines);
}

TEST_CASE("filter_window keeps the half-open interval") {
  Corpus c;
  c.records = {make_post("a", 99, "x"), make_post("b", 100, "x"),
               make_post("c", 150, "x"), make_post("d", 200, "x")};

  const auto out = filter_window(c, 100, 200);
  REQUIRE(out.records.size() == 2);
  CHECK(out.records[0].id == "b");   // start inclusive
  CHECK(out.records[1].id == "c");   // end exclusive: d at 200 dropped
  REQUIRE(out.window.has_value());
  CHECK(out.window->first == 100);
  CHECK(out.window->second == 200);

  SUBCASE("identity when everything is inside") {
    const auto all = filter_window(c, 0, 1000);
    CHECK(all.records.size() == c.records.size());
  }
  SUBCASE("empty when nothing overlaps") {
    CHECK(filter_window(c, 1000, 2000).records.empty());
  }
  SUBCASE("idempotent for the same bounds") {
    const auto twice = filter_window(out, 100, 200);
    CHECK(twice.records.size() == out.records.size());
  }
  SUBCASE("inverted bounds rejected") {
    CHECK_THROWS_AS(filter_window(c, 200, 100), remine::argument_error);
    CHECK_THROWS_AS(filter_window(c, 100, 100), remine::argument_error);
  }
}

TEST_CASE("filter_relevant whole-token matching") {
  RelevanceLexicon lex;
  lex.terms = {"lockdown", "covid-19", "online exam"};

  Corpus c;
  c.records = {
      make_post("keep1", 1, "Any update on the lockdown?"),
      make_post("drop1", 1, "I covidly agree"),           // substring only
      make_post("keep2", 1, "they moved the online exam"),
      make_post("drop2", 1, "online courses and one exam"),  // not consecutive
      make_post("keep3", 1, "worried about covid-19 cases"),
      make_post("keep4", 1, "worried about covid 19 cases"),  // space-joined
      make_post("drop3", 1, "nothing relevant here"),
  };
  const auto out = filter_relevant(c, lex);
  std::vector<std::string> kept;
  for (const auto& r : out.records) kept.push_back(r.id);
  CHECK(kept == std::vector<std::string>{"keep1", "keep2", "keep3", "keep4"});

  SUBCASE("title participates in matching") {
    Corpus titled;
    RawPost p = make_post("t1", 1, "no match in body");
    p.title = "Lockdown announcement";
    titled.records = {p};
    CHECK(filter_relevant(titled, lex).records.size() == 1);
  }
  SUBCASE("applying twice equals applying once") {
    const auto twice = filter_relevant(out, lex);
    CHECK(twice.records.size() == out.records.size());
  }
  SUBCASE("empty lexicon rejected") {
    CHECK_THROWS_AS(filter_relevant(c, RelevanceLexicon{}),
                    remine::argument_error);
  }
}

TEST_CASE("shipped relevance lexicon has the 23 documented terms") {
  const auto lex =
      load_relevance_lexicon(testhelp::data_file("covid_keywords.txt"));
  CHECK(lex.terms.size() == 23);
  const std::vector<std::string> expected = {
      "virus",    "covid-19",    "covid19",       "covid",    "pandemic",
      "corona",   "symptoms",    "flu",           "screening", "exposure",
      "health",   "accommodation", "online exam", "online test", "cases",
      "lockdown", "quarantine",  "isolation",     "infected", "outbreak",
      "medical",  "antigen",     "pcr"};
  CHECK(lex.terms == expected);
}
