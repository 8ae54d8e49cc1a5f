#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "remine/io.hpp"

// Exercises the installed command surface end to end: stage chaining through
// files, documented exit codes, and the JSON outputs.

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log =
      fs::temp_directory_path() /
      ("remine_cli_" + std::to_string(::getpid()) + "_" +
       std::to_string(counter++) + ".log");
  const std::string cmd =
      std::string(REMINE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = rc == -1 ? -1 : (WIFEXITED(rc) ? WEXITSTATUS(rc) : -1);
  std::ifstream in(log);
  std::ostringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  fs::remove(log);
  return result;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("remine_cli_dir_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("cli exit codes per error class") {
  TempDir dir;
  SUBCASE("missing input file is exit 2") {
    const auto r = run_cli("sentences --in " + dir.file("absent.jsonl") +
                           " --out " + dir.file("out.jsonl"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("missing input") != std::string::npos);
  }
  SUBCASE("schema mismatch is exit 3") {
    // a sentences-schema file fed to a stage expecting corpus schema
    write(dir.file("wrong.jsonl"),
          "{\"_schema\":\"sentences\",\"_version\":1}\n");
    const auto r = run_cli("sentences --in " + dir.file("wrong.jsonl") +
                           " --out " + dir.file("out.jsonl"));
    CHECK(r.exit_code == 3);
    // a JSON-lines intermediate fed to report is a schema error, not bad JSON
    write(dir.file("lines.jsonl"),
          "{\"_schema\":\"sentences\",\"_version\":1}\n{\"doc_id\":\"a\"}\n");
    const auto rep = run_cli("report --in " + dir.file("lines.jsonl") +
                             " --out " + dir.file("x.txt"));
    CHECK(rep.exit_code == 3);
  }
  SUBCASE("validation failure is exit 4") {
    write(dir.file("corpus.jsonl"),
          "{\"_schema\":\"corpus\",\"_version\":1,\"window\":null,"
          "\"provenance\":[]}\n"
          "{\"id\":\"p1\",\"kind\":\"post\",\"created_utc\":100,"
          "\"title\":\"Need help?\",\"body\":\"We need options.\","
          "\"score\":0}\n");
    const auto sentences = run_cli("sentences --in " + dir.file("corpus.jsonl") +
                                   " --out " + dir.file("s.jsonl"));
    REQUIRE(sentences.exit_code == 0);
    const auto tagged = run_cli("tag --in " + dir.file("s.jsonl") + " --out " +
                                dir.file("t.jsonl"));
    REQUIRE(tagged.exit_code == 0);
    const auto exported = run_cli("label-export --in " + dir.file("t.jsonl") +
                                  " --fraction 1.0 --seed 1 --out " +
                                  dir.file("tasks.csv"));
    REQUIRE(exported.exit_code == 0);
    write(dir.file("votes.csv"), "task_id,worker_id,vote\np1#0,w1,maybe\n");
    const auto merged = run_cli(
        "label-merge --in " + dir.file("t.jsonl") + " --tasks " +
        dir.file("tasks.csv") + " --votes " + dir.file("votes.csv") +
        " --out " + dir.file("l.jsonl"));
    CHECK(merged.exit_code == 4);
    CHECK(merged.output.find("maybe") != std::string::npos);
  }
}

TEST_CASE("cli rouge emits JSON scores for n 1..4") {
  TempDir dir;
  write(dir.file("cand.txt"), "the cat sat on the mat\n");
  write(dir.file("ref.txt"), "the cat sat on a mat\n");
  const auto r = run_cli("rouge --cand " + dir.file("cand.txt") + " --ref " +
                         dir.file("ref.txt"));
  REQUIRE(r.exit_code == 0);
  const auto j = ojson::parse(r.output);
  for (int n = 1; n <= 4; ++n) {
    const std::string key = "rouge-" + std::to_string(n);
    REQUIRE(j.contains(key));
    CHECK(j[key]["f1"].get<double>() <= 1.0);
  }
  CHECK(j["rouge-1"]["recall"].get<double>() == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("cli ingest -> sentences -> summarize chain") {
  TempDir dir;
  std::ostringstream dump;
  dump << R"({"id":"p1","kind":"post","created_utc":1600000000,"title":)"
       << R"("Covid question about the gym.","body":)"
       << R"("Can we open the gym during the lockdown? The gym was busy. )"
       << R"(The gym stayed busy all week.","score":3})" << "\n";
  dump << R"({"id":"p2","kind":"post","created_utc":1000,"title":"too old",)"
       << R"("body":"covid before the window","score":0})" << "\n";
  dump << R"({"id":"p3","kind":"post","created_utc":1600000000,)"
       << R"("body":"nothing relevant in here","score":0})" << "\n";
  write(dir.file("dump.jsonl"), dump.str());

  const auto ingest = run_cli(
      "ingest --dump " + dir.file("dump.jsonl") +
      " --from 2020-03-01 --to 2021-09-01 --out " + dir.file("corpus.jsonl"));
  REQUIRE(ingest.exit_code == 0);

  const auto corpus = remine::io::read_jsonl(dir.file("corpus.jsonl"), "corpus", 1);
  REQUIRE(corpus.records.size() == 1);  // window and relevance filters applied
  CHECK(corpus.records[0]["id"] == "p1");

  const auto sentences = run_cli("sentences --in " + dir.file("corpus.jsonl") +
                                 " --out " + dir.file("s.jsonl"));
  REQUIRE(sentences.exit_code == 0);
  const auto s = remine::io::read_jsonl(dir.file("s.jsonl"), "sentences", 1);
  REQUIRE(s.records.size() == 4);  // title + three body sentences
  CHECK(s.records[0]["raw"] == "Covid question about the gym.");
  CHECK(s.records[0]["sent_index"] == 0);
  CHECK(s.records[3]["sent_index"] == 3);

  const auto summarize =
      run_cli("summarize --method textrank --ratio 0.5 --in " +
              dir.file("s.jsonl") + " --out " + dir.file("sum.jsonl"));
  REQUIRE(summarize.exit_code == 0);
  const auto sum = remine::io::read_jsonl(dir.file("sum.jsonl"), "sentences", 1);
  CHECK(sum.records.size() == 2);  // round(0.5 * 4)
}

TEST_CASE("cli train writes a versioned model file") {
  TempDir dir;
  // tiny labeled corpus through the real stages
  std::ostringstream dump;
  for (int i = 0; i < 12; ++i) {
    const bool req = i % 2 == 0;
    dump << R"({"id":"p)" << i << R"(","kind":"post","created_utc":1600000000,)"
         << R"("body":")"
         << (req ? "We really need covid options here."
                 : "The covid lecture was quiet.")
         << R"(","score":0})" << "\n";
  }
  write(dir.file("dump.jsonl"), dump.str());
  REQUIRE(run_cli("ingest --dump " + dir.file("dump.jsonl") + " --out " +
                  dir.file("c.jsonl")).exit_code == 0);
  REQUIRE(run_cli("sentences --in " + dir.file("c.jsonl") + " --out " +
                  dir.file("s.jsonl")).exit_code == 0);
  REQUIRE(run_cli("tag --in " + dir.file("s.jsonl") + " --out " +
                  dir.file("t.jsonl")).exit_code == 0);
  REQUIRE(run_cli("label-export --in " + dir.file("t.jsonl") +
                  " --fraction 1.0 --seed 2 --out " + dir.file("tasks.csv"))
              .exit_code == 0);
  std::ostringstream votes;
  votes << "task_id,worker_id,vote\n";
  for (int i = 0; i < 12; ++i)
    for (int w = 1; w <= 3; ++w)
      votes << "p" << i << "#0,w" << w << "," << (i % 2 == 0 ? "yes" : "no")
            << "\n";
  write(dir.file("votes.csv"), votes.str());
  REQUIRE(run_cli("label-merge --in " + dir.file("t.jsonl") + " --tasks " +
                  dir.file("tasks.csv") + " --votes " + dir.file("votes.csv") +
                  " --out " + dir.file("l.jsonl"))
              .exit_code == 0);

  const auto train = run_cli("train --in " + dir.file("l.jsonl") +
                             " --model nb --features tfidf --flags "
                             "interrogative,keyword --seed 7 --out " +
                             dir.file("model.json"));
  REQUIRE(train.exit_code == 0);
  const auto model = ojson::parse(remine::io::slurp_file(dir.file("model.json")));
  CHECK(model["_schema"] == "trained_model");
  CHECK(model["model"]["kind"] == "multinomial_nb");
  CHECK(model["model"]["_version"] == 1);
  CHECK(model["tfidf"].contains("vocabulary"));

  const auto stats =
      run_cli("stats --in " + dir.file("l.jsonl") + " --out " +
              dir.file("stats.json"));
  REQUIRE(stats.exit_code == 0);
  const auto sj = ojson::parse(remine::io::slurp_file(dir.file("stats.json")));
  CHECK(sj["requirement_count"] == 6);
  CHECK(sj["non_requirement_count"] == 6);

  const auto featurize =
      run_cli("featurize --in " + dir.file("l.jsonl") + " --rep tfidf "
              "--flags keyword --out " + dir.file("features.json"));
  REQUIRE(featurize.exit_code == 0);
  const auto fj =
      ojson::parse(remine::io::slurp_file(dir.file("features.json")));
  CHECK(fj["_schema"] == "features");
  CHECK(fj["n_rows"] == 12);
  CHECK(fj["feature_names"].back() == "has_keyword");
}

TEST_CASE("cli pipeline refuses a locked run directory") {
  TempDir dir;
  write(dir.file(".lock"), "");
  write(dir.file("cfg.json"),
        "{\"dumps\":[\"x.jsonl\"],\"label\":{\"votes\":\"v.csv\"}}");
  const auto r = run_cli("pipeline --config " + dir.file("cfg.json") +
                         " --out-dir " + dir.path.string());
  CHECK(r.exit_code == 4);
  CHECK(r.output.find("locked") != std::string::npos);
}
