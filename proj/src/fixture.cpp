#include "remine/fixture.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "remine/errors.hpp"
#include "remine/labels.hpp"
#include "remine/rng.hpp"
#include "remine/textnorm.hpp"

namespace remine::fixture {

namespace {

using json = nlohmann::ordered_json;

// 2020-03-01 .. 2021-09-01 UTC
constexpr std::int64_t kWindowStart = 1583020800;
constexpr std::int64_t kWindowEnd = 1630454400;

// Shared topic vocabulary: both classes talk about the same things, so the
// class signal lives mostly in keywords and question structure rather than
// in topic words.
const std::vector<std::string> kTopics = {
    "lecture",  "library",  "campus",    "gym",      "cafeteria", "bus",
    "parking",  "semester", "tutorial",  "hallway",  "dorm",      "bookstore",
    "shuttle",  "printer",  "lab",       "wifi",     "elevator",  "locker",
    "fountain", "courtyard"};

const std::vector<std::string> kAdjs = {"quiet", "crowded", "cold", "sunny",
                                        "busy",  "empty",   "loud", "slow",
                                        "bright", "messy"};

const std::vector<std::string> kPastVerbs = {
    "visited",  "watched", "enjoyed", "finished",
    "attended", "cleaned", "painted", "described"};

const std::vector<std::string> kTimePhrases = {
    "this morning", "last night",   "yesterday",     "over the weekend",
    "after class",  "before lunch", "all afternoon", "earlier today",
    "last week"};

// A wide slice of the requirement-keyword lexicon (seeds plus synonyms, all
// already in lemma form). Sampling keywords uniformly from a large pool keeps
// every individual word rare while the pooled has_keyword flag stays strong.
const std::vector<std::string> kKeywordPool = {
    "need",       "require",    "wish",        "problem",    "request",
    "trouble",    "endeavor",   "interrogate", "establish",  "inquire",
    "refer",      "aim",        "remove",      "option",     "want",
    "demand",     "desire",     "prefer",      "suggest",    "recommend",
    "propose",    "improve",    "extend",      "support",    "provide",
    "allow",      "enable",     "access",      "deadline",   "issue",
    "concern",    "help",       "assist",      "fix",        "update",
    "change",     "add",        "create",      "offer",      "ensure",
    "expect",     "hope",       "ask",         "apply",      "register",
    "submit",     "cancel",     "postpone",    "refund",     "schedule",
    "arrange",    "necessity",  "requirement", "essential",  "urgency",
    "necessitate", "oblige",    "entail",      "mandate",    "crave",
    "yearn",      "difficulty", "obstacle",    "complication", "dilemma",
    "petition",   "appeal",     "plea",        "solicit",    "bother",
    "distress",   "hardship",   "nuisance",    "attempt",    "effort",
    "venture",    "pursuit",    "question",    "examine",    "probe",
    "quiz",       "institute",  "construct",   "organize",   "formulate",
    "investigate", "query",     "consult",     "explore",    "cite",
    "mention",    "goal",       "target",      "objective",  "intend",
    "delete",     "eliminate",  "withdraw",    "erase",      "alternative",
    "choice",     "selection",  "possibility", "insist",     "claim",
    "requisition", "stipulate", "aspiration",  "urge",       "impulse",
    "appetite",   "favor",      "choose",      "elect",      "incline",
    "advise",     "hint",       "imply",       "endorse",    "advocate",
    "commend",    "counsel",    "nominate",    "suggestion", "proposition",
    "enhance",    "upgrade",    "refine",      "prolong",    "lengthen",
    "expand",     "broaden",    "sustain",     "uphold",     "bolster",
    "supply",     "furnish",    "deliver",     "equip",      "permit",
    "authorize",  "grant",      "tolerate",    "empower",    "facilitate",
    "activate",   "qualify",    "entry",       "admission",  "entrance",
    "cutoff",     "timeline",   "timeframe",   "worry",      "anxiety",
    "unease",     "assistance", "relief",      "guidance",   "collaborate",
    "cooperate",  "contribute", "repair",      "mend",       "patch",
    "rectify",    "revise",     "refresh",     "amend",      "modify",
    "alter",      "adjust",     "transform",   "append",     "attach",
    "include",    "supplement", "generate",    "produce",    "devise",
    "proposal",   "bid",        "tender",      "quote",      "guarantee",
    "secure",     "confirm",    "verify",      "anticipate", "await",
    "foresee",    "presume",    "aspire",      "trust",      "envision",
    "beg",        "implore",    "enroll",      "file",       "enlist",
    "record",     "send",       "upload",      "forward",    "lodge",
    "revoke",     "rescind",    "annul",       "abort",      "delay",
    "defer",      "reschedule", "adjourn",     "reimburse",  "repay",
    "rebate",     "compensate", "calendar",    "agenda",     "slot",
    "plan",       "coordinate"};

const std::vector<std::string> kCovidPhrases = {
    "during the lockdown",    "because of covid",     "under quarantine rules",
    "since the outbreak",     "during the pandemic",  "after the screening",
    "for health reasons",     "while campus is in isolation"};

// aux + subject openers satisfy the inverted-question rule even without "?"
const std::vector<std::string> kAuxOpeners = {
    "can the",  "could they", "will the",  "would it",  "should we",
    "is there", "are there",  "do they",   "does anyone", "can we",
    "could the", "will they", "may i",     "must we",   "might the"};

const std::vector<std::string> kWhOpeners = {
    "when will they", "how can i",     "where can we",  "why is the",
    "what should i",  "who can we",    "when could we", "how do you",
    "why are there",  "what would it"};

template <typename T>
const T& pick(SplitRng& rng, const std::vector<T>& pool) {
  return pool[rng.next_below(pool.size())];
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z')
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct GeneratedSentence {
  std::string text;
  bool requirement = false;
};

std::string requirement_sentence(SplitRng& rng, bool question, bool keyword) {
  std::ostringstream s;
  if (question && keyword) {
    const std::string kw = pick(rng, kKeywordPool);
    switch (rng.next_below(5)) {
      case 0:
        s << capitalize(pick(rng, kAuxOpeners)) << " sort out a " << kw
          << " for the " << pick(rng, kTopics) << "?";
        break;
      case 1:
        s << capitalize(pick(rng, kWhOpeners)) << " get a " << kw
          << " for the " << pick(rng, kTopics) << "?";
        break;
      case 2:
        s << capitalize(pick(rng, kAuxOpeners)) << " look at the " << kw
          << " around the " << pick(rng, kTopics) << "?";
        break;
      case 3:
        s << "Is a " << kw << " for the " << pick(rng, kTopics)
          << " even possible?";
        break;
      default:
        s << capitalize(pick(rng, kWhOpeners)) << " bring up the " << kw
          << " about the " << pick(rng, kTopics) << "?";
        break;
    }
  } else if (question) {
    switch (rng.next_below(4)) {
      case 0:
        s << capitalize(pick(rng, kAuxOpeners))
          << " do something about the " << pick(rng, kTopics) << " "
          << pick(rng, kTimePhrases) << "?";
        break;
      case 1:
        s << capitalize(pick(rng, kWhOpeners)) << " get into the "
          << pick(rng, kTopics) << " hall?";
        break;
      case 2:
        s << capitalize(pick(rng, kAuxOpeners)) << " open the "
          << pick(rng, kTopics) << " again?";
        break;
      default:
        s << capitalize(pick(rng, kWhOpeners)) << " find out about the "
          << pick(rng, kTopics) << " times?";
        break;
    }
  } else if (keyword) {
    const std::string kw = pick(rng, kKeywordPool);
    switch (rng.next_below(4)) {
      case 0:
        s << "I think the " << kw << " for the " << pick(rng, kTopics)
          << " is overdue.";
        break;
      case 1:
        s << "Students keep bringing up a " << kw << " for the "
          << pick(rng, kTopics) << ".";
        break;
      case 2:
        s << "The " << pick(rng, kTopics) << " could use a proper " << kw
          << " soon.";
        break;
      default:
        s << "Honestly a " << kw << " for the " << pick(rng, kTopics)
          << " would go a long way.";
        break;
    }
  } else {
    switch (rng.next_below(4)) {
      case 0:
        s << "It would be nice to have more " << pick(rng, kTopics)
          << " space.";
        break;
      case 1:
        s << "Someone ought to do something about the " << pick(rng, kTopics)
          << ".";
        break;
      case 2:
        s << "The " << pick(rng, kTopics) << " really has to get sorted out.";
        break;
      default:
        s << "More " << pick(rng, kTopics)
          << " hours would make a difference.";
        break;
    }
  }
  return s.str();
}

std::string non_requirement_sentence(SplitRng& rng, bool question,
                                     bool keyword) {
  std::ostringstream s;
  if (question && keyword) {
    const std::string kw = pick(rng, kKeywordPool);
    if (rng.next_below(2) == 0)
      s << "Did they ever settle the " << kw << " thing back then?";
    else
      s << "Was the " << kw << " for the " << pick(rng, kTopics)
        << " ever real?";
  } else if (question) {
    switch (rng.next_below(3)) {
      case 0:
        s << "Did you " << pick(rng, kPastVerbs) << " the "
          << pick(rng, kTopics) << " " << pick(rng, kTimePhrases) << "?";
        break;
      case 1:
        s << "Was the " << pick(rng, kTopics) << " " << pick(rng, kAdjs)
          << " " << pick(rng, kTimePhrases) << "?";
        break;
      default:
        s << "Did anyone " << pick(rng, kPastVerbs) << " the "
          << pick(rng, kTopics) << " " << pick(rng, kTimePhrases) << "?";
        break;
    }
  } else if (keyword) {
    const std::string kw = pick(rng, kKeywordPool);
    switch (rng.next_below(4)) {
      case 0:
        s << "The old " << kw << " for the " << pick(rng, kTopics)
          << " came up again.";
        break;
      case 1:
        s << "Everyone already forgot about the " << kw << " debate.";
        break;
      case 2:
        s << "They had a " << kw << " for the " << pick(rng, kTopics)
          << " years ago.";
        break;
      default:
        s << "The " << kw << " chatter about the " << pick(rng, kTopics)
          << " died down.";
        break;
    }
  } else {
    switch (rng.next_below(6)) {
      case 0:
        s << "The " << pick(rng, kTopics) << " was " << pick(rng, kAdjs)
          << " " << pick(rng, kTimePhrases) << ".";
        break;
      case 1:
        s << "I " << pick(rng, kPastVerbs) << " the " << pick(rng, kTopics)
          << " " << pick(rng, kTimePhrases) << ".";
        break;
      case 2:
        s << "My " << pick(rng, kTopics) << " looked " << pick(rng, kAdjs)
          << " " << pick(rng, kTimePhrases) << ".";
        break;
      case 3:
        s << "The " << pick(rng, kTopics) << " near the " << pick(rng, kTopics)
          << " stayed " << pick(rng, kAdjs) << ".";
        break;
      case 4:
        s << "We sat by the " << pick(rng, kTopics) << " "
          << pick(rng, kTimePhrases) << ".";
        break;
      default:
        s << "That " << pick(rng, kTopics) << " story made everyone laugh.";
        break;
    }
  }
  return s.str();
}

// Class-shared skeletons: identical wording for both labels, the only class
// signals are the keyword slot and the terminal punctuation. None of them
// opens with a wh-word or auxiliary, so a statement form never trips the
// question rules and "?" stays the sole interrogative cue.
std::string ambiguous_sentence(SplitRng& rng, bool question, bool keyword) {
  const std::string slot =
      keyword ? pick(rng, kKeywordPool) : pick(rng, kTopics);
  const char punct = question ? '?' : '.';
  std::ostringstream s;
  switch (rng.next_below(5)) {
    case 0:
      s << "The " << pick(rng, kTopics) << " " << slot << " came up "
        << pick(rng, kTimePhrases) << punct;
      break;
    case 1:
      s << "People in the " << pick(rng, kTopics) << " talked about the "
        << slot << " " << pick(rng, kTimePhrases) << punct;
      break;
    case 2:
      s << "The " << slot << " by the " << pick(rng, kTopics) << " seemed "
        << pick(rng, kAdjs) << " " << pick(rng, kTimePhrases) << punct;
      break;
    case 3:
      s << "Everyone heard about the " << pick(rng, kTopics) << " " << slot
        << " " << pick(rng, kTimePhrases) << punct;
      break;
    default:
      s << "There was a " << slot << " note on the " << pick(rng, kTopics)
        << " door " << pick(rng, kTimePhrases) << punct;
      break;
  }
  return s.str();
}

// Splices an event keyword phrase in front of the terminal punctuation.
std::string with_covid_phrase(const std::string& sentence, SplitRng& rng) {
  const std::string& phrase = pick(rng, kCovidPhrases);
  return sentence.substr(0, sentence.size() - 1) + " " + phrase +
         sentence.back();
}

}  // namespace

Fixture generate(const FixtureConfig& cfg) {
  if (cfg.n_sentences < 50)
    throw argument_error("fixture: need at least 50 sentences");

  SplitRng rng = SplitRng(cfg.seed).split("fixture");
  SplitRng vote_rng = SplitRng(cfg.seed).split("fixture_votes");

  Fixture fx;
  std::ostringstream dump;
  std::ostringstream votes;
  std::ostringstream truth;
  votes << "task_id,worker_id,vote\n";
  truth << "doc_id,sent_index,label\n";

  std::size_t emitted = 0;
  int post_no = 0, comment_no = 0;
  std::string current_post_id;
  int comments_left = 0;

  while (emitted < cfg.n_sentences) {
    const std::size_t remaining = cfg.n_sentences - emitted;
    // a post needs title + body, so a 1-sentence remainder becomes a comment
    const bool is_post = comments_left == 0 && remaining >= 2;
    std::string doc_id;
    if (is_post) {
      doc_id = "p" + std::to_string(++post_no);
      current_post_id = doc_id;
      comments_left = 2 + static_cast<int>(rng.next_below(3));
    } else {
      doc_id = "c" + std::to_string(++comment_no);
      if (comments_left > 0) --comments_left;
    }

    std::size_t doc_sentences = (is_post ? 2 : 1) + rng.next_below(4);
    doc_sentences = std::min(doc_sentences, remaining);

    std::vector<GeneratedSentence> sentences;
    for (std::size_t i = 0; i < doc_sentences; ++i) {
      GeneratedSentence g;
      g.requirement = rng.next_unit() < cfg.requirement_fraction;
      const double p_q = g.requirement ? cfg.p_question_req : cfg.p_question_non;
      const double p_k = g.requirement ? cfg.p_keyword_req : cfg.p_keyword_non;
      const bool question = rng.next_unit() < p_q;
      const bool keyword = rng.next_unit() < p_k;
      const bool ambiguous = rng.next_unit() < cfg.ambiguous_fraction;
      if (ambiguous)
        g.text = ambiguous_sentence(rng, question, keyword);
      else
        g.text = g.requirement
                     ? requirement_sentence(rng, question, keyword)
                     : non_requirement_sentence(rng, question, keyword);
      sentences.push_back(std::move(g));
    }
    // at least one relevance keyword per record so the record survives
    const std::size_t covid_at = rng.next_below(sentences.size());
    sentences[covid_at].text = with_covid_phrase(sentences[covid_at].text, rng);

    json record;
    record["id"] = doc_id;
    record["kind"] = is_post ? "post" : "comment";
    if (!is_post) record["parent_id"] = current_post_id;
    record["created_utc"] =
        kWindowStart + static_cast<std::int64_t>(rng.next_below(
                           static_cast<std::size_t>(kWindowEnd - kWindowStart)));
    std::string body;
    std::size_t body_from = 0;
    if (is_post) {
      record["title"] = sentences[0].text;
      body_from = 1;
    }
    for (std::size_t i = body_from; i < sentences.size(); ++i) {
      if (!body.empty()) body += " ";
      body += sentences[i].text;
    }
    record["body"] = body;
    record["score"] = static_cast<int>(rng.next_below(40));
    dump << record.dump() << "\n";

    // sentence indexing must mirror the sentences stage (title split first,
    // then the body split); verify with the real splitter so votes stay
    // aligned with what the pipeline will produce
    std::vector<std::string> expected;
    for (const auto& g : sentences) expected.push_back(g.text);
    std::vector<std::string> split_check;
    if (is_post) {
      const auto title_split = textnorm::split_sentences(sentences[0].text);
      split_check.insert(split_check.end(), title_split.begin(),
                         title_split.end());
    }
    const auto body_split = textnorm::split_sentences(body);
    split_check.insert(split_check.end(), body_split.begin(), body_split.end());
    if (split_check != expected)
      throw error("fixture: sentence splitter disagrees with templates for " +
                  doc_id);

    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto& g = sentences[i];
      const std::string task = labels::task_id_for(doc_id, static_cast<int>(i));
      for (int w = 1; w <= 3; ++w) {
        const bool flip = vote_rng.next_unit() < cfg.vote_noise;
        const bool says_yes = flip ? !g.requirement : g.requirement;
        votes << task << ",w" << w << "," << (says_yes ? "yes" : "no") << "\n";
      }
      truth << doc_id << "," << i << ","
            << (g.requirement ? "requirement" : "non_requirement") << "\n";
      fx.truth.push_back({doc_id, static_cast<int>(i), g.requirement});
      if (g.requirement) ++fx.requirement_count;
      else ++fx.non_requirement_count;
      ++emitted;
    }
  }

  if (cfg.decoys) {
    json pre;
    pre["id"] = "decoy_prewindow";
    pre["kind"] = "post";
    pre["created_utc"] = kWindowStart - 86400 * 30;
    pre["title"] = "Campus flu screening announcement.";
    pre["body"] = "The clinic offered flu screening to everyone on campus.";
    pre["score"] = 1;
    dump << pre.dump() << "\n";

    json irrelevant;
    irrelevant["id"] = "decoy_irrelevant";
    irrelevant["kind"] = "post";
    irrelevant["created_utc"] = kWindowStart + 86400;
    irrelevant["title"] = "Warm reading corner recommendations?";
    irrelevant["body"] = "Looking for a cozy spot to read on weekends.";
    irrelevant["score"] = 2;
    dump << irrelevant.dump() << "\n";
  }

  fx.dump_jsonl = dump.str();
  fx.votes_csv = votes.str();
  fx.truth_csv = truth.str();
  return fx;
}

void write_fixture(const Fixture& fixture, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(out_dir + "/" + name, std::ios::binary);
    if (!out) throw io_error("cannot write " + out_dir + "/" + name);
    out << content;
  };
  write("dump.jsonl", fixture.dump_jsonl);
  write("votes.csv", fixture.votes_csv);
  write("truth.csv", fixture.truth_csv);
}

}  // namespace remine::fixture
