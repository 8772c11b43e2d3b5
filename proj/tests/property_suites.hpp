#pragma once

// Property suites shared by the unit-test binary and the acceptance checks.
// Every function throws std::runtime_error with a description on failure;
// all randomness is seeded, so failures reproduce.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "satd/corpus.hpp"
#include "satd/eval.hpp"
#include "satd/matchers.hpp"
#include "satd/textprep.hpp"

namespace satd::properties {

inline void fail(const std::string& what) { throw std::runtime_error(what); }

inline std::string random_comment(std::mt19937& rng) {
  static const std::vector<std::string> words = {
      "todo",     "fixme",    "xxx",       "hack",     "hacky",
      "todos",    "pleasefixme", "fixmehere", "prefixmess", "hackathon",
      "fix",      "this",     "later",     "remove",   "ugly",
      "refactor", "should",   "work",      "index",    "returns",
      "the",      "value",    "broken",    "temporary", "workaround",
      "note",     "xxxlarge", "stack",     "overflow", "cleanup"};
  static const std::vector<std::string> junk = {
      ":", "!!", "-", "1234", "...", "*/", "//", "@param", "<p>", "é"};
  std::uniform_int_distribution<std::size_t> len(0, 12);
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<std::size_t> word_at(0, words.size() - 1);
  std::uniform_int_distribution<std::size_t> junk_at(0, junk.size() - 1);
  std::string text;
  std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (!text.empty()) text += ' ';
    text += pick(rng) < 8 ? words[word_at(rng)] : junk[junk_at(rng)];
  }
  return text;
}

// every strict tag match is also a fuzzy match
inline void fuzzy_covers_strict(std::size_t iterations = 1000) {
  std::mt19937 rng(20240901);
  TagSet tags = TagSet::defaults();
  for (std::size_t i = 0; i < iterations; ++i) {
    std::string text = random_comment(rng);
    bool strict = classify_mat(text, tags, MatchStrategy::strict).satd;
    bool fuzzy = classify_mat(text, tags, MatchStrategy::fuzzy).satd;
    if (strict && !fuzzy)
      fail("strict matched but fuzzy did not on: " + text);
  }
}

// adding tags never removes detections
inline void tag_monotonicity(std::size_t iterations = 500) {
  std::mt19937 rng(20240902);
  static const std::vector<std::string> extras = {
      "workaround", "tbd", "revisit", "note", "notused", "remind", "kludge"};
  TagSet base = TagSet::defaults();
  std::uniform_int_distribution<std::size_t> count(1, extras.size());
  for (std::size_t i = 0; i < iterations; ++i) {
    std::vector<std::string> chosen;
    std::size_t n = count(rng);
    std::sample(extras.begin(), extras.end(), std::back_inserter(chosen), n,
                rng);
    TagSet extended = base.extended_with(chosen);
    for (MatchStrategy strategy :
         {MatchStrategy::strict, MatchStrategy::fuzzy}) {
      std::string text = random_comment(rng);
      if (classify_mat(text, base, strategy).satd &&
          !classify_mat(text, extended, strategy).satd)
        fail("extending the tag set lost a detection on: " + text);
    }
  }
}

// F1 is the harmonic mean of the computed precision and recall
inline void f1_harmonic(std::size_t iterations = 2000) {
  std::mt19937 rng(20240903);
  std::uniform_int_distribution<long> count(0, 40);
  for (std::size_t i = 0; i < iterations; ++i) {
    ConfusionMatrix cm{count(rng), count(rng), count(rng), count(rng)};
    Scores s = compute_scores(cm);
    if (s.precision && s.recall && *s.precision + *s.recall > 0.0) {
      if (!s.f1) fail("f1 undefined although p and r are defined and p+r>0");
      double expect =
          2.0 * *s.precision * *s.recall / (*s.precision + *s.recall);
      if (std::fabs(*s.f1 - expect) > 1e-12) fail("f1 is not harmonic");
    } else if (s.f1) {
      fail("f1 defined although p or r is undefined or p+r==0");
    }
  }
}

inline void cliffs_delta_properties(std::size_t iterations = 300) {
  std::mt19937 rng(20240904);
  std::uniform_int_distribution<std::size_t> len(1, 12);
  std::uniform_int_distribution<int> val(0, 9);
  for (std::size_t i = 0; i < iterations; ++i) {
    std::vector<double> a(len(rng)), b(len(rng));
    for (double& x : a) x = val(rng) / 10.0;
    for (double& x : b) x = val(rng) / 10.0;
    double ab = cliffs_delta(a, b);
    double ba = cliffs_delta(b, a);
    if (std::fabs(ab + ba) > 1e-12) fail("cliffs delta is not antisymmetric");
    if (ab < -1.0 - 1e-12 || ab > 1.0 + 1e-12)
      fail("cliffs delta out of [-1, 1]");
  }
}

// DP-based exact p equals direct enumeration over all sign assignments
inline void wilcoxon_matches_bruteforce(std::size_t iterations = 200) {
  std::mt19937 rng(20240905);
  std::uniform_int_distribution<std::size_t> len(1, 10);
  std::uniform_int_distribution<int> val(0, 6);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::size_t n = len(rng);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = val(rng) / 10.0;  // coarse grid forces ties and zeros
      b[i] = val(rng) / 10.0;
    }
    WilcoxonResult got = wilcoxon_signed_rank(a, b);

    std::vector<double> d;
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != b[i]) d.push_back(a[i] - b[i]);
    double expect = 1.0;
    if (!d.empty()) {
      std::size_t m = d.size();
      std::vector<std::pair<double, std::size_t>> order(m);
      for (std::size_t i = 0; i < m; ++i) order[i] = {std::fabs(d[i]), i};
      std::sort(order.begin(), order.end());
      std::vector<double> rank(m);
      std::size_t i = 0;
      while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && order[j + 1].first == order[i].first) ++j;
        for (std::size_t k = i; k <= j; ++k)
          rank[order[k].second] = (static_cast<double>(i + j)) / 2.0 + 1.0;
        i = j + 1;
      }
      double w_plus = 0.0;
      for (std::size_t k = 0; k < m; ++k)
        if (d[k] > 0.0) w_plus += rank[k];
      unsigned long long le = 0, ge = 0;
      unsigned long long total = 1ULL << m;
      for (unsigned long long mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (std::size_t k = 0; k < m; ++k)
          if (mask >> k & 1ULL) w += rank[k];
        if (w <= w_plus + 1e-9) ++le;
        if (w >= w_plus - 1e-9) ++ge;
      }
      expect = std::min(
          1.0, 2.0 * static_cast<double>(std::min(le, ge)) /
                   static_cast<double>(total));
    }
    if (std::fabs(got.p - expect) > 1e-9) {
      std::ostringstream msg;
      msg << "wilcoxon p mismatch: got " << got.p << " expected " << expect;
      fail(msg.str());
    }
  }
}

// corpora with newlines, quotes and multi-byte text survive a round trip,
// and rewriting is byte-identical
inline void corpus_roundtrip_fuzz(std::size_t iterations = 60) {
  std::mt19937 rng(20240906);
  std::uniform_int_distribution<std::size_t> count(1, 20);
  std::uniform_int_distribution<int> coin(0, 3);
  static const std::vector<std::string> snippets = {
      "line one\nline two",  "quote \" inside",      "backslash \\ path",
      "tab\there",           "café über",  "中文",
      "emoji \U0001F600",    "angle <tag> & amp",    "trailing space ",
      " control \x01 byte",  "/* nested looking */", std::string("null-ish \0's cousin", 19)};
  for (std::size_t it = 0; it < iterations; ++it) {
    Corpus corpus;
    std::size_t n = count(rng);
    std::uniform_int_distribution<std::size_t> snip(0, snippets.size() - 1);
    for (std::size_t i = 0; i < n; ++i) {
      Comment c;
      c.project = "fuzz";
      c.id = static_cast<std::int64_t>(i) + 1;
      c.text = snippets[snip(rng)] + " #" + std::to_string(i);
      c.kind = static_cast<CommentKind>(coin(rng) % 3);
      if (coin(rng) == 0) c.label = Label::satd;
      else if (coin(rng) == 1) c.label = Label::non_satd;
      if (coin(rng) != 2) {
        c.file = "dir/file_" + std::to_string(i) + ".java";
        c.start_line = static_cast<int>(i) + 1;
        c.end_line = static_cast<int>(i) + 2;
      }
      corpus.comments.push_back(std::move(c));
    }
    std::ostringstream first;
    write_jsonl(corpus, first);
    std::istringstream in(first.str());
    Corpus back = read_jsonl(in);
    if (back.comments.size() != corpus.comments.size())
      fail("round trip changed corpus size");
    for (std::size_t i = 0; i < n; ++i) {
      const Comment& x = corpus.comments[i];
      const Comment& y = back.comments[i];
      if (x.project != y.project || x.id != y.id || x.text != y.text ||
          x.kind != y.kind || x.label != y.label || x.file != y.file ||
          x.start_line != y.start_line || x.end_line != y.end_line)
        fail("round trip changed comment " + std::to_string(i));
    }
    std::ostringstream second;
    write_jsonl(back, second);
    if (first.str() != second.str())
      fail("rewriting a read corpus is not byte-identical");
  }
}

// thread count never changes classification output
inline void parallelism_determinism() {
  std::mt19937 rng(20240907);
  Corpus corpus;
  for (std::size_t i = 0; i < 1000; ++i) {
    Comment c;
    c.project = "par";
    c.id = static_cast<std::int64_t>(i) + 1;
    std::string text = random_comment(rng);
    c.text = text.empty() ? "filler" : text;
    corpus.comments.push_back(std::move(c));
  }
  TagSet tags = TagSet::defaults();
  auto classify = [&](const Comment& c) {
    return classify_mat(c.text, tags, MatchStrategy::fuzzy);
  };
  std::vector<Prediction> serial = classify_corpus(corpus, classify, 1);
  for (int threads : {2, 4, 8}) {
    std::vector<Prediction> parallel =
        classify_corpus(corpus, classify, threads);
    if (parallel.size() != serial.size()) fail("parallel size mismatch");
    for (std::size_t i = 0; i < serial.size(); ++i) {
      if (serial[i].id != parallel[i].id ||
          serial[i].satd != parallel[i].satd ||
          serial[i].evidence.has_value() !=
              parallel[i].evidence.has_value())
        fail("parallel classification differs at index " +
             std::to_string(i));
      if (serial[i].evidence &&
          (serial[i].evidence->tag != parallel[i].evidence->tag ||
           serial[i].evidence->token != parallel[i].evidence->token))
        fail("parallel evidence differs at index " + std::to_string(i));
    }
  }
}

inline void run_all() {
  fuzzy_covers_strict();
  tag_monotonicity();
  f1_harmonic();
  cliffs_delta_properties();
  wilcoxon_matches_bruteforce();
  corpus_roundtrip_fuzz();
  parallelism_determinism();
}

}  // namespace satd::properties
