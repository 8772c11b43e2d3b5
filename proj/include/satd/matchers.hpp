#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satd/corpus.hpp"

namespace satd {

enum class MatchStrategy { strict, fuzzy };

MatchStrategy match_strategy_from_string(std::string_view s);

// A set of task tags held in stemmed form: construction runs every word
// through the same preprocessing as comment tokens, so matching compares
// like with like even when stemming rewrites a tag.
class TagSet {
public:
  static TagSet defaults();  // todo, fixme, xxx, hack
  static TagSet from_words(const std::vector<std::string>& words);
  // One tag per line; '#' lines and blanks ignored.
  static TagSet load(const std::string& path);

  // New set containing this set's tags plus the given words (stemmed).
  TagSet extended_with(const std::vector<std::string>& extra_words) const;

  const std::vector<std::string>& stems() const { return stems_; }
  bool empty() const { return stems_.empty(); }
  std::size_t size() const { return stems_.size(); }

private:
  std::vector<std::string> stems_;  // sorted, unique
};

// Both arguments must be stemmed, lowercase tokens. Strict is equality;
// fuzzy additionally accepts the tag as a prefix or suffix of the token
// ("pleasefixm" and "fixmeher" match "fixm", "prefixmess" does not).
bool match_tag(std::string_view token, std::string_view tag,
               MatchStrategy strategy);

struct MatchEvidence {
  std::string tag;    // stemmed tag that fired
  std::string token;  // raw comment token that matched
};

struct MatResult {
  bool satd = false;
  std::optional<MatchEvidence> evidence;  // present iff satd
};

// Task-tag classifier: preprocesses the text and reports SATD when any
// token matches any tag under the strategy. First match (text order, then
// tag order) wins and is reported as evidence.
MatResult classify_mat(std::string_view text, const TagSet& tags,
                       MatchStrategy strategy);

// Keyword/phrase baseline. Patterns are normalized by the token pipeline at
// load time; a single-token pattern matches a comment containing the token,
// a multi-token pattern matches a contiguous token run.
class PatternSet {
public:
  static PatternSet from_lines(const std::vector<std::string>& lines);
  static PatternSet load(const std::string& path);

  std::size_t size() const { return patterns_.size(); }

  // stemmed comment tokens -> original text of the first matching pattern
  std::optional<std::string> match(
      const std::vector<std::string>& tokens) const;

private:
  struct Pattern {
    std::string original;
    std::vector<std::string> stems;
  };
  std::vector<Pattern> patterns_;
};

MatResult classify_pattern(std::string_view text, const PatternSet& patterns);

struct Prediction {
  std::string project;
  std::int64_t id = 0;
  bool satd = false;
  std::optional<MatchEvidence> evidence;
};

// Applies a per-comment classifier across a corpus, optionally on several
// threads. Output order always equals corpus order regardless of
// parallelism.
std::vector<Prediction> classify_corpus(
    const Corpus& corpus,
    const std::function<MatResult(const Comment&)>& classify,
    int parallelism = 1);

}  // namespace satd
