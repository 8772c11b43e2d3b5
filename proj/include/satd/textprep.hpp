#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace satd {

// Splits on every character outside [A-Za-z] and lowercases, so tokens are
// non-empty runs of a-z. Digits, punctuation and non-ASCII bytes all act as
// separators.
std::vector<std::string> tokenize(std::string_view text);

// Porter's suffix-stripping algorithm, reference variant: words of length
// <= 2 come back unchanged, step 2 maps -bli to -ble and -logi to -log.
// Input must already be lowercase a-z (what tokenize produces).
std::string porter_stem(std::string_view word);

// tokenize + porter_stem on each token. Order preserved, duplicates kept.
std::vector<std::string> preprocess(std::string_view text);

class StopWordList {
public:
  StopWordList() = default;
  explicit StopWordList(std::vector<std::string> words);

  // Built-in copy of data/stopwords.txt; a test keeps the two in sync.
  static const StopWordList& defaults();
  // One word per line; '#' lines and blanks ignored.
  static StopWordList load(const std::string& path);

  bool contains(std::string_view raw_token) const;
  std::size_t size() const { return words_.size(); }

private:
  std::unordered_set<std::string> words_;
};

// The supervised pipeline: tokenize, drop stop words while tokens are still
// raw (pre-stem) words, then stem the survivors.
std::vector<std::string> preprocess_for_learning(std::string_view text,
                                                 const StopWordList& stops);

// Replaces bytes that are not part of a well-formed UTF-8 sequence with
// U+FFFD so downstream text stays valid UTF-8.
std::string sanitize_utf8(std::string_view bytes);

}  // namespace satd
