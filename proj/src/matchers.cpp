#include "satd/matchers.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "satd/parallel.hpp"
#include "satd/textprep.hpp"

namespace satd {

MatchStrategy match_strategy_from_string(std::string_view s) {
  if (s == "strict") return MatchStrategy::strict;
  if (s == "fuzzy") return MatchStrategy::fuzzy;
  throw std::runtime_error("unknown match strategy: " + std::string(s));
}

namespace {

std::vector<std::string> stem_words(const std::vector<std::string>& words) {
  std::set<std::string> stems;
  for (const std::string& w : words)
    for (const std::string& tok : preprocess(w)) stems.insert(tok);
  return {stems.begin(), stems.end()};
}

}  // namespace

TagSet TagSet::defaults() {
  return from_words({"todo", "fixme", "xxx", "hack"});
}

TagSet TagSet::from_words(const std::vector<std::string>& words) {
  TagSet set;
  set.stems_ = stem_words(words);
  return set;
}

TagSet TagSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tag file: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t a = line.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    if (line[a] == '#') continue;
    words.push_back(line);
  }
  return from_words(words);
}

TagSet TagSet::extended_with(const std::vector<std::string>& extra) const {
  std::set<std::string> stems(stems_.begin(), stems_.end());
  for (const std::string& s : stem_words(extra)) stems.insert(s);
  TagSet set;
  set.stems_.assign(stems.begin(), stems.end());
  return set;
}

bool match_tag(std::string_view token, std::string_view tag,
               MatchStrategy strategy) {
  if (tag.empty()) return false;
  if (token == tag) return true;
  if (strategy == MatchStrategy::strict) return false;
  if (token.size() < tag.size()) return false;
  return token.substr(0, tag.size()) == tag ||
         token.substr(token.size() - tag.size()) == tag;
}

MatResult classify_mat(std::string_view text, const TagSet& tags,
                       MatchStrategy strategy) {
  std::vector<std::string> raw = tokenize(text);
  for (const std::string& raw_token : raw) {
    std::string stem = porter_stem(raw_token);
    for (const std::string& tag : tags.stems()) {
      if (match_tag(stem, tag, strategy))
        return {true, MatchEvidence{tag, raw_token}};
    }
  }
  return {false, std::nullopt};
}

PatternSet PatternSet::from_lines(const std::vector<std::string>& lines) {
  PatternSet set;
  for (const std::string& line : lines) {
    std::size_t a = line.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    if (line[a] == '#') continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    Pattern p;
    p.original = line.substr(a, b - a + 1);
    p.stems = preprocess(p.original);
    if (!p.stems.empty()) set.patterns_.push_back(std::move(p));
  }
  return set;
}

PatternSet PatternSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pattern file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return from_lines(lines);
}

std::optional<std::string> PatternSet::match(
    const std::vector<std::string>& tokens) const {
  for (const Pattern& p : patterns_) {
    if (p.stems.size() > tokens.size()) continue;
    std::size_t limit = tokens.size() - p.stems.size();
    for (std::size_t i = 0; i <= limit; ++i) {
      if (std::equal(p.stems.begin(), p.stems.end(), tokens.begin() + i))
        return p.original;
    }
  }
  return std::nullopt;
}

MatResult classify_pattern(std::string_view text, const PatternSet& patterns) {
  std::vector<std::string> tokens = preprocess(text);
  if (std::optional<std::string> hit = patterns.match(tokens))
    return {true, MatchEvidence{*hit, std::string()}};
  return {false, std::nullopt};
}

std::vector<Prediction> classify_corpus(
    const Corpus& corpus,
    const std::function<MatResult(const Comment&)>& classify,
    int parallelism) {
  std::vector<Prediction> out(corpus.comments.size());
  parallel_for(corpus.comments.size(), parallelism, [&](std::size_t i) {
    const Comment& c = corpus.comments[i];
    MatResult r = classify(c);
    out[i] = Prediction{c.project, c.id, r.satd, std::move(r.evidence)};
  });
  return out;
}

}  // namespace satd
