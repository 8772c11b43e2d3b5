#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "satd/corpus.hpp"
#include "satd/matchers.hpp"

namespace satd {

// How to find comments in one language's source text. Doc delimiters are
// tried alongside block delimiters; when several opens match at the same
// spot the longest one whose close exists wins, so "/**/" is an empty block
// comment and "/***/" an empty doc comment.
struct LanguageProfile {
  std::vector<std::string> line_prefixes;
  std::vector<std::pair<std::string, std::string>> block_delimiters;
  std::vector<std::pair<std::string, std::string>> doc_delimiters;
  std::vector<std::string> extensions;  // ".java", with the dot
  std::string string_quotes = "\"'";    // literal delimiters to skip
  bool backslash_escapes = true;

  static LanguageProfile java();
  // key = value lines; list values comma-separated; delimiter pairs are
  // written "open close" (whitespace-separated) within one list item.
  static LanguageProfile load(const std::string& path);
};

struct RawComment {
  CommentKind kind = CommentKind::line;
  std::string text;    // delimiters stripped, whole text trimmed
  int start_line = 0;  // 1-based, inclusive
  int end_line = 0;
};

struct Extraction {
  std::vector<RawComment> comments;
  std::vector<std::string> warnings;  // e.g. unterminated block comment
};

// Single pass over the source: tracks string/char literals (a literal ends
// at its quote, at end of line, or at end of input) and collects comments
// in source order. An unclosed block comment extends to end of input and
// adds a warning. Comment text keeps interior lines verbatim; only leading
// and trailing whitespace of the whole comment is trimmed.
Extraction extract_comments(std::string_view source,
                            const LanguageProfile& profile);

// Merges maximal runs of line comments on directly consecutive lines into
// one comment (texts joined with '\n', empty segments kept so line counts
// survive). Block and doc comments pass through unchanged.
std::vector<RawComment> group_consecutive(std::vector<RawComment> comments);

enum class DropReason { empty, license, commented_code, ide_generated,
                        doc_without_tag };
std::string_view to_string(DropReason reason);

struct FilterConfig {
  // license header: drop when at least `license_min_distinct` distinct
  // keywords occur as raw tokens
  std::vector<std::string> license_keywords = {
      "license", "copyright", "redistribution", "warranty", "gnu", "apache"};
  std::size_t license_min_distinct = 2;
  // commented-out code: drop when at least this fraction of non-empty lines
  // look like statements (end in ';', '{' or '}', or start like a call or
  // assignment)
  double code_line_fraction = 0.5;
  // IDE-generated boilerplate: exact text match after trimming
  std::vector<std::string> ide_texts = {"Auto-generated method stub",
                                        "Auto-generated catch block"};
  // Javadoc-style comments are dropped unless they carry a task tag
  bool drop_doc_without_tag = true;
};

struct FilterOutcome {
  std::vector<RawComment> kept;
  std::vector<std::pair<RawComment, DropReason>> dropped;
};

// Applies the drop rules in a fixed order (empty, license, commented-out
// code, IDE boilerplate, doc-without-tag); every input comment lands in
// exactly one of kept/dropped. The tag set feeds the doc-comment exception:
// a doc comment containing a fuzzy tag match is kept.
FilterOutcome apply_filters(std::vector<RawComment> comments,
                            const FilterConfig& config, const TagSet& tags);

struct ScanOptions {
  LanguageProfile profile = LanguageProfile::java();
  FilterConfig filters;
  TagSet tags = TagSet::defaults();
  std::string project;
  bool apply_filtering = true;
};

struct ScanResult {
  Corpus corpus;  // ids are 1-based over kept comments, in scan order
  std::vector<std::string> warnings;
  std::size_t files_scanned = 0;
  std::size_t comments_extracted = 0;  // after grouping, before filtering
  std::vector<std::pair<std::string, DropReason>> dropped;  // file:line, why
};

// Scans files and directories (recursively; files sorted by path for
// deterministic ids) whose extension matches the profile.
ScanResult scan_paths(const std::vector<std::string>& paths,
                      const ScanOptions& options);

}  // namespace satd
