#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satd {

enum class CommentKind { line, block, doc };
enum class Label { satd, non_satd };

std::string_view to_string(CommentKind kind);
std::string_view to_string(Label label);
CommentKind comment_kind_from_string(std::string_view s);
Label label_from_string(std::string_view s);

struct Comment {
  std::string project;
  std::int64_t id = 0;
  std::string text;  // never empty in a corpus
  CommentKind kind = CommentKind::line;
  std::optional<Label> label;
  std::string file;    // empty = unknown origin
  int start_line = 0;  // 1-based; 0 = unknown
  int end_line = 0;
};

struct Corpus {
  std::vector<Comment> comments;

  std::size_t size() const { return comments.size(); }
  bool fully_labeled() const;
  // project name of the first comment; empty for an empty corpus
  std::string project() const;
};

// One JSON object per line, keys in a fixed order (project, id, text, kind,
// label, file, start_line, end_line), optional fields omitted when absent.
// Reading ignores unknown keys, so round-tripping a file we wrote is
// byte-identical.
void write_jsonl(const Corpus& corpus, std::ostream& out);
void write_jsonl(const Corpus& corpus, const std::string& path);
Corpus read_jsonl(std::istream& in);
Corpus read_jsonl(const std::string& path);

// Maps raw label strings from external files onto Label values.
class LabelMapping {
public:
  static LabelMapping defaults();
  // JSON file of the shape {"SATD": ["...", ...], "NonSATD": ["...", ...]}.
  static LabelMapping load(const std::string& path);

  void add(std::string token, Label label);
  std::optional<Label> apply(std::string_view raw) const;

private:
  std::map<std::string, Label> map_;
};

// Reads two line-parallel text files (one comment per line, one label per
// line) and pairs them up; ids are 1-based line numbers. Raw bytes pass
// through sanitize_utf8. Line-count mismatches and unmapped labels throw.
Corpus import_benchmark(const std::string& comments_path,
                        const std::string& labels_path,
                        const std::string& project,
                        const LabelMapping& mapping = LabelMapping::defaults());

}  // namespace satd
