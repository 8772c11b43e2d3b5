#include "satd/corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "satd/textprep.hpp"

namespace satd {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(CommentKind kind) {
  switch (kind) {
    case CommentKind::line: return "line";
    case CommentKind::block: return "block";
    case CommentKind::doc: return "doc";
  }
  return "line";
}

std::string_view to_string(Label label) {
  return label == Label::satd ? "SATD" : "NonSATD";
}

CommentKind comment_kind_from_string(std::string_view s) {
  if (s == "line") return CommentKind::line;
  if (s == "block") return CommentKind::block;
  if (s == "doc") return CommentKind::doc;
  throw std::runtime_error("unknown comment kind: " + std::string(s));
}

Label label_from_string(std::string_view s) {
  if (s == "SATD") return Label::satd;
  if (s == "NonSATD") return Label::non_satd;
  throw std::runtime_error("unknown label: " + std::string(s));
}

bool Corpus::fully_labeled() const {
  for (const Comment& c : comments)
    if (!c.label) return false;
  return true;
}

std::string Corpus::project() const {
  return comments.empty() ? std::string() : comments.front().project;
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const Comment& c : corpus.comments) {
    ordered_json j;
    j["project"] = c.project;
    j["id"] = c.id;
    j["text"] = c.text;
    j["kind"] = to_string(c.kind);
    if (c.label) j["label"] = to_string(*c.label);
    if (!c.file.empty()) j["file"] = c.file;
    if (c.start_line > 0) j["start_line"] = c.start_line;
    if (c.end_line > 0) j["end_line"] = c.end_line;
    out << j.dump() << '\n';
  }
}

void write_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_jsonl(corpus, out);
}

Corpus read_jsonl(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": invalid JSON: " + e.what());
    }
    if (!j.is_object())
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": expected a JSON object");
    Comment c;
    try {
      c.project = j.at("project").get<std::string>();
      c.id = j.at("id").get<std::int64_t>();
      c.text = j.at("text").get<std::string>();
      c.kind = comment_kind_from_string(j.at("kind").get<std::string>());
      if (j.contains("label"))
        c.label = label_from_string(j["label"].get<std::string>());
      if (j.contains("file")) c.file = j["file"].get<std::string>();
      if (j.contains("start_line")) c.start_line = j["start_line"].get<int>();
      if (j.contains("end_line")) c.end_line = j["end_line"].get<int>();
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " +
                               e.what());
    }
    if (c.text.empty())
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": empty comment text");
    corpus.comments.push_back(std::move(c));
  }
  return corpus;
}

Corpus read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  return read_jsonl(in);
}

LabelMapping LabelMapping::defaults() {
  LabelMapping m;
  m.add("positive", Label::satd);
  m.add("SATD", Label::satd);
  m.add("1", Label::satd);
  m.add("negative", Label::non_satd);
  m.add("WITHOUT_CLASSIFICATION", Label::non_satd);
  m.add("0", Label::non_satd);
  return m;
}

LabelMapping LabelMapping::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open label map: " + path);
  ordered_json j = ordered_json::parse(in);
  LabelMapping m;
  for (auto& [key, label] :
       {std::pair<const char*, Label>{"SATD", Label::satd},
        std::pair<const char*, Label>{"NonSATD", Label::non_satd}}) {
    if (!j.contains(key)) continue;
    for (const auto& tok : j.at(key)) m.add(tok.get<std::string>(), label);
  }
  return m;
}

void LabelMapping::add(std::string token, Label label) {
  map_[std::move(token)] = label;
}

std::optional<Label> LabelMapping::apply(std::string_view raw) const {
  auto it = map_.find(std::string(raw));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r\n\f\v");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(a, b - a + 1));
}

}  // namespace

Corpus import_benchmark(const std::string& comments_path,
                        const std::string& labels_path,
                        const std::string& project,
                        const LabelMapping& mapping) {
  std::vector<std::string> comments = read_lines(comments_path);
  std::vector<std::string> labels = read_lines(labels_path);
  // tolerate a single trailing blank line on either side
  while (!comments.empty() && trim(comments.back()).empty() &&
         comments.size() > labels.size())
    comments.pop_back();
  while (!labels.empty() && trim(labels.back()).empty() &&
         labels.size() > comments.size())
    labels.pop_back();
  if (comments.size() != labels.size())
    throw std::runtime_error(
        "line count mismatch: " + comments_path + " has " +
        std::to_string(comments.size()) + " lines, " + labels_path + " has " +
        std::to_string(labels.size()));

  Corpus corpus;
  corpus.comments.reserve(comments.size());
  for (std::size_t i = 0; i < comments.size(); ++i) {
    Comment c;
    c.project = project;
    c.id = static_cast<std::int64_t>(i) + 1;
    c.text = sanitize_utf8(comments[i]);
    c.kind = CommentKind::line;
    std::string raw_label = trim(labels[i]);
    std::optional<Label> label = mapping.apply(raw_label);
    if (!label)
      throw std::runtime_error("unmapped label '" + raw_label + "' at " +
                               labels_path + ":" + std::to_string(i + 1));
    c.label = *label;
    if (c.text.empty())
      c.text = " ";  // keep line pairing; a lone space stays filterable
    corpus.comments.push_back(std::move(c));
  }
  return corpus;
}

}  // namespace satd
