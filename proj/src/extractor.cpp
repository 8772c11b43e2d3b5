#include "satd/extractor.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "satd/textprep.hpp"

namespace satd {

namespace fs = std::filesystem;

LanguageProfile LanguageProfile::java() {
  LanguageProfile p;
  p.line_prefixes = {"//"};
  p.block_delimiters = {{"/*", "*/"}};
  p.doc_delimiters = {{"/**", "*/"}};
  p.extensions = {".java"};
  return p;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r\n\f\v");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    std::string_view item = comma == std::string_view::npos
                                ? value.substr(start)
                                : value.substr(start, comma - start);
    std::string t = trim(item);
    if (!t.empty()) items.push_back(std::move(t));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

std::pair<std::string, std::string> split_delimiter_pair(
    const std::string& item, const std::string& path) {
  std::istringstream ss(item);
  std::string open, close, extra;
  if (!(ss >> open >> close) || (ss >> extra))
    throw std::runtime_error("bad delimiter pair '" + item + "' in " + path +
                             " (expected \"open close\")");
  return {open, close};
}

}  // namespace

LanguageProfile LanguageProfile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open language profile: " + path);
  LanguageProfile p;
  p.line_prefixes.clear();
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad profile line (no '='): " + t);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "line_prefixes") {
      p.line_prefixes = split_list(value);
    } else if (key == "block_delimiters") {
      p.block_delimiters.clear();
      for (const std::string& item : split_list(value))
        p.block_delimiters.push_back(split_delimiter_pair(item, path));
    } else if (key == "doc_delimiters") {
      p.doc_delimiters.clear();
      for (const std::string& item : split_list(value))
        p.doc_delimiters.push_back(split_delimiter_pair(item, path));
    } else if (key == "extensions") {
      p.extensions = split_list(value);
    } else if (key == "string_quotes") {
      p.string_quotes = value;
    } else if (key == "backslash_escapes") {
      p.backslash_escapes = (value == "true" || value == "1");
    } else {
      throw std::runtime_error("unknown profile key: " + key);
    }
  }
  return p;
}

namespace {

struct BlockOpen {
  const std::string* open;
  const std::string* close;
  CommentKind kind;
};

}  // namespace

Extraction extract_comments(std::string_view source,
                            const LanguageProfile& profile) {
  Extraction result;

  std::vector<BlockOpen> blocks;
  for (const auto& [open, close] : profile.doc_delimiters)
    blocks.push_back({&open, &close, CommentKind::doc});
  for (const auto& [open, close] : profile.block_delimiters)
    blocks.push_back({&open, &close, CommentKind::block});
  // longest open first so "/**" is tried before "/*"
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const BlockOpen& a, const BlockOpen& b) {
                     return a.open->size() > b.open->size();
                   });

  std::size_t i = 0;
  int line = 1;
  auto advance_through = [&](std::size_t end) {
    for (; i < end; ++i)
      if (source[i] == '\n') ++line;
  };

  while (i < source.size()) {
    char c = source[i];
    if (profile.string_quotes.find(c) != std::string::npos) {
      // string/char literal: ends at the matching quote, end of line or EOF
      std::size_t p = i + 1;
      while (p < source.size() && source[p] != c && source[p] != '\n') {
        if (profile.backslash_escapes && source[p] == '\\' &&
            p + 1 < source.size() && source[p + 1] != '\n')
          ++p;
        ++p;
      }
      if (p < source.size() && source[p] == c) ++p;
      advance_through(p);
      continue;
    }

    std::string_view rest = source.substr(i);

    const BlockOpen* unclosed = nullptr;
    const BlockOpen* matched = nullptr;
    std::size_t close_pos = 0;
    for (const BlockOpen& b : blocks) {
      if (rest.size() < b.open->size() ||
          rest.substr(0, b.open->size()) != *b.open)
        continue;
      std::size_t found = source.find(*b.close, i + b.open->size());
      if (found != std::string_view::npos) {
        matched = &b;
        close_pos = found;
        break;
      }
      if (!unclosed) unclosed = &b;
    }
    if (matched) {
      RawComment rc;
      rc.kind = matched->kind;
      rc.start_line = line;
      std::size_t body_begin = i + matched->open->size();
      rc.text = trim(source.substr(body_begin, close_pos - body_begin));
      std::size_t end = close_pos + matched->close->size();
      advance_through(end);
      rc.end_line = line;
      result.comments.push_back(std::move(rc));
      continue;
    }
    if (unclosed) {
      RawComment rc;
      rc.kind = unclosed->kind;
      rc.start_line = line;
      rc.text = trim(source.substr(i + unclosed->open->size()));
      advance_through(source.size());
      rc.end_line = line;
      result.warnings.push_back("unterminated comment starting at line " +
                                std::to_string(rc.start_line));
      result.comments.push_back(std::move(rc));
      continue;
    }

    bool line_comment = false;
    for (const std::string& prefix : profile.line_prefixes) {
      if (rest.size() < prefix.size() ||
          rest.substr(0, prefix.size()) != prefix)
        continue;
      std::size_t eol = source.find('\n', i);
      if (eol == std::string_view::npos) eol = source.size();
      RawComment rc;
      rc.kind = CommentKind::line;
      rc.start_line = line;
      rc.end_line = line;
      rc.text = trim(source.substr(i + prefix.size(), eol - i - prefix.size()));
      result.comments.push_back(std::move(rc));
      advance_through(eol);
      line_comment = true;
      break;
    }
    if (line_comment) continue;

    if (c == '\n') ++line;
    ++i;
  }
  return result;
}

std::vector<RawComment> group_consecutive(std::vector<RawComment> comments) {
  std::vector<RawComment> out;
  for (RawComment& c : comments) {
    if (!out.empty() && c.kind == CommentKind::line &&
        out.back().kind == CommentKind::line &&
        c.start_line == out.back().end_line + 1) {
      out.back().text += '\n';
      out.back().text += c.text;
      out.back().end_line = c.end_line;
    } else {
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::empty: return "empty";
    case DropReason::license: return "license";
    case DropReason::commented_code: return "commented_code";
    case DropReason::ide_generated: return "ide_generated";
    case DropReason::doc_without_tag: return "doc_without_tag";
  }
  return "empty";
}

namespace {

bool looks_like_license(const std::string& text,
                        const FilterConfig& config) {
  std::vector<std::string> tokens = tokenize(text);
  std::size_t distinct = 0;
  for (const std::string& kw : config.license_keywords) {
    if (std::find(tokens.begin(), tokens.end(), kw) != tokens.end())
      ++distinct;
    if (distinct >= config.license_min_distinct) return true;
  }
  return false;
}

bool line_looks_like_code(std::string_view line) {
  std::string t = trim(line);
  if (t.empty()) return false;
  char last = t.back();
  if (last == ';' || last == '{' || last == '}') return true;
  // identifier immediately followed by '(' or '=' (call or assignment)
  std::size_t p = 0;
  if (!(std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_'))
    return false;
  while (p < t.size() &&
         (std::isalnum(static_cast<unsigned char>(t[p])) || t[p] == '_' ||
          t[p] == '.'))
    ++p;
  while (p < t.size() && (t[p] == ' ' || t[p] == '\t')) ++p;
  return p < t.size() && (t[p] == '(' || t[p] == '=');
}

bool looks_like_code(const std::string& text, const FilterConfig& config) {
  std::size_t total = 0;
  std::size_t codeish = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = nl == std::string::npos
                                ? std::string_view(text).substr(start)
                                : std::string_view(text).substr(start,
                                                                nl - start);
    if (!trim(line).empty()) {
      ++total;
      if (line_looks_like_code(line)) ++codeish;
    }
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  if (total == 0) return false;
  return static_cast<double>(codeish) >=
         config.code_line_fraction * static_cast<double>(total);
}

bool has_task_tag(const std::string& text, const TagSet& tags) {
  return classify_mat(text, tags, MatchStrategy::fuzzy).satd;
}

}  // namespace

FilterOutcome apply_filters(std::vector<RawComment> comments,
                            const FilterConfig& config, const TagSet& tags) {
  FilterOutcome out;
  for (RawComment& c : comments) {
    if (trim(c.text).empty()) {
      out.dropped.emplace_back(std::move(c), DropReason::empty);
      continue;
    }
    if (looks_like_license(c.text, config)) {
      out.dropped.emplace_back(std::move(c), DropReason::license);
      continue;
    }
    if (looks_like_code(c.text, config)) {
      out.dropped.emplace_back(std::move(c), DropReason::commented_code);
      continue;
    }
    const std::string trimmed = trim(c.text);
    if (std::find(config.ide_texts.begin(), config.ide_texts.end(), trimmed) !=
        config.ide_texts.end()) {
      out.dropped.emplace_back(std::move(c), DropReason::ide_generated);
      continue;
    }
    if (config.drop_doc_without_tag && c.kind == CommentKind::doc &&
        !has_task_tag(c.text, tags)) {
      out.dropped.emplace_back(std::move(c), DropReason::doc_without_tag);
      continue;
    }
    out.kept.push_back(std::move(c));
  }
  return out;
}

namespace {

bool extension_matches(const fs::path& p, const LanguageProfile& profile) {
  std::string ext = p.extension().string();
  for (char& c : ext)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (const std::string& want : profile.extensions)
    if (ext == want) return true;
  return false;
}

}  // namespace

ScanResult scan_paths(const std::vector<std::string>& paths,
                      const ScanOptions& options) {
  std::vector<fs::path> files;
  for (const std::string& p : paths) {
    fs::path path(p);
    if (fs::is_directory(path)) {
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file() &&
            extension_matches(entry.path(), options.profile))
          files.push_back(entry.path());
      }
    } else if (fs::is_regular_file(path)) {
      files.push_back(path);
    } else {
      throw std::runtime_error("no such file or directory: " + p);
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());

  ScanResult result;
  std::int64_t next_id = 1;
  for (const fs::path& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string source = sanitize_utf8(buf.str());

    Extraction ex = extract_comments(source, options.profile);
    for (const std::string& w : ex.warnings)
      result.warnings.push_back(file.string() + ": " + w);
    std::vector<RawComment> grouped = group_consecutive(std::move(ex.comments));
    result.comments_extracted += grouped.size();

    std::vector<RawComment> kept;
    if (options.apply_filtering) {
      FilterOutcome f =
          apply_filters(std::move(grouped), options.filters, options.tags);
      kept = std::move(f.kept);
      for (auto& [c, reason] : f.dropped)
        result.dropped.emplace_back(
            file.string() + ":" + std::to_string(c.start_line),
            reason);
    } else {
      for (RawComment& c : grouped)
        if (!trim(c.text).empty()) kept.push_back(std::move(c));
    }

    for (RawComment& rc : kept) {
      Comment c;
      c.project = options.project;
      c.id = next_id++;
      c.text = std::move(rc.text);
      c.kind = rc.kind;
      c.file = file.string();
      c.start_line = rc.start_line;
      c.end_line = rc.end_line;
      result.corpus.comments.push_back(std::move(c));
    }
    ++result.files_scanned;
  }
  return result;
}

}  // namespace satd
