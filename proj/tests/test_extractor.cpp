#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "satd/extractor.hpp"

using namespace satd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           fs::path("satd_extractor_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name, const std::string& content) {
    fs::path p = path / name;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
};

Extraction java_extract(std::string_view source) {
  return extract_comments(source, LanguageProfile::java());
}

RawComment line_comment(std::string text, int line) {
  RawComment c;
  c.kind = CommentKind::line;
  c.text = std::move(text);
  c.start_line = line;
  c.end_line = line;
  return c;
}

}  // namespace

TEST_CASE("line comments end at the newline") {
  Extraction ex = java_extract("int x; // TODO fix\nint y;\n");
  REQUIRE(ex.comments.size() == 1);
  CHECK(ex.comments[0].kind == CommentKind::line);
  CHECK(ex.comments[0].text == "TODO fix");
  CHECK(ex.comments[0].start_line == 1);
  CHECK(ex.comments[0].end_line == 1);
  CHECK(ex.warnings.empty());
}

TEST_CASE("block comments span lines and keep interior text verbatim") {
  Extraction ex = java_extract("a();\n/* first\n   second */\nb();\n");
  REQUIRE(ex.comments.size() == 1);
  CHECK(ex.comments[0].kind == CommentKind::block);
  CHECK(ex.comments[0].text == "first\n   second");
  CHECK(ex.comments[0].start_line == 2);
  CHECK(ex.comments[0].end_line == 3);
}

TEST_CASE("doc comments are recognized by the longer opener") {
  Extraction ex = java_extract("/** Returns the index. */\nint f();\n");
  REQUIRE(ex.comments.size() == 1);
  CHECK(ex.comments[0].kind == CommentKind::doc);
  CHECK(ex.comments[0].text == "Returns the index.");
}

TEST_CASE("degenerate comment openers") {
  // "/**/" cannot be a doc comment (no closing "*/" after "/**"), so the
  // shorter block opener wins
  Extraction ex1 = java_extract("/**/\n");
  REQUIRE(ex1.comments.size() == 1);
  CHECK(ex1.comments[0].kind == CommentKind::block);
  CHECK(ex1.comments[0].text == "");
  // "/***/" is an empty doc comment
  Extraction ex2 = java_extract("/***/\n");
  REQUIRE(ex2.comments.size() == 1);
  CHECK(ex2.comments[0].kind == CommentKind::doc);
  CHECK(ex2.comments[0].text == "");
}

TEST_CASE("comment markers inside string literals are ignored") {
  CHECK(java_extract("String s = \"// not a comment\";\n").comments.empty());
  CHECK(java_extract("String s = \"/* no */\";\n").comments.empty());
  // escaped quote keeps the literal open
  CHECK(java_extract("String s = \"a\\\" // still string\";\n")
            .comments.empty());
  // char literals too
  CHECK(java_extract("char c = '/'; char d = '/';\n").comments.empty());
  // a real comment after the literal closes
  Extraction ex = java_extract("String s = \"x\"; // trailing\n");
  REQUIRE(ex.comments.size() == 1);
  CHECK(ex.comments[0].text == "trailing");
}

TEST_CASE("string literals terminate at end of line") {
  // unterminated literal: the line break ends it, the next line's comment
  // is found
  Extraction ex = java_extract("String s = \"oops\n// comment\n");
  REQUIRE(ex.comments.size() == 1);
  CHECK(ex.comments[0].text == "comment");
  CHECK(ex.comments[0].start_line == 2);
}

TEST_CASE("unterminated block comment runs to end of input with a warning") {
  Extraction ex = java_extract("a();\n/* dangling\ntext");
  REQUIRE(ex.comments.size() == 1);
  CHECK(ex.comments[0].text == "dangling\ntext");
  CHECK(ex.comments[0].start_line == 2);
  CHECK(ex.comments[0].end_line == 3);
  REQUIRE(ex.warnings.size() == 1);
  CHECK(ex.warnings[0].find("unterminated") != std::string::npos);
}

TEST_CASE("several comments keep source order") {
  Extraction ex = java_extract(
      "// one\nint a; /* two */\n// three\n/** four */\n");
  REQUIRE(ex.comments.size() == 4);
  CHECK(ex.comments[0].text == "one");
  CHECK(ex.comments[1].text == "two");
  CHECK(ex.comments[2].text == "three");
  CHECK(ex.comments[3].text == "four");
  CHECK(ex.comments[1].kind == CommentKind::block);
  CHECK(ex.comments[3].kind == CommentKind::doc);
}

TEST_CASE("consecutive line comments merge into one") {
  std::vector<RawComment> input = {
      line_comment("first", 1),
      line_comment("second", 2),
      line_comment("", 3),
      line_comment("after gap", 5),
  };
  std::vector<RawComment> grouped = group_consecutive(input);
  REQUIRE(grouped.size() == 2);
  CHECK(grouped[0].text == "first\nsecond\n");
  CHECK(grouped[0].start_line == 1);
  CHECK(grouped[0].end_line == 3);
  CHECK(grouped[1].text == "after gap");
  CHECK(grouped[1].start_line == 5);
}

TEST_CASE("grouping leaves block comments alone") {
  RawComment blocky;
  blocky.kind = CommentKind::block;
  blocky.text = "block";
  blocky.start_line = 2;
  blocky.end_line = 2;
  std::vector<RawComment> input = {line_comment("a", 1), blocky,
                                   line_comment("b", 3)};
  std::vector<RawComment> grouped = group_consecutive(input);
  REQUIRE(grouped.size() == 3);
  CHECK(grouped[0].text == "a");
  CHECK(grouped[1].text == "block");
  CHECK(grouped[2].text == "b");
}

TEST_CASE("empty comments are dropped") {
  FilterConfig config;
  TagSet tags = TagSet::defaults();
  std::vector<RawComment> input = {line_comment("", 1),
                                   line_comment("real text", 2)};
  FilterOutcome out = apply_filters(input, config, tags);
  REQUIRE(out.kept.size() == 1);
  CHECK(out.kept[0].text == "real text");
  REQUIRE(out.dropped.size() == 1);
  CHECK(out.dropped[0].second == DropReason::empty);
}

TEST_CASE("license headers are dropped on two distinct keywords") {
  FilterConfig config;
  TagSet tags = TagSet::defaults();
  RawComment license;
  license.kind = CommentKind::block;
  license.text =
      "Licensed under the Apache License, Version 2.0;\n"
      "you may not use this file except in compliance.";
  RawComment mention = line_comment("see the license for details", 2);
  FilterOutcome out = apply_filters({license, mention}, config, tags);
  // one keyword alone ("license") is not enough
  REQUIRE(out.kept.size() == 1);
  CHECK(out.kept[0].text == mention.text);
  REQUIRE(out.dropped.size() == 1);
  CHECK(out.dropped[0].second == DropReason::license);
}

TEST_CASE("commented-out code is dropped by line share") {
  FilterConfig config;
  TagSet tags = TagSet::defaults();
  RawComment code;
  code.kind = CommentKind::block;
  code.text = "int x = compute();\nreturn x;";
  RawComment prose = line_comment("explains what compute does", 4);
  RawComment mixed;
  mixed.kind = CommentKind::block;
  // one code-looking line out of three stays below the 50% bar
  mixed.text = "overall description\nint x = 1;\nmore prose here";
  FilterOutcome out = apply_filters({code, prose, mixed}, config, tags);
  REQUIRE(out.kept.size() == 2);
  REQUIRE(out.dropped.size() == 1);
  CHECK(out.dropped[0].second == DropReason::commented_code);
}

TEST_CASE("ide boilerplate is dropped only on exact text") {
  FilterConfig config;
  TagSet tags = TagSet::defaults();
  std::vector<RawComment> input = {
      line_comment("Auto-generated method stub", 1),
      line_comment("TODO Auto-generated method stub", 2),
      line_comment("Auto-generated catch block", 3),
  };
  FilterOutcome out = apply_filters(input, config, tags);
  REQUIRE(out.kept.size() == 1);
  CHECK(out.kept[0].text == "TODO Auto-generated method stub");
  REQUIRE(out.dropped.size() == 2);
  CHECK(out.dropped[0].second == DropReason::ide_generated);
  CHECK(out.dropped[1].second == DropReason::ide_generated);
}

TEST_CASE("doc comments survive only with a task tag") {
  FilterConfig config;
  TagSet tags = TagSet::defaults();
  RawComment plain;
  plain.kind = CommentKind::doc;
  plain.text = "Returns the index of the element.";
  RawComment tagged;
  tagged.kind = CommentKind::doc;
  tagged.text = "TODO document the failure modes.";
  RawComment fuzzy_tagged;
  fuzzy_tagged.kind = CommentKind::doc;
  fuzzy_tagged.text = "XXXtreme case, see tracker.";
  FilterOutcome out =
      apply_filters({plain, tagged, fuzzy_tagged}, config, tags);
  REQUIRE(out.kept.size() == 2);
  REQUIRE(out.dropped.size() == 1);
  CHECK(out.dropped[0].second == DropReason::doc_without_tag);
  CHECK(out.dropped[0].first.text == plain.text);

  // the rule can be switched off
  config.drop_doc_without_tag = false;
  CHECK(apply_filters({plain}, config, tags).kept.size() == 1);
}

TEST_CASE("every comment lands in exactly one bucket") {
  FilterConfig config;
  TagSet tags = TagSet::defaults();
  std::vector<RawComment> input;
  for (int i = 0; i < 20; ++i) {
    RawComment c = line_comment(
        i % 3 == 0 ? "" : i % 3 == 1 ? "TODO item" : "plain prose", i + 1);
    input.push_back(c);
  }
  FilterOutcome out = apply_filters(input, config, tags);
  CHECK(out.kept.size() + out.dropped.size() == input.size());
}

TEST_CASE("drop reasons have names") {
  CHECK(to_string(DropReason::empty) == "empty");
  CHECK(to_string(DropReason::license) == "license");
  CHECK(to_string(DropReason::commented_code) == "commented_code");
  CHECK(to_string(DropReason::ide_generated) == "ide_generated");
  CHECK(to_string(DropReason::doc_without_tag) == "doc_without_tag");
}

TEST_CASE("scanning a directory tree") {
  TempDir tmp;
  tmp.file("src/A.java",
           "// TODO fix overflow\n"
           "int add(int a, int b) { return a + b; }\n");
  tmp.file("src/B.java",
           "/* Licensed under the Apache License.\n"
           " * Copyright 2010 */\n"
           "// regular note\n");
  tmp.file("src/notes.txt", "// TODO not a java file\n");
  ScanOptions options;
  options.project = "demo";
  ScanResult result = scan_paths({tmp.path.string()}, options);
  CHECK(result.files_scanned == 2);
  CHECK(result.comments_extracted == 3);
  REQUIRE(result.corpus.size() == 2);
  CHECK(result.corpus.project() == "demo");
  // ids are 1-based over kept comments, files in sorted path order
  CHECK(result.corpus.comments[0].id == 1);
  CHECK(result.corpus.comments[0].text == "TODO fix overflow");
  CHECK(result.corpus.comments[1].text == "regular note");
  CHECK(result.corpus.comments[0].file.find("A.java") != std::string::npos);
  CHECK(result.corpus.comments[0].start_line == 1);
  REQUIRE(result.dropped.size() == 1);
  CHECK(result.dropped[0].second == DropReason::license);

  // unfiltered scan keeps the license header
  options.apply_filtering = false;
  CHECK(scan_paths({tmp.path.string()}, options).corpus.size() == 3);
}

TEST_CASE("scan of an explicit file ignores the extension filter") {
  TempDir tmp;
  std::string file = tmp.file("odd_name.jx", "// TODO direct file\n");
  ScanOptions options;
  options.project = "demo";
  ScanResult result = scan_paths({file}, options);
  REQUIRE(result.corpus.size() == 1);
  CHECK(result.corpus.comments[0].text == "TODO direct file");
}

TEST_CASE("language profiles load from key=value files") {
  TempDir tmp;
  std::string path = tmp.file("script.profile",
                              "# hash-comment language\n"
                              "line_prefixes = #\n"
                              "block_delimiters = =begin =end\n"
                              "doc_delimiters =\n"
                              "extensions = .rb\n"
                              "string_quotes = \"'\n"
                              "backslash_escapes = true\n");
  LanguageProfile profile = LanguageProfile::load(path);
  CHECK(profile.line_prefixes == std::vector<std::string>{"#"});
  REQUIRE(profile.block_delimiters.size() == 1);
  CHECK(profile.block_delimiters[0].first == "=begin");
  CHECK(profile.block_delimiters[0].second == "=end");
  CHECK(profile.doc_delimiters.empty());
  CHECK(profile.extensions == std::vector<std::string>{".rb"});

  Extraction ex =
      extract_comments("x = 1 # TODO tune\n=begin\nblock\n=end\n", profile);
  REQUIRE(ex.comments.size() == 2);
  CHECK(ex.comments[0].text == "TODO tune");
  CHECK(ex.comments[1].text == "block");

  CHECK_THROWS(LanguageProfile::load(tmp.file("bad.profile", "nonsense\n")));
  CHECK_THROWS(
      LanguageProfile::load(tmp.file("bad2.profile", "mystery = 1\n")));
}

TEST_CASE("java profile defaults") {
  LanguageProfile java = LanguageProfile::java();
  CHECK(java.line_prefixes == std::vector<std::string>{"//"});
  REQUIRE(java.block_delimiters.size() == 1);
  CHECK(java.block_delimiters[0].first == "/*");
  REQUIRE(java.doc_delimiters.size() == 1);
  CHECK(java.doc_delimiters[0].first == "/**");
  CHECK(java.extensions == std::vector<std::string>{".java"});
}
