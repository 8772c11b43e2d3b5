#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "satd/corpus.hpp"
#include "satd/eval.hpp"
#include "satd/extractor.hpp"
#include "satd/matchers.hpp"
#include "satd/report.hpp"
#include "satd/textprep.hpp"
#include "satd/tm.hpp"

namespace {

using namespace satd;

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << content;
}

std::string lowercased(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

// options shared by classify / evaluate / compare --overlap
struct ClassifierOptions {
  std::string classifier = "mat";
  std::string strategy = "fuzzy";
  std::string tags_file;
  std::string tags_dir;  // per-project extra tags: <dir>/<project>.txt
  std::string patterns_file;
  std::string stopwords_file;
  std::string model_file;
  std::vector<std::string> train_files;
  std::string save_model_file;
  double feature_ratio = 0.10;
  double alpha = 1.0;
  bool raw_counts = false;
  int parallelism = 1;
};

void add_classifier_options(CLI::App* cmd, ClassifierOptions& o) {
  cmd->add_option("--classifier", o.classifier,
                  "mat, mat-ext, pattern, tm or tm+mat")
      ->check(CLI::IsMember({"mat", "mat-ext", "pattern", "tm", "tm+mat"}));
  cmd->add_option("--strategy", o.strategy, "tag matching: strict or fuzzy")
      ->check(CLI::IsMember({"strict", "fuzzy"}));
  cmd->add_option("--tags", o.tags_file,
                  "tag file; replaces the default tags for mat, adds to "
                  "them for mat-ext");
  cmd->add_option("--tags-dir", o.tags_dir,
                  "directory of per-project extra tag files for mat-ext "
                  "(<project>.txt, lowercase)");
  cmd->add_option("--patterns", o.patterns_file,
                  "pattern file for the pattern classifier");
  cmd->add_option("--stopwords", o.stopwords_file,
                  "stop-word file for tm (defaults to the built-in list)");
  cmd->add_option("--model", o.model_file, "trained tm model (JSON)");
  cmd->add_option("--train", o.train_files,
                  "labeled training corpora for tm (one per source project)");
  cmd->add_option("--save-model", o.save_model_file,
                  "write the trained tm model to this path");
  cmd->add_option("--feature-ratio", o.feature_ratio,
                  "fraction of vocabulary kept by feature selection");
  cmd->add_option("--alpha", o.alpha, "naive Bayes smoothing");
  cmd->add_flag("--raw-counts", o.raw_counts,
                "weight features by raw counts instead of tf-idf");
  cmd->add_option("--parallelism", o.parallelism, "worker threads")
      ->check(CLI::PositiveNumber);
}

StopWordList load_stops(const ClassifierOptions& o) {
  if (o.stopwords_file.empty()) return StopWordList::defaults();
  return StopWordList::load(o.stopwords_file);
}

TagSet base_tags(const ClassifierOptions& o) {
  if (o.classifier == "mat-ext") {
    TagSet tags = TagSet::defaults();
    if (!o.tags_file.empty()) {
      TagSet extra = TagSet::load(o.tags_file);
      tags = tags.extended_with(
          std::vector<std::string>(extra.stems().begin(), extra.stems().end()));
    }
    return tags;
  }
  if (!o.tags_file.empty()) return TagSet::load(o.tags_file);
  return TagSet::defaults();
}

// per-target tag set: mat-ext can pull extra tags from a directory of
// per-project files keyed by the lowercased project name
TagSet tags_for_project(const ClassifierOptions& o, const TagSet& base,
                        const std::string& project) {
  if (o.classifier != "mat-ext" || o.tags_dir.empty()) return base;
  std::string path = o.tags_dir + "/" + lowercased(project) + ".txt";
  std::ifstream probe(path);
  if (!probe) return base;
  TagSet extra = TagSet::load(path);
  return base.extended_with(
      std::vector<std::string>(extra.stems().begin(), extra.stems().end()));
}

MatchStrategy strategy_of(const ClassifierOptions& o) {
  return match_strategy_from_string(o.strategy);
}

TmConfig tm_config(const ClassifierOptions& o) {
  TmConfig cfg;
  cfg.alpha = o.alpha;
  cfg.feature_ratio = o.feature_ratio;
  cfg.use_tfidf_weights = !o.raw_counts;
  return cfg;
}

bool is_supervised(const ClassifierOptions& o) {
  return o.classifier == "tm" || o.classifier == "tm+mat";
}

void require_patterns(const ClassifierOptions& o) {
  if (o.patterns_file.empty())
    throw std::runtime_error(
        "the pattern classifier requires --patterns FILE");
}

// classifier for one corpus, given already-trained supervised state
std::vector<Prediction> classify_one(const Corpus& corpus,
                                     const ClassifierOptions& o,
                                     const TagSet& tags,
                                     const PatternSet* patterns,
                                     const VotingEnsemble* ensemble,
                                     const StopWordList& stops) {
  if (o.classifier == "mat" || o.classifier == "mat-ext") {
    MatchStrategy strategy = strategy_of(o);
    return classify_corpus(
        corpus,
        [&tags, strategy](const Comment& c) {
          return classify_mat(c.text, tags, strategy);
        },
        o.parallelism);
  }
  if (o.classifier == "pattern") {
    return classify_corpus(
        corpus,
        [patterns](const Comment& c) {
          return classify_pattern(c.text, *patterns);
        },
        o.parallelism);
  }
  if (o.classifier == "tm")
    return ensemble->classify(corpus, stops, o.parallelism);
  if (o.classifier == "tm+mat")
    return combine_with_mat(corpus, *ensemble, tags, stops, o.parallelism);
  throw std::runtime_error("unknown classifier: " + o.classifier);
}

int cmd_import(const std::string& comments, const std::string& labels,
               const std::string& project, const std::string& label_map,
               const std::string& out) {
  LabelMapping mapping = label_map.empty() ? LabelMapping::defaults()
                                           : LabelMapping::load(label_map);
  Corpus corpus = import_benchmark(comments, labels, project, mapping);
  std::ostringstream buf;
  write_jsonl(corpus, buf);
  write_output(buf.str(), out);
  std::cerr << "imported " << corpus.size() << " comments for project "
            << project << "\n";
  return 0;
}

int cmd_scan(const std::vector<std::string>& paths,
             const std::string& project, const std::string& profile_file,
             const std::string& tags_file,
             const std::string& extensions, bool keep_all,
             const std::string& out) {
  ScanOptions options;
  if (!profile_file.empty())
    options.profile = LanguageProfile::load(profile_file);
  if (!extensions.empty())
    options.profile.extensions = split_csv_list(extensions);
  if (!tags_file.empty()) options.tags = TagSet::load(tags_file);
  options.project = project;
  options.apply_filtering = !keep_all;

  ScanResult result = scan_paths(paths, options);
  std::ostringstream buf;
  write_jsonl(result.corpus, buf);
  write_output(buf.str(), out);

  for (const std::string& w : result.warnings)
    std::cerr << "warning: " << w << "\n";
  std::map<std::string, std::size_t> drop_counts;
  for (const auto& [where, reason] : result.dropped)
    ++drop_counts[std::string(to_string(reason))];
  std::cerr << "scanned " << result.files_scanned << " file(s), extracted "
            << result.comments_extracted << " comment group(s), kept "
            << result.corpus.size() << "\n";
  for (const auto& [reason, count] : drop_counts)
    std::cerr << "  dropped " << count << " (" << reason << ")\n";
  return 0;
}

int cmd_classify(const std::string& corpus_file, const ClassifierOptions& o,
                 const std::string& format, const std::string& out) {
  Corpus corpus = read_jsonl(corpus_file);
  StopWordList stops = load_stops(o);
  TagSet tags = tags_for_project(o, base_tags(o), corpus.project());

  std::unique_ptr<PatternSet> patterns;
  if (o.classifier == "pattern") {
    require_patterns(o);
    patterns = std::make_unique<PatternSet>(PatternSet::load(o.patterns_file));
  }
  std::unique_ptr<VotingEnsemble> ensemble;
  if (is_supervised(o)) {
    if (!o.model_file.empty()) {
      ensemble =
          std::make_unique<VotingEnsemble>(VotingEnsemble::load(o.model_file));
    } else if (!o.train_files.empty()) {
      std::vector<Corpus> sources;
      sources.reserve(o.train_files.size());
      for (const std::string& f : o.train_files)
        sources.push_back(read_jsonl(f));
      std::vector<const Corpus*> ptrs;
      for (const Corpus& c : sources) ptrs.push_back(&c);
      ensemble = std::make_unique<VotingEnsemble>(
          VotingEnsemble::train(ptrs, stops, tm_config(o)));
    } else {
      throw std::runtime_error(
          "tm classifiers need --model FILE or --train CORPUS...");
    }
    if (!o.save_model_file.empty()) ensemble->save(o.save_model_file);
  }

  std::vector<Prediction> preds =
      classify_one(corpus, o, tags, patterns.get(), ensemble.get(), stops);
  write_output(render_predictions(preds, output_format_from_string(format)),
               out);
  return 0;
}

int cmd_evaluate(const std::vector<std::string>& corpus_files,
                 const ClassifierOptions& o, const std::string& scenario,
                 const std::string& format, const std::string& out) {
  std::vector<Corpus> projects;
  projects.reserve(corpus_files.size());
  for (const std::string& f : corpus_files) projects.push_back(read_jsonl(f));

  StopWordList stops = load_stops(o);
  TagSet base = base_tags(o);
  std::unique_ptr<PatternSet> patterns;
  if (o.classifier == "pattern") {
    require_patterns(o);
    patterns = std::make_unique<PatternSet>(PatternSet::load(o.patterns_file));
  }

  CrossProjectClassifier classifier = [&](const Corpus& target,
                                          const std::vector<const Corpus*>&
                                              sources) {
    if (is_supervised(o)) {
      VotingEnsemble ensemble =
          VotingEnsemble::train(sources, stops, tm_config(o));
      if (o.classifier == "tm+mat")
        return combine_with_mat(target, ensemble,
                                tags_for_project(o, base, target.project()),
                                stops, o.parallelism);
      return ensemble.classify(target, stops, o.parallelism);
    }
    TagSet tags = tags_for_project(o, base, target.project());
    return classify_one(target, o, tags, patterns.get(), nullptr, stops);
  };

  std::string name = o.classifier;
  if (o.classifier == "mat" || o.classifier == "mat-ext")
    name += " (" + o.strategy + ")";

  OutputFormat fmt = output_format_from_string(format);
  if (scenario == "oto") {
    if (!is_supervised(o) && o.classifier != "pattern" &&
        o.classifier != "mat" && o.classifier != "mat-ext")
      throw std::runtime_error("unknown classifier: " + o.classifier);
    OtoReport report = run_oto(projects, classifier, name);
    write_output(render(report, fmt), out);
  } else {
    EvaluationReport report = run_mto(projects, classifier, name);
    if (!is_supervised(o)) report.scenario = "per-project";
    write_output(render(report, fmt), out);
  }
  return 0;
}

int cmd_compare(const std::string& published_file, const std::string& ours,
                const std::string& vs, const std::string& scenario,
                bool include_average, const std::string& overlap_spec,
                const std::vector<std::string>& corpus_files,
                ClassifierOptions o, const std::string& format,
                const std::string& out) {
  OutputFormat fmt = output_format_from_string(format);
  std::string rendered;

  if (!published_file.empty()) {
    PublishedScores published = PublishedScores::load_csv(published_file);
    ApproachScores mine =
        approach_from_published(published, ours, scenario);
    std::vector<ApproachComparison> comparisons;
    for (const std::string& other : split_csv_list(vs)) {
      ApproachScores theirs =
          approach_from_published(published, other, scenario);
      comparisons.push_back(
          compare_approaches(mine, theirs, include_average));
    }
    if (comparisons.empty())
      throw std::runtime_error("--vs needs at least one approach to compare");
    rendered += render(comparisons, fmt);
  }

  if (!overlap_spec.empty()) {
    std::vector<std::string> names = split_csv_list(overlap_spec);
    if (names.size() != 2)
      throw std::runtime_error("--overlap takes exactly two classifiers");
    if (corpus_files.empty())
      throw std::runtime_error("--overlap needs labeled corpora");
    std::vector<Corpus> golds;
    for (const std::string& f : corpus_files) golds.push_back(read_jsonl(f));
    StopWordList stops = load_stops(o);

    auto run = [&](const std::string& spec)
        -> std::vector<std::vector<Prediction>> {
      ClassifierOptions co = o;
      if (spec == "mat-strict") {
        co.classifier = "mat";
        co.strategy = "strict";
      } else {
        co.classifier = spec;
      }
      if (co.classifier != "mat" && co.classifier != "mat-ext" &&
          co.classifier != "pattern")
        throw std::runtime_error(
            "--overlap supports mat, mat-strict, mat-ext and pattern");
      std::unique_ptr<PatternSet> patterns;
      if (co.classifier == "pattern") {
        require_patterns(co);
        patterns =
            std::make_unique<PatternSet>(PatternSet::load(co.patterns_file));
      }
      TagSet base = base_tags(co);
      std::vector<std::vector<Prediction>> preds;
      for (const Corpus& gold : golds)
        preds.push_back(classify_one(
            gold, co, tags_for_project(co, base, gold.project()),
            patterns.get(), nullptr, stops));
      return preds;
    };
    OverlapReport report = overlap_analysis(golds, run(names[0]),
                                            run(names[1]), names[0], names[1]);
    rendered += render(report, fmt);
  }

  if (rendered.empty())
    throw std::runtime_error(
        "nothing to compare: pass --published with --ours/--vs, or --overlap");
  write_output(rendered, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "identify self-admitted technical debt in source code comments"};
  app.require_subcommand(1);

  // import
  std::string imp_comments, imp_labels, imp_project, imp_label_map, imp_out;
  CLI::App* imp = app.add_subcommand(
      "import", "build a corpus from line-parallel comment/label files");
  imp->add_option("comments", imp_comments, "comment file (one per line)")
      ->required();
  imp->add_option("labels", imp_labels, "label file (one per line)")
      ->required();
  imp->add_option("--project", imp_project, "project name")->required();
  imp->add_option("--label-map", imp_label_map,
                  "JSON file mapping raw label strings");
  imp->add_option("--out", imp_out, "output corpus path (default stdout)");

  // scan
  std::vector<std::string> scan_paths_arg;
  std::string scan_project, scan_profile, scan_tags, scan_ext, scan_out;
  bool scan_keep_all = false;
  CLI::App* scan = app.add_subcommand(
      "scan", "extract a comment corpus from source files");
  scan->add_option("paths", scan_paths_arg, "files or directories")
      ->required();
  scan->add_option("--project", scan_project, "project name")->required();
  scan->add_option("--profile", scan_profile,
                   "language profile file (default: Java)");
  scan->add_option("--tags", scan_tags,
                   "tag file for the doc-comment exception");
  scan->add_option("--extensions", scan_ext,
                   "comma-separated extension list overriding the profile");
  scan->add_flag("--keep-all", scan_keep_all,
                 "skip filtering (empty comments are still dropped)");
  scan->add_option("--out", scan_out, "output corpus path (default stdout)");

  // classify
  std::string cls_corpus, cls_format = "json", cls_out;
  ClassifierOptions cls_opts;
  CLI::App* cls =
      app.add_subcommand("classify", "label each comment in a corpus");
  cls->add_option("corpus", cls_corpus, "corpus file (JSONL)")->required();
  add_classifier_options(cls, cls_opts);
  cls->add_option("--format", cls_format, "json, text or csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  cls->add_option("--out", cls_out, "output path (default stdout)");

  // evaluate
  std::vector<std::string> ev_corpora;
  std::string ev_scenario = "mto", ev_format = "text", ev_out;
  ClassifierOptions ev_opts;
  CLI::App* ev = app.add_subcommand(
      "evaluate", "score a classifier against labeled corpora");
  ev->add_option("corpora", ev_corpora, "labeled corpus files")->required();
  add_classifier_options(ev, ev_opts);
  ev->add_option("--scenario", ev_scenario, "mto or oto")
      ->check(CLI::IsMember({"mto", "oto"}));
  ev->add_option("--format", ev_format, "json, text or csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  ev->add_option("--out", ev_out, "output path (default stdout)");

  // compare
  std::string cmp_published, cmp_ours = "mat", cmp_vs, cmp_scenario = "mto";
  std::string cmp_overlap, cmp_format = "text", cmp_out;
  bool cmp_include_average = false;
  std::vector<std::string> cmp_corpora;
  ClassifierOptions cmp_opts;
  CLI::App* cmp = app.add_subcommand(
      "compare",
      "improvement tables and statistics against published scores, and "
      "overlap analysis between classifiers");
  cmp->add_option("corpora", cmp_corpora,
                  "labeled corpus files (for --overlap)");
  cmp->add_option("--published", cmp_published, "published scores CSV");
  cmp->add_option("--ours", cmp_ours, "approach name for our side");
  cmp->add_option("--vs", cmp_vs, "comma-separated approaches to compare");
  cmp->add_option("--scenario", cmp_scenario, "mto or oto")
      ->check(CLI::IsMember({"mto", "oto"}));
  cmp->add_flag("--include-average", cmp_include_average,
                "treat the average row as one more paired observation");
  cmp->add_option("--overlap", cmp_overlap,
                  "two classifiers (e.g. mat,pattern) for overlap analysis");
  add_classifier_options(cmp, cmp_opts);
  cmp->add_option("--format", cmp_format, "json, text or csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  cmp->add_option("--out", cmp_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (imp->parsed())
      return cmd_import(imp_comments, imp_labels, imp_project, imp_label_map,
                        imp_out);
    if (scan->parsed())
      return cmd_scan(scan_paths_arg, scan_project, scan_profile, scan_tags,
                      scan_ext, scan_keep_all, scan_out);
    if (cls->parsed())
      return cmd_classify(cls_corpus, cls_opts, cls_format, cls_out);
    if (ev->parsed())
      return cmd_evaluate(ev_corpora, ev_opts, ev_scenario, ev_format, ev_out);
    if (cmp->parsed())
      return cmd_compare(cmp_published, cmp_ours, cmp_vs, cmp_scenario,
                         cmp_include_average, cmp_overlap, cmp_corpora,
                         cmp_opts, cmp_format, cmp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
