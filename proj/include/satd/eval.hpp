#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "satd/corpus.hpp"
#include "satd/matchers.hpp"

namespace satd {

// SATD is the positive class throughout.
struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
  long total() const { return tp + fp + tn + fn; }
};

// Pairs predictions with gold labels by position; the ids must line up and
// every gold comment must be labeled, otherwise this throws.
ConfusionMatrix confusion(const Corpus& gold,
                          const std::vector<Prediction>& predictions);

// nullopt marks an undefined score (zero denominator): precision needs
// tp+fp > 0, recall needs tp+fn > 0, F1 needs both defined and p+r > 0.
struct Scores {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

Scores compute_scores(const ConfusionMatrix& cm);

inline constexpr std::array<std::string_view, 3> kIndicators{
    "precision", "recall", "f1"};

// Arithmetic mean that skips undefined entries; skipped counts how many.
struct AverageCell {
  std::optional<double> value;
  int skipped = 0;
};
std::array<AverageCell, 3> average_scores(const std::vector<Scores>& rows);

struct ProjectEvaluation {
  std::string project;
  ConfusionMatrix cm;
  Scores scores;
};

struct EvaluationReport {
  std::string classifier;
  std::string scenario;  // "per-project", "mto" or "oto"
  std::vector<ProjectEvaluation> projects;
  std::array<AverageCell, 3> average;  // over projects, undefined skipped
};

// target corpus + the other projects' corpora -> predictions for the target
using CrossProjectClassifier = std::function<std::vector<Prediction>(
    const Corpus& target, const std::vector<const Corpus*>& sources)>;

// Each project in turn becomes the target; the classifier sees the other
// projects as training sources (unsupervised classifiers ignore them).
EvaluationReport run_mto(const std::vector<Corpus>& projects,
                         const CrossProjectClassifier& classifier,
                         const std::string& classifier_name);

struct OtoCell {
  std::string source;
  std::string target;
  ConfusionMatrix cm;
  Scores scores;
};

struct OtoTargetAverage {
  std::string project;
  std::array<AverageCell, 3> average;  // over that target's source runs
};

struct OtoReport {
  std::string classifier;
  std::vector<OtoCell> cells;                  // target-major, source-minor
  std::vector<OtoTargetAverage> per_target;
  std::array<AverageCell, 3> average;          // over per-target averages
};

// Every ordered (source, target) pair with source != target runs a
// single-source classifier; per-target scores average over the sources.
OtoReport run_oto(const std::vector<Corpus>& projects,
                  const CrossProjectClassifier& classifier,
                  const std::string& classifier_name);

// ----- rank statistics -------------------------------------------------

struct WilcoxonResult {
  double p = 1.0;
  double w_plus = 0.0;  // sum of positive-difference ranks
  int n = 0;            // pairs with nonzero difference
  bool exact = false;   // enumeration (n <= 25) vs normal approximation
};

// Two-sided signed-rank test on paired samples: zero differences dropped,
// tied magnitudes get averaged ranks, exact enumeration up to n = 25, then
// a normal approximation with continuity and tie corrections. Both tails
// are doubled from the smaller one and capped at 1.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b);

// (#(a_i > b_j) - #(a_i < b_j)) / (|a| * |b|)
double cliffs_delta(const std::vector<double>& a, const std::vector<double>& b);

enum class EffectBand { negligible, small, moderate, large };
EffectBand effect_band(double delta);  // thresholds 0.147, 0.33, 0.474 on |d|
std::string_view to_string(EffectBand band);

// ----- published baseline scores ----------------------------------------

// CSV of approach,scenario,project,indicator,value rows. The "Average" row
// is kept separately from the per-project rows.
class PublishedScores {
public:
  static PublishedScores load_csv(const std::string& path);

  bool has(const std::string& approach, const std::string& scenario) const;
  std::vector<std::string> approaches() const;
  // project order as first seen in the file, "Average" excluded
  std::vector<std::string> projects(const std::string& approach,
                                    const std::string& scenario) const;
  std::optional<double> value(const std::string& approach,
                              const std::string& scenario,
                              const std::string& project,
                              const std::string& indicator) const;

private:
  struct Row {
    std::string approach, scenario, project, indicator;
    double value;
  };
  std::vector<Row> rows_;
};

// One approach's score table: per-project values plus an average row.
struct ApproachScores {
  std::string name;
  std::vector<std::string> projects;
  std::array<std::vector<double>, 3> values;     // [precision, recall, f1]
  std::array<std::optional<double>, 3> average;  // aligned with kIndicators
};

ApproachScores approach_from_published(const PublishedScores& published,
                                       const std::string& approach,
                                       const std::string& scenario);
ApproachScores approach_from_report(const EvaluationReport& report);
ApproachScores approach_from_report(const OtoReport& report);

struct IndicatorComparison {
  std::string indicator;
  // per-project (ours - other) / other * 100; undefined when other == 0
  std::vector<std::optional<double>> improvement_pct;
  std::optional<double> average_improvement_pct;  // from the average rows
  WilcoxonResult wilcoxon;
  bool significant = false;  // p < 0.05
  double delta = 0.0;
  EffectBand band = EffectBand::negligible;
};

struct ApproachComparison {
  std::string ours;
  std::string other;
  bool include_average = false;  // average row folded into the statistics
  std::vector<std::string> projects;
  std::array<IndicatorComparison, 3> indicators;
};

// Statistics pair our scores against another approach's, project by
// project. With include_average the average row joins the paired vectors
// as one more observation.
ApproachComparison compare_approaches(const ApproachScores& ours,
                                      const ApproachScores& other,
                                      bool include_average = false);

// ----- prediction overlap ------------------------------------------------

struct OverlapRow {
  std::string project;
  long tp_union = 0, tp_both = 0, tp_only_a = 0, tp_only_b = 0;
  long tn_union = 0, tn_both = 0, tn_only_a = 0, tn_only_b = 0;
};

struct OverlapReport {
  std::string name_a;
  std::string name_b;
  std::vector<OverlapRow> rows;
  OverlapRow total;  // project = "Total"
};

// How two classifiers' correct answers relate: counts of shared and unique
// true positives / true negatives per project.
OverlapReport overlap_analysis(const std::vector<Corpus>& golds,
                               const std::vector<std::vector<Prediction>>& a,
                               const std::vector<std::vector<Prediction>>& b,
                               const std::string& name_a,
                               const std::string& name_b);

}  // namespace satd
