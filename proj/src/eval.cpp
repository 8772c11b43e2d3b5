#include "satd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace satd {

ConfusionMatrix confusion(const Corpus& gold,
                          const std::vector<Prediction>& predictions) {
  if (gold.comments.size() != predictions.size())
    throw std::runtime_error(
        "prediction count does not match corpus size: " +
        std::to_string(predictions.size()) + " vs " +
        std::to_string(gold.comments.size()));
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const Comment& c = gold.comments[i];
    const Prediction& p = predictions[i];
    if (c.id != p.id)
      throw std::runtime_error("prediction id mismatch at index " +
                               std::to_string(i));
    if (!c.label)
      throw std::runtime_error("gold comment without label: " + c.project +
                               "#" + std::to_string(c.id));
    bool actual = *c.label == Label::satd;
    if (actual && p.satd) ++cm.tp;
    else if (actual && !p.satd) ++cm.fn;
    else if (!actual && p.satd) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

Scores compute_scores(const ConfusionMatrix& cm) {
  Scores s;
  if (cm.tp + cm.fp > 0)
    s.precision = static_cast<double>(cm.tp) /
                  static_cast<double>(cm.tp + cm.fp);
  if (cm.tp + cm.fn > 0)
    s.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  if (s.precision && s.recall && *s.precision + *s.recall > 0.0)
    s.f1 = 2.0 * *s.precision * *s.recall / (*s.precision + *s.recall);
  return s;
}

std::array<AverageCell, 3> average_scores(const std::vector<Scores>& rows) {
  std::array<AverageCell, 3> out;
  for (std::size_t ind = 0; ind < 3; ++ind) {
    double sum = 0.0;
    int n = 0;
    int skipped = 0;
    for (const Scores& s : rows) {
      const std::optional<double>& v =
          ind == 0 ? s.precision : ind == 1 ? s.recall : s.f1;
      if (v) {
        sum += *v;
        ++n;
      } else {
        ++skipped;
      }
    }
    out[ind].skipped = skipped;
    if (n > 0) out[ind].value = sum / n;
  }
  return out;
}

namespace {

std::vector<const Corpus*> others(const std::vector<Corpus>& projects,
                                  std::size_t except) {
  std::vector<const Corpus*> out;
  out.reserve(projects.size() - 1);
  for (std::size_t i = 0; i < projects.size(); ++i)
    if (i != except) out.push_back(&projects[i]);
  return out;
}

}  // namespace

EvaluationReport run_mto(const std::vector<Corpus>& projects,
                         const CrossProjectClassifier& classifier,
                         const std::string& classifier_name) {
  EvaluationReport report;
  report.classifier = classifier_name;
  report.scenario = "mto";
  std::vector<Scores> rows;
  for (std::size_t t = 0; t < projects.size(); ++t) {
    std::vector<Prediction> preds =
        classifier(projects[t], others(projects, t));
    ProjectEvaluation pe;
    pe.project = projects[t].project();
    pe.cm = confusion(projects[t], preds);
    pe.scores = compute_scores(pe.cm);
    rows.push_back(pe.scores);
    report.projects.push_back(std::move(pe));
  }
  report.average = average_scores(rows);
  return report;
}

OtoReport run_oto(const std::vector<Corpus>& projects,
                  const CrossProjectClassifier& classifier,
                  const std::string& classifier_name) {
  OtoReport report;
  report.classifier = classifier_name;
  for (std::size_t t = 0; t < projects.size(); ++t) {
    std::vector<Scores> target_rows;
    for (std::size_t s = 0; s < projects.size(); ++s) {
      if (s == t) continue;
      std::vector<Prediction> preds =
          classifier(projects[t], {&projects[s]});
      OtoCell cell;
      cell.source = projects[s].project();
      cell.target = projects[t].project();
      cell.cm = confusion(projects[t], preds);
      cell.scores = compute_scores(cell.cm);
      target_rows.push_back(cell.scores);
      report.cells.push_back(std::move(cell));
    }
    OtoTargetAverage avg;
    avg.project = projects[t].project();
    avg.average = average_scores(target_rows);
    report.per_target.push_back(std::move(avg));
  }
  std::vector<Scores> target_avgs;
  for (const OtoTargetAverage& ta : report.per_target) {
    Scores s;
    s.precision = ta.average[0].value;
    s.recall = ta.average[1].value;
    s.f1 = ta.average[2].value;
    target_avgs.push_back(s);
  }
  report.average = average_scores(target_avgs);
  return report;
}

// ----- rank statistics ---------------------------------------------------

namespace {

double normal_sf(double z) {  // P(Z > z)
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  if (a.size() != b.size())
    throw std::runtime_error("paired samples differ in length");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    if (diff != 0.0) d.push_back(diff);
  }
  WilcoxonResult res;
  res.n = static_cast<int>(d.size());
  if (d.empty()) {
    res.p = 1.0;
    res.exact = true;
    return res;
  }

  std::size_t n = d.size();
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {std::fabs(d[i]), i};
  std::sort(order.begin(), order.end());
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && order[j + 1].first == order[i].first) ++j;
    double avg = (static_cast<double>(i + j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k].second] = avg;
    i = j + 1;
  }
  double w_plus = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (d[k] > 0.0) w_plus += rank[k];
  res.w_plus = w_plus;

  if (n <= 25) {
    // Averaged ranks are multiples of 1/2; doubling yields integer weights,
    // so subset sums count exactly with one dynamic-programming sweep.
    std::vector<long> weights(n);
    long total_weight = 0;
    for (std::size_t k = 0; k < n; ++k) {
      weights[k] = std::lround(rank[k] * 2.0);
      total_weight += weights[k];
    }
    std::vector<unsigned long long> count(
        static_cast<std::size_t>(total_weight) + 1, 0ULL);
    count[0] = 1;
    long reached = 0;
    for (long w : weights) {
      reached += w;
      for (long s = reached; s >= w; --s)
        count[static_cast<std::size_t>(s)] +=
            count[static_cast<std::size_t>(s - w)];
    }
    long w2 = std::lround(w_plus * 2.0);
    unsigned long long le = 0, ge = 0, total = 0;
    for (long s = 0; s <= total_weight; ++s) {
      unsigned long long c = count[static_cast<std::size_t>(s)];
      total += c;
      if (s <= w2) le += c;
      if (s >= w2) ge += c;
    }
    double tail = static_cast<double>(std::min(le, ge)) /
                  static_cast<double>(total);
    res.p = std::min(1.0, 2.0 * tail);
    res.exact = true;
  } else {
    double nn = static_cast<double>(n);
    double mean = nn * (nn + 1.0) / 4.0;
    double tie_sum = 0.0;
    i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && order[j + 1].first == order[i].first) ++j;
      double t = static_cast<double>(j - i + 1);
      tie_sum += t * t * t - t;
      i = j + 1;
    }
    double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_sum / 48.0;
    double diff = w_plus - mean;
    double cc = diff > 0.0 ? 0.5 : diff < 0.0 ? -0.5 : 0.0;
    double z = (diff - cc) / std::sqrt(var);
    res.p = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
    res.exact = false;
  }
  return res;
}

double cliffs_delta(const std::vector<double>& a,
                    const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw std::runtime_error("cliffs_delta needs non-empty samples");
  long gt = 0, lt = 0;
  for (double x : a)
    for (double y : b) {
      if (x > y) ++gt;
      else if (x < y) ++lt;
    }
  return static_cast<double>(gt - lt) /
         (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

EffectBand effect_band(double delta) {
  double d = std::fabs(delta);
  if (d < 0.147) return EffectBand::negligible;
  if (d < 0.33) return EffectBand::small;
  if (d < 0.474) return EffectBand::moderate;
  return EffectBand::large;
}

std::string_view to_string(EffectBand band) {
  switch (band) {
    case EffectBand::negligible: return "negligible";
    case EffectBand::small: return "small";
    case EffectBand::moderate: return "moderate";
    case EffectBand::large: return "large";
  }
  return "negligible";
}

// ----- published scores ----------------------------------------------------

PublishedScores PublishedScores::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open published scores: " + path);
  PublishedScores ps;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (lineno == 1 && !fields.empty() && fields[0] == "approach") continue;
    if (fields.size() != 5)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 5 comma-separated fields");
    Row row;
    row.approach = fields[0];
    row.scenario = fields[1];
    row.project = fields[2];
    row.indicator = fields[3];
    try {
      row.value = std::stod(fields[4]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad numeric value '" + fields[4] + "'");
    }
    ps.rows_.push_back(std::move(row));
  }
  if (ps.rows_.empty())
    throw std::runtime_error("no data rows in " + path);
  return ps;
}

bool PublishedScores::has(const std::string& approach,
                          const std::string& scenario) const {
  for (const Row& r : rows_)
    if (r.approach == approach && r.scenario == scenario) return true;
  return false;
}

std::vector<std::string> PublishedScores::approaches() const {
  std::vector<std::string> out;
  for (const Row& r : rows_)
    if (std::find(out.begin(), out.end(), r.approach) == out.end())
      out.push_back(r.approach);
  return out;
}

std::vector<std::string> PublishedScores::projects(
    const std::string& approach, const std::string& scenario) const {
  std::vector<std::string> out;
  for (const Row& r : rows_) {
    if (r.approach != approach || r.scenario != scenario) continue;
    if (r.project == "Average") continue;
    if (std::find(out.begin(), out.end(), r.project) == out.end())
      out.push_back(r.project);
  }
  return out;
}

std::optional<double> PublishedScores::value(const std::string& approach,
                                             const std::string& scenario,
                                             const std::string& project,
                                             const std::string& indicator) const {
  for (const Row& r : rows_)
    if (r.approach == approach && r.scenario == scenario &&
        r.project == project && r.indicator == indicator)
      return r.value;
  return std::nullopt;
}

ApproachScores approach_from_published(const PublishedScores& published,
                                       const std::string& approach,
                                       const std::string& scenario) {
  ApproachScores as;
  as.name = approach;
  as.projects = published.projects(approach, scenario);
  if (as.projects.empty())
    throw std::runtime_error("no published scores for approach '" + approach +
                             "' under scenario '" + scenario + "'");
  for (std::size_t ind = 0; ind < 3; ++ind) {
    std::string indicator(kIndicators[ind]);
    for (const std::string& p : as.projects) {
      std::optional<double> v =
          published.value(approach, scenario, p, indicator);
      if (!v)
        throw std::runtime_error("published scores missing " + approach + "/" +
                                 scenario + "/" + p + "/" + indicator);
      as.values[ind].push_back(*v);
    }
    as.average[ind] = published.value(approach, scenario, "Average", indicator);
    if (!as.average[ind]) {
      double sum = 0.0;
      for (double v : as.values[ind]) sum += v;
      as.average[ind] = sum / static_cast<double>(as.values[ind].size());
    }
  }
  return as;
}

ApproachScores approach_from_report(const EvaluationReport& report) {
  ApproachScores as;
  as.name = report.classifier;
  for (const ProjectEvaluation& pe : report.projects) {
    as.projects.push_back(pe.project);
    const std::array<std::optional<double>, 3> vals{
        pe.scores.precision, pe.scores.recall, pe.scores.f1};
    for (std::size_t ind = 0; ind < 3; ++ind)
      as.values[ind].push_back(vals[ind].value_or(0.0));
  }
  for (std::size_t ind = 0; ind < 3; ++ind)
    as.average[ind] = report.average[ind].value;
  return as;
}

ApproachScores approach_from_report(const OtoReport& report) {
  ApproachScores as;
  as.name = report.classifier;
  for (const OtoTargetAverage& ta : report.per_target) {
    as.projects.push_back(ta.project);
    for (std::size_t ind = 0; ind < 3; ++ind)
      as.values[ind].push_back(ta.average[ind].value.value_or(0.0));
  }
  for (std::size_t ind = 0; ind < 3; ++ind)
    as.average[ind] = report.average[ind].value;
  return as;
}

ApproachComparison compare_approaches(const ApproachScores& ours,
                                      const ApproachScores& other,
                                      bool include_average) {
  if (ours.projects != other.projects)
    throw std::runtime_error(
        "cannot compare approaches over different project sets");
  ApproachComparison cmp;
  cmp.ours = ours.name;
  cmp.other = other.name;
  cmp.include_average = include_average;
  cmp.projects = ours.projects;
  for (std::size_t ind = 0; ind < 3; ++ind) {
    IndicatorComparison& ic = cmp.indicators[ind];
    ic.indicator = std::string(kIndicators[ind]);
    std::vector<double> mine = ours.values[ind];
    std::vector<double> theirs = other.values[ind];
    for (std::size_t i = 0; i < mine.size(); ++i) {
      if (theirs[i] != 0.0)
        ic.improvement_pct.push_back((mine[i] - theirs[i]) / theirs[i] *
                                     100.0);
      else
        ic.improvement_pct.push_back(std::nullopt);
    }
    if (ours.average[ind] && other.average[ind] && *other.average[ind] != 0.0)
      ic.average_improvement_pct =
          (*ours.average[ind] - *other.average[ind]) / *other.average[ind] *
          100.0;
    if (include_average) {
      if (!ours.average[ind] || !other.average[ind])
        throw std::runtime_error(
            "include_average requires both average rows to be defined");
      mine.push_back(*ours.average[ind]);
      theirs.push_back(*other.average[ind]);
    }
    ic.wilcoxon = wilcoxon_signed_rank(mine, theirs);
    ic.significant = ic.wilcoxon.p < 0.05;
    ic.delta = cliffs_delta(mine, theirs);
    ic.band = effect_band(ic.delta);
  }
  return cmp;
}

// ----- overlap --------------------------------------------------------------

OverlapReport overlap_analysis(const std::vector<Corpus>& golds,
                               const std::vector<std::vector<Prediction>>& a,
                               const std::vector<std::vector<Prediction>>& b,
                               const std::string& name_a,
                               const std::string& name_b) {
  if (golds.size() != a.size() || golds.size() != b.size())
    throw std::runtime_error("overlap_analysis inputs differ in length");
  OverlapReport report;
  report.name_a = name_a;
  report.name_b = name_b;
  report.total.project = "Total";
  for (std::size_t g = 0; g < golds.size(); ++g) {
    const Corpus& gold = golds[g];
    if (gold.comments.size() != a[g].size() ||
        gold.comments.size() != b[g].size())
      throw std::runtime_error("prediction count mismatch for project " +
                               gold.project());
    OverlapRow row;
    row.project = gold.project();
    for (std::size_t i = 0; i < gold.comments.size(); ++i) {
      const Comment& c = gold.comments[i];
      if (!c.label)
        throw std::runtime_error("gold comment without label: " + c.project +
                                 "#" + std::to_string(c.id));
      bool actual = *c.label == Label::satd;
      bool ca = a[g][i].satd == actual;  // correct under a
      bool cb = b[g][i].satd == actual;
      long& uni = actual ? row.tp_union : row.tn_union;
      long& both = actual ? row.tp_both : row.tn_both;
      long& oa = actual ? row.tp_only_a : row.tn_only_a;
      long& ob = actual ? row.tp_only_b : row.tn_only_b;
      if (ca || cb) ++uni;
      if (ca && cb) ++both;
      if (ca && !cb) ++oa;
      if (!ca && cb) ++ob;
    }
    report.total.tp_union += row.tp_union;
    report.total.tp_both += row.tp_both;
    report.total.tp_only_a += row.tp_only_a;
    report.total.tp_only_b += row.tp_only_b;
    report.total.tn_union += row.tn_union;
    report.total.tn_both += row.tn_both;
    report.total.tn_only_a += row.tn_only_a;
    report.total.tn_only_b += row.tn_only_b;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace satd
