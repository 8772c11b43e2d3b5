#include "satd/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace satd {

using ordered_json = nlohmann::ordered_json;

OutputFormat output_format_from_string(std::string_view s) {
  if (s == "json") return OutputFormat::json;
  if (s == "text") return OutputFormat::text;
  if (s == "csv") return OutputFormat::csv;
  throw std::runtime_error("unknown output format: " + std::string(s));
}

namespace {

std::string fixed3(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

std::string fixed2(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

ordered_json json_opt(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

ordered_json scores_json(const Scores& s) {
  ordered_json j;
  j["precision"] = json_opt(s.precision);
  j["recall"] = json_opt(s.recall);
  j["f1"] = json_opt(s.f1);
  return j;
}

ordered_json cm_json(const ConfusionMatrix& cm) {
  ordered_json j;
  j["tp"] = cm.tp;
  j["fp"] = cm.fp;
  j["tn"] = cm.tn;
  j["fn"] = cm.fn;
  return j;
}

ordered_json average_json(const std::array<AverageCell, 3>& avg) {
  ordered_json j;
  for (std::size_t i = 0; i < 3; ++i) {
    ordered_json cell;
    cell["value"] = json_opt(avg[i].value);
    cell["undefined_skipped"] = avg[i].skipped;
    j[std::string(kIndicators[i])] = std::move(cell);
  }
  return j;
}

void csv_escape_into(std::ostringstream& out, const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::string render(const EvaluationReport& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    ordered_json j;
    j["classifier"] = report.classifier;
    j["scenario"] = report.scenario;
    ordered_json projects = ordered_json::array();
    for (const ProjectEvaluation& pe : report.projects) {
      ordered_json p;
      p["project"] = pe.project;
      p["confusion"] = cm_json(pe.cm);
      p["scores"] = scores_json(pe.scores);
      projects.push_back(std::move(p));
    }
    j["projects"] = std::move(projects);
    j["average"] = average_json(report.average);
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == OutputFormat::csv) {
    out << "project,tp,fp,tn,fn,precision,recall,f1\n";
    for (const ProjectEvaluation& pe : report.projects) {
      csv_escape_into(out, pe.project);
      out << ',' << pe.cm.tp << ',' << pe.cm.fp << ',' << pe.cm.tn << ','
          << pe.cm.fn << ',' << fixed3(pe.scores.precision) << ','
          << fixed3(pe.scores.recall) << ',' << fixed3(pe.scores.f1) << '\n';
    }
    out << "Average,,,,," << fixed3(report.average[0].value) << ','
        << fixed3(report.average[1].value) << ','
        << fixed3(report.average[2].value) << '\n';
    return out.str();
  }
  out << "classifier: " << report.classifier
      << "  scenario: " << report.scenario << "\n\n";
  out << "project        precision  recall  f1\n";
  char buf[160];
  for (const ProjectEvaluation& pe : report.projects) {
    std::snprintf(buf, sizeof buf, "%-14s %9s  %6s  %5s\n",
                  pe.project.c_str(), fixed3(pe.scores.precision).c_str(),
                  fixed3(pe.scores.recall).c_str(),
                  fixed3(pe.scores.f1).c_str());
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-14s %9s  %6s  %5s\n", "Average",
                fixed3(report.average[0].value).c_str(),
                fixed3(report.average[1].value).c_str(),
                fixed3(report.average[2].value).c_str());
  out << buf;
  for (std::size_t i = 0; i < 3; ++i) {
    if (report.average[i].skipped > 0)
      out << "note: " << report.average[i].skipped << " undefined "
          << kIndicators[i] << " value(s) skipped in the average\n";
  }
  return out.str();
}

std::string render(const OtoReport& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    ordered_json j;
    j["classifier"] = report.classifier;
    j["scenario"] = "oto";
    ordered_json cells = ordered_json::array();
    for (const OtoCell& c : report.cells) {
      ordered_json cell;
      cell["source"] = c.source;
      cell["target"] = c.target;
      cell["confusion"] = cm_json(c.cm);
      cell["scores"] = scores_json(c.scores);
      cells.push_back(std::move(cell));
    }
    j["cells"] = std::move(cells);
    ordered_json targets = ordered_json::array();
    for (const OtoTargetAverage& ta : report.per_target) {
      ordered_json t;
      t["project"] = ta.project;
      t["average"] = average_json(ta.average);
      targets.push_back(std::move(t));
    }
    j["per_target"] = std::move(targets);
    j["average"] = average_json(report.average);
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == OutputFormat::csv) {
    out << "target,precision,recall,f1\n";
    for (const OtoTargetAverage& ta : report.per_target) {
      csv_escape_into(out, ta.project);
      out << ',' << fixed3(ta.average[0].value) << ','
          << fixed3(ta.average[1].value) << ','
          << fixed3(ta.average[2].value) << '\n';
    }
    out << "Average," << fixed3(report.average[0].value) << ','
        << fixed3(report.average[1].value) << ','
        << fixed3(report.average[2].value) << '\n';
    return out.str();
  }
  out << "classifier: " << report.classifier << "  scenario: oto"
      << "  (per-target scores averaged over single-source runs)\n\n";
  out << "target         precision  recall  f1\n";
  char buf[160];
  for (const OtoTargetAverage& ta : report.per_target) {
    std::snprintf(buf, sizeof buf, "%-14s %9s  %6s  %5s\n",
                  ta.project.c_str(), fixed3(ta.average[0].value).c_str(),
                  fixed3(ta.average[1].value).c_str(),
                  fixed3(ta.average[2].value).c_str());
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-14s %9s  %6s  %5s\n", "Average",
                fixed3(report.average[0].value).c_str(),
                fixed3(report.average[1].value).c_str(),
                fixed3(report.average[2].value).c_str());
  out << buf;
  return out.str();
}

std::string render(const std::vector<ApproachComparison>& comparisons,
                   OutputFormat format) {
  if (format == OutputFormat::json) {
    ordered_json arr = ordered_json::array();
    for (const ApproachComparison& cmp : comparisons) {
      ordered_json j;
      j["ours"] = cmp.ours;
      j["other"] = cmp.other;
      j["include_average"] = cmp.include_average;
      j["projects"] = cmp.projects;
      ordered_json inds = ordered_json::array();
      for (const IndicatorComparison& ic : cmp.indicators) {
        ordered_json ij;
        ij["indicator"] = ic.indicator;
        ordered_json impr = ordered_json::array();
        for (const std::optional<double>& v : ic.improvement_pct)
          impr.push_back(json_opt(v));
        ij["improvement_pct"] = std::move(impr);
        ij["average_improvement_pct"] = json_opt(ic.average_improvement_pct);
        ij["p_value"] = ic.wilcoxon.p;
        ij["exact"] = ic.wilcoxon.exact;
        ij["significant"] = ic.significant;
        ij["cliffs_delta"] = ic.delta;
        ij["effect"] = std::string(to_string(ic.band));
        inds.push_back(std::move(ij));
      }
      j["indicators"] = std::move(inds);
      arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == OutputFormat::csv) {
    out << "ours,other,indicator,p_value,significant,cliffs_delta,effect,"
           "average_improvement_pct\n";
    for (const ApproachComparison& cmp : comparisons) {
      for (const IndicatorComparison& ic : cmp.indicators) {
        csv_escape_into(out, cmp.ours);
        out << ',';
        csv_escape_into(out, cmp.other);
        out << ',' << ic.indicator << ',' << fixed3(ic.wilcoxon.p) << ','
            << (ic.significant ? "yes" : "no") << ','
            << fixed3(ic.delta) << ',' << to_string(ic.band) << ','
            << fixed2(ic.average_improvement_pct) << '\n';
      }
    }
    return out.str();
  }
  char buf[200];
  for (const ApproachComparison& cmp : comparisons) {
    out << cmp.ours << " vs " << cmp.other;
    if (cmp.include_average) out << "  (average row included in statistics)";
    out << '\n';
    for (const IndicatorComparison& ic : cmp.indicators) {
      std::snprintf(buf, sizeof buf,
                    "  %-9s p=%s%s %-3s delta=%+.3f (%s)  avg impr %s%%\n",
                    ic.indicator.c_str(), fixed3(ic.wilcoxon.p).c_str(),
                    ic.wilcoxon.exact ? "" : "~",
                    ic.significant ? "sig" : "ns", ic.delta,
                    std::string(to_string(ic.band)).c_str(),
                    fixed2(ic.average_improvement_pct).c_str());
      out << buf;
    }
  }
  return out.str();
}

std::string render(const OverlapReport& report, OutputFormat format) {
  auto pct = [](long part, long whole) -> std::string {
    if (whole == 0) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f",
                  100.0 * static_cast<double>(part) /
                      static_cast<double>(whole));
    return buf;
  };
  if (format == OutputFormat::json) {
    ordered_json j;
    j["a"] = report.name_a;
    j["b"] = report.name_b;
    ordered_json rows = ordered_json::array();
    auto row_json = [](const OverlapRow& r) {
      ordered_json x;
      x["project"] = r.project;
      x["tp"] = {{"union", r.tp_union},
                 {"both", r.tp_both},
                 {"only_a", r.tp_only_a},
                 {"only_b", r.tp_only_b}};
      x["tn"] = {{"union", r.tn_union},
                 {"both", r.tn_both},
                 {"only_a", r.tn_only_a},
                 {"only_b", r.tn_only_b}};
      return x;
    };
    for (const OverlapRow& r : report.rows) rows.push_back(row_json(r));
    j["rows"] = std::move(rows);
    j["total"] = row_json(report.total);
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  if (format == OutputFormat::csv) {
    out << "project,tp_union,tp_both,tp_only_a,tp_only_b,"
           "tn_union,tn_both,tn_only_a,tn_only_b\n";
    auto emit = [&](const OverlapRow& r) {
      csv_escape_into(out, r.project);
      out << ',' << r.tp_union << ',' << r.tp_both << ',' << r.tp_only_a
          << ',' << r.tp_only_b << ',' << r.tn_union << ',' << r.tn_both
          << ',' << r.tn_only_a << ',' << r.tn_only_b << '\n';
    };
    for (const OverlapRow& r : report.rows) emit(r);
    emit(report.total);
    return out.str();
  }
  out << "overlap of correct answers: a=" << report.name_a
      << " b=" << report.name_b << "\n\n";
  out << "project        tp:both(a&b)   only-a    only-b   "
         "tn:both(a&b)   only-a    only-b\n";
  char buf[240];
  auto emit = [&](const OverlapRow& r) {
    std::snprintf(buf, sizeof buf,
                  "%-14s %6ld (%5s%%) %5ld (%4s%%) %5ld (%4s%%)"
                  "   %6ld (%5s%%) %5ld (%4s%%) %5ld (%4s%%)\n",
                  r.project.c_str(), r.tp_both,
                  pct(r.tp_both, r.tp_union).c_str(), r.tp_only_a,
                  pct(r.tp_only_a, r.tp_union).c_str(), r.tp_only_b,
                  pct(r.tp_only_b, r.tp_union).c_str(), r.tn_both,
                  pct(r.tn_both, r.tn_union).c_str(), r.tn_only_a,
                  pct(r.tn_only_a, r.tn_union).c_str(), r.tn_only_b,
                  pct(r.tn_only_b, r.tn_union).c_str());
    out << buf;
  };
  for (const OverlapRow& r : report.rows) emit(r);
  emit(report.total);
  return out.str();
}

std::string render_predictions(const std::vector<Prediction>& predictions,
                               OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::json) {
    for (const Prediction& p : predictions) {
      ordered_json j;
      j["project"] = p.project;
      j["id"] = p.id;
      j["satd"] = p.satd;
      if (p.evidence) {
        j["tag"] = p.evidence->tag;
        if (!p.evidence->token.empty()) j["token"] = p.evidence->token;
      }
      out << j.dump() << '\n';
    }
    return out.str();
  }
  if (format == OutputFormat::csv) {
    out << "project,id,satd,tag,token\n";
    for (const Prediction& p : predictions) {
      csv_escape_into(out, p.project);
      out << ',' << p.id << ',' << (p.satd ? "true" : "false") << ',';
      if (p.evidence) csv_escape_into(out, p.evidence->tag);
      out << ',';
      if (p.evidence) csv_escape_into(out, p.evidence->token);
      out << '\n';
    }
    return out.str();
  }
  for (const Prediction& p : predictions) {
    out << p.project << '#' << p.id << '\t'
        << (p.satd ? "SATD" : "NonSATD");
    if (p.evidence) {
      out << "\t" << p.evidence->tag;
      if (!p.evidence->token.empty()) out << "\t" << p.evidence->token;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace satd
