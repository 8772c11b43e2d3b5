#include "satd/tm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "satd/parallel.hpp"

namespace satd {

using ordered_json = nlohmann::ordered_json;

namespace {

double entropy2(double a, double b) {
  double total = a + b;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : {a, b}) {
    if (c > 0.0) {
      double p = c / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

}  // namespace

double information_gain(const std::vector<std::vector<std::string>>& docs,
                        const std::vector<bool>& is_satd,
                        const std::string& term) {
  double pos_s = 0, pos_n = 0, neg_s = 0, neg_n = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    bool present = std::find(docs[i].begin(), docs[i].end(), term) !=
                   docs[i].end();
    double& cell = present ? (is_satd[i] ? pos_s : pos_n)
                           : (is_satd[i] ? neg_s : neg_n);
    cell += 1.0;
  }
  double n = static_cast<double>(docs.size());
  double h = entropy2(pos_s + neg_s, pos_n + neg_n);
  double hp = entropy2(pos_s, pos_n);
  double hn = entropy2(neg_s, neg_n);
  return h - (pos_s + pos_n) / n * hp - (neg_s + neg_n) / n * hn;
}

SubClassifier SubClassifier::train(const Corpus& source,
                                   const StopWordList& stops,
                                   const TmConfig& config) {
  if (source.comments.empty())
    throw std::runtime_error("cannot train on an empty corpus");
  if (!source.fully_labeled())
    throw std::runtime_error("cannot train on a corpus with unlabeled comments: " +
                             source.project());

  std::vector<std::vector<std::string>> docs;
  std::vector<bool> is_satd;
  docs.reserve(source.comments.size());
  for (const Comment& c : source.comments) {
    docs.push_back(preprocess_for_learning(c.text, stops));
    is_satd.push_back(*c.label == Label::satd);
  }
  std::size_t n_satd =
      static_cast<std::size_t>(std::count(is_satd.begin(), is_satd.end(), true));
  if (n_satd == 0 || n_satd == is_satd.size())
    throw std::runtime_error("training corpus needs both labels: " +
                             source.project());

  // document frequency doubles as the presence indicator for the gain
  std::map<std::string, std::size_t> df;
  for (const auto& d : docs) {
    std::set<std::string> uniq(d.begin(), d.end());
    for (const std::string& t : uniq) ++df[t];
  }

  // information gain per distinct term, computed from presence counts
  double n = static_cast<double>(docs.size());
  double total_s = static_cast<double>(n_satd);
  double total_n = n - total_s;
  std::map<std::string, double> present_satd;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!is_satd[i]) continue;
    std::set<std::string> uniq(docs[i].begin(), docs[i].end());
    for (const std::string& t : uniq) present_satd[t] += 1.0;
  }
  double h_label = entropy2(total_s, total_n);
  std::vector<std::pair<double, std::string>> ranked;
  ranked.reserve(df.size());
  for (const auto& [term, count] : df) {
    double ps = present_satd.count(term) ? present_satd.at(term) : 0.0;
    double pn = static_cast<double>(count) - ps;
    double gain = h_label -
                  (ps + pn) / n * entropy2(ps, pn) -
                  (total_s - ps + total_n - pn) / n *
                      entropy2(total_s - ps, total_n - pn);
    ranked.emplace_back(gain, term);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  std::size_t keep = static_cast<std::size_t>(
      std::ceil(config.feature_ratio * static_cast<double>(ranked.size())));
  keep = std::min(std::max<std::size_t>(keep, 1), ranked.size());

  SubClassifier sc;
  sc.source_ = source.project();
  sc.config_ = config;
  sc.vocabulary_.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i)
    sc.vocabulary_.push_back(ranked[i].second);
  std::sort(sc.vocabulary_.begin(), sc.vocabulary_.end());
  sc.rebuild_index();

  sc.idf_.resize(sc.vocabulary_.size());
  for (std::size_t f = 0; f < sc.vocabulary_.size(); ++f) {
    double dfreq = static_cast<double>(df.at(sc.vocabulary_[f]));
    sc.idf_[f] = config.use_tfidf_weights
                     ? std::log((1.0 + n) / (1.0 + dfreq)) + 1.0
                     : 1.0;
  }

  sc.log_prior_ = {std::log(total_n / n), std::log(total_s / n)};

  std::array<std::vector<double>, 2> weight_sum{
      std::vector<double>(sc.vocabulary_.size(), 0.0),
      std::vector<double>(sc.vocabulary_.size(), 0.0)};
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::size_t cls = is_satd[i] ? 1 : 0;
    std::map<std::string, double> tf;
    for (const std::string& t : docs[i]) tf[t] += 1.0;
    for (const auto& [t, count] : tf) {
      auto it = sc.index_.find(t);
      if (it == sc.index_.end()) continue;
      weight_sum[cls][it->second] += count * sc.idf_[it->second];
    }
  }
  for (std::size_t cls = 0; cls < 2; ++cls) {
    double total = 0.0;
    for (double w : weight_sum[cls]) total += w;
    double denom =
        config.alpha * static_cast<double>(sc.vocabulary_.size()) + total;
    sc.log_cond_[cls].resize(sc.vocabulary_.size());
    for (std::size_t f = 0; f < sc.vocabulary_.size(); ++f)
      sc.log_cond_[cls][f] =
          std::log((config.alpha + weight_sum[cls][f]) / denom);
  }
  return sc;
}

void SubClassifier::rebuild_index() {
  index_.clear();
  index_.reserve(vocabulary_.size());
  for (std::size_t f = 0; f < vocabulary_.size(); ++f)
    index_.emplace(vocabulary_[f], f);
}

std::array<double, 2> SubClassifier::log_scores(
    const std::vector<std::string>& tokens) const {
  std::array<double, 2> score = log_prior_;
  std::map<std::size_t, double> tf;
  for (const std::string& t : tokens) {
    auto it = index_.find(t);
    if (it != index_.end()) tf[it->second] += 1.0;
  }
  for (const auto& [f, count] : tf) {
    double w = count * idf_[f];
    score[0] += w * log_cond_[0][f];
    score[1] += w * log_cond_[1][f];
  }
  return score;
}

bool SubClassifier::predict(const std::vector<std::string>& tokens) const {
  std::array<double, 2> s = log_scores(tokens);
  return s[1] > s[0];  // tie -> NonSATD
}

std::string SubClassifier::to_json() const {
  ordered_json j;
  j["source"] = source_;
  j["config"] = {{"alpha", config_.alpha},
                 {"feature_ratio", config_.feature_ratio},
                 {"use_tfidf_weights", config_.use_tfidf_weights}};
  j["vocabulary"] = vocabulary_;
  j["idf"] = idf_;
  j["log_prior"] = {log_prior_[0], log_prior_[1]};
  j["log_cond_nonsatd"] = log_cond_[0];
  j["log_cond_satd"] = log_cond_[1];
  return j.dump(2);
}

SubClassifier SubClassifier::from_json(std::string_view text) {
  ordered_json j = ordered_json::parse(text);
  SubClassifier sc;
  sc.source_ = j.at("source").get<std::string>();
  const auto& cfg = j.at("config");
  sc.config_.alpha = cfg.at("alpha").get<double>();
  sc.config_.feature_ratio = cfg.at("feature_ratio").get<double>();
  sc.config_.use_tfidf_weights = cfg.at("use_tfidf_weights").get<bool>();
  sc.vocabulary_ = j.at("vocabulary").get<std::vector<std::string>>();
  sc.idf_ = j.at("idf").get<std::vector<double>>();
  auto prior = j.at("log_prior").get<std::vector<double>>();
  if (prior.size() != 2) throw std::runtime_error("bad log_prior");
  sc.log_prior_ = {prior[0], prior[1]};
  sc.log_cond_[0] = j.at("log_cond_nonsatd").get<std::vector<double>>();
  sc.log_cond_[1] = j.at("log_cond_satd").get<std::vector<double>>();
  if (sc.log_cond_[0].size() != sc.vocabulary_.size() ||
      sc.log_cond_[1].size() != sc.vocabulary_.size() ||
      sc.idf_.size() != sc.vocabulary_.size())
    throw std::runtime_error("inconsistent model dimensions");
  sc.rebuild_index();
  return sc;
}

VotingEnsemble VotingEnsemble::train(const std::vector<const Corpus*>& sources,
                                     const StopWordList& stops,
                                     const TmConfig& config) {
  if (sources.empty())
    throw std::runtime_error("ensemble needs at least one source corpus");
  VotingEnsemble e;
  e.subs_.reserve(sources.size());
  for (const Corpus* c : sources)
    e.subs_.push_back(SubClassifier::train(*c, stops, config));
  return e;
}

bool VotingEnsemble::predict_tokens(
    const std::vector<std::string>& tokens) const {
  std::size_t votes = 0;
  for (const SubClassifier& sc : subs_)
    if (sc.predict(tokens)) ++votes;
  return votes >= subs_.size() / 2 + 1;
}

bool VotingEnsemble::predict_text(std::string_view text,
                                  const StopWordList& stops) const {
  return predict_tokens(preprocess_for_learning(text, stops));
}

std::vector<Prediction> VotingEnsemble::classify(const Corpus& corpus,
                                                 const StopWordList& stops,
                                                 int parallelism) const {
  std::vector<Prediction> out(corpus.comments.size());
  parallel_for(corpus.comments.size(), parallelism, [&](std::size_t i) {
    const Comment& c = corpus.comments[i];
    out[i] = Prediction{c.project, c.id,
                        predict_text(c.text, stops), std::nullopt};
  });
  return out;
}

std::string VotingEnsemble::to_json() const {
  ordered_json subs = ordered_json::array();
  for (const SubClassifier& sc : subs_)
    subs.push_back(ordered_json::parse(sc.to_json()));
  ordered_json j;
  j["kind"] = "voting_ensemble";
  j["sub_classifiers"] = std::move(subs);
  return j.dump(2);
}

VotingEnsemble VotingEnsemble::from_json(std::string_view text) {
  ordered_json j = ordered_json::parse(text);
  if (j.value("kind", "") != std::string("voting_ensemble"))
    throw std::runtime_error("not a voting ensemble model file");
  VotingEnsemble e;
  for (const auto& sub : j.at("sub_classifiers"))
    e.subs_.push_back(SubClassifier::from_json(sub.dump()));
  if (e.subs_.empty()) throw std::runtime_error("model has no sub-classifiers");
  return e;
}

void VotingEnsemble::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_json() << '\n';
}

VotingEnsemble VotingEnsemble::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

std::vector<Prediction> combine_with_mat(const Corpus& corpus,
                                         const VotingEnsemble& ensemble,
                                         const TagSet& tags,
                                         const StopWordList& stops,
                                         int parallelism) {
  std::vector<Prediction> out(corpus.comments.size());
  parallel_for(corpus.comments.size(), parallelism, [&](std::size_t i) {
    const Comment& c = corpus.comments[i];
    MatResult mat = classify_mat(c.text, tags, MatchStrategy::fuzzy);
    if (mat.satd) {
      out[i] = Prediction{c.project, c.id, true, std::move(mat.evidence)};
    } else {
      out[i] = Prediction{c.project, c.id,
                          ensemble.predict_text(c.text, stops), std::nullopt};
    }
  });
  return out;
}

}  // namespace satd
