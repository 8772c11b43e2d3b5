#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "satd/corpus.hpp"
#include "satd/matchers.hpp"
#include "satd/textprep.hpp"

namespace satd {

struct TmConfig {
  double alpha = 1.0;           // Laplace smoothing
  double feature_ratio = 0.10;  // keep ceil(ratio * vocabulary) features
  bool use_tfidf_weights = true;  // false: raw term counts
};

// Multinomial naive Bayes trained on one labeled source project:
// tokens -> information-gain feature selection -> tf-idf weights -> NB.
class SubClassifier {
public:
  static SubClassifier train(const Corpus& source, const StopWordList& stops,
                             const TmConfig& config);

  // tokens must come from preprocess_for_learning
  bool predict(const std::vector<std::string>& tokens) const;
  // ln prior + sum of weighted ln conditionals; index 0 = NonSATD, 1 = SATD
  std::array<double, 2> log_scores(const std::vector<std::string>& tokens) const;

  const std::string& source_project() const { return source_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  std::string to_json() const;
  static SubClassifier from_json(std::string_view text);

private:
  friend class VotingEnsemble;
  std::string source_;
  TmConfig config_;
  std::vector<std::string> vocabulary_;  // sorted
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> idf_;                       // per feature
  std::array<double, 2> log_prior_{0.0, 0.0};     // [non-satd, satd]
  std::array<std::vector<double>, 2> log_cond_;   // per class, per feature
  void rebuild_index();
};

// Information gain of term presence/absence against the binary label,
// natural log. Exposed for tests; docs are token lists.
double information_gain(const std::vector<std::vector<std::string>>& docs,
                        const std::vector<bool>& is_satd,
                        const std::string& term);

// One sub-classifier per source project; majority vote with ties going to
// NonSATD (threshold floor(n/2) + 1).
class VotingEnsemble {
public:
  static VotingEnsemble train(const std::vector<const Corpus*>& sources,
                              const StopWordList& stops,
                              const TmConfig& config);

  bool predict_tokens(const std::vector<std::string>& tokens) const;
  bool predict_text(std::string_view text, const StopWordList& stops) const;

  std::vector<Prediction> classify(const Corpus& corpus,
                                   const StopWordList& stops,
                                   int parallelism = 1) const;

  std::size_t size() const { return subs_.size(); }
  const std::vector<SubClassifier>& sub_classifiers() const { return subs_; }

  std::string to_json() const;
  static VotingEnsemble from_json(std::string_view text);
  void save(const std::string& path) const;
  static VotingEnsemble load(const std::string& path);

private:
  std::vector<SubClassifier> subs_;
};

// Tag matcher first, supervised model on the rest: every comment the fuzzy
// tag matcher flags is SATD (with its evidence), the ensemble decides the
// remainder. The result is a superset of the tag matcher's positives.
std::vector<Prediction> combine_with_mat(const Corpus& corpus,
                                         const VotingEnsemble& ensemble,
                                         const TagSet& tags,
                                         const StopWordList& stops,
                                         int parallelism = 1);

}  // namespace satd
