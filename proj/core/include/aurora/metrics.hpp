#pragma once

#include <array>
#include <span>
#include <vector>

#include "aurora/scene.hpp"

namespace aurora {

/// A sample is accepted as live when its score is strictly above tau.
struct Rates {
  double far = 0.0;  ///< accepted spoofs / spoofs
  double frr = 0.0;  ///< rejected lives / lives
};

/// Throws ValidationError on a size mismatch or when a class is missing.
Rates compute_rates(std::span<const double> scores, const std::vector<bool>& live, double tau);

double compute_hter(double far, double frr);
double compute_hter(const Rates& r);

/// Cue scores and SNR of a video, with its ground truth.
struct ScoredVideo {
  std::vector<double> cue_scores;
  double snr_db = 0.0;
  bool live = false;
  SubjectKind kind = SubjectKind::Live;
};

/// A scalar per video such that `effective_score > tau_cls` holds exactly when
/// the video-wise verdict at (tau_cls, tau_reg) is live: the
/// (floor(m/2)+1)-th largest cue score if the SNR check passes, else -inf.
double effective_score(const ScoredVideo& v, double tau_reg);
/// The same with the SNR check skipped (classification branch alone).
double effective_cls_score(const ScoredVideo& v);

/// Rates of the full video-wise verdict.
Rates compute_rates(std::span<const ScoredVideo> videos, double tau_cls, double tau_reg);

/// Candidate thresholds: below the smallest score, the midpoints of sorted
/// unique finite scores, above the largest.
std::vector<double> candidate_thresholds(std::span<const double> scores);

struct EerResult {
  double eer = 0.0;  ///< HTER at tau
  double tau = 0.0;
  Rates rates;
};

/// Threshold minimising |FAR - FRR| over the candidates, ties toward the
/// smaller threshold.
EerResult find_eer(std::span<const double> scores, const std::vector<bool>& live);

struct RocPoint {
  double tau = 0.0;
  double far = 0.0;
  double tpr = 0.0;  ///< 1 - FRR
};

/// (FAR, 1 - FRR) at every candidate threshold, sorted by FAR then TPR.
std::vector<RocPoint> roc_sweep(std::span<const double> scores, const std::vector<bool>& live);
/// Trapezoidal area under a sorted ROC curve.
double roc_auc(std::span<const RocPoint> roc);

struct EvalReport {
  double tau_cls = 0.0;
  double tau_reg = 0.0;
  double val_eer = 0.0;
  Rates rates;  ///< full verdict on the evaluated split
  double hter = 0.0;
  double eer = 0.0;  ///< EER on the evaluated split itself
  Rates cls_rates;   ///< classification branch alone, same tau_cls
  double cls_hter = 0.0;
  /// FAR restricted to each spoof kind (index by SubjectKind); live row unused.
  std::array<double, kSubjectKinds> far_by_kind{};
  std::array<int, kSubjectKinds> count_by_kind{};
  std::vector<RocPoint> roc;
  double auc = 0.0;
};

/// Calibrates tau_cls at the validation EER and reports on the test videos.
EvalReport evaluate(std::span<const ScoredVideo> validation, std::span<const ScoredVideo> test,
                    double tau_reg);

}  // namespace aurora
