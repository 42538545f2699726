#include "aurora/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aurora/error.hpp"

namespace aurora {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_classes(std::span<const double> scores, const std::vector<bool>& live) {
  if (scores.size() != live.size()) throw ValidationError("one label per score is required");
  const auto lives = std::count(live.begin(), live.end(), true);
  if (lives == 0 || lives == static_cast<std::ptrdiff_t>(live.size())) {
    throw ValidationError("rates need at least one live and one spoof sample");
  }
}

double kth_largest(std::vector<double> v, std::size_t k) {
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end(),
                   std::greater<>());
  return v[k - 1];
}

}  // namespace

Rates compute_rates(std::span<const double> scores, const std::vector<bool>& live, double tau) {
  check_classes(scores, live);
  std::size_t lives = 0, spoofs = 0, accepted_spoofs = 0, rejected_lives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool accepted = scores[i] > tau;
    if (live[i]) {
      ++lives;
      if (!accepted) ++rejected_lives;
    } else {
      ++spoofs;
      if (accepted) ++accepted_spoofs;
    }
  }
  return {static_cast<double>(accepted_spoofs) / static_cast<double>(spoofs),
          static_cast<double>(rejected_lives) / static_cast<double>(lives)};
}

double compute_hter(double far, double frr) {
  if (!(far >= 0.0 && far <= 1.0 && frr >= 0.0 && frr <= 1.0)) {
    throw ValidationError("error rates must lie in [0, 1]");
  }
  return 0.5 * (far + frr);
}

double compute_hter(const Rates& r) { return compute_hter(r.far, r.frr); }

double effective_cls_score(const ScoredVideo& v) {
  if (v.cue_scores.empty()) throw ValidationError("video has no cue scores");
  return kth_largest(v.cue_scores, v.cue_scores.size() / 2 + 1);
}

double effective_score(const ScoredVideo& v, double tau_reg) {
  const double s = effective_cls_score(v);
  return v.snr_db > tau_reg ? s : kNegInf;
}

Rates compute_rates(std::span<const ScoredVideo> videos, double tau_cls, double tau_reg) {
  std::vector<double> scores;
  std::vector<bool> live;
  for (const ScoredVideo& v : videos) {
    scores.push_back(effective_score(v, tau_reg));
    live.push_back(v.live);
  }
  return compute_rates(scores, live, tau_cls);
}

std::vector<double> candidate_thresholds(std::span<const double> scores) {
  std::vector<double> u;
  for (double s : scores) {
    if (std::isfinite(s)) u.push_back(s);
  }
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  if (u.empty()) return {0.0};
  std::vector<double> t;
  t.reserve(u.size() + 1);
  t.push_back(u.front() - 1.0);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) t.push_back(0.5 * (u[i] + u[i + 1]));
  t.push_back(u.back() + 1.0);
  return t;
}

EerResult find_eer(std::span<const double> scores, const std::vector<bool>& live) {
  check_classes(scores, live);
  EerResult best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (double tau : candidate_thresholds(scores)) {
    const Rates r = compute_rates(scores, live, tau);
    const double gap = std::abs(r.far - r.frr);
    if (gap < best_gap) {
      best_gap = gap;
      best.tau = tau;
      best.rates = r;
      best.eer = compute_hter(r);
    }
  }
  return best;
}

std::vector<RocPoint> roc_sweep(std::span<const double> scores, const std::vector<bool>& live) {
  check_classes(scores, live);
  std::vector<RocPoint> roc;
  for (double tau : candidate_thresholds(scores)) {
    const Rates r = compute_rates(scores, live, tau);
    roc.push_back({tau, r.far, 1.0 - r.frr});
  }
  roc.push_back({kNegInf, 1.0, 1.0});
  std::sort(roc.begin(), roc.end(), [](const RocPoint& a, const RocPoint& b) {
    return a.far != b.far ? a.far < b.far : a.tpr < b.tpr;
  });
  return roc;
}

double roc_auc(std::span<const RocPoint> roc) {
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    area += (roc[i].far - roc[i - 1].far) * 0.5 * (roc[i].tpr + roc[i - 1].tpr);
  }
  return area;
}

EvalReport evaluate(std::span<const ScoredVideo> validation, std::span<const ScoredVideo> test,
                    double tau_reg) {
  auto split = [&](std::span<const ScoredVideo> videos, bool with_snr) {
    std::pair<std::vector<double>, std::vector<bool>> out;
    for (const ScoredVideo& v : videos) {
      out.first.push_back(with_snr ? effective_score(v, tau_reg) : effective_cls_score(v));
      out.second.push_back(v.live);
    }
    return out;
  };
  EvalReport rep;
  rep.tau_reg = tau_reg;
  const auto [val_scores, val_live] = split(validation, true);
  const EerResult val = find_eer(val_scores, val_live);
  rep.tau_cls = val.tau;
  rep.val_eer = val.eer;

  const auto [scores, live] = split(test, true);
  const std::vector<bool>& labels = live;
  rep.rates = compute_rates(scores, labels, rep.tau_cls);
  rep.hter = compute_hter(rep.rates);
  rep.eer = find_eer(scores, labels).eer;
  rep.roc = roc_sweep(scores, labels);
  rep.auc = roc_auc(rep.roc);

  const auto [cls_scores, cls_live] = split(test, false);
  rep.cls_rates = compute_rates(cls_scores, cls_live, rep.tau_cls);
  rep.cls_hter = compute_hter(rep.cls_rates);

  std::array<int, kSubjectKinds> accepted{};
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto k = static_cast<std::size_t>(test[i].kind);
    ++rep.count_by_kind[k];
    if (scores[i] > rep.tau_cls) ++accepted[k];
  }
  for (int k = 0; k < kSubjectKinds; ++k) {
    if (static_cast<SubjectKind>(k) == SubjectKind::Live || rep.count_by_kind[k] == 0) continue;
    rep.far_by_kind[k] = static_cast<double>(accepted[k]) / rep.count_by_kind[k];
  }
  return rep;
}

}  // namespace aurora
