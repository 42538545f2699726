#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "aurora/binary_io.hpp"
#include "aurora/checkpoint.hpp"
#include "aurora/config.hpp"
#include "aurora/dataset.hpp"
#include "aurora/metrics.hpp"
#include "aurora/pipeline.hpp"
#include "aurora/training.hpp"
#include "json.hpp"

namespace aurora::cli {
namespace {

using nlohmann::json;

AppConfig resolve_config(const std::string& path) {
  AppConfig cfg = path.empty() ? AppConfig{} : load_config(path);
  if (const auto seed = seed_from_environment()) {
    cfg.dataset.seed = *seed;
    cfg.train.seed = *seed;
  }
  return cfg;
}

json epoch_json(const EpochLog& e) {
  return {{"epoch", e.epoch}, {"rec", e.rec},     {"cls", e.cls},
          {"reg", e.reg},     {"total", e.total}, {"val_eer", e.val_eer}};
}

std::vector<TrainingSample> samples_for(const std::string& dir, const Manifest& m, Split split,
                                        const ModelConfig& model) {
  const std::vector<VideoRecord> videos = load_split(dir, m, split);
  return prepare_samples(videos, model);
}

json rates_json(const Rates& r) { return {{"far", r.far}, {"frr", r.frr}}; }

}  // namespace

int gen_data(const GenDataOptions& o, std::ostream& out) {
  AppConfig cfg = resolve_config(o.config_path);
  if (o.seed) cfg.dataset.seed = *o.seed;
  const Manifest m = write_dataset(o.out_dir, cfg.dataset);
  out << "wrote " << m.entries.size() << " videos (" << m.live_count() << " live, "
      << m.entries.size() - static_cast<std::size_t>(m.live_count()) << " spoof) to " << o.out_dir
      << '\n';
  return kOk;
}

int train(const TrainOptions& o, std::ostream& out) {
  AppConfig cfg = resolve_config(o.config_path);
  TrainConfig& t = cfg.train;
  if (o.epochs) t.epochs = *o.epochs;
  if (o.seed) t.seed = *o.seed;
  if (o.lambda_dep) t.weights.lambda_dep = *o.lambda_dep;
  if (o.lambda_mat) t.weights.lambda_mat = *o.lambda_mat;

  const Manifest m = read_manifest(o.data_dir);
  t.model.input_size = m.config.size;
  t.validate();
  const auto train_set = samples_for(o.data_dir, m, Split::Train, t.model);
  const auto val_set = samples_for(o.data_dir, m, Split::Validation, t.model);

  std::ofstream log;
  if (!o.log_out.empty()) {
    log.open(o.log_out, std::ios::binary | std::ios::trunc);
    if (!log) throw IoError("cannot write training log " + o.log_out);
  }
  TrainResult result = aurora::train(t, train_set, val_set, [&](const EpochLog& e) {
    out << "epoch " << e.epoch << " total " << e.total << " rec " << e.rec << " cls " << e.cls
        << " reg " << e.reg << " val_eer " << e.val_eer << '\n';
  });
  if (log.is_open()) {
    for (const EpochLog& e : result.log) log << epoch_json(e).dump() << '\n';
    if (!log) throw IoError("failed writing training log " + o.log_out);
  }
  ad::save_checkpoint(o.checkpoint_out, result.model.to_checkpoint());
  out << "final validation EER " << result.log.back().val_eer << " tau_cls "
      << result.model.tau_cls() << '\n';
  return kOk;
}

int eval(const EvalOptions& o, std::ostream& out) {
  const Model model = Model::from_checkpoint(ad::load_checkpoint(o.checkpoint));
  const Manifest m = read_manifest(o.data_dir);
  const Split split = split_from_string(o.split);
  const double tau_reg = o.tau_reg.value_or(kDefaultTauReg);
  const auto entries = m.split(split);
  if (entries.empty()) throw ValidationError("split '" + o.split + "' is empty");

  const auto val = score_videos(model, samples_for(o.data_dir, m, Split::Validation, model.config()));
  const auto test = score_videos(model, samples_for(o.data_dir, m, split, model.config()));
  const EvalReport rep = evaluate(val, test, tau_reg);

  std::ostringstream lines;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const ScoredVideo& v = test[i];
    const Verdict verdict = decide(v.cue_scores, v.snr_db, rep.tau_cls, tau_reg);
    lines << json{{"path", entries[i]->path},
                  {"kind", to_string(v.kind)},
                  {"live", v.live},
                  {"cue_scores", v.cue_scores},
                  {"snr_db", v.snr_db},
                  {"consensus", verdict.consensus_count},
                  {"verdict", verdict.live ? "live" : "spoof"}}
                 .dump()
          << '\n';
  }
  json far_by_kind = json::object();
  for (int k = 0; k < kSubjectKinds; ++k) {
    const auto kind = static_cast<SubjectKind>(k);
    if (kind == SubjectKind::Live || rep.count_by_kind[k] == 0) continue;
    far_by_kind[std::string(to_string(kind))] = {{"far", rep.far_by_kind[k]},
                                                 {"videos", rep.count_by_kind[k]}};
  }
  json roc = json::array();
  for (const RocPoint& p : rep.roc) roc.push_back({p.far, p.tpr});
  const json summary{{"summary", true},
                     {"split", o.split},
                     {"tau_cls", rep.tau_cls},
                     {"tau_reg", rep.tau_reg},
                     {"val_eer", rep.val_eer},
                     {"far", rep.rates.far},
                     {"frr", rep.rates.frr},
                     {"hter", rep.hter},
                     {"eer", rep.eer},
                     {"auc", rep.auc},
                     {"cls_only", {{"far", rep.cls_rates.far},
                                   {"frr", rep.cls_rates.frr},
                                   {"hter", rep.cls_hter}}},
                     {"far_by_kind", far_by_kind},
                     {"roc", roc}};
  lines << summary.dump() << '\n';
  if (!o.report_out.empty()) write_file(o.report_out, lines.str());

  out << std::fixed << std::setprecision(4) << "split " << o.split << ": FAR " << rep.rates.far
      << " FRR " << rep.rates.frr << " HTER " << rep.hter << " | validation EER " << rep.val_eer
      << " at tau_cls " << rep.tau_cls << '\n'
      << "classification only: FAR " << rep.cls_rates.far << " FRR " << rep.cls_rates.frr
      << " HTER " << rep.cls_hter << '\n';
  for (int k = 0; k < kSubjectKinds; ++k) {
    const auto kind = static_cast<SubjectKind>(k);
    if (kind == SubjectKind::Live || rep.count_by_kind[k] == 0) continue;
    out << "  FAR[" << to_string(kind) << "] " << rep.far_by_kind[k] << '\n';
  }
  return kOk;
}

int verify(const VerifyOptions& o, std::ostream& out) {
  const Model model = Model::from_checkpoint(ad::load_checkpoint(o.checkpoint));
  const VideoRecord video = load_video(o.video);
  const double tau_cls = o.tau_cls.value_or(model.tau_cls());
  const Verdict v = verify_video(video.frames, video.captcha, model, tau_cls, o.tau_reg);
  out << std::fixed << std::setprecision(2) << (v.live ? "live" : "spoof")
      << " cnt=" << v.consensus_count << " m=" << v.m << " snr_db=" << v.snr_db << '\n';
  return v.live ? kOk : kSpoof;
}

int ablate(const AblateOptions& o, std::ostream& out) {
  AppConfig cfg = resolve_config(o.config_path);
  if (o.runs) cfg.ablation.runs = *o.runs;
  if (o.epochs) cfg.train.epochs = *o.epochs;
  if (o.seed) cfg.train.seed = *o.seed;
  if (cfg.ablation.runs < 1) throw ValidationError("runs must be at least 1");

  const Manifest m = read_manifest(o.data_dir);
  cfg.train.model.input_size = m.config.size;
  const auto train_set = samples_for(o.data_dir, m, Split::Train, cfg.train.model);
  const auto val_set = samples_for(o.data_dir, m, Split::Validation, cfg.train.model);

  std::ostringstream lines;
  for (double dep : cfg.ablation.lambda_dep) {
    for (double mat : cfg.ablation.lambda_mat) {
      std::vector<double> eers;
      for (int run = 0; run < cfg.ablation.runs; ++run) {
        TrainConfig t = cfg.train;
        t.weights.lambda_dep = dep;
        t.weights.lambda_mat = mat;
        t.seed = mix_seed(cfg.train.seed, static_cast<std::uint64_t>(run));
        eers.push_back(aurora::train(t, train_set, val_set).log.back().val_eer);
      }
      double mean = 0.0;
      for (double e : eers) mean += e;
      mean /= static_cast<double>(eers.size());
      double var = 0.0;
      for (double e : eers) var += (e - mean) * (e - mean);
      const double std_dev = eers.size() > 1 ? std::sqrt(var / (eers.size() - 1)) : 0.0;
      lines << json{{"lambda_dep", dep}, {"lambda_mat", mat}, {"runs", eers.size()},
                    {"val_eer", eers},   {"mean", mean},      {"std", std_dev}}
                   .dump()
            << '\n';
      out << std::fixed << std::setprecision(4) << "lambda_dep " << dep << " lambda_mat " << mat
          << ": EER " << mean << " +/- " << std_dev << '\n';
    }
  }
  if (!o.report_out.empty()) write_file(o.report_out, lines.str());
  return kOk;
}

}  // namespace aurora::cli
