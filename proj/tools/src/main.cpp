#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace aurora::cli;
  CLI::App app{"Light-CAPTCHA face anti-spoofing on synthetic data"};
  app.require_subcommand(1);

  GenDataOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Render a synthetic dataset and its manifest");
  gen_cmd->add_option("-c,--config", gen.config_path, "INI configuration file")->check(CLI::ExistingFile);
  gen_cmd->add_option("-o,--out", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "Master seed (overrides config and AG_SEED)");

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "Train the multi-task network");
  train_cmd->add_option("-c,--config", tr.config_path, "INI configuration file")->check(CLI::ExistingFile);
  train_cmd->add_option("-d,--data", tr.data_dir, "Dataset directory")->required();
  train_cmd->add_option("-o,--out", tr.checkpoint_out, "Checkpoint to write")->required();
  train_cmd->add_option("--log", tr.log_out, "Training log (JSON lines)");
  train_cmd->add_option("--epochs", tr.epochs, "Epochs");
  train_cmd->add_option("--seed", tr.seed, "Training seed");
  train_cmd->add_option("--lambda-dep", tr.lambda_dep, "Depth loss weight");
  train_cmd->add_option("--lambda-mat", tr.lambda_mat, "Material loss weight");

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset split");
  eval_cmd->add_option("-m,--checkpoint", ev.checkpoint, "Checkpoint")->required();
  eval_cmd->add_option("-d,--data", ev.data_dir, "Dataset directory")->required();
  eval_cmd->add_option("--split", ev.split, "Split to report on (train, val, test)")
      ->check(CLI::IsMember({"train", "val", "test"}));
  eval_cmd->add_option("--report", ev.report_out, "Report file (JSON lines)");
  eval_cmd->add_option("--tau-reg", ev.tau_reg, "SNR threshold in dB");

  VerifyOptions vf;
  auto* verify_cmd = app.add_subcommand("verify", "Verify one video; exit 0 live, 1 spoof");
  verify_cmd->add_option("-m,--checkpoint", vf.checkpoint, "Checkpoint")->required();
  verify_cmd->add_option("-v,--video", vf.video, "Video file")->required();
  verify_cmd->add_option("--tau-cls", vf.tau_cls, "Classification threshold (default: calibrated)");
  verify_cmd->add_option("--tau-reg", vf.tau_reg, "SNR threshold in dB");

  AblateOptions ab;
  auto* ablate_cmd = app.add_subcommand("ablate", "Grid over the depth and material loss weights");
  ablate_cmd->add_option("-c,--config", ab.config_path, "INI configuration file")->check(CLI::ExistingFile);
  ablate_cmd->add_option("-d,--data", ab.data_dir, "Dataset directory")->required();
  ablate_cmd->add_option("--report", ab.report_out, "Report file (JSON lines)");
  ablate_cmd->add_option("--runs", ab.runs, "Seeded runs per cell");
  ablate_cmd->add_option("--epochs", ab.epochs, "Epochs per run");
  ablate_cmd->add_option("--seed", ab.seed, "Training seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  auto guarded = [](auto&& fn) { return run_guarded(fn, std::cerr); };
  if (*gen_cmd) return guarded([&] { return gen_data(gen, std::cout); });
  if (*train_cmd) return guarded([&] { return train(tr, std::cout); });
  if (*eval_cmd) return guarded([&] { return eval(ev, std::cout); });
  if (*verify_cmd) return guarded([&] { return verify(vf, std::cout); });
  return guarded([&] { return ablate(ab, std::cout); });
}
