#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace aurora::cli {

enum ExitCode : int {
  kOk = 0,
  kSpoof = 1,
  kConfigError = 2,
  kIoError = 3,
  kDiverged = 4,
};

struct GenDataOptions {
  std::string config_path;  ///< empty: defaults
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

struct TrainOptions {
  std::string config_path;
  std::string data_dir;
  std::string checkpoint_out;
  std::string log_out;  ///< empty: no log file
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda_dep;
  std::optional<double> lambda_mat;
};

struct EvalOptions {
  std::string checkpoint;
  std::string data_dir;
  std::string split = "test";
  std::string report_out;  ///< empty: stdout only
  std::optional<double> tau_reg;
};

struct VerifyOptions {
  std::string checkpoint;
  std::string video;
  std::optional<double> tau_cls;  ///< default: calibrated value in the checkpoint
  double tau_reg = 20.0;
};

struct AblateOptions {
  std::string config_path;
  std::string data_dir;
  std::string report_out;
  std::optional<int> runs;
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
};

// Each command returns an exit code; library errors are mapped by run_guarded.
int gen_data(const GenDataOptions& o, std::ostream& out);
int train(const TrainOptions& o, std::ostream& out);
int eval(const EvalOptions& o, std::ostream& out);
int verify(const VerifyOptions& o, std::ostream& out);
int ablate(const AblateOptions& o, std::ostream& out);

/// Runs `body`, reporting aurora errors on `err` and mapping them to exit codes.
template <typename F>
int run_guarded(F&& body, std::ostream& err);

}  // namespace aurora::cli

#include "commands_inl.hpp"
