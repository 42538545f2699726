#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aurora/dataset.hpp"
#include "aurora/video_file.hpp"
#include "commands.hpp"
#include "test_support.hpp"

namespace aurora::cli {
namespace {

using aurora::testing::TempDir;

constexpr const char* kTinyConfig =
    "[dataset]\ntrain_per_kind = 1\nval_per_kind = 1\ntest_per_kind = 1\nsize = 16\nframes = 3\n"
    "[train]\nepochs = 2\nbatch_size = 2\n";

template <typename F>
int run(F&& f, std::string* err_text = nullptr) {
  std::ostringstream err;
  const int code = run_guarded(std::forward<F>(f), err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string write_text(const TempDir& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir.file(name)) << text;
  return dir.file(name);
}

class CliFlow : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli");
    config_ = write_text(*dir_, "tiny.ini", kTinyConfig);
    std::ostringstream out;
    ASSERT_EQ(run([&] { return gen_data({config_, dir_->file("data"), std::nullopt}, out); }), kOk);
    TrainOptions t;
    t.config_path = config_;
    t.data_dir = dir_->file("data");
    t.checkpoint_out = dir_->file("model.agck");
    t.log_out = dir_->file("train.jsonl");
    ASSERT_EQ(run([&] { return train(t, out); }), kOk);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string data() { return dir_->file("data"); }
  static std::string model() { return dir_->file("model.agck"); }
  static std::string first_video(Split split) {
    const Manifest m = read_manifest(data());
    return (std::filesystem::path(data()) / m.split(split).front()->path).string();
  }

  static TempDir* dir_;
  static std::string config_;
};

TempDir* CliFlow::dir_ = nullptr;
std::string CliFlow::config_;

TEST_F(CliFlow, GenDataWritesManifestAndVideos) {
  const Manifest m = read_manifest(data());
  EXPECT_EQ(m.entries.size(), 12u);
  for (const auto& e : m.entries) {
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(data()) / e.path)) << e.path;
  }
}

TEST_F(CliFlow, TrainWritesOneLogLinePerEpoch) {
  std::ifstream log(dir_->file("train.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) ++lines;
  EXPECT_EQ(lines, 2);
  EXPECT_TRUE(std::filesystem::exists(model()));
}

TEST_F(CliFlow, EvalPrintsRatesAndWritesReport) {
  std::ostringstream out;
  EvalOptions e;
  e.checkpoint = model();
  e.data_dir = data();
  e.report_out = dir_->file("report.jsonl");
  ASSERT_EQ(run([&] { return eval(e, out); }), kOk);
  EXPECT_NE(out.str().find("FAR"), std::string::npos);
  EXPECT_NE(out.str().find("HTER"), std::string::npos);
  std::ifstream report(e.report_out);
  std::string line, last;
  int lines = 0;
  while (std::getline(report, line)) ++lines, last = line;
  EXPECT_EQ(lines, 5);  // 4 test videos and the summary
  EXPECT_NE(last.find("\"summary\":true"), std::string::npos);
}

TEST_F(CliFlow, VerifyExitCodeFollowsTheVerdict) {
  std::ostringstream out;
  VerifyOptions v;
  v.checkpoint = model();
  v.video = first_video(Split::Test);
  const int code = run([&] { return verify(v, out); });
  ASSERT_TRUE(code == kOk || code == kSpoof);
  EXPECT_EQ(out.str().rfind(code == kOk ? "live" : "spoof", 0), 0u) << out.str();
  // An impossible SNR bar turns every video into a spoof.
  v.tau_reg = 1000.0;
  EXPECT_EQ(run([&] { return verify(v, out); }), kSpoof);
}

TEST_F(CliFlow, TruncatedVideoIsAnIoError) {
  std::ifstream in(first_video(Split::Test), std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string path = write_text(*dir_, "cut.agvd", bytes.substr(0, bytes.size() / 2));
  std::ostringstream out;
  std::string err;
  EXPECT_EQ(run([&] { return verify({model(), path, std::nullopt, 20.0}, out); }, &err), kIoError);
  EXPECT_FALSE(err.empty());
}

TEST_F(CliFlow, MissingCheckpointIsAnIoError) {
  std::ostringstream out;
  EXPECT_EQ(run([&] { return verify({dir_->file("none.agck"), first_video(Split::Test), std::nullopt, 20.0}, out); }),
            kIoError);
}

TEST_F(CliFlow, BadConfigIsAConfigError) {
  std::ostringstream out;
  TrainOptions t;
  t.config_path = write_text(*dir_, "bad.ini", "[train]\nepoch = 3\n");
  t.data_dir = data();
  t.checkpoint_out = dir_->file("never.agck");
  EXPECT_EQ(run([&] { return train(t, out); }), kConfigError);
  EXPECT_FALSE(std::filesystem::exists(t.checkpoint_out));
}

TEST_F(CliFlow, MalformedSeedVariableIsAConfigError) {
  ::setenv("AG_SEED", "abc", 1);
  std::ostringstream out;
  EXPECT_EQ(run([&] { return gen_data({config_, dir_->file("data2"), std::nullopt}, out); }),
            kConfigError);
  ::unsetenv("AG_SEED");
}

TEST_F(CliFlow, DivergenceExitsWithFour) {
  std::ostringstream out;
  TrainOptions t;
  t.config_path = write_text(*dir_, "diverge.ini", std::string(kTinyConfig) + "learning_rate = 1e300\n");
  t.data_dir = data();
  t.checkpoint_out = dir_->file("diverged.agck");
  std::string err;
  EXPECT_EQ(run([&] { return train(t, out); }, &err), kDiverged) << err;
}

TEST_F(CliFlow, AblateReportsEveryCell) {
  std::ostringstream out;
  AblateOptions a;
  a.config_path = config_;
  a.data_dir = data();
  a.runs = 1;
  a.epochs = 1;
  a.report_out = dir_->file("ablate.jsonl");
  ASSERT_EQ(run([&] { return ablate(a, out); }), kOk);
  std::ifstream report(a.report_out);
  std::string line;
  int lines = 0;
  while (std::getline(report, line)) ++lines;
  EXPECT_EQ(lines, 4);
}

}  // namespace
}  // namespace aurora::cli
