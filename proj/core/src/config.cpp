#include "aurora/config.hpp"

#include <cstdlib>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "aurora/binary_io.hpp"

namespace aurora {
namespace {

namespace pt = boost::property_tree;

template <typename T>
T parse_value(const std::string& key, const std::string& raw) {
  try {
    return boost::lexical_cast<T>(boost::trim_copy(raw));
  } catch (const boost::bad_lexical_cast&) {
    throw ValidationError("config key '" + key + "' has invalid value '" + raw + "'");
  }
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& raw) {
  std::vector<std::string> parts;
  boost::split(parts, raw, boost::is_any_of(","));
  std::vector<T> out;
  for (const std::string& p : parts) out.push_back(parse_value<T>(key, p));
  return out;
}

class Section {
 public:
  Section(const pt::ptree& tree, std::string name) : name_(std::move(name)) {
    if (const auto child = tree.get_child_optional(name_)) node_ = &*child;
  }

  template <typename T>
  void read(const std::string& key, T& target) {
    known_.insert(key);
    if (!node_) return;
    if (const auto v = node_->get_optional<std::string>(key)) {
      if constexpr (std::is_same_v<T, bool>) {
        target = parse_value<int>(name_ + "." + key, *v) != 0;
      } else {
        target = parse_value<T>(name_ + "." + key, *v);
      }
    }
  }

  template <typename T>
  void read_list(const std::string& key, std::vector<T>& target) {
    known_.insert(key);
    if (!node_) return;
    if (const auto v = node_->get_optional<std::string>(key)) {
      target = parse_list<T>(name_ + "." + key, *v);
    }
  }

  void reject_unknown() const {
    if (!node_) return;
    for (const auto& [key, value] : *node_) {
      if (!known_.contains(key)) {
        throw ValidationError("unknown config key '" + name_ + "." + key + "'");
      }
    }
  }

 private:
  std::string name_;
  const pt::ptree* node_ = nullptr;
  std::set<std::string> known_;
};

}  // namespace

AppConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  for (const auto& [name, child] : tree) {
    if (name != "dataset" && name != "train" && name != "model" && name != "ablate") {
      throw ValidationError("unknown config section [" + name + "]");
    }
  }

  AppConfig cfg;
  DatasetConfig& d = cfg.dataset;
  Section ds(tree, "dataset");
  ds.read("train_per_kind", d.train_per_kind);
  ds.read("val_per_kind", d.val_per_kind);
  ds.read("test_per_kind", d.test_per_kind);
  ds.read("size", d.size);
  ds.read("frames", d.frames);
  ds.read("pose_jitter_deg", d.pose_jitter_deg);
  ds.read("texture_jitter", d.texture_jitter);
  ds.read("noise_sigma", d.camera.noise_sigma);
  ds.read("quantize_bits", d.camera.quantize_bits);
  ds.read("max_shift_px", d.camera.max_shift_px);
  ds.read("max_rotation_deg", d.camera.max_rotation_deg);
  ds.read("seed", d.seed);
  ds.reject_unknown();

  TrainConfig& t = cfg.train;
  Section tr(tree, "train");
  tr.read("epochs", t.epochs);
  tr.read("batch_size", t.batch_size);
  tr.read("learning_rate", t.learning_rate);
  tr.read("seed", t.seed);
  tr.read("lambda_dep", t.weights.lambda_dep);
  tr.read("lambda_mat", t.weights.lambda_mat);
  tr.read("lambda_cls", t.weights.lambda_cls);
  tr.read("lambda_reg", t.weights.lambda_reg);
  tr.read("tau_reg", t.tau_reg);
  tr.reject_unknown();

  ModelConfig& m = t.model;
  Section md(tree, "model");
  std::vector<int> encoder(m.encoder_channels.begin(), m.encoder_channels.end());
  md.read_list("encoder_channels", encoder);
  if (encoder.size() != m.encoder_channels.size()) {
    throw ValidationError("model.encoder_channels needs exactly 4 values");
  }
  std::copy(encoder.begin(), encoder.end(), m.encoder_channels.begin());
  md.read("decoder_channels", m.decoder_channels);
  md.read("classifier_hidden", m.classifier_hidden);
  md.read("regressor_hidden", m.regressor_hidden);
  md.reject_unknown();
  m.input_size = d.size;

  AblationConfig& a = cfg.ablation;
  Section ab(tree, "ablate");
  ab.read_list("lambda_dep", a.lambda_dep);
  ab.read_list("lambda_mat", a.lambda_mat);
  ab.read("runs", a.runs);
  ab.reject_unknown();
  if (a.runs < 1) throw ValidationError("ablate.runs must be at least 1");

  d.validate();
  t.validate();
  return cfg;
}

AppConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("AG_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string s(raw);
  if (s.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("AG_SEED must be an unsigned integer, got '" + s + "'");
  }
  return parse_value<std::uint64_t>("AG_SEED", s);
}

}  // namespace aurora
