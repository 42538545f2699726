#include "aurora/model.hpp"

#include <algorithm>
#include <cmath>

#include "aurora/optim.hpp"

namespace aurora {
namespace {

using ad::Tape;
using ad::Tensor;

Tensor conv(const Model& m, Tape& tape, const std::string& name, const Tensor& x, int stride,
            int padding) {
  return ad::conv2d(tape, x, m.parameter(name + ".w"), m.parameter(name + ".b"), stride, padding);
}

Tensor fc(const Model& m, Tape& tape, const std::string& name, const Tensor& x) {
  return ad::linear(tape, x, m.parameter(name + ".w"), m.parameter(name + ".b"));
}

// Upsample, 3x3 conv, inverted residual block (expand / project, skip add),
// 1x1 classifier.
Tensor decode(const Model& m, Tape& tape, const std::string& prefix, const Tensor& features) {
  Tensor x = ad::upsample2x(tape, features);
  x = ad::relu(tape, conv(m, tape, prefix + ".conv", x, 1, 1));
  Tensor t = ad::relu(tape, conv(m, tape, prefix + ".expand", x, 1, 0));
  t = conv(m, tape, prefix + ".project", t, 1, 0);
  x = ad::add(tape, x, t);
  return conv(m, tape, prefix + ".out", x, 1, 0);
}

}  // namespace

void ModelConfig::validate() const {
  if (input_size < 16 || input_size % 8 != 0) {
    throw ValidationError("model input size must be a multiple of 8, at least 16");
  }
  for (int c : encoder_channels) {
    if (c < 1) throw ValidationError("encoder channel counts must be positive");
  }
  if (encoder_channels[3] % 2 != 0 || encoder_channels[3] < 2) {
    throw ValidationError("final encoder channel count must be even to bisect");
  }
  if (decoder_channels < 1 || classifier_hidden < 1 || regressor_hidden < 1) {
    throw ValidationError("head widths must be positive");
  }
}

Model::Model(const ModelConfig& config, std::uint64_t seed) : config_(config) {
  config.validate();
  std::uint64_t index = 0;
  auto conv_layer = [&](const std::string& name, int out, int in, int k) {
    add(name + ".w", ad::initialize_weights({out, in, k, k}, mix_seed(seed, index++)));
    add(name + ".b", Tensor::parameter({out}, std::vector<double>(out, 0.0)));
  };
  auto fc_layer = [&](const std::string& name, int out, int in) {
    add(name + ".w", ad::initialize_weights({out, in}, mix_seed(seed, index++)));
    add(name + ".b", Tensor::parameter({out}, std::vector<double>(out, 0.0)));
  };
  const auto& e = config.encoder_channels;
  conv_layer("S.stem", e[0], 1, 3);
  conv_layer("S.stage1", e[1], e[0], 3);
  conv_layer("S.stage2", e[2], e[1], 3);
  conv_layer("S.stage3", e[3], e[2], 3);
  const int half = e[3] / 2;
  const int d = config.decoder_channels;
  for (const auto& [prefix, classes] :
       {std::pair<std::string, int>{"UD", kDepthBins}, {"UM", kMaterialClasses}}) {
    conv_layer(prefix + ".conv", d, half, 3);
    conv_layer(prefix + ".expand", 2 * d, d, 1);
    conv_layer(prefix + ".project", d, 2 * d, 1);
    conv_layer(prefix + ".out", classes, d, 1);
  }
  fc_layer("C.fc1", config.classifier_hidden, e[3]);
  fc_layer("C.fc2", 1, config.classifier_hidden);
  fc_layer("R.fc1", config.regressor_hidden, kRegressorFeatures);
  fc_layer("R.fc2", config.regressor_hidden, config.regressor_hidden);
  fc_layer("R.fc3", kResidualSize, config.regressor_hidden);
}

void Model::add(const std::string& name, Tensor t) {
  names_.push_back(name);
  params_.push_back(std::move(t));
}

const Tensor& Model::parameter(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ValidationError("model has no parameter '" + name + "'");
  return params_[static_cast<std::size_t>(it - names_.begin())];
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const Tensor& p : params_) n += p.size();
  return n;
}

void Model::round_to_float() {
  for (Tensor& p : params_) {
    for (double& v : p.values()) v = static_cast<double>(static_cast<float>(v));
  }
}

Model Model::clone() const {
  Model copy;
  copy.config_ = config_;
  copy.names_ = names_;
  copy.tau_cls_ = tau_cls_;
  for (const Tensor& p : params_) {
    copy.params_.push_back(
        Tensor::parameter(p.shape(), std::vector<double>(p.values().begin(), p.values().end())));
  }
  return copy;
}

std::vector<ad::NamedTensor> Model::to_checkpoint() const {
  std::vector<ad::NamedTensor> out;
  const auto& e = config_.encoder_channels;
  std::vector<float> meta{static_cast<float>(config_.input_size),
                          static_cast<float>(e[0]),
                          static_cast<float>(e[1]),
                          static_cast<float>(e[2]),
                          static_cast<float>(e[3]),
                          static_cast<float>(config_.decoder_channels),
                          static_cast<float>(config_.classifier_hidden),
                          static_cast<float>(config_.regressor_hidden)};
  out.push_back({"meta.config", {static_cast<int>(meta.size())}, meta});
  out.push_back({"meta.tau_cls", {1}, {static_cast<float>(tau_cls_)}});
  for (std::size_t i = 0; i < params_.size(); ++i) {
    ad::NamedTensor t{names_[i], params_[i].shape(), {}};
    for (double v : params_[i].values()) t.values.push_back(static_cast<float>(v));
    out.push_back(std::move(t));
  }
  return out;
}

Model Model::from_checkpoint(const std::vector<ad::NamedTensor>& tensors) {
  auto find = [&](const std::string& name) -> const ad::NamedTensor& {
    for (const auto& t : tensors) {
      if (t.name == name) return t;
    }
    throw IoError("checkpoint is missing tensor '" + name + "'");
  };
  const auto& meta = find("meta.config");
  if (meta.values.size() != 8) throw IoError("checkpoint configuration block is malformed");
  ModelConfig cfg;
  auto as_int = [&](std::size_t i) { return static_cast<int>(std::lround(meta.values[i])); };
  cfg.input_size = as_int(0);
  cfg.encoder_channels = {as_int(1), as_int(2), as_int(3), as_int(4)};
  cfg.decoder_channels = as_int(5);
  cfg.classifier_hidden = as_int(6);
  cfg.regressor_hidden = as_int(7);
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw IoError(std::string("checkpoint configuration invalid: ") + e.what());
  }
  Model model(cfg, 0);
  model.tau_cls_ = find("meta.tau_cls").values.at(0);
  for (std::size_t i = 0; i < model.params_.size(); ++i) {
    const auto& stored = find(model.names_[i]);
    if (stored.shape != model.params_[i].shape()) {
      throw IoError("checkpoint tensor '" + stored.name + "' has shape " +
                    ad::to_string(stored.shape) + ", model expects " +
                    ad::to_string(model.params_[i].shape()));
    }
    std::copy(stored.values.begin(), stored.values.end(), model.params_[i].values().begin());
  }
  return model;
}

namespace {

Tensor encode(const Model& model, Tape& tape, const ScalarMap& cue_input) {
  const int size = model.config().input_size;
  if (cue_input.channels() != 1 || cue_input.height() != size || cue_input.width() != size) {
    throw ValidationError("cue input must be 1x" + std::to_string(size) + "x" +
                          std::to_string(size));
  }
  const Tensor input = Tensor::constant(
      {1, size, size}, std::vector<double>(cue_input.data().begin(), cue_input.data().end()));
  Tensor x = ad::relu(tape, conv(model, tape, "S.stem", input, 1, 1));
  x = ad::relu(tape, conv(model, tape, "S.stage1", x, 2, 1));
  x = ad::relu(tape, conv(model, tape, "S.stage2", x, 2, 1));
  return ad::relu(tape, conv(model, tape, "S.stage3", x, 2, 1));
}

Tensor classify(const Model& model, Tape& tape, const Tensor& features) {
  Tensor pooled = ad::channel_mean(tape, features);
  Tensor hidden = ad::relu(tape, fc(model, tape, "C.fc1", pooled));
  return ad::sigmoid(tape, fc(model, tape, "C.fc2", hidden));
}

}  // namespace

CueOutputs forward(const Model& model, Tape& tape, const ScalarMap& cue_input) {
  const Tensor x = encode(model, tape, cue_input);
  CueOutputs out;
  out.features = x;
  const int channels = x.dim(0);
  const Tensor depth_half = ad::slice_channels(tape, x, 0, channels / 2);
  const Tensor material_half = ad::slice_channels(tape, x, channels / 2, channels);
  out.depth_logits = decode(model, tape, "UD", depth_half);
  out.material_logits = decode(model, tape, "UM", material_half);

  out.cls_score = classify(model, tape, x);
  return out;
}

Tensor forward_classifier(const Model& model, Tape& tape, const ScalarMap& cue_input) {
  return classify(model, tape, encode(model, tape, cue_input));
}

CueOutputs forward(const Model& model, Tape& tape, const NormalCue& cue) {
  return forward(model, tape, cue_network_input(cue));
}

Tensor stack_frames(const Image<float>& first, const Image<float>& second) {
  if (!first.same_shape(second) || first.channels() != 3) {
    throw ValidationError("regressor needs two RGB frames of equal size");
  }
  std::vector<double> values;
  values.reserve(first.size() * 2);
  values.insert(values.end(), first.data().begin(), first.data().end());
  values.insert(values.end(), second.data().begin(), second.data().end());
  return Tensor::constant({6, first.height(), first.width()}, std::move(values));
}

Tensor regressor_features(const Tensor& stacked_pair) {
  if (stacked_pair.shape().size() != 3 || stacked_pair.dim(0) != 6) {
    throw ValidationError("regressor input must be a [6, H, W] stacked frame pair");
  }
  const std::size_t plane =
      static_cast<std::size_t>(stacked_pair.dim(1)) * static_cast<std::size_t>(stacked_pair.dim(2));
  const auto v = stacked_pair.values();
  std::vector<double> sums(3, 0.0);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t p = 0; p < plane; ++p) sums[c] += v[c * plane + p] - v[(c + 3) * plane + p];
  }
  const double mass = std::abs(sums[0]) + std::abs(sums[1]) + std::abs(sums[2]);
  if (mass > 0.0) {
    for (double& s : sums) s /= mass;
  }
  return Tensor::constant({kRegressorFeatures}, std::move(sums));
}

Tensor regress_features(const Model& model, Tape& tape, const Tensor& features) {
  Tensor x = ad::relu(tape, fc(model, tape, "R.fc1", features));
  x = ad::relu(tape, fc(model, tape, "R.fc2", x));
  return fc(model, tape, "R.fc3", x);
}

Tensor regress(const Model& model, Tape& tape, const Tensor& stacked_pair) {
  return regress_features(model, tape, regressor_features(stacked_pair));
}

LabelMap downsample_labels(const LabelMap& labels, int factor) {
  if (factor < 1 || labels.height() % factor != 0 || labels.width() % factor != 0) {
    throw ValidationError("label map size must be divisible by the downsampling factor");
  }
  const int h = labels.height() / factor;
  const int w = labels.width() / factor;
  LabelMap out(1, h, w);
  std::array<int, 256> votes{};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      votes.fill(0);
      for (int dy = 0; dy < factor; ++dy)
        for (int dx = 0; dx < factor; ++dx) ++votes[labels(y * factor + dy, x * factor + dx)];
      out(y, x) = static_cast<std::uint8_t>(
          std::max_element(votes.begin(), votes.end()) - votes.begin());
    }
  }
  return out;
}

}  // namespace aurora
