#include "aurora/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace aurora::ad {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  require(t.defined() && t.shape().size() == rank,
          std::string(op) + ": expected rank " + std::to_string(rank) + " input, got " +
              (t.defined() ? to_string(t.shape()) : std::string("undefined")));
}

bool any_grad(std::initializer_list<const Tensor*> inputs) {
  return std::any_of(inputs.begin(), inputs.end(),
                     [](const Tensor* t) { return t->requires_grad(); });
}

}  // namespace

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t a, int d) { return a * static_cast<std::size_t>(d); });
}

std::string to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? ", " : "") << shape[i];
  os << ']';
  return os.str();
}

Tensor Tensor::constant(Shape shape, std::vector<double> values) {
  require(element_count(shape) == values.size(),
          "tensor value count does not match shape " + to_string(shape));
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  return Tensor(std::move(node));
}

Tensor Tensor::zeros(Shape shape) {
  const std::size_t n = element_count(shape);
  return constant(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::parameter(Shape shape, std::vector<double> values) {
  Tensor t = constant(std::move(shape), std::move(values));
  t.node_->requires_grad = true;
  return t;
}

double Tensor::item() const {
  require(size() == 1, "item() on a tensor with " + std::to_string(size()) + " elements");
  return node_->value[0];
}

std::span<const double> Tensor::grad() const {
  if (node_->grad.empty()) node_->grad.assign(node_->value.size(), 0.0);
  return node_->grad;
}

Tensor Tape::make(Shape shape, std::vector<double> values, bool requires_grad,
                  std::function<void(Node&)> backward) {
  Tensor t = Tensor::constant(std::move(shape), std::move(values));
  if (requires_grad) {
    t.node_->requires_grad = true;
    t.node_->backward = std::move(backward);
    nodes_.push_back(t.node_);
  }
  return t;
}

void Tape::backward(const Tensor& loss) {
  require(loss.size() == 1, "backward needs a scalar loss");
  if (!loss.requires_grad()) return;
  loss.node().ensure_grad()[0] = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    Node& n = **it;
    if (!n.grad.empty() && n.backward) n.backward(n);
  }
}

Tensor conv2d(Tape& tape, const Tensor& x, const Tensor& weight, const Tensor& bias, int stride,
              int padding) {
  require_rank(x, 3, "conv2d");
  require_rank(weight, 4, "conv2d weight");
  require_rank(bias, 1, "conv2d bias");
  require(stride == 1 || stride == 2, "conv2d: stride must be 1 or 2");
  require(padding >= 0, "conv2d: negative padding");
  const int c_in = x.dim(0), h = x.dim(1), w = x.dim(2);
  const int c_out = weight.dim(0), k = weight.dim(2);
  require(weight.dim(1) == c_in && weight.dim(3) == k,
          "conv2d: weight " + to_string(weight.shape()) + " incompatible with input " +
              to_string(x.shape()));
  require(bias.dim(0) == c_out, "conv2d: bias size mismatch");
  const int ho = (h + 2 * padding - k) / stride + 1;
  const int wo = (w + 2 * padding - k) / stride + 1;
  require(ho > 0 && wo > 0, "conv2d: kernel larger than padded input");

  const auto& xv = x.node().value;
  const auto& wv = weight.node().value;
  const auto& bv = bias.node().value;
  std::vector<double> out(static_cast<std::size_t>(c_out) * ho * wo);
  // Valid output range along one axis for kernel offset kk.
  auto range = [padding, stride](int kk, int in_size, int out_size, int& lo, int& hi) {
    lo = std::max(0, (padding - kk + stride - 1) / stride);
    const int last = in_size - 1 + padding - kk;
    hi = last < 0 ? 0 : std::min(out_size, last / stride + 1);
  };
  for (int o = 0; o < c_out; ++o) {
    double* op = &out[static_cast<std::size_t>(o) * ho * wo];
    std::fill(op, op + ho * wo, bv[o]);
    for (int c = 0; c < c_in; ++c) {
      const double* xp = &xv[static_cast<std::size_t>(c) * h * w];
      for (int ky = 0; ky < k; ++ky) {
        int oy0, oy1;
        range(ky, h, ho, oy0, oy1);
        for (int kx = 0; kx < k; ++kx) {
          const double wt = wv[((static_cast<std::size_t>(o) * c_in + c) * k + ky) * k + kx];
          int ox0, ox1;
          range(kx, w, wo, ox0, ox1);
          for (int oy = oy0; oy < oy1; ++oy) {
            const double* row = xp + (oy * stride + ky - padding) * w + (kx - padding);
            double* orow = op + oy * wo;
            for (int ox = ox0; ox < ox1; ++ox) orow[ox] += wt * row[ox * stride];
          }
        }
      }
    }
  }

  auto xn = x.shared(), wn = weight.shared(), bn = bias.shared();
  return tape.make(
      {c_out, ho, wo}, std::move(out), any_grad({&x, &weight, &bias}),
      [=](Node& self) {
        const auto& g = self.grad;
        const auto& xv2 = xn->value;
        const auto& wv2 = wn->value;
        std::vector<double>* gx = xn->requires_grad ? &xn->ensure_grad() : nullptr;
        std::vector<double>* gw = wn->requires_grad ? &wn->ensure_grad() : nullptr;
        if (bn->requires_grad) {
          auto& gb = bn->ensure_grad();
          for (int o = 0; o < c_out; ++o) {
            const double* gp = &g[static_cast<std::size_t>(o) * ho * wo];
            gb[o] += std::accumulate(gp, gp + ho * wo, 0.0);
          }
        }
        if (!gx && !gw) return;
        for (int o = 0; o < c_out; ++o) {
          const double* gp = &g[static_cast<std::size_t>(o) * ho * wo];
          for (int c = 0; c < c_in; ++c) {
            const std::size_t xoff = static_cast<std::size_t>(c) * h * w;
            for (int ky = 0; ky < k; ++ky) {
              int oy0, oy1;
              range(ky, h, ho, oy0, oy1);
              for (int kx = 0; kx < k; ++kx) {
                const std::size_t widx = ((static_cast<std::size_t>(o) * c_in + c) * k + ky) * k + kx;
                const double wt = wv2[widx];
                int ox0, ox1;
                range(kx, w, wo, ox0, ox1);
                double acc = 0.0;
                for (int oy = oy0; oy < oy1; ++oy) {
                  const std::size_t base = xoff + (oy * stride + ky - padding) * w + (kx - padding);
                  const double* grow = gp + oy * wo;
                  for (int ox = ox0; ox < ox1; ++ox) {
                    const std::size_t xi = base + ox * stride;
                    acc += grow[ox] * xv2[xi];
                    if (gx) (*gx)[xi] += grow[ox] * wt;
                  }
                }
                if (gw) (*gw)[widx] += acc;
              }
            }
          }
        }
      });
}

Tensor relu(Tape& tape, const Tensor& x) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v = v > 0.0 ? v : 0.0;
  auto xn = x.shared();
  return tape.make(x.shape(), std::move(out), x.requires_grad(), [xn](Node& self) {
    auto& gx = xn->ensure_grad();
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (xn->value[i] > 0.0) gx[i] += self.grad[i];
    }
  });
}

Tensor sigmoid(Tape& tape, const Tensor& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = x.values()[i];
    out[i] = v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
  }
  auto xn = x.shared();
  return tape.make(x.shape(), std::move(out), x.requires_grad(), [xn](Node& self) {
    auto& gx = xn->ensure_grad();
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double s = self.value[i];
      gx[i] += self.grad[i] * s * (1.0 - s);
    }
  });
}

Tensor upsample2x(Tape& tape, const Tensor& x) {
  require_rank(x, 3, "upsample2x");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  std::vector<double> out(static_cast<std::size_t>(c) * 4 * h * w);
  const auto& xv = x.node().value;
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < 2 * h; ++y) {
      for (int xx = 0; xx < 2 * w; ++xx) {
        out[(static_cast<std::size_t>(ch) * 2 * h + y) * 2 * w + xx] =
            xv[(static_cast<std::size_t>(ch) * h + y / 2) * w + xx / 2];
      }
    }
  }
  auto xn = x.shared();
  return tape.make({c, 2 * h, 2 * w}, std::move(out), x.requires_grad(), [=](Node& self) {
    auto& gx = xn->ensure_grad();
    for (int ch = 0; ch < c; ++ch) {
      for (int y = 0; y < 2 * h; ++y) {
        for (int xx = 0; xx < 2 * w; ++xx) {
          gx[(static_cast<std::size_t>(ch) * h + y / 2) * w + xx / 2] +=
              self.grad[(static_cast<std::size_t>(ch) * 2 * h + y) * 2 * w + xx];
        }
      }
    }
  });
}

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
  require(a.shape() == b.shape(),
          "add: shape mismatch " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] + b.values()[i];
  auto an = a.shared(), bn = b.shared();
  return tape.make(a.shape(), std::move(out), any_grad({&a, &b}), [an, bn](Node& self) {
    for (auto* n : {an.get(), bn.get()}) {
      if (!n->requires_grad) continue;
      auto& g = n->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor scale(Tape& tape, const Tensor& x, double factor) {
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v *= factor;
  auto xn = x.shared();
  return tape.make(x.shape(), std::move(out), x.requires_grad(), [xn, factor](Node& self) {
    auto& g = xn->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += factor * self.grad[i];
  });
}

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  require(b.dim(0) == k, "matmul: inner dimensions differ: " + to_string(a.shape()) + " x " +
                             to_string(b.shape()));
  std::vector<double> out(static_cast<std::size_t>(m) * n, 0.0);
  const auto& av = a.node().value;
  const auto& bv = b.node().value;
  for (int i = 0; i < m; ++i) {
    for (int p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      for (int j = 0; j < n; ++j) out[i * n + j] += aip * bv[p * n + j];
    }
  }
  auto an = a.shared(), bn = b.shared();
  return tape.make({m, n}, std::move(out), any_grad({&a, &b}), [=](Node& self) {
    const auto& g = self.grad;
    if (an->requires_grad) {
      auto& ga = an->ensure_grad();
      for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) acc += g[i * n + j] * bn->value[p * n + j];
          ga[i * k + p] += acc;
        }
    }
    if (bn->requires_grad) {
      auto& gb = bn->ensure_grad();
      for (int i = 0; i < m; ++i)
        for (int p = 0; p < k; ++p) {
          const double aip = an->value[i * k + p];
          for (int j = 0; j < n; ++j) gb[p * n + j] += aip * g[i * n + j];
        }
    }
  });
}

Tensor reshape(Tape& tape, const Tensor& x, Shape shape) {
  require(element_count(shape) == x.size(),
          "reshape: " + to_string(x.shape()) + " cannot become " + to_string(shape));
  auto xn = x.shared();
  return tape.make(std::move(shape), std::vector<double>(x.values().begin(), x.values().end()),
                   x.requires_grad(), [xn](Node& self) {
                     auto& g = xn->ensure_grad();
                     for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                   });
}

Tensor flatten(Tape& tape, const Tensor& x) {
  return reshape(tape, x, {1, static_cast<int>(x.size())});
}

Tensor softmax_channels(Tape& tape, const Tensor& x) {
  require_rank(x, 3, "softmax_channels");
  const int c = x.dim(0);
  const std::size_t plane = static_cast<std::size_t>(x.dim(1)) * x.dim(2);
  const auto& xv = x.node().value;
  std::vector<double> out(x.size());
  for (std::size_t p = 0; p < plane; ++p) {
    double mx = xv[p];
    for (int ch = 1; ch < c; ++ch) mx = std::max(mx, xv[ch * plane + p]);
    double z = 0.0;
    for (int ch = 0; ch < c; ++ch) z += (out[ch * plane + p] = std::exp(xv[ch * plane + p] - mx));
    for (int ch = 0; ch < c; ++ch) out[ch * plane + p] /= z;
  }
  auto xn = x.shared();
  return tape.make(x.shape(), std::move(out), x.requires_grad(), [=](Node& self) {
    auto& gx = xn->ensure_grad();
    for (std::size_t p = 0; p < plane; ++p) {
      double dot = 0.0;
      for (int ch = 0; ch < c; ++ch) dot += self.grad[ch * plane + p] * self.value[ch * plane + p];
      for (int ch = 0; ch < c; ++ch) {
        const std::size_t i = ch * plane + p;
        gx[i] += self.value[i] * (self.grad[i] - dot);
      }
    }
  });
}

Tensor sum(Tape& tape, const Tensor& x) {
  const double total = std::accumulate(x.values().begin(), x.values().end(), 0.0);
  auto xn = x.shared();
  return tape.make({1}, {total}, x.requires_grad(), [xn](Node& self) {
    auto& g = xn->ensure_grad();
    for (double& v : g) v += self.grad[0];
  });
}

Tensor mean(Tape& tape, const Tensor& x) {
  require(x.size() > 0, "mean of an empty tensor");
  return scale(tape, sum(tape, x), 1.0 / static_cast<double>(x.size()));
}

Tensor channel_mean(Tape& tape, const Tensor& x) {
  require_rank(x, 3, "channel_mean");
  const int c = x.dim(0);
  const std::size_t plane = static_cast<std::size_t>(x.dim(1)) * x.dim(2);
  std::vector<double> out(c);
  for (int ch = 0; ch < c; ++ch) {
    const double* p = &x.node().value[ch * plane];
    out[ch] = std::accumulate(p, p + plane, 0.0) / static_cast<double>(plane);
  }
  auto xn = x.shared();
  return tape.make({c}, std::move(out), x.requires_grad(), [=](Node& self) {
    auto& g = xn->ensure_grad();
    for (int ch = 0; ch < c; ++ch) {
      const double share = self.grad[ch] / static_cast<double>(plane);
      for (std::size_t i = 0; i < plane; ++i) g[ch * plane + i] += share;
    }
  });
}

Tensor slice_channels(Tape& tape, const Tensor& x, int begin, int end) {
  require_rank(x, 3, "slice_channels");
  require(0 <= begin && begin < end && end <= x.dim(0), "slice_channels: bad channel range");
  const std::size_t plane = static_cast<std::size_t>(x.dim(1)) * x.dim(2);
  std::vector<double> out(x.values().begin() + begin * plane, x.values().begin() + end * plane);
  auto xn = x.shared();
  return tape.make({end - begin, x.dim(1), x.dim(2)}, std::move(out), x.requires_grad(),
                   [=](Node& self) {
                     auto& g = xn->ensure_grad();
                     for (std::size_t i = 0; i < self.grad.size(); ++i) {
                       g[begin * plane + i] += self.grad[i];
                     }
                   });
}

Tensor concat_channels(Tape& tape, const std::vector<Tensor>& parts) {
  require(!parts.empty(), "concat_channels: nothing to concatenate");
  int channels = 0;
  bool grad = false;
  for (const Tensor& t : parts) {
    require_rank(t, 3, "concat_channels");
    require(t.dim(1) == parts[0].dim(1) && t.dim(2) == parts[0].dim(2),
            "concat_channels: spatial size mismatch");
    channels += t.dim(0);
    grad = grad || t.requires_grad();
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(channels) * parts[0].dim(1) * parts[0].dim(2));
  std::vector<std::shared_ptr<Node>> nodes;
  for (const Tensor& t : parts) {
    out.insert(out.end(), t.values().begin(), t.values().end());
    nodes.push_back(t.shared());
  }
  return tape.make({channels, parts[0].dim(1), parts[0].dim(2)}, std::move(out), grad,
                   [nodes](Node& self) {
                     std::size_t offset = 0;
                     for (const auto& n : nodes) {
                       if (n->requires_grad) {
                         auto& g = n->ensure_grad();
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[offset + i];
                       }
                       offset += n->value.size();
                     }
                   });
}

Tensor linear(Tape& tape, const Tensor& x, const Tensor& weight, const Tensor& bias) {
  require_rank(weight, 2, "linear weight");
  require_rank(bias, 1, "linear bias");
  const int out_dim = weight.dim(0), in_dim = weight.dim(1);
  require(static_cast<int>(x.size()) == in_dim && bias.dim(0) == out_dim,
          "linear: input of " + std::to_string(x.size()) + " values vs weight " +
              to_string(weight.shape()));
  std::vector<double> out(bias.values().begin(), bias.values().end());
  const auto& wv = weight.node().value;
  const auto& xv = x.node().value;
  for (int o = 0; o < out_dim; ++o) {
    double acc = 0.0;
    for (int i = 0; i < in_dim; ++i) acc += wv[o * in_dim + i] * xv[i];
    out[o] += acc;
  }
  auto xn = x.shared(), wn = weight.shared(), bn = bias.shared();
  return tape.make({out_dim}, std::move(out), any_grad({&x, &weight, &bias}), [=](Node& self) {
    const auto& g = self.grad;
    if (bn->requires_grad) {
      auto& gb = bn->ensure_grad();
      for (int o = 0; o < out_dim; ++o) gb[o] += g[o];
    }
    if (wn->requires_grad) {
      auto& gw = wn->ensure_grad();
      for (int o = 0; o < out_dim; ++o)
        for (int i = 0; i < in_dim; ++i) gw[o * in_dim + i] += g[o] * xn->value[i];
    }
    if (xn->requires_grad) {
      auto& gx = xn->ensure_grad();
      for (int o = 0; o < out_dim; ++o)
        for (int i = 0; i < in_dim; ++i) gx[i] += g[o] * wn->value[o * in_dim + i];
    }
  });
}

Tensor softmax_cross_entropy(Tape& tape, const Tensor& logits, std::span<const int> labels) {
  require_rank(logits, 3, "softmax_cross_entropy");
  const int c = logits.dim(0);
  const std::size_t plane = static_cast<std::size_t>(logits.dim(1)) * logits.dim(2);
  require(labels.size() == plane, "softmax_cross_entropy: label map size mismatch");
  const auto& xv = logits.node().value;
  std::vector<double> prob(logits.size());
  double total = 0.0;
  for (std::size_t p = 0; p < plane; ++p) {
    const int label = labels[p];
    require(label >= 0 && label < c, "softmax_cross_entropy: label " + std::to_string(label) +
                                         " outside 0.." + std::to_string(c - 1));
    double mx = xv[p];
    for (int ch = 1; ch < c; ++ch) mx = std::max(mx, xv[ch * plane + p]);
    double z = 0.0;
    for (int ch = 0; ch < c; ++ch) z += (prob[ch * plane + p] = std::exp(xv[ch * plane + p] - mx));
    for (int ch = 0; ch < c; ++ch) prob[ch * plane + p] /= z;
    total += -(xv[label * plane + p] - mx - std::log(z));
  }
  auto xn = logits.shared();
  std::vector<int> owned(labels.begin(), labels.end());
  return tape.make({1}, {total}, logits.requires_grad(),
                   [xn, prob = std::move(prob), owned = std::move(owned), c, plane](Node& self) {
                     auto& g = xn->ensure_grad();
                     const double up = self.grad[0];
                     for (std::size_t p = 0; p < plane; ++p) {
                       for (int ch = 0; ch < c; ++ch) {
                         const std::size_t i = ch * plane + p;
                         g[i] += up * (prob[i] - (ch == owned[p] ? 1.0 : 0.0));
                       }
                     }
                   });
}

Tensor binary_cross_entropy(Tape& tape, const Tensor& probability, double target) {
  require(probability.size() == 1, "binary_cross_entropy expects a single probability");
  require(target >= 0.0 && target <= 1.0, "binary_cross_entropy: target outside [0, 1]");
  constexpr double kFloor = 1e-12;
  const double p = std::clamp(probability.item(), kFloor, 1.0 - kFloor);
  const double loss = -target * std::log(p) - (1.0 - target) * std::log(1.0 - p);
  auto pn = probability.shared();
  return tape.make({1}, {loss}, probability.requires_grad(), [pn, p, target](Node& self) {
    pn->ensure_grad()[0] += self.grad[0] * (-target / p + (1.0 - target) / (1.0 - p));
  });
}

Tensor squared_error(Tape& tape, const Tensor& prediction, std::span<const double> target) {
  require(prediction.size() == target.size(), "squared_error: size mismatch");
  double total = 0.0;
  std::vector<double> diff(target.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = prediction.values()[i] - target[i];
    total += diff[i] * diff[i];
  }
  auto pn = prediction.shared();
  return tape.make({1}, {total}, prediction.requires_grad(),
                   [pn, diff = std::move(diff)](Node& self) {
                     auto& g = pn->ensure_grad();
                     for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.0 * diff[i] * self.grad[0];
                   });
}

}  // namespace aurora::ad
