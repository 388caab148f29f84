#include "ipr/introspect/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ipr/core/rng.hpp"

namespace ipr::introspect {

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  const double m = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - m).exp();
  return e / e.sum();
}

namespace {

std::string head_name(OutputHead h) {
  switch (h) {
    case OutputHead::kSigmoid: return "sigmoid";
    case OutputHead::kSoftmax: return "softmax";
    case OutputHead::kLinear: return "linear";
  }
  throw std::invalid_argument("unknown head");
}

OutputHead head_from_name(const std::string& s) {
  if (s == "sigmoid") return OutputHead::kSigmoid;
  if (s == "softmax") return OutputHead::kSoftmax;
  if (s == "linear") return OutputHead::kLinear;
  throw std::invalid_argument("unknown head: " + s);
}

Eigen::VectorXd apply_head(const Eigen::VectorXd& z, OutputHead head) {
  switch (head) {
    case OutputHead::kSigmoid: return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    case OutputHead::kSoftmax: return softmax(z);
    case OutputHead::kLinear: return z;
  }
  throw std::invalid_argument("unknown head");
}

}  // namespace

Mlp Mlp::init(const std::vector<int>& layers, OutputHead head, uint64_t seed) {
  if (layers.size() < 2) throw std::invalid_argument("Mlp: need at least input and output");
  Mlp m;
  m.layers_ = layers;
  m.head_ = head;
  ipr::Rng rng(ipr::Rng::derive(seed, 0x6d6c70));
  for (size_t l = 0; l + 1 < layers.size(); ++l) {
    const int in = layers[l];
    const int out = layers[l + 1];
    const double s = std::sqrt(6.0 / (in + out));
    Eigen::MatrixXd w(out, in);
    for (int i = 0; i < out; ++i)
      for (int j = 0; j < in; ++j) w(i, j) = rng.uniform(-s, s);
    m.w_.push_back(std::move(w));
    m.b_.push_back(Eigen::VectorXd::Zero(out));
    m.vw_.push_back(Eigen::MatrixXd::Zero(out, in));
    m.vb_.push_back(Eigen::VectorXd::Zero(out));
  }
  return m;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Eigen::VectorXd a = x;
  for (size_t l = 0; l + 1 < w_.size(); ++l) a = (w_[l] * a + b_[l]).array().tanh();
  return apply_head(w_.back() * a + b_.back(), head_);
}

Eigen::VectorXd Mlp::forward_masked(const Eigen::VectorXd& x,
                                    const std::vector<Eigen::VectorXd>& masks,
                                    double keep_prob) const {
  if (masks.size() != w_.size() - 1)
    throw std::invalid_argument("forward_masked: one mask per hidden layer required");
  Eigen::VectorXd a = x;
  for (size_t l = 0; l + 1 < w_.size(); ++l) {
    a = (w_[l] * a + b_[l]).array().tanh();
    a = a.cwiseProduct(masks[l]) / keep_prob;
  }
  return apply_head(w_.back() * a + b_.back(), head_);
}

double Mlp::train_batch(const std::vector<Eigen::VectorXd>& xs,
                        const std::vector<Eigen::VectorXd>& ys, double lr, double momentum) {
  if (xs.empty() || xs.size() != ys.size())
    throw std::invalid_argument("train_batch: bad batch");
  const size_t n_layers = w_.size();
  std::vector<Eigen::MatrixXd> gw(n_layers);
  std::vector<Eigen::VectorXd> gb(n_layers);
  for (size_t l = 0; l < n_layers; ++l) {
    gw[l] = Eigen::MatrixXd::Zero(w_[l].rows(), w_[l].cols());
    gb[l] = Eigen::VectorXd::Zero(b_[l].size());
  }

  double total_loss = 0.0;
  std::vector<Eigen::VectorXd> acts(n_layers + 1);
  for (size_t s = 0; s < xs.size(); ++s) {
    acts[0] = xs[s];
    for (size_t l = 0; l + 1 < n_layers; ++l)
      acts[l + 1] = (w_[l] * acts[l] + b_[l]).array().tanh();
    const Eigen::VectorXd z = w_.back() * acts[n_layers - 1] + b_.back();
    const Eigen::VectorXd out = apply_head(z, head_);

    Eigen::VectorXd delta;
    switch (head_) {
      case OutputHead::kSigmoid:
        total_loss += 0.5 * (out - ys[s]).squaredNorm();
        delta = (out - ys[s]).cwiseProduct(out.cwiseProduct(Eigen::VectorXd::Ones(out.size()) - out));
        break;
      case OutputHead::kLinear:
        total_loss += 0.5 * (out - ys[s]).squaredNorm();
        delta = out - ys[s];
        break;
      case OutputHead::kSoftmax: {
        for (int i = 0; i < ys[s].size(); ++i)
          if (ys[s](i) > 0.0) total_loss -= ys[s](i) * std::log(std::max(out(i), 1e-300));
        delta = out - ys[s];
        break;
      }
    }

    for (size_t l = n_layers; l-- > 0;) {
      gw[l] += delta * acts[l].transpose();
      gb[l] += delta;
      if (l > 0)
        delta = (w_[l].transpose() * delta)
                    .cwiseProduct((1.0 - acts[l].array().square()).matrix());
    }
  }

  const double inv_n = 1.0 / static_cast<double>(xs.size());
  for (size_t l = 0; l < n_layers; ++l) {
    vw_[l] = momentum * vw_[l] - lr * inv_n * gw[l];
    vb_[l] = momentum * vb_[l] - lr * inv_n * gb[l];
    w_[l] += vw_[l];
    b_[l] += vb_[l];
  }
  return total_loss * inv_n;
}

double Mlp::loss(const std::vector<Eigen::VectorXd>& xs,
                 const std::vector<Eigen::VectorXd>& ys) const {
  if (xs.empty()) return 0.0;
  double total = 0.0;
  for (size_t s = 0; s < xs.size(); ++s) {
    const Eigen::VectorXd out = forward(xs[s]);
    if (head_ == OutputHead::kSoftmax) {
      for (int i = 0; i < ys[s].size(); ++i)
        if (ys[s](i) > 0.0) total -= ys[s](i) * std::log(std::max(out(i), 1e-300));
    } else {
      total += 0.5 * (out - ys[s]).squaredNorm();
    }
  }
  return total / static_cast<double>(xs.size());
}

size_t Mlp::n_params() const {
  size_t n = 0;
  for (size_t l = 0; l < w_.size(); ++l) n += w_[l].size() + b_[l].size();
  return n;
}

std::string Mlp::to_json() const {
  nlohmann::ordered_json j;
  j["layers"] = layers_;
  j["head"] = head_name(head_);
  auto ws = nlohmann::ordered_json::array();
  auto bs = nlohmann::ordered_json::array();
  for (size_t l = 0; l < w_.size(); ++l) {
    std::vector<double> flat(w_[l].data(), w_[l].data() + w_[l].size());
    ws.push_back(flat);
    bs.push_back(std::vector<double>(b_[l].data(), b_[l].data() + b_[l].size()));
  }
  j["weights"] = std::move(ws);
  j["biases"] = std::move(bs);
  return j.dump();
}

Mlp Mlp::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Mlp m;
  m.layers_ = j.at("layers").get<std::vector<int>>();
  m.head_ = head_from_name(j.at("head"));
  const auto& ws = j.at("weights");
  const auto& bs = j.at("biases");
  for (size_t l = 0; l + 1 < m.layers_.size(); ++l) {
    const int in = m.layers_[l];
    const int out = m.layers_[l + 1];
    const auto wf = ws.at(l).get<std::vector<double>>();
    const auto bf = bs.at(l).get<std::vector<double>>();
    if (static_cast<int>(wf.size()) != in * out || static_cast<int>(bf.size()) != out)
      throw std::invalid_argument("Mlp::from_json: shape mismatch");
    m.w_.push_back(Eigen::Map<const Eigen::MatrixXd>(wf.data(), out, in));
    m.b_.push_back(Eigen::Map<const Eigen::VectorXd>(bf.data(), out));
    m.vw_.push_back(Eigen::MatrixXd::Zero(out, in));
    m.vb_.push_back(Eigen::VectorXd::Zero(out));
  }
  return m;
}

bool Mlp::same_weights(const Mlp& other) const {
  if (layers_ != other.layers_) return false;
  for (size_t l = 0; l < w_.size(); ++l)
    if (w_[l] != other.w_[l] || b_[l] != other.b_[l]) return false;
  return true;
}

}  // namespace ipr::introspect
