#include "ecrl/learn/mlp.hpp"

#include <cmath>
#include <memory>

namespace ecrl::learn {

void Gradients::scale(double k) {
  for (auto& m : w) m *= k;
  for (auto& v : b) v *= k;
  input *= k;
}

void Gradients::add(const Gradients& o) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] += o.w[l];
    b[l] += o.b[l];
  }
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& m : w) s += m.squaredNorm();
  for (const auto& v : b) s += v.squaredNorm();
  return s;
}

Mlp::Mlp(std::vector<std::size_t> sizes, OutputActivation output, Rng& rng)
    : sizes_(std::move(sizes)), output_(output) {
  if (sizes_.size() < 2) throw DimensionMismatch("network needs at least an input and an output layer");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    std::uniform_real_distribution<double> u(-bound, bound);
    Matrix w(sizes_[l + 1], sizes_[l]);
    Vector b(sizes_[l + 1]);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = u(rng);
    w_.push_back(std::move(w));
    b_.push_back(std::move(b));
  }
}

Matrix Mlp::forward(const Matrix& x, Cache* cache) const {
  if (static_cast<std::size_t>(x.rows()) != input_size())
    throw DimensionMismatch("input has " + std::to_string(x.rows()) + " rows, expected " +
                            std::to_string(input_size()));
  if (cache) {
    cache->a.assign(1, x);
    cache->z.clear();
  }
  Matrix a = x;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    Matrix z = (w_[l] * a).colwise() + b_[l];
    const bool last = l + 1 == w_.size();
    if (!last)
      a = z.cwiseMax(0.0);
    else if (output_ == OutputActivation::Tanh)
      a = z.array().tanh().matrix();
    else
      a = z;
    if (cache) {
      cache->z.push_back(std::move(z));
      cache->a.push_back(a);
    }
  }
  return a;
}

Vector Mlp::forward(const Vector& x) const {
  Matrix m = x;
  return forward(m).col(0);
}

Gradients Mlp::backward(const Cache& cache, const Matrix& upstream) const {
  const std::size_t L = w_.size();
  if (cache.z.size() != L) throw DimensionMismatch("backward needs a cached forward pass");
  if (upstream.rows() != cache.a.back().rows() || upstream.cols() != cache.a.back().cols())
    throw DimensionMismatch("upstream gradient shape differs from the output");
  Gradients g;
  g.w.resize(L);
  g.b.resize(L);
  Matrix delta = upstream;
  if (output_ == OutputActivation::Tanh)
    delta = delta.cwiseProduct((1.0 - cache.a.back().array().square()).matrix());
  for (std::size_t l = L; l-- > 0;) {
    g.w[l] = delta * cache.a[l].transpose();
    g.b[l] = delta.rowwise().sum();
    Matrix prev = w_[l].transpose() * delta;
    if (l > 0)
      delta = prev.cwiseProduct((cache.z[l - 1].array() > 0.0).cast<double>().matrix());
    else
      g.input = std::move(prev);
  }
  return g;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) n += w_[l].size() + b_[l].size();
  return n;
}

std::vector<double> Mlp::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (std::size_t l = 0; l < w_.size(); ++l) {
    out.insert(out.end(), w_[l].data(), w_[l].data() + w_[l].size());
    out.insert(out.end(), b_[l].data(), b_[l].data() + b_[l].size());
  }
  return out;
}

void Mlp::set_parameters(const std::vector<double>& flat) {
  if (flat.size() != parameter_count()) throw DimensionMismatch("parameter vector has wrong length");
  std::size_t k = 0;
  for (std::size_t l = 0; l < w_.size(); ++l) {
    for (Eigen::Index i = 0; i < w_[l].size(); ++i) w_[l].data()[i] = flat[k++];
    for (Eigen::Index i = 0; i < b_[l].size(); ++i) b_[l].data()[i] = flat[k++];
  }
}

std::vector<double> Mlp::flatten(const Gradients& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.w.size(); ++l) {
    out.insert(out.end(), g.w[l].data(), g.w[l].data() + g.w[l].size());
    out.insert(out.end(), g.b[l].data(), g.b[l].data() + g.b[l].size());
  }
  return out;
}

void Mlp::soft_update(const Mlp& src, double tau) {
  for (std::size_t l = 0; l < w_.size(); ++l) {
    w_[l] = tau * src.w_[l] + (1.0 - tau) * w_[l];
    b_[l] = tau * src.b_[l] + (1.0 - tau) * b_[l];
  }
}

nlohmann::json Mlp::to_json() const {
  nlohmann::json j;
  j["sizes"] = sizes_;
  j["output"] = output_ == OutputActivation::Tanh ? "tanh" : "identity";
  j["parameters"] = parameters();
  return j;
}

Mlp Mlp::from_json(const nlohmann::json& j) {
  Rng rng(0);
  auto out = j.at("output").get<std::string>() == "tanh" ? OutputActivation::Tanh
                                                         : OutputActivation::Identity;
  Mlp net(j.at("sizes").get<std::vector<std::size_t>>(), out, rng);
  net.set_parameters(j.at("parameters").get<std::vector<double>>());
  return net;
}

void SgdMomentum::step(Mlp& net, const Gradients& g) {
  auto& w = net.weights();
  auto& b = net.biases();
  if (vw_.empty()) {
    for (std::size_t l = 0; l < w.size(); ++l) {
      vw_.push_back(Matrix::Zero(w[l].rows(), w[l].cols()));
      vb_.push_back(Vector::Zero(b[l].size()));
    }
  }
  for (std::size_t l = 0; l < w.size(); ++l) {
    vw_[l] = momentum_ * vw_[l] + g.w[l];
    vb_[l] = momentum_ * vb_[l] + g.b[l];
    w[l] -= lr_ * vw_[l];
    b[l] -= lr_ * vb_[l];
  }
}

void Adam::step(Mlp& net, const Gradients& g) {
  auto& w = net.weights();
  auto& b = net.biases();
  if (mw_.empty()) {
    for (std::size_t l = 0; l < w.size(); ++l) {
      mw_.push_back(Matrix::Zero(w[l].rows(), w[l].cols()));
      vw_.push_back(Matrix::Zero(w[l].rows(), w[l].cols()));
      mb_.push_back(Vector::Zero(b[l].size()));
      vb_.push_back(Vector::Zero(b[l].size()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t l = 0; l < w.size(); ++l) {
    mw_[l] = beta1_ * mw_[l] + (1 - beta1_) * g.w[l];
    vw_[l] = beta2_ * vw_[l] + (1 - beta2_) * g.w[l].cwiseAbs2();
    mb_[l] = beta1_ * mb_[l] + (1 - beta1_) * g.b[l];
    vb_[l] = beta2_ * vb_[l] + (1 - beta2_) * g.b[l].cwiseAbs2();
    w[l].array() -= lr_ * (mw_[l].array() / c1) / ((vw_[l].array() / c2).sqrt() + eps_);
    b[l].array() -= lr_ * (mb_[l].array() / c1) / ((vb_[l].array() / c2).sqrt() + eps_);
  }
}

OptimizerKind optimizer_from_string(const std::string& name) {
  if (name == "sgd" || name == "sgd_momentum") return OptimizerKind::SgdMomentum;
  if (name == "adam") return OptimizerKind::Adam;
  throw ConfigError("unknown optimizer '" + name + "'");
}

std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double lr) {
  if (kind == OptimizerKind::Adam) return std::make_unique<Adam>(lr);
  return std::make_unique<SgdMomentum>(lr, 0.9);
}

void clip_gradients(Gradients& g, double max_norm) {
  if (max_norm <= 0.0) return;
  const double norm = std::sqrt(g.squared_norm());
  if (norm > max_norm) {
    const double k = max_norm / norm;
    for (auto& m : g.w) m *= k;
    for (auto& v : g.b) v *= k;
  }
}

}  // namespace ecrl::learn
