#pragma once

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ecrl/error.hpp"

namespace ecrl::learn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

enum class OutputActivation { Identity, Tanh };

struct Gradients {
  std::vector<Matrix> w;
  std::vector<Vector> b;
  Matrix input;  // d loss / d x, one column per sample

  void scale(double k);
  void add(const Gradients& other);
  double squared_norm() const;
};

// Fully connected network with rectifier hidden layers. Samples are columns.
class Mlp {
 public:
  struct Cache {
    std::vector<Matrix> a;  // a[0] = input, a[l + 1] = output of layer l
    std::vector<Matrix> z;  // pre-activations
  };

  Mlp() = default;
  // Weights and biases uniform in +-1/sqrt(fan_in).
  Mlp(std::vector<std::size_t> sizes, OutputActivation output, Rng& rng);

  Matrix forward(const Matrix& x, Cache* cache = nullptr) const;
  Vector forward(const Vector& x) const;
  // Reverse mode from d loss / d output.
  Gradients backward(const Cache& cache, const Matrix& upstream) const;

  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t num_layers() const { return w_.size(); }
  OutputActivation output_activation() const { return output_; }

  std::vector<Matrix>& weights() { return w_; }
  std::vector<Vector>& biases() { return b_; }
  const std::vector<Matrix>& weights() const { return w_; }
  const std::vector<Vector>& biases() const { return b_; }

  std::size_t parameter_count() const;
  std::vector<double> parameters() const;
  void set_parameters(const std::vector<double>& flat);
  static std::vector<double> flatten(const Gradients& g);

  // this = tau * source + (1 - tau) * this
  void soft_update(const Mlp& source, double tau);

  nlohmann::json to_json() const;
  static Mlp from_json(const nlohmann::json& j);

 private:
  std::vector<std::size_t> sizes_;
  OutputActivation output_ = OutputActivation::Identity;
  std::vector<Matrix> w_;
  std::vector<Vector> b_;
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(Mlp& net, const Gradients& g) = 0;
};

// v = momentum * v + g; theta -= lr * v
class SgdMomentum final : public Optimizer {
 public:
  SgdMomentum(double lr, double momentum = 0.9) : lr_(lr), momentum_(momentum) {}
  void step(Mlp& net, const Gradients& g) override;

 private:
  double lr_, momentum_;
  std::vector<Matrix> vw_;
  std::vector<Vector> vb_;
};

class Adam final : public Optimizer {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}
  void step(Mlp& net, const Gradients& g) override;

 private:
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  std::vector<Matrix> mw_, vw_;
  std::vector<Vector> mb_, vb_;
};

enum class OptimizerKind { SgdMomentum, Adam };
OptimizerKind optimizer_from_string(const std::string& name);
std::unique_ptr<Optimizer> make_optimizer(OptimizerKind kind, double lr);

// Rescales g so its global norm is at most max_norm (no-op when max_norm <= 0).
void clip_gradients(Gradients& g, double max_norm);

}  // namespace ecrl::learn
