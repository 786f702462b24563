#pragma once

#include <memory>
#include <string>
#include <vector>

namespace redsum {

namespace detail {
struct Node;
struct Access;
class TapeImpl;
}  // namespace detail

// Reverse-mode tensor handle. Copies share storage; values of parameters can
// be mutated in place between tape resets.
class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(std::vector<double> values, std::vector<size_t> shape);
  static Tensor scalar(double v);
  static Tensor vector(std::vector<double> v);
  static Tensor zeros(std::vector<size_t> shape, bool requires_grad = false);
  static Tensor param(std::vector<double> values, std::vector<size_t> shape);

  bool defined() const { return node_ != nullptr; }
  const std::vector<size_t>& shape() const;
  size_t size() const;
  const std::vector<double>& values() const;
  std::vector<double>& values_mut();
  double item() const;  // scalar tensors only

  bool requires_grad() const;
  bool has_grad() const;
  const std::vector<double>& grad() const;
  void zero_grad();

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;
  friend struct detail::Access;
};

// Per-thread record of executed operations; backward replays it in reverse.
class Tape {
 public:
  static Tape& active();
  void clear();
  size_t size() const;

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

 private:
  Tape();
  ~Tape();
  std::unique_ptr<detail::TapeImpl> impl_;
  friend struct detail::Access;
};

// Disables recording while alive; forward passes under the guard build no
// graph.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Elementwise; `mul` also accepts a scalar on either side.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor neg(const Tensor& a);

// [m,k]x[k,n] -> [m,n] or [m,k]x[k] -> [m].
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor dot(const Tensor& a, const Tensor& b);  // 1-d, 1-d -> scalar

Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor log(const Tensor& x);                        // input clamped to >= 1e-12
Tensor softmax(const Tensor& x, double tau = 1.0);  // 1-d, max-subtracted
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
Tensor concat(const std::vector<Tensor>& parts);  // 1-d or scalar pieces
Tensor row(const Tensor& matrix, size_t index);   // 2-d -> 1-d

// Seeds d(loss)/d(loss) = 1 and accumulates gradients into every
// requires_grad ancestor. Loss must be a scalar on the active tape (or a
// leaf). Repeated calls without zero_grad accumulate.
void backward(const Tensor& loss);

// p <- p - lr * grad for every tensor; gradients are cleared. Throws if any
// tensor is missing its gradient.
void sgd_step(std::vector<Tensor>& params, double lr);

}  // namespace redsum
