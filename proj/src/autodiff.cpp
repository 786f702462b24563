#include "redsum/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace redsum {

namespace detail {

struct Node {
  std::vector<size_t> shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty = not yet populated
  bool requires_grad = false;
  bool needs_grad = false;  // requires_grad or depends on something that does
  long tape_index = -1;
  const TapeImpl* tape_owner = nullptr;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backfn;

  size_t numel() const { return values.size(); }
  void ensure_grad() {
    if (grad.empty()) grad.assign(values.size(), 0.0);
  }
};

class TapeImpl {
 public:
  std::vector<std::shared_ptr<Node>> nodes;

  void record(const std::shared_ptr<Node>& n) {
    n->tape_index = static_cast<long>(nodes.size());
    n->tape_owner = this;
    nodes.push_back(n);
  }
};

struct Access {
  static Tensor wrap(std::shared_ptr<Node> node) { return Tensor(std::move(node)); }
  static const std::shared_ptr<Node>& node(const Tensor& t) { return t.node_; }
  static TapeImpl& impl(Tape& tape) { return *tape.impl_; }
};

namespace {
thread_local bool g_grad_enabled = true;
}

}  // namespace detail

using detail::Access;
using detail::Node;

Tape::Tape() : impl_(new detail::TapeImpl()) {}
Tape::~Tape() = default;

Tape& Tape::active() {
  thread_local Tape tape;
  return tape;
}

void Tape::clear() { impl_->nodes.clear(); }
size_t Tape::size() const { return impl_->nodes.size(); }

NoGradGuard::NoGradGuard() : previous_(detail::g_grad_enabled) {
  detail::g_grad_enabled = false;
}
NoGradGuard::~NoGradGuard() { detail::g_grad_enabled = previous_; }

namespace {

size_t shape_numel(const std::vector<size_t>& shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

std::string shape_str(const std::vector<size_t>& shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                              " vs " + shape_str(b.shape()));
}

[[noreturn]] void shape_error(const char* op, const Tensor& a) {
  throw std::invalid_argument(std::string(op) + ": unsupported shape " + shape_str(a.shape()));
}

Node* require_node(const Tensor& t, const char* op) {
  if (!t.defined()) throw std::invalid_argument(std::string(op) + ": undefined tensor");
  return Access::node(t).get();
}

}  // namespace

Tensor make_op(std::vector<double> values, std::vector<size_t> shape,
               std::vector<Tensor> inputs, std::function<void(Node&)> backfn,
               const char* /*op*/) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);

  bool needs = false;
  if (detail::g_grad_enabled) {
    for (const auto& in : inputs) {
      const auto& p = Access::node(in);
      if (p && p->needs_grad) {
        needs = true;
        break;
      }
    }
  }
  if (needs) {
    node->needs_grad = true;
    node->parents.reserve(inputs.size());
    for (const auto& in : inputs) node->parents.push_back(Access::node(in));
    node->backfn = std::move(backfn);
    Access::impl(Tape::active()).record(node);
  }
  return Access::wrap(std::move(node));
}

Tensor Tensor::constant(std::vector<double> values, std::vector<size_t> shape) {
  if (values.size() != shape_numel(shape)) {
    throw std::invalid_argument("Tensor: values length does not match shape");
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  return Access::wrap(std::move(node));
}

Tensor Tensor::scalar(double v) { return constant({v}, {1}); }

Tensor Tensor::vector(std::vector<double> v) {
  std::vector<size_t> shape{v.size()};
  return constant(std::move(v), std::move(shape));
}

Tensor Tensor::zeros(std::vector<size_t> shape, bool requires_grad) {
  size_t n = shape_numel(shape);
  Tensor t = constant(std::vector<double>(n, 0.0), std::move(shape));
  if (requires_grad) {
    Access::node(t)->requires_grad = true;
    Access::node(t)->needs_grad = true;
  }
  return t;
}

Tensor Tensor::param(std::vector<double> values, std::vector<size_t> shape) {
  Tensor t = constant(std::move(values), std::move(shape));
  Access::node(t)->requires_grad = true;
  Access::node(t)->needs_grad = true;
  return t;
}

const std::vector<size_t>& Tensor::shape() const {
  return require_node(*this, "shape")->shape;
}
size_t Tensor::size() const { return require_node(*this, "size")->numel(); }
const std::vector<double>& Tensor::values() const {
  return require_node(*this, "values")->values;
}
std::vector<double>& Tensor::values_mut() {
  return require_node(*this, "values_mut")->values;
}
double Tensor::item() const {
  Node* n = require_node(*this, "item");
  if (n->numel() != 1) throw std::invalid_argument("item: tensor is not scalar");
  return n->values[0];
}
bool Tensor::requires_grad() const {
  return require_node(*this, "requires_grad")->requires_grad;
}
bool Tensor::has_grad() const { return !require_node(*this, "grad")->grad.empty(); }
const std::vector<double>& Tensor::grad() const {
  Node* n = require_node(*this, "grad");
  if (n->grad.empty()) throw std::runtime_error("grad: no gradient populated");
  return n->grad;
}
void Tensor::zero_grad() { require_node(*this, "zero_grad")->grad.clear(); }

// ---------------------------------------------------------------------------
// Elementwise ops

Tensor add(const Tensor& a, const Tensor& b) {
  Node* na = require_node(a, "add");
  Node* nb = require_node(b, "add");
  if (na->shape != nb->shape) shape_error("add", a, b);
  std::vector<double> out(na->numel());
  for (size_t i = 0; i < out.size(); ++i) out[i] = na->values[i] + nb->values[i];
  return make_op(std::move(out), na->shape, {a, b},
                 [](Node& self) {
                   for (auto& p : self.parents) {
                     if (!p->needs_grad) continue;
                     p->ensure_grad();
                     for (size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
                   }
                 },
                 "add");
}

Tensor sub(const Tensor& a, const Tensor& b) {
  Node* na = require_node(a, "sub");
  Node* nb = require_node(b, "sub");
  if (na->shape != nb->shape) shape_error("sub", a, b);
  std::vector<double> out(na->numel());
  for (size_t i = 0; i < out.size(); ++i) out[i] = na->values[i] - nb->values[i];
  return make_op(std::move(out), na->shape, {a, b},
                 [](Node& self) {
                   auto& pa = self.parents[0];
                   auto& pb = self.parents[1];
                   if (pa->needs_grad) {
                     pa->ensure_grad();
                     for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
                   }
                   if (pb->needs_grad) {
                     pb->ensure_grad();
                     for (size_t i = 0; i < self.grad.size(); ++i) pb->grad[i] -= self.grad[i];
                   }
                 },
                 "sub");
}

Tensor mul(const Tensor& a, const Tensor& b) {
  Node* na = require_node(a, "mul");
  Node* nb = require_node(b, "mul");
  const bool a_scalar = na->numel() == 1;
  const bool b_scalar = nb->numel() == 1;
  if (na->shape != nb->shape && !a_scalar && !b_scalar) shape_error("mul", a, b);

  size_t n = std::max(na->numel(), nb->numel());
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i] = na->values[a_scalar ? 0 : i] * nb->values[b_scalar ? 0 : i];
  }
  std::vector<size_t> shape = a_scalar ? nb->shape : na->shape;
  return make_op(std::move(out), std::move(shape), {a, b},
                 [a_scalar, b_scalar](Node& self) {
                   auto& pa = self.parents[0];
                   auto& pb = self.parents[1];
                   if (pa->needs_grad) {
                     pa->ensure_grad();
                     for (size_t i = 0; i < self.grad.size(); ++i) {
                       double g = self.grad[i] * pb->values[b_scalar ? 0 : i];
                       pa->grad[a_scalar ? 0 : i] += g;
                     }
                   }
                   if (pb->needs_grad) {
                     pb->ensure_grad();
                     for (size_t i = 0; i < self.grad.size(); ++i) {
                       double g = self.grad[i] * pa->values[a_scalar ? 0 : i];
                       pb->grad[b_scalar ? 0 : i] += g;
                     }
                   }
                 },
                 "mul");
}

Tensor scale(const Tensor& a, double factor) {
  Node* na = require_node(a, "scale");
  std::vector<double> out(na->numel());
  for (size_t i = 0; i < out.size(); ++i) out[i] = na->values[i] * factor;
  return make_op(std::move(out), na->shape, {a},
                 [factor](Node& self) {
                   auto& p = self.parents[0];
                   if (!p->needs_grad) return;
                   p->ensure_grad();
                   for (size_t i = 0; i < self.grad.size(); ++i) {
                     p->grad[i] += factor * self.grad[i];
                   }
                 },
                 "scale");
}

Tensor neg(const Tensor& a) { return scale(a, -1.0); }

// ---------------------------------------------------------------------------
// Linear algebra

Tensor matmul(const Tensor& a, const Tensor& b) {
  Node* na = require_node(a, "matmul");
  Node* nb = require_node(b, "matmul");
  if (na->shape.size() != 2) shape_error("matmul", a);
  const size_t m = na->shape[0], k = na->shape[1];

  if (nb->shape.size() == 1) {
    if (nb->shape[0] != k) shape_error("matmul", a, b);
    std::vector<double> out(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      const double* arow = na->values.data() + i * k;
      for (size_t j = 0; j < k; ++j) acc += arow[j] * nb->values[j];
      out[i] = acc;
    }
    return make_op(std::move(out), {m}, {a, b},
                   [m, k](Node& self) {
                     auto& pa = self.parents[0];
                     auto& pb = self.parents[1];
                     if (pa->needs_grad) {
                       pa->ensure_grad();
                       for (size_t i = 0; i < m; ++i) {
                         double g = self.grad[i];
                         if (g == 0.0) continue;
                         double* gr = pa->grad.data() + i * k;
                         for (size_t j = 0; j < k; ++j) gr[j] += g * pb->values[j];
                       }
                     }
                     if (pb->needs_grad) {
                       pb->ensure_grad();
                       for (size_t i = 0; i < m; ++i) {
                         double g = self.grad[i];
                         if (g == 0.0) continue;
                         const double* arow = pa->values.data() + i * k;
                         for (size_t j = 0; j < k; ++j) pb->grad[j] += g * arow[j];
                       }
                     }
                   },
                   "matmul");
  }

  if (nb->shape.size() != 2 || nb->shape[0] != k) shape_error("matmul", a, b);
  const size_t n = nb->shape[1];
  std::vector<double> out(m * n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < k; ++j) {
      double av = na->values[i * k + j];
      if (av == 0.0) continue;
      const double* brow = nb->values.data() + j * n;
      double* orow = out.data() + i * n;
      for (size_t c = 0; c < n; ++c) orow[c] += av * brow[c];
    }
  }
  return make_op(std::move(out), {m, n}, {a, b},
                 [m, k, n](Node& self) {
                   auto& pa = self.parents[0];
                   auto& pb = self.parents[1];
                   if (pa->needs_grad) {
                     pa->ensure_grad();
                     for (size_t i = 0; i < m; ++i) {
                       for (size_t j = 0; j < k; ++j) {
                         double acc = 0.0;
                         const double* grow = self.grad.data() + i * n;
                         const double* brow = pb->values.data() + j * n;
                         for (size_t c = 0; c < n; ++c) acc += grow[c] * brow[c];
                         pa->grad[i * k + j] += acc;
                       }
                     }
                   }
                   if (pb->needs_grad) {
                     pb->ensure_grad();
                     for (size_t j = 0; j < k; ++j) {
                       for (size_t c = 0; c < n; ++c) {
                         double acc = 0.0;
                         for (size_t i = 0; i < m; ++i) {
                           acc += pa->values[i * k + j] * self.grad[i * n + c];
                         }
                         pb->grad[j * n + c] += acc;
                       }
                     }
                   }
                 },
                 "matmul");
}

Tensor dot(const Tensor& a, const Tensor& b) {
  Node* na = require_node(a, "dot");
  Node* nb = require_node(b, "dot");
  if (na->shape.size() != 1 || nb->shape.size() != 1 || na->shape[0] != nb->shape[0]) {
    shape_error("dot", a, b);
  }
  double acc = 0.0;
  for (size_t i = 0; i < na->numel(); ++i) acc += na->values[i] * nb->values[i];
  return make_op({acc}, {1}, {a, b},
                 [](Node& self) {
                   auto& pa = self.parents[0];
                   auto& pb = self.parents[1];
                   double g = self.grad[0];
                   if (pa->needs_grad) {
                     pa->ensure_grad();
                     for (size_t i = 0; i < pa->numel(); ++i) pa->grad[i] += g * pb->values[i];
                   }
                   if (pb->needs_grad) {
                     pb->ensure_grad();
                     for (size_t i = 0; i < pb->numel(); ++i) pb->grad[i] += g * pa->values[i];
                   }
                 },
                 "dot");
}

// ---------------------------------------------------------------------------
// Nonlinearities and reductions

Tensor sigmoid(const Tensor& x) {
  Node* nx = require_node(x, "sigmoid");
  std::vector<double> out(nx->numel());
  for (size_t i = 0; i < out.size(); ++i) {
    double v = nx->values[i];
    out[i] = v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
  }
  std::vector<double> saved = out;
  return make_op(std::move(out), nx->shape, {x},
                 [saved = std::move(saved)](Node& self) {
                   auto& p = self.parents[0];
                   if (!p->needs_grad) return;
                   p->ensure_grad();
                   for (size_t i = 0; i < self.grad.size(); ++i) {
                     p->grad[i] += self.grad[i] * saved[i] * (1.0 - saved[i]);
                   }
                 },
                 "sigmoid");
}

Tensor tanh(const Tensor& x) {
  Node* nx = require_node(x, "tanh");
  std::vector<double> out(nx->numel());
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(nx->values[i]);
  std::vector<double> saved = out;
  return make_op(std::move(out), nx->shape, {x},
                 [saved = std::move(saved)](Node& self) {
                   auto& p = self.parents[0];
                   if (!p->needs_grad) return;
                   p->ensure_grad();
                   for (size_t i = 0; i < self.grad.size(); ++i) {
                     p->grad[i] += self.grad[i] * (1.0 - saved[i] * saved[i]);
                   }
                 },
                 "tanh");
}

namespace {
constexpr double kLogFloor = 1e-12;
}

Tensor log(const Tensor& x) {
  Node* nx = require_node(x, "log");
  std::vector<double> out(nx->numel());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = std::log(std::max(nx->values[i], kLogFloor));
  }
  return make_op(std::move(out), nx->shape, {x},
                 [](Node& self) {
                   auto& p = self.parents[0];
                   if (!p->needs_grad) return;
                   p->ensure_grad();
                   for (size_t i = 0; i < self.grad.size(); ++i) {
                     p->grad[i] += self.grad[i] / std::max(p->values[i], kLogFloor);
                   }
                 },
                 "log");
}

Tensor softmax(const Tensor& x, double tau) {
  Node* nx = require_node(x, "softmax");
  if (nx->shape.size() != 1) shape_error("softmax", x);
  const size_t n = nx->numel();
  if (n == 0) shape_error("softmax", x);
  double m = -HUGE_VAL;
  for (size_t i = 0; i < n; ++i) m = std::max(m, tau * nx->values[i]);
  std::vector<double> out(n);
  double z = 0.0;
  for (size_t i = 0; i < n; ++i) {
    out[i] = std::exp(tau * nx->values[i] - m);
    z += out[i];
  }
  for (size_t i = 0; i < n; ++i) out[i] /= z;
  std::vector<double> saved = out;
  return make_op(std::move(out), nx->shape, {x},
                 [saved = std::move(saved), tau](Node& self) {
                   auto& p = self.parents[0];
                   if (!p->needs_grad) return;
                   p->ensure_grad();
                   double inner = 0.0;
                   for (size_t i = 0; i < saved.size(); ++i) inner += self.grad[i] * saved[i];
                   for (size_t i = 0; i < saved.size(); ++i) {
                     p->grad[i] += tau * saved[i] * (self.grad[i] - inner);
                   }
                 },
                 "softmax");
}

Tensor sum(const Tensor& x) {
  Node* nx = require_node(x, "sum");
  double acc = 0.0;
  for (double v : nx->values) acc += v;
  return make_op({acc}, {1}, {x},
                 [](Node& self) {
                   auto& p = self.parents[0];
                   if (!p->needs_grad) return;
                   p->ensure_grad();
                   double g = self.grad[0];
                   for (size_t i = 0; i < p->numel(); ++i) p->grad[i] += g;
                 },
                 "sum");
}

Tensor mean(const Tensor& x) {
  Node* nx = require_node(x, "mean");
  if (nx->numel() == 0) shape_error("mean", x);
  double acc = 0.0;
  for (double v : nx->values) acc += v;
  acc /= static_cast<double>(nx->numel());
  return make_op({acc}, {1}, {x},
                 [](Node& self) {
                   auto& p = self.parents[0];
                   if (!p->needs_grad) return;
                   p->ensure_grad();
                   double g = self.grad[0] / static_cast<double>(p->numel());
                   for (size_t i = 0; i < p->numel(); ++i) p->grad[i] += g;
                 },
                 "mean");
}

Tensor concat(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no inputs");
  std::vector<double> out;
  std::vector<size_t> offsets;
  for (const auto& t : parts) {
    Node* n = require_node(t, "concat");
    if (n->shape.size() > 1) shape_error("concat", t);
    offsets.push_back(out.size());
    out.insert(out.end(), n->values.begin(), n->values.end());
  }
  size_t total = out.size();
  return make_op(std::move(out), {total}, parts,
                 [offsets = std::move(offsets)](Node& self) {
                   for (size_t pi = 0; pi < self.parents.size(); ++pi) {
                     auto& p = self.parents[pi];
                     if (!p->needs_grad) continue;
                     p->ensure_grad();
                     size_t off = offsets[pi];
                     for (size_t i = 0; i < p->numel(); ++i) p->grad[i] += self.grad[off + i];
                   }
                 },
                 "concat");
}

Tensor row(const Tensor& matrix, size_t index) {
  Node* nm = require_node(matrix, "row");
  if (nm->shape.size() != 2) shape_error("row", matrix);
  const size_t rows = nm->shape[0], cols = nm->shape[1];
  if (index >= rows) {
    throw std::out_of_range("row: index " + std::to_string(index) + " out of " +
                            std::to_string(rows));
  }
  std::vector<double> out(nm->values.begin() + index * cols,
                          nm->values.begin() + (index + 1) * cols);
  return make_op(std::move(out), {cols}, {matrix},
                 [index, cols](Node& self) {
                   auto& p = self.parents[0];
                   if (!p->needs_grad) return;
                   p->ensure_grad();
                   for (size_t i = 0; i < cols; ++i) {
                     p->grad[index * cols + i] += self.grad[i];
                   }
                 },
                 "row");
}

// ---------------------------------------------------------------------------

void backward(const Tensor& loss) {
  Node* root = require_node(loss, "backward");
  if (root->numel() != 1) {
    throw std::invalid_argument("backward: loss must be scalar, got shape " +
                                shape_str(root->shape));
  }
  root->ensure_grad();
  root->grad[0] += 1.0;
  if (root->tape_index < 0) return;  // leaf or constant: nothing to propagate

  auto& tape = Access::impl(Tape::active());
  if (root->tape_owner != &tape ||
      static_cast<size_t>(root->tape_index) >= tape.nodes.size() ||
      tape.nodes[root->tape_index].get() != root) {
    throw std::runtime_error("backward: loss is not on the active tape");
  }

  // Mark the subgraph reachable from the loss, then sweep the tape once in
  // reverse execution order.
  std::vector<char> reachable(root->tape_index + 1, 0);
  std::vector<Node*> stack{root};
  reachable[root->tape_index] = 1;
  while (!stack.empty()) {
    Node* n = stack.back();
    stack.pop_back();
    for (auto& p : n->parents) {
      if (p->tape_index >= 0 && p->tape_owner == &tape && !reachable[p->tape_index]) {
        reachable[p->tape_index] = 1;
        stack.push_back(p.get());
      }
    }
  }
  for (long i = root->tape_index; i >= 0; --i) {
    if (!reachable[i]) continue;
    Node& n = *tape.nodes[i];
    n.ensure_grad();
    n.backfn(n);
  }
}

void sgd_step(std::vector<Tensor>& params, double lr) {
  for (auto& p : params) {
    Node* n = require_node(p, "sgd_step");
    if (!n->requires_grad) {
      throw std::invalid_argument("sgd_step: tensor does not require grad");
    }
    if (n->grad.empty()) {
      throw std::runtime_error("sgd_step: missing gradient; run backward first");
    }
    for (size_t i = 0; i < n->numel(); ++i) n->values[i] -= lr * n->grad[i];
    n->grad.clear();
  }
}

}  // namespace redsum
