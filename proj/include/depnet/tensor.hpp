#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "depnet/rng.hpp"

namespace depnet {

using Shape = std::vector<int>;

size_t numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// A persistent trainable parameter. Graphs are transient (one per example);
// Variables live across steps and collect gradients from each backward pass.
struct Variable {
  std::string name;
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;

  Variable(std::string name_, Shape shape_);
  size_t size() const { return value.size(); }
  void zero_grad();
};

class Graph;

// Lightweight handle to a node inside a Graph.
class Tensor {
 public:
  Tensor() = default;
  const Shape& shape() const;
  const std::vector<double>& value() const;
  const std::vector<double>& grad() const;  // valid after Graph::backward
  int rank() const { return static_cast<int>(shape().size()); }
  double scalar() const;  // value()[0] of a single-element tensor
  bool valid() const { return graph_ != nullptr; }

 private:
  friend class Graph;
  Tensor(Graph* g, int id) : graph_(g), id_(id) {}
  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Append-only tape of operations. Every op checks shapes, computes its
// forward value eagerly and rejects non-finite results. backward() walks
// the tape once in reverse insertion order.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Tensor input(std::vector<double> value, Shape shape);  // constant leaf
  Tensor leaf(std::vector<double> value, Shape shape, bool requires_grad);
  Tensor param(Variable& var);  // leaf bound to var; grads flush on backward
  Tensor zeros(Shape shape);

  Tensor matmul(Tensor a, Tensor b);
  Tensor add(Tensor a, Tensor b);
  Tensor add_rowvec(Tensor m, Tensor v);  // broadcast v over the rows of m
  Tensor mul(Tensor a, Tensor b);
  Tensor scale(Tensor a, double c);
  Tensor add_const(Tensor a, double c);
  Tensor concat(const std::vector<Tensor>& parts, int axis);
  Tensor stack_rows(const std::vector<Tensor>& rows);  // T vectors -> {T, D}
  Tensor slice_row(Tensor m, int row);                 // {T, D} -> {D}
  Tensor mean(Tensor a);                               // -> {1}
  Tensor sum_axis(Tensor m, int axis);                 // {T, D} -> {D} or {T}
  Tensor tanh(Tensor a);
  Tensor sigmoid(Tensor a);
  Tensor relu(Tensor a);
  Tensor softmax(Tensor a, int axis = 0);
  // x {N, E}, kernel {F, w, E}, bias {F} -> {N - w + 1, F}, valid windows only
  Tensor conv1d(Tensor x, Tensor kernel, Tensor bias);
  // x {T, F} -> {T / p, F}; gradient goes to the first maximal element
  Tensor maxpool1d(Tensor x, int width);
  // v {W} -> {target}; bucket i = [i*W/target, (i+1)*W/target)
  Tensor adaptive_maxpool1d(Tensor v, int target);
  Tensor embedding_lookup(Tensor table, const std::vector<int>& ids);
  // probabilities + one-hot -> {1}; p clamped at 1e-12 (counts clamp events)
  Tensor cross_entropy(Tensor probs, const std::vector<double>& onehot);

  void backward(Tensor loss);

  size_t size() const { return nodes_.size(); }
  const Shape& shape_of(int id) const { return nodes_[id].shape; }
  const std::vector<double>& value_of(int id) const { return nodes_[id].value; }
  const std::vector<double>& grad_of(int id) const { return nodes_[id].grad; }

  static long cross_entropy_clamp_count();

 private:
  struct Node {
    const char* op;
    Shape shape;
    std::vector<double> value;
    std::vector<double> grad;
    std::vector<int> inputs;
    bool requires_grad = false;
    std::function<void(Graph&, int)> back;  // accumulate into input grads
    Variable* bound = nullptr;
  };

  int add_node(const char* op, Shape shape, std::vector<double> value,
               std::vector<int> inputs, std::function<void(Graph&, int)> back);
  bool any_requires(const std::vector<int>& ids) const;

  std::vector<Node> nodes_;
  bool backward_done_ = false;

  friend class Tensor;
};

// Bias-corrected Adam; moments keyed per Variable, update applied in place.
struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}
  void step(const std::vector<Variable*>& params);
  long step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::unordered_map<const Variable*, std::pair<std::vector<double>, std::vector<double>>>
      moments_;
};

// Owns Variables in declaration order (the checkpoint order).
class ParamStore {
 public:
  Variable* create(const std::string& name, Shape shape);
  // uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out))
  Variable* create_xavier(const std::string& name, Shape shape, int fan_in, int fan_out,
                          Rng& rng);
  Variable* create_uniform(const std::string& name, Shape shape, double a, Rng& rng);
  std::vector<Variable*> all() const;
  Variable* find(const std::string& name) const;
  void zero_grads();
  void scale_grads(double c);
  size_t total_size() const;

 private:
  std::vector<std::unique_ptr<Variable>> vars_;
};

// Flat binary of f64 in declaration order; the caller owns the manifest.
void save_params_binary(const std::vector<Variable*>& params, const std::string& path);
void load_params_binary(const std::vector<Variable*>& params, const std::string& path);

}  // namespace depnet
