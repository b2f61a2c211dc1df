#include "depnet/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>

#include "depnet/error.hpp"

namespace depnet {

namespace {
std::atomic<long> g_ce_clamp_count{0};
constexpr double kProbFloor = 1e-12;
}  // namespace

size_t numel(const Shape& shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  return n;
}

std::string shape_str(const Shape& shape) {
  std::string s = "{";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "}";
}

Variable::Variable(std::string name_, Shape shape_)
    : name(std::move(name_)), shape(std::move(shape_)) {
  for (int d : shape)
    if (d <= 0) throw InvalidArgument("variable '" + name + "' has non-positive extent");
  value.assign(numel(shape), 0.0);
  grad.assign(numel(shape), 0.0);
}

void Variable::zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

const Shape& Tensor::shape() const { return graph_->shape_of(id_); }
const std::vector<double>& Tensor::value() const { return graph_->value_of(id_); }
const std::vector<double>& Tensor::grad() const { return graph_->grad_of(id_); }
double Tensor::scalar() const {
  if (numel(shape()) != 1) throw InvalidArgument("scalar() on tensor of shape " + shape_str(shape()));
  return value()[0];
}

long Graph::cross_entropy_clamp_count() { return g_ce_clamp_count.load(); }

bool Graph::any_requires(const std::vector<int>& ids) const {
  for (int id : ids)
    if (nodes_[id].requires_grad) return true;
  return false;
}

int Graph::add_node(const char* op, Shape shape, std::vector<double> value,
                    std::vector<int> inputs, std::function<void(Graph&, int)> back) {
  if (value.size() != numel(shape))
    throw InvalidArgument(std::string(op) + ": value size " + std::to_string(value.size()) +
                          " does not match shape " + shape_str(shape));
  for (double v : value)
    if (!std::isfinite(v))
      throw Error(std::string(op) + " produced a non-finite value");
  Node n;
  n.op = op;
  n.shape = std::move(shape);
  n.value = std::move(value);
  n.inputs = std::move(inputs);
  n.requires_grad = any_requires(n.inputs);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Tensor Graph::input(std::vector<double> value, Shape shape) {
  return leaf(std::move(value), std::move(shape), false);
}

Tensor Graph::leaf(std::vector<double> value, Shape shape, bool requires_grad) {
  int id = add_node("leaf", std::move(shape), std::move(value), {}, nullptr);
  nodes_[id].requires_grad = requires_grad;
  return Tensor(this, id);
}

Tensor Graph::param(Variable& var) {
  Tensor t = leaf(var.value, var.shape, true);
  nodes_[t.id_].bound = &var;
  return t;
}

Tensor Graph::zeros(Shape shape) {
  size_t n = numel(shape);
  return input(std::vector<double>(n, 0.0), std::move(shape));
}

Tensor Graph::matmul(Tensor a, Tensor b) {
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  if (sa.size() == 2 && sb.size() == 2) {
    if (sa[1] != sb[0])
      throw InvalidArgument("matmul: incompatible shapes " + shape_str(sa) + " x " + shape_str(sb));
    int m = sa[0], n = sa[1], p = sb[1];
    const auto& av = a.value();
    const auto& bv = b.value();
    std::vector<double> out(static_cast<size_t>(m) * p, 0.0);
    for (int i = 0; i < m; ++i)
      for (int kk = 0; kk < n; ++kk) {
        double aik = av[i * n + kk];
        if (aik == 0) continue;
        for (int j = 0; j < p; ++j) out[i * p + j] += aik * bv[kk * p + j];
      }
    int id = add_node("matmul", {m, p}, std::move(out), {a.id_, b.id_},
                      [m, n, p](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        auto& ga = g.nodes_[node.inputs[0]].grad;
                        auto& gb = g.nodes_[node.inputs[1]].grad;
                        const auto& av = g.nodes_[node.inputs[0]].value;
                        const auto& bv = g.nodes_[node.inputs[1]].value;
                        const auto& go = node.grad;
                        for (int i = 0; i < m; ++i)
                          for (int j = 0; j < p; ++j) {
                            double goij = go[i * p + j];
                            if (goij == 0) continue;
                            for (int kk = 0; kk < n; ++kk) {
                              ga[i * n + kk] += goij * bv[kk * p + j];
                              gb[kk * p + j] += av[i * n + kk] * goij;
                            }
                          }
                      });
    return Tensor(this, id);
  }
  if (sa.size() == 2 && sb.size() == 1) {
    if (sa[1] != sb[0])
      throw InvalidArgument("matmul: incompatible shapes " + shape_str(sa) + " x " + shape_str(sb));
    int m = sa[0], n = sa[1];
    const auto& av = a.value();
    const auto& bv = b.value();
    std::vector<double> out(m, 0.0);
    for (int i = 0; i < m; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += av[i * n + j] * bv[j];
      out[i] = s;
    }
    int id = add_node("matmul", {m}, std::move(out), {a.id_, b.id_},
                      [m, n](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        auto& ga = g.nodes_[node.inputs[0]].grad;
                        auto& gb = g.nodes_[node.inputs[1]].grad;
                        const auto& av = g.nodes_[node.inputs[0]].value;
                        const auto& bv = g.nodes_[node.inputs[1]].value;
                        const auto& go = node.grad;
                        for (int i = 0; i < m; ++i) {
                          double goi = go[i];
                          if (goi == 0) continue;
                          for (int j = 0; j < n; ++j) {
                            ga[i * n + j] += goi * bv[j];
                            gb[j] += goi * av[i * n + j];
                          }
                        }
                      });
    return Tensor(this, id);
  }
  if (sa.size() == 1 && sb.size() == 2) {
    if (sa[0] != sb[0])
      throw InvalidArgument("matmul: incompatible shapes " + shape_str(sa) + " x " + shape_str(sb));
    int n = sa[0], p = sb[1];
    const auto& av = a.value();
    const auto& bv = b.value();
    std::vector<double> out(p, 0.0);
    for (int i = 0; i < n; ++i) {
      double ai = av[i];
      if (ai == 0) continue;
      for (int j = 0; j < p; ++j) out[j] += ai * bv[i * p + j];
    }
    int id = add_node("matmul", {p}, std::move(out), {a.id_, b.id_},
                      [n, p](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        auto& ga = g.nodes_[node.inputs[0]].grad;
                        auto& gb = g.nodes_[node.inputs[1]].grad;
                        const auto& av = g.nodes_[node.inputs[0]].value;
                        const auto& bv = g.nodes_[node.inputs[1]].value;
                        const auto& go = node.grad;
                        for (int j = 0; j < p; ++j) {
                          double goj = go[j];
                          if (goj == 0) continue;
                          for (int i = 0; i < n; ++i) {
                            ga[i] += goj * bv[i * p + j];
                            gb[i * p + j] += av[i] * goj;
                          }
                        }
                      });
    return Tensor(this, id);
  }
  throw InvalidArgument("matmul: unsupported ranks " + shape_str(sa) + " x " + shape_str(sb));
}

Tensor Graph::add(Tensor a, Tensor b) {
  if (a.shape() != b.shape())
    throw InvalidArgument("add: shape mismatch " + shape_str(a.shape()) + " vs " +
                          shape_str(b.shape()));
  const auto& av = a.value();
  const auto& bv = b.value();
  std::vector<double> out(av.size());
  for (size_t i = 0; i < av.size(); ++i) out[i] = av[i] + bv[i];
  int id = add_node("add", a.shape(), std::move(out), {a.id_, b.id_},
                    [](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& ga = g.nodes_[node.inputs[0]].grad;
                      auto& gb = g.nodes_[node.inputs[1]].grad;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < go.size(); ++i) {
                        ga[i] += go[i];
                        gb[i] += go[i];
                      }
                    });
  return Tensor(this, id);
}

Tensor Graph::add_rowvec(Tensor m, Tensor v) {
  if (m.rank() != 2 || v.rank() != 1 || m.shape()[1] != v.shape()[0])
    throw InvalidArgument("add_rowvec: shape mismatch " + shape_str(m.shape()) + " vs " +
                          shape_str(v.shape()));
  int rows = m.shape()[0], cols = m.shape()[1];
  const auto& mv = m.value();
  const auto& vv = v.value();
  std::vector<double> out(mv.size());
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out[r * cols + c] = mv[r * cols + c] + vv[c];
  int id = add_node("add_rowvec", m.shape(), std::move(out), {m.id_, v.id_},
                    [rows, cols](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& gm = g.nodes_[node.inputs[0]].grad;
                      auto& gv = g.nodes_[node.inputs[1]].grad;
                      const auto& go = node.grad;
                      for (int r = 0; r < rows; ++r)
                        for (int c = 0; c < cols; ++c) {
                          gm[r * cols + c] += go[r * cols + c];
                          gv[c] += go[r * cols + c];
                        }
                    });
  return Tensor(this, id);
}

Tensor Graph::mul(Tensor a, Tensor b) {
  if (a.shape() != b.shape())
    throw InvalidArgument("mul: shape mismatch " + shape_str(a.shape()) + " vs " +
                          shape_str(b.shape()));
  const auto& av = a.value();
  const auto& bv = b.value();
  std::vector<double> out(av.size());
  for (size_t i = 0; i < av.size(); ++i) out[i] = av[i] * bv[i];
  int id = add_node("mul", a.shape(), std::move(out), {a.id_, b.id_},
                    [](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& ga = g.nodes_[node.inputs[0]].grad;
                      auto& gb = g.nodes_[node.inputs[1]].grad;
                      const auto& av = g.nodes_[node.inputs[0]].value;
                      const auto& bv = g.nodes_[node.inputs[1]].value;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < go.size(); ++i) {
                        ga[i] += go[i] * bv[i];
                        gb[i] += go[i] * av[i];
                      }
                    });
  return Tensor(this, id);
}

Tensor Graph::scale(Tensor a, double c) {
  const auto& av = a.value();
  std::vector<double> out(av.size());
  for (size_t i = 0; i < av.size(); ++i) out[i] = av[i] * c;
  int id = add_node("scale", a.shape(), std::move(out), {a.id_},
                    [c](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& ga = g.nodes_[node.inputs[0]].grad;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * c;
                    });
  return Tensor(this, id);
}

Tensor Graph::add_const(Tensor a, double c) {
  const auto& av = a.value();
  std::vector<double> out(av.size());
  for (size_t i = 0; i < av.size(); ++i) out[i] = av[i] + c;
  int id = add_node("add_const", a.shape(), std::move(out), {a.id_},
                    [](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& ga = g.nodes_[node.inputs[0]].grad;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < go.size(); ++i) ga[i] += go[i];
                    });
  return Tensor(this, id);
}

Tensor Graph::concat(const std::vector<Tensor>& parts, int axis) {
  if (parts.empty()) throw InvalidArgument("concat: no inputs");
  int rank = parts[0].rank();
  for (const Tensor& p : parts)
    if (p.rank() != rank) throw InvalidArgument("concat: mixed ranks");
  std::vector<int> ids;
  for (const Tensor& p : parts) ids.push_back(p.id_);

  if (rank == 1 && axis == 0) {
    std::vector<double> out;
    std::vector<int> sizes;
    for (const Tensor& p : parts) {
      sizes.push_back(p.shape()[0]);
      out.insert(out.end(), p.value().begin(), p.value().end());
    }
    int id = add_node("concat", {static_cast<int>(out.size())}, std::move(out), ids,
                      [sizes](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        const auto& go = node.grad;
                        size_t off = 0;
                        for (size_t k = 0; k < sizes.size(); ++k) {
                          auto& gp = g.nodes_[node.inputs[k]].grad;
                          for (int i = 0; i < sizes[k]; ++i) gp[i] += go[off + i];
                          off += sizes[k];
                        }
                      });
    return Tensor(this, id);
  }
  if (rank == 2 && axis == 0) {
    int cols = parts[0].shape()[1];
    int rows = 0;
    std::vector<int> sizes;
    std::vector<double> out;
    for (const Tensor& p : parts) {
      if (p.shape()[1] != cols)
        throw InvalidArgument("concat axis 0: column mismatch " + shape_str(p.shape()));
      sizes.push_back(p.shape()[0]);
      rows += p.shape()[0];
      out.insert(out.end(), p.value().begin(), p.value().end());
    }
    int id = add_node("concat", {rows, cols}, std::move(out), ids,
                      [sizes, cols](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        const auto& go = node.grad;
                        size_t off = 0;
                        for (size_t k = 0; k < sizes.size(); ++k) {
                          auto& gp = g.nodes_[node.inputs[k]].grad;
                          size_t count = static_cast<size_t>(sizes[k]) * cols;
                          for (size_t i = 0; i < count; ++i) gp[i] += go[off + i];
                          off += count;
                        }
                      });
    return Tensor(this, id);
  }
  if (rank == 2 && axis == 1) {
    int rows = parts[0].shape()[0];
    int cols = 0;
    std::vector<int> widths;
    for (const Tensor& p : parts) {
      if (p.shape()[0] != rows)
        throw InvalidArgument("concat axis 1: row mismatch " + shape_str(p.shape()));
      widths.push_back(p.shape()[1]);
      cols += p.shape()[1];
    }
    std::vector<double> out(static_cast<size_t>(rows) * cols);
    int off = 0;
    for (size_t k = 0; k < parts.size(); ++k) {
      const auto& pv = parts[k].value();
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < widths[k]; ++c) out[r * cols + off + c] = pv[r * widths[k] + c];
      off += widths[k];
    }
    int id = add_node("concat", {rows, cols}, std::move(out), ids,
                      [widths, rows, cols](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        const auto& go = node.grad;
                        int off = 0;
                        for (size_t k = 0; k < widths.size(); ++k) {
                          auto& gp = g.nodes_[node.inputs[k]].grad;
                          for (int r = 0; r < rows; ++r)
                            for (int c = 0; c < widths[k]; ++c)
                              gp[r * widths[k] + c] += go[r * cols + off + c];
                          off += widths[k];
                        }
                      });
    return Tensor(this, id);
  }
  throw InvalidArgument("concat: unsupported rank/axis");
}

Tensor Graph::stack_rows(const std::vector<Tensor>& rows) {
  if (rows.empty()) throw InvalidArgument("stack_rows: no inputs");
  int d = rows[0].shape()[0];
  std::vector<int> ids;
  std::vector<double> out;
  for (const Tensor& r : rows) {
    if (r.rank() != 1 || r.shape()[0] != d)
      throw InvalidArgument("stack_rows: expected vectors of length " + std::to_string(d) +
                            ", got " + shape_str(r.shape()));
    ids.push_back(r.id_);
    out.insert(out.end(), r.value().begin(), r.value().end());
  }
  int t = static_cast<int>(rows.size());
  int id = add_node("stack_rows", {t, d}, std::move(out), ids,
                    [d](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      const auto& go = node.grad;
                      for (size_t k = 0; k < node.inputs.size(); ++k) {
                        auto& gr = g.nodes_[node.inputs[k]].grad;
                        for (int i = 0; i < d; ++i) gr[i] += go[k * d + i];
                      }
                    });
  return Tensor(this, id);
}

Tensor Graph::slice_row(Tensor m, int row) {
  if (m.rank() != 2) throw InvalidArgument("slice_row: expected a matrix");
  int rows = m.shape()[0], cols = m.shape()[1];
  if (row < 0 || row >= rows)
    throw InvalidArgument("slice_row: row " + std::to_string(row) + " out of range");
  const auto& mv = m.value();
  std::vector<double> out(mv.begin() + static_cast<size_t>(row) * cols,
                          mv.begin() + static_cast<size_t>(row + 1) * cols);
  int id = add_node("slice_row", {cols}, std::move(out), {m.id_},
                    [row, cols](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& gm = g.nodes_[node.inputs[0]].grad;
                      const auto& go = node.grad;
                      for (int c = 0; c < cols; ++c) gm[row * cols + c] += go[c];
                    });
  return Tensor(this, id);
}

Tensor Graph::mean(Tensor a) {
  const auto& av = a.value();
  if (av.empty()) throw InvalidArgument("mean: empty tensor");
  double s = 0;
  for (double v : av) s += v;
  double n = static_cast<double>(av.size());
  int id = add_node("mean", {1}, {s / n}, {a.id_},
                    [n](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& ga = g.nodes_[node.inputs[0]].grad;
                      double go = node.grad[0] / n;
                      for (double& v : ga) v += go;
                    });
  return Tensor(this, id);
}

Tensor Graph::sum_axis(Tensor m, int axis) {
  if (m.rank() != 2) throw InvalidArgument("sum_axis: expected a matrix");
  int rows = m.shape()[0], cols = m.shape()[1];
  const auto& mv = m.value();
  if (axis == 0) {
    std::vector<double> out(cols, 0.0);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) out[c] += mv[r * cols + c];
    int id = add_node("sum_axis", {cols}, std::move(out), {m.id_},
                      [rows, cols](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        auto& gm = g.nodes_[node.inputs[0]].grad;
                        const auto& go = node.grad;
                        for (int r = 0; r < rows; ++r)
                          for (int c = 0; c < cols; ++c) gm[r * cols + c] += go[c];
                      });
    return Tensor(this, id);
  }
  if (axis == 1) {
    std::vector<double> out(rows, 0.0);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) out[r] += mv[r * cols + c];
    int id = add_node("sum_axis", {rows}, std::move(out), {m.id_},
                      [rows, cols](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        auto& gm = g.nodes_[node.inputs[0]].grad;
                        const auto& go = node.grad;
                        for (int r = 0; r < rows; ++r)
                          for (int c = 0; c < cols; ++c) gm[r * cols + c] += go[r];
                      });
    return Tensor(this, id);
  }
  throw InvalidArgument("sum_axis: axis must be 0 or 1");
}

Tensor Graph::tanh(Tensor a) {
  const auto& av = a.value();
  std::vector<double> out(av.size());
  for (size_t i = 0; i < av.size(); ++i) out[i] = std::tanh(av[i]);
  int id = add_node("tanh", a.shape(), std::move(out), {a.id_},
                    [](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& ga = g.nodes_[node.inputs[0]].grad;
                      const auto& y = node.value;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * (1 - y[i] * y[i]);
                    });
  return Tensor(this, id);
}

Tensor Graph::sigmoid(Tensor a) {
  const auto& av = a.value();
  std::vector<double> out(av.size());
  for (size_t i = 0; i < av.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-av[i]));
  int id = add_node("sigmoid", a.shape(), std::move(out), {a.id_},
                    [](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& ga = g.nodes_[node.inputs[0]].grad;
                      const auto& y = node.value;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * y[i] * (1 - y[i]);
                    });
  return Tensor(this, id);
}

Tensor Graph::relu(Tensor a) {
  const auto& av = a.value();
  std::vector<double> out(av.size());
  for (size_t i = 0; i < av.size(); ++i) out[i] = av[i] > 0 ? av[i] : 0.0;
  int id = add_node("relu", a.shape(), std::move(out), {a.id_},
                    [](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& ga = g.nodes_[node.inputs[0]].grad;
                      const auto& x = g.nodes_[node.inputs[0]].value;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < go.size(); ++i)
                        if (x[i] > 0) ga[i] += go[i];
                    });
  return Tensor(this, id);
}

namespace {

// softmax along a contiguous stripe; used column- or row-wise below
void softmax_stripe(const double* in, double* out, int n, int stride) {
  double mx = in[0];
  for (int i = 1; i < n; ++i) mx = std::max(mx, in[i * stride]);
  double total = 0;
  for (int i = 0; i < n; ++i) {
    double e = std::exp(in[i * stride] - mx);
    out[i * stride] = e;
    total += e;
  }
  for (int i = 0; i < n; ++i) out[i * stride] /= total;
}

void softmax_backward_stripe(const double* y, const double* go, double* ga, int n,
                             int stride) {
  double dot = 0;
  for (int i = 0; i < n; ++i) dot += go[i * stride] * y[i * stride];
  for (int i = 0; i < n; ++i)
    ga[i * stride] += y[i * stride] * (go[i * stride] - dot);
}

}  // namespace

Tensor Graph::softmax(Tensor a, int axis) {
  if (a.rank() == 1) {
    int n = a.shape()[0];
    std::vector<double> out(n);
    softmax_stripe(a.value().data(), out.data(), n, 1);
    int id = add_node("softmax", a.shape(), std::move(out), {a.id_},
                      [n](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        softmax_backward_stripe(node.value.data(), node.grad.data(),
                                                g.nodes_[node.inputs[0]].grad.data(), n, 1);
                      });
    return Tensor(this, id);
  }
  if (a.rank() == 2) {
    int rows = a.shape()[0], cols = a.shape()[1];
    std::vector<double> out(a.value().size());
    if (axis == 0) {
      for (int c = 0; c < cols; ++c)
        softmax_stripe(a.value().data() + c, out.data() + c, rows, cols);
    } else if (axis == 1) {
      for (int r = 0; r < rows; ++r)
        softmax_stripe(a.value().data() + static_cast<size_t>(r) * cols,
                       out.data() + static_cast<size_t>(r) * cols, cols, 1);
    } else {
      throw InvalidArgument("softmax: axis must be 0 or 1");
    }
    int id = add_node("softmax", a.shape(), std::move(out), {a.id_},
                      [rows, cols, axis](Graph& g, int self) {
                        auto& node = g.nodes_[self];
                        auto& ga = g.nodes_[node.inputs[0]].grad;
                        if (axis == 0) {
                          for (int c = 0; c < cols; ++c)
                            softmax_backward_stripe(node.value.data() + c,
                                                    node.grad.data() + c, ga.data() + c,
                                                    rows, cols);
                        } else {
                          for (int r = 0; r < rows; ++r)
                            softmax_backward_stripe(
                                node.value.data() + static_cast<size_t>(r) * cols,
                                node.grad.data() + static_cast<size_t>(r) * cols,
                                ga.data() + static_cast<size_t>(r) * cols, cols, 1);
                        }
                      });
    return Tensor(this, id);
  }
  throw InvalidArgument("softmax: unsupported rank");
}

Tensor Graph::conv1d(Tensor x, Tensor kernel, Tensor bias) {
  if (x.rank() != 2 || kernel.rank() != 3 || bias.rank() != 1)
    throw InvalidArgument("conv1d: expected x {N,E}, kernel {F,w,E}, bias {F}");
  int n = x.shape()[0], e = x.shape()[1];
  int f = kernel.shape()[0], w = kernel.shape()[1], ke = kernel.shape()[2];
  if (ke != e || bias.shape()[0] != f)
    throw InvalidArgument("conv1d: shape mismatch x=" + shape_str(x.shape()) +
                          " kernel=" + shape_str(kernel.shape()) +
                          " bias=" + shape_str(bias.shape()));
  if (n < w)
    throw InvalidArgument("conv1d: input length " + std::to_string(n) +
                          " shorter than window " + std::to_string(w));
  int t = n - w + 1;
  const auto& xv = x.value();
  const auto& kv = kernel.value();
  const auto& bv = bias.value();
  std::vector<double> out(static_cast<size_t>(t) * f);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < f; ++j) {
      double s = bv[j];
      for (int u = 0; u < w; ++u)
        for (int c = 0; c < e; ++c)
          s += kv[(j * w + u) * e + c] * xv[(i + u) * e + c];
      out[i * f + j] = s;
    }
  int id = add_node("conv1d", {t, f}, std::move(out), {x.id_, kernel.id_, bias.id_},
                    [t, f, w, e](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& gx = g.nodes_[node.inputs[0]].grad;
                      auto& gk = g.nodes_[node.inputs[1]].grad;
                      auto& gb = g.nodes_[node.inputs[2]].grad;
                      const auto& xv = g.nodes_[node.inputs[0]].value;
                      const auto& kv = g.nodes_[node.inputs[1]].value;
                      const auto& go = node.grad;
                      for (int i = 0; i < t; ++i)
                        for (int j = 0; j < f; ++j) {
                          double goij = go[i * f + j];
                          if (goij == 0) continue;
                          gb[j] += goij;
                          for (int u = 0; u < w; ++u)
                            for (int c = 0; c < e; ++c) {
                              gk[(j * w + u) * e + c] += goij * xv[(i + u) * e + c];
                              gx[(i + u) * e + c] += goij * kv[(j * w + u) * e + c];
                            }
                        }
                    });
  return Tensor(this, id);
}

Tensor Graph::maxpool1d(Tensor x, int width) {
  if (x.rank() != 2) throw InvalidArgument("maxpool1d: expected a matrix");
  int t = x.shape()[0], f = x.shape()[1];
  if (width < 1 || width > t)
    throw InvalidArgument("maxpool1d: width " + std::to_string(width) +
                          " invalid for length " + std::to_string(t));
  int to = t / width;
  const auto& xv = x.value();
  std::vector<double> out(static_cast<size_t>(to) * f);
  std::vector<int> argmax(static_cast<size_t>(to) * f);
  for (int i = 0; i < to; ++i)
    for (int j = 0; j < f; ++j) {
      int best = i * width;
      double bv = xv[best * f + j];
      for (int u = 1; u < width; ++u) {
        double v = xv[(i * width + u) * f + j];
        if (v > bv) {  // strict: ties go to the first maximal element
          bv = v;
          best = i * width + u;
        }
      }
      out[i * f + j] = bv;
      argmax[i * f + j] = best;
    }
  int id = add_node("maxpool1d", {to, f}, std::move(out), {x.id_},
                    [argmax, to, f](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& gx = g.nodes_[node.inputs[0]].grad;
                      const auto& go = node.grad;
                      for (int i = 0; i < to; ++i)
                        for (int j = 0; j < f; ++j)
                          gx[argmax[i * f + j] * f + j] += go[i * f + j];
                    });
  return Tensor(this, id);
}

Tensor Graph::adaptive_maxpool1d(Tensor v, int target) {
  if (v.rank() != 1) throw InvalidArgument("adaptive_maxpool1d: expected a vector");
  int w = v.shape()[0];
  if (target < 1 || target > w)
    throw InvalidArgument("adaptive_maxpool1d: target " + std::to_string(target) +
                          " invalid for length " + std::to_string(w));
  const auto& xv = v.value();
  std::vector<double> out(target);
  std::vector<int> argmax(target);
  for (int i = 0; i < target; ++i) {
    int lo = static_cast<int>(static_cast<long>(i) * w / target);
    int hi = static_cast<int>(static_cast<long>(i + 1) * w / target);
    int best = lo;
    for (int j = lo + 1; j < hi; ++j)
      if (xv[j] > xv[best]) best = j;
    out[i] = xv[best];
    argmax[i] = best;
  }
  int id = add_node("adaptive_maxpool1d", {target}, std::move(out), {v.id_},
                    [argmax](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& gx = g.nodes_[node.inputs[0]].grad;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < argmax.size(); ++i) gx[argmax[i]] += go[i];
                    });
  return Tensor(this, id);
}

Tensor Graph::embedding_lookup(Tensor table, const std::vector<int>& ids) {
  if (table.rank() != 2) throw InvalidArgument("embedding_lookup: table must be {V,E}");
  int v = table.shape()[0], e = table.shape()[1];
  if (ids.empty()) throw InvalidArgument("embedding_lookup: no indices");
  for (int id : ids)
    if (id < 0 || id >= v)
      throw InvalidArgument("embedding_lookup: index " + std::to_string(id) +
                            " out of range [0," + std::to_string(v) + ")");
  const auto& tv = table.value();
  int n = static_cast<int>(ids.size());
  std::vector<double> out(static_cast<size_t>(n) * e);
  for (int i = 0; i < n; ++i)
    std::copy(tv.begin() + static_cast<size_t>(ids[i]) * e,
              tv.begin() + static_cast<size_t>(ids[i] + 1) * e,
              out.begin() + static_cast<size_t>(i) * e);
  int id = add_node("embedding_lookup", {n, e}, std::move(out), {table.id_},
                    [ids, e](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& gt = g.nodes_[node.inputs[0]].grad;
                      const auto& go = node.grad;
                      for (size_t i = 0; i < ids.size(); ++i)
                        for (int c = 0; c < e; ++c)
                          gt[static_cast<size_t>(ids[i]) * e + c] += go[i * e + c];
                    });
  return Tensor(this, id);
}

Tensor Graph::cross_entropy(Tensor probs, const std::vector<double>& onehot) {
  if (probs.rank() != 1 || probs.value().size() != onehot.size())
    throw InvalidArgument("cross_entropy: probabilities " + shape_str(probs.shape()) +
                          " vs one-hot of size " + std::to_string(onehot.size()));
  const auto& pv = probs.value();
  double loss = 0;
  for (size_t i = 0; i < pv.size(); ++i) {
    if (onehot[i] == 0) continue;
    double p = pv[i];
    if (p < kProbFloor) {
      p = kProbFloor;
      g_ce_clamp_count.fetch_add(1);
    }
    loss -= onehot[i] * std::log(p);
  }
  int id = add_node("cross_entropy", {1}, {loss}, {probs.id_},
                    [onehot](Graph& g, int self) {
                      auto& node = g.nodes_[self];
                      auto& gp = g.nodes_[node.inputs[0]].grad;
                      const auto& pv = g.nodes_[node.inputs[0]].value;
                      double go = node.grad[0];
                      for (size_t i = 0; i < onehot.size(); ++i) {
                        if (onehot[i] == 0) continue;
                        gp[i] -= go * onehot[i] / std::max(pv[i], kProbFloor);
                      }
                    });
  return Tensor(this, id);
}

void Graph::backward(Tensor loss) {
  if (loss.graph_ != this) throw InvalidArgument("backward: tensor from another graph");
  if (backward_done_) throw Error("backward called twice on the same graph");
  backward_done_ = true;
  if (numel(nodes_[loss.id_].shape) != 1)
    throw InvalidArgument("backward: loss must be scalar, got " +
                          shape_str(nodes_[loss.id_].shape));
  for (Node& n : nodes_) n.grad.assign(n.value.size(), 0.0);
  nodes_[loss.id_].grad[0] = 1.0;
  for (int i = loss.id_; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.back) continue;
    bool all_zero = true;
    for (double gv : n.grad)
      if (gv != 0) {
        all_zero = false;
        break;
      }
    if (all_zero) continue;
    n.back(*this, i);
  }
  for (Node& n : nodes_) {
    if (n.bound && n.requires_grad)
      for (size_t i = 0; i < n.grad.size(); ++i) n.bound->grad[i] += n.grad[i];
  }
}

void Adam::step(const std::vector<Variable*>& params) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (Variable* p : params) {
    if (p->grad.size() != p->value.size())
      throw InvalidArgument("adam: gradient size mismatch for '" + p->name + "'");
    auto& [m, v] = moments_[p];
    if (m.empty()) {
      m.assign(p->value.size(), 0.0);
      v.assign(p->value.size(), 0.0);
    }
    for (size_t i = 0; i < p->value.size(); ++i) {
      double g = p->grad[i];
      m[i] = cfg_.beta1 * m[i] + (1 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1 - cfg_.beta2) * g * g;
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      p->value[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.epsilon);
    }
  }
}

Variable* ParamStore::create(const std::string& name, Shape shape) {
  vars_.push_back(std::make_unique<Variable>(name, std::move(shape)));
  return vars_.back().get();
}

Variable* ParamStore::create_xavier(const std::string& name, Shape shape, int fan_in,
                                    int fan_out, Rng& rng) {
  double a = std::sqrt(6.0 / (fan_in + fan_out));
  return create_uniform(name, std::move(shape), a, rng);
}

Variable* ParamStore::create_uniform(const std::string& name, Shape shape, double a,
                                     Rng& rng) {
  Variable* v = create(name, std::move(shape));
  for (double& x : v->value) x = rng.uniform(-a, a);
  return v;
}

std::vector<Variable*> ParamStore::all() const {
  std::vector<Variable*> out;
  out.reserve(vars_.size());
  for (const auto& v : vars_) out.push_back(v.get());
  return out;
}

Variable* ParamStore::find(const std::string& name) const {
  for (const auto& v : vars_)
    if (v->name == name) return v.get();
  return nullptr;
}

void ParamStore::zero_grads() {
  for (const auto& v : vars_) v->zero_grad();
}

void ParamStore::scale_grads(double c) {
  for (const auto& v : vars_)
    for (double& g : v->grad) g *= c;
}

size_t ParamStore::total_size() const {
  size_t n = 0;
  for (const auto& v : vars_) n += v->size();
  return n;
}

void save_params_binary(const std::vector<Variable*>& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (const Variable* p : params)
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
}

void load_params_binary(const std::vector<Variable*>& params, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  for (Variable* p : params) {
    in.read(reinterpret_cast<char*>(p->value.data()),
            static_cast<std::streamsize>(p->value.size() * sizeof(double)));
    if (!in) throw IoError("checkpoint '" + path + "' truncated at '" + p->name + "'");
  }
  char extra;
  if (in.read(&extra, 1))
    throw IoError("checkpoint '" + path + "' has trailing bytes");
}

}  // namespace depnet
