// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vad/autograd/tensor.hpp"

namespace vad::ag {

class Graph;

/// Handle to a node recorded on a Graph.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  Graph& graph() const { return *graph_; }
  std::size_t id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }

 private:
  friend class Graph;
  Var(Graph* g, std::size_t id) : graph_(g), id_(id) {}

  Graph* graph_ = nullptr;
  std::size_t id_ = 0;
};

/// Accumulates d(loss)/d(input_i) given d(loss)/d(output). A null entry in
/// `input_grads` means that input does not require a gradient.
using BackwardFn = std::function<void(const Tensor& output_grad, std::span<Tensor* const> input_grads)>;

/// Append-only tape of operations. Nodes are topologically ordered by
/// construction; backward() walks them once in reverse insertion order and
/// may run only once per recorded forward pass.
class Graph {
 public:
  explicit Graph(bool training = true) : training_(training) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool training() const { return training_; }
  std::size_t size() const { return nodes_.size(); }

  Var constant(Tensor value);
  /// Leaf whose gradient is kept on the node; read it with grad().
  Var variable(Tensor value);
  /// Leaf bound to a parameter; backward() adds into `p.grad`. Repeated calls
  /// for the same parameter return the same node.
  Var parameter(Parameter& p);

  /// Records an op. `backward` may be empty for ops with no differentiable inputs.
  Var record(std::string_view op, Tensor value, std::vector<Var> inputs, BackwardFn backward);

  const Tensor& value(const Var& v) const;
  bool requires_grad(const Var& v) const;
  /// Gradient of the last backward() loss with respect to `v`. Zero if `v`
  /// was unreachable.
  Tensor grad(const Var& v) const;

  void backward(const Var& loss);

  /// Drops every node so a fresh forward pass can be recorded.
  void clear();

 private:
  struct Node {
    std::string op;
    Tensor value;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    Parameter* param = nullptr;
    Tensor grad;
  };

  Var push(Node node);
  const Node& node(const Var& v) const;

  std::deque<Node> nodes_;  // deque: references to values stay valid as the tape grows
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
  bool training_;
  bool consumed_ = false;
};

}  // namespace vad::ag
