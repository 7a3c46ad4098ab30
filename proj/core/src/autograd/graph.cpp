// Copyright 2026 The vadkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "vad/autograd/graph.hpp"

#include "vad/error.hpp"

namespace vad::ag {

const Tensor& Var::value() const { return graph_->value(*this); }

Var Graph::push(Node node) {
  if (consumed_) throw InvalidArgument("graph already ran backward; clear() it before recording a new forward pass");
  if (!node.value.all_finite()) {
    throw NumericError("op '" + node.op + "' produced a non-finite value (node " + std::to_string(nodes_.size()) + ")");
  }
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

const Graph::Node& Graph::node(const Var& v) const {
  if (v.graph_ != this || v.id_ >= nodes_.size()) throw InvalidArgument("variable does not belong to this graph");
  return nodes_[v.id_];
}

Var Graph::constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  return push(std::move(n));
}

Var Graph::variable(Tensor value) {
  Node n;
  n.op = "variable";
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Graph::parameter(Parameter& p) {
  if (const auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  if (p.grad.shape() != p.value.shape()) p.grad = Tensor(p.value.shape());
  Node n;
  n.op = "parameter:" + p.name;
  n.value = p.value;
  n.requires_grad = true;
  n.param = &p;
  const Var v = push(std::move(n));
  param_nodes_.emplace(&p, v.id_);
  return v;
}

Var Graph::record(std::string_view op, Tensor value, std::vector<Var> inputs, BackwardFn backward) {
  Node n;
  n.op = std::string(op);
  n.value = std::move(value);
  n.inputs.reserve(inputs.size());
  for (const Var& in : inputs) {
    const Node& src = node(in);
    n.requires_grad = n.requires_grad || src.requires_grad;
    n.inputs.push_back(in.id_);
  }
  if (n.requires_grad) n.backward = std::move(backward);
  return push(std::move(n));
}

const Tensor& Graph::value(const Var& v) const { return node(v).value; }

bool Graph::requires_grad(const Var& v) const { return node(v).requires_grad; }

Tensor Graph::grad(const Var& v) const {
  const Node& n = node(v);
  if (n.grad.empty()) return Tensor(n.value.shape());
  return n.grad;
}

void Graph::backward(const Var& loss) {
  if (nodes_.empty()) throw InvalidArgument("backward on an empty graph");
  if (consumed_) throw InvalidArgument("backward called twice on the same forward pass");
  node(loss);
  Node& root = nodes_[loss.id_];
  if (root.value.size() != 1) {
    throw ShapeError("backward needs a scalar loss, got shape " + shape_string(root.value.shape()));
  }
  consumed_ = true;
  if (!root.requires_grad) return;
  root.grad = Tensor(root.value.shape(), 1.0f);

  std::vector<Tensor*> input_grads;
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) {
      input_grads.clear();
      for (std::size_t in : n.inputs) {
        Node& src = nodes_[in];
        if (!src.requires_grad) {
          input_grads.push_back(nullptr);
          continue;
        }
        if (src.grad.empty()) src.grad = Tensor(src.value.shape());
        input_grads.push_back(&src.grad);
      }
      n.backward(n.grad, input_grads);
      for (std::size_t k = 0; k < input_grads.size(); ++k) {
        if (input_grads[k] != nullptr && !input_grads[k]->all_finite()) {
          throw NumericError("backward of op '" + n.op + "' (node " + std::to_string(i) +
                             ") produced a non-finite gradient for input " + std::to_string(k));
        }
      }
    }
    if (n.param != nullptr) {
      auto dst = n.param->grad.data();
      auto src = n.grad.data();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
  }
}

void Graph::clear() {
  nodes_.clear();
  param_nodes_.clear();
  consumed_ = false;
}

}  // namespace vad::ag
