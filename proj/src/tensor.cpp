// Copyright 2026 The HDRR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hdrr/tensor.hpp"

#include <algorithm>
#include <sstream>

#include "hdrr/error.hpp"

namespace hdrr {
namespace {

thread_local GradTape* g_active_tape = nullptr;

}  // namespace

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << "x";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

std::vector<double>& detail::Node::grad_buffer() {
  if (grad.empty()) grad.assign(value.size(), 0.0);
  return grad;
}

Tensor::Tensor(Shape shape) : Tensor(shape, std::vector<double>(shape_size(shape), 0.0)) {}

Tensor::Tensor(Shape shape, std::vector<double> values) {
  for (std::size_t d : shape) {
    if (d == 0) throw DimensionError("tensor dimension must be positive, got " + shape_string(shape));
  }
  if (shape_size(shape) != values.size()) {
    throw DimensionError("shape " + shape_string(shape) + " needs " +
                         std::to_string(shape_size(shape)) + " values, got " +
                         std::to_string(values.size()));
  }
  node_ = std::make_shared<detail::Node>();
  node_->shape = std::move(shape);
  node_->value = std::move(values);
}

Tensor Tensor::scalar(double value) { return Tensor(Shape{1}, {value}); }

Tensor Tensor::parameter(Shape shape, std::vector<double> values) {
  Tensor t(std::move(shape), std::move(values));
  t.node_->requires_grad = true;
  return t;
}

double Tensor::at(std::size_t row, std::size_t col) const {
  if (rank() != 2) throw DimensionError("at(row, col) needs a matrix, got " + shape_string(shape()));
  return node_->value[row * node_->shape[1] + col];
}

double Tensor::item() const {
  if (size() != 1) throw UsageError("item() on non-scalar tensor " + shape_string(shape()));
  return node_->value[0];
}

void Tensor::zero_grad() { node_->grad.clear(); }

std::span<double> Tensor::mutable_values() {
  if (!node_->leaf) throw UsageError("mutable_values() is only allowed on leaf tensors");
  return node_->value;
}

Tensor Tensor::detach() const { return Tensor(node_->shape, node_->value); }

Tensor Tensor::clone() const {
  Tensor t(node_->shape, node_->value);
  t.node_->requires_grad = node_->requires_grad && node_->leaf;
  return t;
}

GradTape* GradTape::active() { return g_active_tape; }

void GradTape::record(std::shared_ptr<detail::Node> node) { entries_.push_back(std::move(node)); }

void GradTape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw UsageError("backward() needs a scalar loss, got " +
                     (loss.defined() ? shape_string(loss.shape()) : std::string("undefined")));
  }
  auto& root = *loss.node();
  if (!root.requires_grad) {
    // Loss does not depend on any parameter: every grad stays zero.
    entries_.clear();
    return;
  }
  root.grad_buffer()[0] += 1.0;
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    detail::Node& node = **it;
    if (node.grad.empty() || !node.backward) continue;
    node.backward(node);
  }
  // Release intermediate grads so a retained output does not leak state into
  // the next pass.
  for (auto& node : entries_) node->grad.clear();
  entries_.clear();
}

TapeScope::TapeScope(GradTape& tape) : previous_(g_active_tape) { g_active_tape = &tape; }

TapeScope::~TapeScope() { g_active_tape = previous_; }

void backward(const Tensor& loss) {
  GradTape* tape = GradTape::active();
  if (tape == nullptr) throw UsageError("backward() called without an active GradTape");
  tape->backward(loss);
}

Tensor make_result(Shape shape, std::vector<double> values, std::vector<Tensor> inputs,
                   std::function<void(detail::Node&)> backward_rule) {
  Tensor out(std::move(shape), std::move(values));
  GradTape* tape = GradTape::active();
  if (tape == nullptr) return out;
  bool any = std::any_of(inputs.begin(), inputs.end(),
                         [](const Tensor& t) { return t.defined() && t.requires_grad(); });
  if (!any) return out;
  auto& node = *out.node();
  node.requires_grad = true;
  node.leaf = false;
  node.parents.reserve(inputs.size());
  for (auto& in : inputs) node.parents.push_back(in.node());
  node.backward = std::move(backward_rule);
  tape->record(out.node());
  return out;
}

}  // namespace hdrr
