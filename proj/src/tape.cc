/*!
 *  Copyright (c) 2026 by Contributors
 * \file tape.cc
 * \brief Reverse-mode tape.
 */
#include <mpgraph/autodiff.h>

#include <utility>

namespace mpg {

Var Tape::Leaf(FeatureMatrix value, bool requires_grad) {
  return Leaf(std::make_shared<const FeatureMatrix>(std::move(value)), requires_grad);
}

Var Tape::Leaf(std::shared_ptr<const FeatureMatrix> value, bool requires_grad) {
  MPG_CHECK_ARG(value != nullptr, "null leaf value");
  Entry e;
  e.op = "leaf";
  e.value = std::move(value);
  e.requires_grad = requires_grad;
  e.leaf = true;
  entries_.push_back(std::move(e));
  return Var{static_cast<int64_t>(entries_.size()) - 1};
}

Var Tape::Record(std::string op, FeatureMatrix value, std::vector<Var> inputs,
                 BackwardFn backward) {
  Entry e;
  e.op = std::move(op);
  e.value = std::make_shared<const FeatureMatrix>(std::move(value));
  for (Var in : inputs) {
    At(in);
    e.requires_grad = e.requires_grad || entries_[in.index].requires_grad;
  }
  e.inputs = std::move(inputs);
  if (e.requires_grad) e.backward = std::move(backward);
  entries_.push_back(std::move(e));
  return Var{static_cast<int64_t>(entries_.size()) - 1};
}

const Tape::Entry& Tape::At(Var v) const {
  MPG_CHECK(v.index >= 0 && static_cast<size_t>(v.index) < entries_.size(), ErrorCode::kState,
            "var " << v.index << " is not on this tape (" << entries_.size() << " entries)");
  return entries_[v.index];
}

const FeatureMatrix& Tape::Value(Var v) const { return *At(v).value; }
std::shared_ptr<const FeatureMatrix> Tape::Shared(Var v) const { return At(v).value; }
bool Tape::RequiresGrad(Var v) const { return At(v).requires_grad; }
const std::string& Tape::OpName(Var v) const { return At(v).op; }

void Tape::Backward(Var loss) {
  MPG_CHECK(!entries_.empty(), ErrorCode::kState, "backward before forward: tape is empty");
  const Entry& top = At(loss);
  MPG_CHECK_SHAPE(top.value->rows() == 1 && top.value->cols() == 1,
                  "backward needs a scalar loss, got " << top.value->ShapeString());
  leaf_grads_.assign(entries_.size(), std::nullopt);
  if (!top.requires_grad) return;

  std::vector<std::optional<FeatureMatrix>> grads(entries_.size());
  grads[loss.index] = FeatureMatrix(1, 1, 1.0);
  for (int64_t i = loss.index; i >= 0; --i) {
    if (!grads[i]) continue;
    Entry& e = entries_[i];
    if (e.leaf) {
      if (e.requires_grad) leaf_grads_[i] = std::move(grads[i]);
      grads[i].reset();
      continue;
    }
    std::vector<bool> needs(e.inputs.size());
    for (size_t k = 0; k < e.inputs.size(); ++k)
      needs[k] = entries_[e.inputs[k].index].requires_grad;
    std::vector<std::optional<FeatureMatrix>> in_grads = e.backward(*grads[i], needs);
    grads[i].reset();
    MPG_CHECK(in_grads.size() == e.inputs.size(), ErrorCode::kInternal,
              e.op << " backward returned " << in_grads.size() << " gradients for "
                   << e.inputs.size() << " inputs");
    for (size_t k = 0; k < e.inputs.size(); ++k) {
      if (!needs[k] || !in_grads[k]) continue;
      const int64_t j = e.inputs[k].index;
      MPG_CHECK(in_grads[k]->SameShape(*entries_[j].value), ErrorCode::kInternal,
                e.op << " backward produced " << in_grads[k]->ShapeString() << " for input of "
                     << entries_[j].value->ShapeString());
      if (grads[j]) {
        AddInPlace(&*grads[j], *in_grads[k]);
      } else {
        grads[j] = std::move(in_grads[k]);
      }
    }
  }
}

const FeatureMatrix* Tape::Grad(Var leaf) const {
  At(leaf);
  if (static_cast<size_t>(leaf.index) >= leaf_grads_.size() || !leaf_grads_[leaf.index])
    return nullptr;
  return &*leaf_grads_[leaf.index];
}

void Tape::Clear() {
  entries_.clear();
  leaf_grads_.clear();
}

}  // namespace mpg
