/*!
 *  Copyright (c) 2026 by Contributors
 * \file layers.cc
 */
#include <mpgraph/layers.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <memory>
#include <utility>

namespace mpg {
namespace {

const MessageFunc kCopySrc = MessageFunc::CopyLhs(Target::kSrc);

void CheckRows(const Tape& t, Var x, const Graph& g, const char* layer) {
  MPG_CHECK_SHAPE(t.Value(x).rows() == g.NumNodes(),
                  layer << ": input has " << t.Value(x).rows() << " rows for "
                        << g.NumNodes() << " nodes");
}

}  // namespace

Var GcnLayer(Tape& t, const Graph& g, Var x, Var weight, Var bias, bool activation,
             const KernelOptions& opts) {
  CheckRows(t, x, g, "gcn");
  Var agg = ops::GSpMM(t, g, kCopySrc, ReduceOp::kMean, x, Var{}, opts);
  Var h = ops::MatMul(t, agg, weight);
  if (bias.valid()) h = ops::AddBias(t, h, bias);
  return activation ? ops::Relu(t, h) : h;
}

Var SageLayer(Tape& t, const Graph& g, Var x, Var w_self, Var w_neigh, bool activation,
              const KernelOptions& opts) {
  CheckRows(t, x, g, "sage");
  Var neigh = ops::GSpMM(t, g, kCopySrc, ReduceOp::kMean, x, Var{}, opts);
  Var h = ops::Add(t, ops::MatMul(t, x, w_self), ops::MatMul(t, neigh, w_neigh));
  return activation ? ops::Relu(t, h) : h;
}

Var GatLayer(Tape& t, const Graph& g, Var x, Var weight, Var attn_src, Var attn_dst,
             uint32_t heads, const KernelOptions& opts) {
  CheckRows(t, x, g, "gat");
  Var feat = ops::MatMul(t, x, weight);
  Var el = ops::HeadDot(t, feat, attn_src, heads);
  Var er = ops::HeadDot(t, feat, attn_dst, heads);
  Var score = ops::GSDDMM(t, g, MessageFunc::Binary(BinaryOp::kAdd, Target::kSrc, Target::kDst),
                          el, er, opts);
  Var alpha = ops::EdgeSoftmax(t, g, score, opts);
  return ops::GSpMM(t, g, MessageFunc::Binary(BinaryOp::kMul, Target::kSrc, Target::kEdge),
                    ReduceOp::kSum, feat, alpha, opts);
}

Var GatLayerUnfused(Tape& t, const Graph& g, Var x, Var weight, Var attn_src, Var attn_dst,
                    uint32_t heads, const KernelOptions& opts) {
  CheckRows(t, x, g, "gat");
  auto src = std::make_shared<const std::vector<NodeId>>(g.Src().begin(), g.Src().end());
  auto dst = std::make_shared<const std::vector<NodeId>>(g.Dst().begin(), g.Dst().end());
  Var feat = ops::MatMul(t, x, weight);
  Var el = ops::HeadDot(t, feat, attn_src, heads);
  Var er = ops::HeadDot(t, feat, attn_dst, heads);
  Var score = ops::Add(t, ops::GatherRows(t, el, src), ops::GatherRows(t, er, dst));
  Var alpha = ops::EdgeSoftmax(t, g, score, opts);
  Var msg = ops::MulHeadBroadcast(t, ops::GatherRows(t, feat, src), alpha);
  return ops::ScatterAddRows(t, msg, dst, g.NumNodes());
}

FeatureMatrix XavierUniform(size_t rows, size_t cols, double gain, std::mt19937_64& rng) {
  const double bound = gain * std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> d(-bound, bound);
  FeatureMatrix m(rows, cols);
  for (double& v : m.values()) v = d(rng);
  return m;
}

const char* ModelKindName(ModelKind k) {
  switch (k) {
    case ModelKind::kGcn: return "gcn";
    case ModelKind::kSage: return "sage";
    case ModelKind::kGat: return "gat";
    case ModelKind::kGatUnfused: return "gat_unfused";
  }
  return "?";
}

ModelKind ParseModelKind(const std::string& s) {
  for (ModelKind k : {ModelKind::kGcn, ModelKind::kSage, ModelKind::kGat, ModelKind::kGatUnfused})
    if (s == ModelKindName(k)) return k;
  MPG_FAIL(ErrorCode::kInvalidArgument, "unknown model '" << s << "'");
}

namespace {

bool IsGat(ModelKind k) { return k == ModelKind::kGat || k == ModelKind::kGatUnfused; }

uint32_t LayerHeads(const ModelSpec& s, size_t layer) {
  if (!IsGat(s.kind)) return 1;
  return layer + 2 == s.dims.size() ? 1 : s.heads;
}

size_t LayerInput(const ModelSpec& s, size_t layer) {
  return layer == 0 ? s.dims[0] : s.dims[layer] * LayerHeads(s, layer - 1);
}

size_t ParamsPerLayer(ModelKind k) { return k == ModelKind::kSage ? 2 : IsGat(k) ? 3 : 2; }

}  // namespace

Model::Model(ModelSpec spec, uint64_t seed) : spec_(std::move(spec)) {
  MPG_CHECK_ARG(spec_.dims.size() >= 2, "model needs at least an input and an output width");
  for (size_t d : spec_.dims) MPG_CHECK_ARG(d > 0, "model widths must be positive");
  MPG_CHECK_ARG(spec_.heads >= 1, "head count must be at least 1");
  std::mt19937_64 rng(seed);
  const double gain = std::sqrt(2.0);
  for (size_t l = 0; l + 1 < spec_.dims.size(); ++l) {
    const size_t in = LayerInput(spec_, l);
    const size_t heads = LayerHeads(spec_, l);
    const size_t out = spec_.dims[l + 1];
    switch (spec_.kind) {
      case ModelKind::kGcn:
        params_.push_back(XavierUniform(in, out, gain, rng));
        params_.emplace_back(1, out, 0.0);
        break;
      case ModelKind::kSage:
        params_.push_back(XavierUniform(in, out, gain, rng));
        params_.push_back(XavierUniform(in, out, gain, rng));
        break;
      case ModelKind::kGat:
      case ModelKind::kGatUnfused:
        params_.push_back(XavierUniform(in, heads * out, gain, rng));
        params_.push_back(XavierUniform(1, heads * out, gain, rng));
        params_.push_back(XavierUniform(1, heads * out, gain, rng));
        break;
    }
  }
}

Var Model::Forward(Tape& t, const Graph& g, Var x, const std::vector<Var>& params,
                   const KernelOptions& opts) const {
  const size_t layers = spec_.dims.size() - 1;
  const size_t per = ParamsPerLayer(spec_.kind);
  MPG_CHECK_ARG(params.size() == layers * per,
                "model expects " << layers * per << " parameters, got " << params.size());
  MPG_CHECK_SHAPE(t.Value(x).cols() == spec_.dims[0],
                  "model input width " << t.Value(x).cols() << ", expected " << spec_.dims[0]);
  Var h = x;
  for (size_t l = 0; l < layers; ++l) {
    const bool last = l + 1 == layers;
    const Var* p = &params[l * per];
    switch (spec_.kind) {
      case ModelKind::kGcn: h = GcnLayer(t, g, h, p[0], p[1], !last, opts); break;
      case ModelKind::kSage: h = SageLayer(t, g, h, p[0], p[1], !last, opts); break;
      case ModelKind::kGat:
        h = GatLayer(t, g, h, p[0], p[1], p[2], LayerHeads(spec_, l), opts);
        if (!last) h = ops::Relu(t, h);
        break;
      case ModelKind::kGatUnfused:
        h = GatLayerUnfused(t, g, h, p[0], p[1], p[2], LayerHeads(spec_, l), opts);
        if (!last) h = ops::Relu(t, h);
        break;
    }
  }
  return h;
}

std::vector<double> Train(const Graph& g, const FeatureMatrix& features,
                          const std::vector<int32_t>& labels, Model& model,
                          const TrainConfig& config) {
  MPG_CHECK_ARG(config.lr >= 0, "learning rate must be non-negative");
  MPG_CHECK_ARG(config.epochs >= 0, "epoch count must be non-negative");
  MPG_CHECK_SHAPE(labels.size() == g.NumNodes(),
                  labels.size() << " labels for " << g.NumNodes() << " nodes");
  const int32_t classes = static_cast<int32_t>(model.spec().dims.back());
  for (size_t i = 0; i < labels.size(); ++i)
    MPG_CHECK_RANGE(labels[i] < classes,
                    "label " << labels[i] << " of node " << i << " is not below " << classes);
  auto x = std::make_shared<const FeatureMatrix>(features);
  std::vector<double> losses;
  losses.reserve(config.epochs);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Tape t;
    Var xv = t.Leaf(x, false);
    std::vector<Var> pv;
    for (const auto& p : model.params()) pv.push_back(t.Leaf(p, true));
    Var loss = ops::XentLoss(t, model.Forward(t, g, xv, pv, config.kernel), labels);
    losses.push_back(t.Value(loss)(0, 0));
    t.Backward(loss);
    for (size_t i = 0; i < pv.size(); ++i) {
      const FeatureMatrix* grad = t.Grad(pv[i]);
      if (!grad) continue;
      FeatureMatrix& p = model.params()[i];
      for (size_t k = 0; k < p.size(); ++k) p.data()[k] -= config.lr * grad->data()[k];
    }
  }
  return losses;
}

std::vector<int32_t> LoadNodeLabels(const std::string& path) {
  std::ifstream in(path);
  MPG_CHECK(in.good(), ErrorCode::kIo, "cannot open " << path);
  std::vector<std::pair<int64_t, int32_t>> rows;
  std::string line;
  for (size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    int64_t node;
    int32_t label;
    if (!(ss >> node)) continue;
    MPG_CHECK(static_cast<bool>(ss >> label) && node >= 0, ErrorCode::kIo,
              path << " line " << lineno << ": expected `node<TAB>label`");
    rows.emplace_back(node, label);
  }
  std::vector<int32_t> labels(rows.size(), -1);
  std::vector<bool> seen(rows.size(), false);
  for (auto [node, label] : rows) {
    MPG_CHECK(static_cast<size_t>(node) < rows.size() && !seen[node], ErrorCode::kIo,
              path << ": node ids must be 0.." << rows.size() - 1 << " without repeats");
    seen[node] = true;
    labels[node] = label;
  }
  return labels;
}

FeatureMatrix OneHotDegreeFeatures(const Graph& g) {
  const auto deg = g.InDegrees();
  const uint64_t top = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  FeatureMatrix x(g.NumNodes(), top + 1);
  for (size_t v = 0; v < deg.size(); ++v) x(v, deg[v]) = 1.0;
  return x;
}

void WriteLossCurveCsv(const std::vector<double>& losses, std::ostream& os) {
  os << "epoch,loss\n" << std::setprecision(17);
  for (size_t i = 0; i < losses.size(); ++i) os << i << "," << losses[i] << "\n";
}

}  // namespace mpg
