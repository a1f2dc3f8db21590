/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/layers.h
 * \brief GCN, GraphSAGE and GAT layers on the tape, plus a full-graph
 *  gradient-descent trainer.
 */
#ifndef MPGRAPH_LAYERS_H_
#define MPGRAPH_LAYERS_H_

#include <mpgraph/ops.h>

#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace mpg {

/*!
 * \brief relu(mean_in(X) W + b), or without relu when `activation` is false.
 *  Pass Var{} as bias for none.
 */
Var GcnLayer(Tape& t, const Graph& g, Var x, Var weight, Var bias, bool activation,
             const KernelOptions& opts = {});

/*! \brief X W_self + mean_in(X) W_neigh, relu when `activation`. */
Var SageLayer(Tape& t, const Graph& g, Var x, Var w_self, Var w_neigh, bool activation,
              const KernelOptions& opts = {});

/*!
 * \brief Multi-head attention aggregation. weight is in x (heads*width);
 *  attn_src and attn_dst are 1 x (heads*width). Edge score for head h is
 *  attn_src_h . f_u + attn_dst_h . f_v with f = X weight; the output row of v
 *  concatenates, per head, the softmax-weighted sum of f_u over in-edges.
 */
Var GatLayer(Tape& t, const Graph& g, Var x, Var weight, Var attn_src, Var attn_dst,
             uint32_t heads, const KernelOptions& opts = {});

/*!
 * \brief Same output as GatLayer, computed by gathering source rows into an
 *  edges x (heads*width) tensor, scaling and scatter-adding.
 */
Var GatLayerUnfused(Tape& t, const Graph& g, Var x, Var weight, Var attn_src, Var attn_dst,
                    uint32_t heads, const KernelOptions& opts = {});

/*! \brief Uniform in +-gain*sqrt(6/(rows+cols)). */
FeatureMatrix XavierUniform(size_t rows, size_t cols, double gain, std::mt19937_64& rng);

enum class ModelKind { kGcn, kSage, kGat, kGatUnfused };

const char* ModelKindName(ModelKind k);
ModelKind ParseModelKind(const std::string& s);

struct ModelSpec {
  ModelKind kind = ModelKind::kGcn;
  /*! \brief Input width, hidden widths, output width. GAT widths are per head. */
  std::vector<size_t> dims = {0, 16, 0};
  /*! \brief GAT heads on hidden layers; the output layer has one. */
  uint32_t heads = 2;
};

struct TrainConfig {
  double lr = 0.05;
  int epochs = 100;
  uint64_t seed = 0;
  KernelOptions kernel{Strategy::kSerialReference};
};

/*! \brief Stack of layers with relu between them; the last layer is linear. */
class Model {
 public:
  Model(ModelSpec spec, uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  std::vector<FeatureMatrix>& params() { return params_; }
  const std::vector<FeatureMatrix>& params() const { return params_; }

  /*! \brief `params` are tape vars holding params() in order. */
  Var Forward(Tape& t, const Graph& g, Var x, const std::vector<Var>& params,
              const KernelOptions& opts = {}) const;

 private:
  ModelSpec spec_;
  std::vector<FeatureMatrix> params_;
};

/*!
 * \brief Full-graph gradient descent on mean cross entropy over labelled
 *  nodes (negative label = unlabelled). Returns the loss of each epoch,
 *  measured before that epoch's update.
 */
std::vector<double> Train(const Graph& g, const FeatureMatrix& features,
                          const std::vector<int32_t>& labels, Model& model,
                          const TrainConfig& config);

/*! \brief Lines of `node<TAB>label`, `#` comments; nodes must cover 0..n-1. */
std::vector<int32_t> LoadNodeLabels(const std::string& path);

/*! \brief One-hot in-degree; width is the largest in-degree plus one. */
FeatureMatrix OneHotDegreeFeatures(const Graph& g);

/*! \brief `epoch,loss` header, then one line per epoch. */
void WriteLossCurveCsv(const std::vector<double>& losses, std::ostream& os);

}  // namespace mpg

#endif  // MPGRAPH_LAYERS_H_
