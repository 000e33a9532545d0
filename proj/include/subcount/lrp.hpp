#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

// Rooted BFS neighborhood of `center` up to `depth` hops. Nodes are listed
// root first, then layer by layer with ascending ids inside each layer, and
// the induced subgraph is relabeled to that order (root becomes node 1).
struct Egonet {
    std::vector<int> nodes;
    AttributedGraph graph;
    int depth = 0;
};

Egonet extract_egonet(const AttributedGraph& g, int center, int depth);

// Crop tensor channel layout (all entries 0/1):
//   channel 0: adjacency, off-diagonal
//   channel 1: node presence, diagonal (0 rows are zero padding)
//   channels 2..2+node_vocab-1: node token one-hot, diagonal
//   then edge_vocab channels: edge token one-hot, off-diagonal
// vocab 0 omits the token channels (unattributed featurization, d = 2).
struct LrpFeaturizeConfig {
    int node_vocab = 0;
    int edge_vocab = 0;
    int channels() const { return 2 + node_vocab + edge_vocab; }
};

// One distinct 4x4xd crop around a root with its multiplicity among the
// root-fixed orderings of the depth-1 egonet.
struct CropGroup {
    std::vector<double> crop;  // channel-major, 16*d
    std::int64_t count = 0;
};

// Sum functional over BFS-compatible orderings of a depth-1 egonet, reduced
// to weighted distinct crops. With root degree D, orderings fix the root and
// permute D neighbors (|S^BFS| = D!); a 4-crop sees the first 3 neighbors,
// so ordered triples carry weight (D-3)! each. For D < 3 the groups cover
// all D! orderings of the zero-padded crop. denom = sum of counts
// (D(D-1)(D-2) for D >= 3, else D!), so sum_over_orderings f = (D!/denom) *
// sum_g count_g * f(crop_g) for any crop functional f.
struct NodeCropSum {
    int degree = 0;
    std::int64_t denom = 1;
    std::vector<CropGroup> groups;  // sorted by crop content
};

struct LrpFeatures {
    int channels = 2;
    std::vector<NodeCropSum> nodes;  // index v-1
};

NodeCropSum lrp_feature_sum(const AttributedGraph& g, int center,
                            const LrpFeaturizeConfig& cfg = {});
// Same functional on an extracted egonet (root = node 1). Only depth-1
// egonets are supported; anything else throws DepthUnsupported.
NodeCropSum lrp_feature_sum(const Egonet& e,
                            const LrpFeaturizeConfig& cfg = {});
LrpFeatures lrp_featurize(const AttributedGraph& g,
                          const LrpFeaturizeConfig& cfg = {});

// Exact D! (D <= 20).
std::uint64_t sbfs_size(int degree);

// Permutation-pooled crop regressor:
//   yhat = w1 . sum_i relu[ mlp(D_i) ⊙ mean_over_orderings tanh(W2 . crop) ] + b1
// with mlp(D) = A2 relu(a1 D + c1) + c2 (scalar to H), tanh inside the crop
// functional, relu gating, biases in the mlp and output stages only.
struct LrpConfig {
    int hidden = 16;
    int channels = 2;
};

struct LrpModel {
    LrpConfig cfg;
    std::vector<double> theta;

    // Flat layout offsets.
    std::size_t off_w2() const { return 0; }
    std::size_t off_a1() const;
    std::size_t off_c1() const;
    std::size_t off_a2() const;
    std::size_t off_c2() const;
    std::size_t off_w1() const;
    std::size_t off_b1() const;
    std::size_t param_count() const;

    static LrpModel init(const LrpConfig& cfg, std::uint64_t seed);
};

double lrp_forward(const LrpModel& model, const LrpFeatures& feats);

// Mean squared error over the batch plus its gradient (accumulated into
// grad, which is resized and zeroed). Batch order is the iteration order.
double lrp_loss_grad(const LrpModel& model,
                     const std::vector<const LrpFeatures*>& batch,
                     const std::vector<double>& targets,
                     std::vector<double>& grad);

struct TrainConfig {
    int epochs = 100;
    double lr = 0.1;
    int batch_size = 32;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 0;
};

struct EpochStats {
    int epoch = 0;
    double train_mse = 0, val_mse = 0, test_mse = 0;
};

struct TrainResult {
    LrpModel best;
    int best_epoch = -1;
    double best_val_mse = 0;
    double test_mse_at_best = 0;
    std::vector<EpochStats> history;
};

// Adam on minibatches; model selection by lowest validation MSE.
TrainResult train_lrp(const LrpConfig& mcfg, const TrainConfig& tcfg,
                      const std::vector<LrpFeatures>& feats,
                      const std::vector<double>& labels,
                      const std::vector<int>& train_idx,
                      const std::vector<int>& val_idx,
                      const std::vector<int>& test_idx);

double lrp_mse(const LrpModel& model, const std::vector<LrpFeatures>& feats,
               const std::vector<double>& labels,
               const std::vector<int>& idx);

}  // namespace subcount
