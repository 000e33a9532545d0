#pragma once

#include <cstdint>
#include <vector>

#include "subcount/graph.hpp"

namespace subcount {

// Sum-aggregation message passing network with 2-layer dense message and
// update maps (relu after the first layer of each) and sum readout. Node and
// edge tokens enter as one-hot vectors; token >= vocab is DimensionMismatch.
struct MpnnConfig {
    int layers = 3;
    int hidden = 8;
    int node_vocab = 1;
    int edge_vocab = 1;
};

struct MpnnParams {
    MpnnConfig cfg;
    struct Layer {
        int in_dim = 0;  // node state width entering this layer
        // message map: [h_i, h_j, onehot(e_ij)] -> hidden -> hidden
        std::vector<double> msg_w1, msg_b1, msg_w2, msg_b2;
        // update map: [h_i, m_i] -> hidden -> hidden
        std::vector<double> upd_w1, upd_b1, upd_w2, upd_b2;
    };
    std::vector<Layer> layers;
};

// Parameters drawn uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) from the seed.
MpnnParams random_mpnn(const MpnnConfig& cfg, std::uint64_t seed);

// Readout vector (length cfg.hidden). Deterministic: messages accumulate in
// ascending neighbor order, readout in ascending node order.
std::vector<double> mpnn_forward(const AttributedGraph& g,
                                 const MpnnParams& params);

}  // namespace subcount
