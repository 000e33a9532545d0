#include "subcount/mpnn.hpp"

#include <cmath>
#include <string>

#include "subcount/errors.hpp"
#include "subcount/rng.hpp"

namespace subcount {

namespace {

void fill_uniform(std::vector<double>& v, std::size_t rows, std::size_t cols,
                  Rng& rng) {
    v.resize(rows * cols);
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols == 0 ? 1 : cols));
    for (double& x : v) x = rng.next_symmetric() * bound;
}

void fill_bias(std::vector<double>& v, std::size_t rows, std::size_t fan_in,
               Rng& rng) {
    v.resize(rows);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in == 0 ? 1 : fan_in));
    for (double& x : v) x = rng.next_symmetric() * bound;
}

// out = W x + b, W row-major (rows x cols).
void affine(const std::vector<double>& w, const std::vector<double>& b,
            const double* x, std::size_t rows, std::size_t cols, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* wr = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
        out[r] = acc;
    }
}

void relu_inplace(double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] < 0) x[i] = 0;
}

}  // namespace

MpnnParams random_mpnn(const MpnnConfig& cfg, std::uint64_t seed) {
    if (cfg.layers < 1 || cfg.hidden < 1 || cfg.node_vocab < 1 ||
        cfg.edge_vocab < 1)
        throw ValidationError("mpnn config values must be positive");
    MpnnParams p;
    p.cfg = cfg;
    Rng rng = named_stream(seed, "mpnn-init");
    const std::size_t h = static_cast<std::size_t>(cfg.hidden);
    int in_dim = cfg.node_vocab;
    for (int layer = 0; layer < cfg.layers; ++layer) {
        MpnnParams::Layer L;
        L.in_dim = in_dim;
        const std::size_t din = static_cast<std::size_t>(in_dim);
        const std::size_t msg_in = 2 * din + static_cast<std::size_t>(cfg.edge_vocab);
        fill_uniform(L.msg_w1, h, msg_in, rng);
        fill_bias(L.msg_b1, h, msg_in, rng);
        fill_uniform(L.msg_w2, h, h, rng);
        fill_bias(L.msg_b2, h, h, rng);
        const std::size_t upd_in = din + h;
        fill_uniform(L.upd_w1, h, upd_in, rng);
        fill_bias(L.upd_b1, h, upd_in, rng);
        fill_uniform(L.upd_w2, h, h, rng);
        fill_bias(L.upd_b2, h, h, rng);
        p.layers.push_back(std::move(L));
        in_dim = cfg.hidden;
    }
    return p;
}

std::vector<double> mpnn_forward(const AttributedGraph& g,
                                 const MpnnParams& params) {
    const MpnnConfig& cfg = params.cfg;
    const int n = g.node_count();
    const std::size_t h = static_cast<std::size_t>(cfg.hidden);

    for (int v = 1; v <= n; ++v)
        if (g.node_feature(v) >= static_cast<FeatureToken>(cfg.node_vocab))
            throw DimensionMismatch("node token " +
                                    std::to_string(g.node_feature(v)) +
                                    " outside vocab " +
                                    std::to_string(cfg.node_vocab));
    for (const auto& [e, tok] : g.edge_map())
        if (tok >= static_cast<FeatureToken>(cfg.edge_vocab))
            throw DimensionMismatch("edge token " + std::to_string(tok) +
                                    " outside vocab " +
                                    std::to_string(cfg.edge_vocab));

    // h^(0): one-hot node tokens.
    std::vector<std::vector<double>> state(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) {
        auto& s = state[static_cast<std::size_t>(v - 1)];
        s.assign(static_cast<std::size_t>(cfg.node_vocab), 0.0);
        s[static_cast<std::size_t>(g.node_feature(v))] = 1.0;
    }

    std::vector<double> xin, mid(h), msg(h), msum(h), uin, out(h);
    for (const auto& L : params.layers) {
        const std::size_t din = static_cast<std::size_t>(L.in_dim);
        const std::size_t msg_in = 2 * din + static_cast<std::size_t>(cfg.edge_vocab);
        const std::size_t upd_in = din + h;
        std::vector<std::vector<double>> next(static_cast<std::size_t>(n));
        xin.resize(msg_in);
        uin.resize(upd_in);
        for (int v = 1; v <= n; ++v) {
            const auto& hv = state[static_cast<std::size_t>(v - 1)];
            std::fill(msum.begin(), msum.end(), 0.0);
            for (int w : g.neighbors(v)) {
                const auto& hw = state[static_cast<std::size_t>(w - 1)];
                std::fill(xin.begin(), xin.end(), 0.0);
                std::copy(hv.begin(), hv.end(), xin.begin());
                std::copy(hw.begin(), hw.end(), xin.begin() + static_cast<std::ptrdiff_t>(din));
                xin[2 * din + static_cast<std::size_t>(g.edge_feature(v, w))] = 1.0;
                affine(L.msg_w1, L.msg_b1, xin.data(), h, msg_in, mid.data());
                relu_inplace(mid.data(), h);
                affine(L.msg_w2, L.msg_b2, mid.data(), h, h, msg.data());
                for (std::size_t i = 0; i < h; ++i) msum[i] += msg[i];
            }
            std::copy(hv.begin(), hv.end(), uin.begin());
            std::copy(msum.begin(), msum.end(), uin.begin() + static_cast<std::ptrdiff_t>(din));
            affine(L.upd_w1, L.upd_b1, uin.data(), h, upd_in, mid.data());
            relu_inplace(mid.data(), h);
            auto& nv = next[static_cast<std::size_t>(v - 1)];
            nv.resize(h);
            affine(L.upd_w2, L.upd_b2, mid.data(), h, h, nv.data());
        }
        state.swap(next);
    }

    std::fill(out.begin(), out.end(), 0.0);
    for (int v = 1; v <= n; ++v)
        for (std::size_t i = 0; i < h; ++i)
            out[i] += state[static_cast<std::size_t>(v - 1)][i];
    return out;
}

}  // namespace subcount
