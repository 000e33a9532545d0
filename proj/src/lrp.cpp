#include "subcount/lrp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "subcount/errors.hpp"
#include "subcount/rng.hpp"

namespace subcount {

Egonet extract_egonet(const AttributedGraph& g, int center, int depth) {
    if (center < 1 || center > g.node_count())
        throw IndexOutOfRange("egonet center " + std::to_string(center));
    if (depth < 0) throw ValidationError("egonet depth must be >= 0");
    std::vector<char> seen(static_cast<std::size_t>(g.node_count()) + 1, 0);
    std::vector<int> nodes{center};
    seen[static_cast<std::size_t>(center)] = 1;
    std::vector<int> layer{center};
    for (int d = 0; d < depth && !layer.empty(); ++d) {
        std::vector<int> next_layer;
        for (int v : layer)
            for (int w : g.neighbors(v))
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    next_layer.push_back(w);
                }
        std::sort(next_layer.begin(), next_layer.end());
        nodes.insert(nodes.end(), next_layer.begin(), next_layer.end());
        layer = std::move(next_layer);
    }
    Egonet e;
    e.graph = induced_subgraph(g, nodes);
    e.nodes = std::move(nodes);
    e.depth = depth;
    return e;
}

namespace {

// 4x4 crop key around members[0..t-1] (root first), entries 0/1.
std::vector<std::uint8_t> crop_key(const AttributedGraph& g,
                                   const LrpFeaturizeConfig& cfg,
                                   const int* members, int t) {
    const int channels = cfg.channels();
    std::vector<std::uint8_t> key(static_cast<std::size_t>(16 * channels), 0);
    auto set = [&](int c, int r, int s) {
        key[static_cast<std::size_t>(c * 16 + r * 4 + s)] = 1;
    };
    for (int r = 0; r < t; ++r) {
        set(1, r, r);
        if (cfg.node_vocab > 0) {
            FeatureToken tok = g.node_feature(members[r]);
            if (tok >= static_cast<FeatureToken>(cfg.node_vocab))
                throw DimensionMismatch("node token outside featurization vocab");
            set(2 + static_cast<int>(tok), r, r);
        }
    }
    for (int r = 0; r < t; ++r)
        for (int s = r + 1; s < t; ++s) {
            if (!g.has_edge(members[r], members[s])) continue;
            set(0, r, s);
            set(0, s, r);
            if (cfg.edge_vocab > 0) {
                FeatureToken tok = g.edge_feature(members[r], members[s]);
                if (tok >= static_cast<FeatureToken>(cfg.edge_vocab))
                    throw DimensionMismatch("edge token outside featurization vocab");
                int c = 2 + cfg.node_vocab + static_cast<int>(tok);
                set(c, r, s);
                set(c, s, r);
            }
        }
    return key;
}

}  // namespace

NodeCropSum lrp_feature_sum(const AttributedGraph& g, int center,
                            const LrpFeaturizeConfig& cfg) {
    if (center < 1 || center > g.node_count())
        throw IndexOutOfRange("crop sum center " + std::to_string(center));
    NodeCropSum out;
    const auto& nb = g.neighbors(center);
    const int D = static_cast<int>(nb.size());
    out.degree = D;
    std::map<std::vector<std::uint8_t>, std::int64_t> groups;
    int members[4] = {center, 0, 0, 0};
    if (D >= 3) {
        out.denom = static_cast<std::int64_t>(D) * (D - 1) * (D - 2);
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b) {
                if (b == a) continue;
                for (int c = 0; c < D; ++c) {
                    if (c == a || c == b) continue;
                    members[1] = nb[static_cast<std::size_t>(a)];
                    members[2] = nb[static_cast<std::size_t>(b)];
                    members[3] = nb[static_cast<std::size_t>(c)];
                    ++groups[crop_key(g, cfg, members, 4)];
                }
            }
    } else if (D == 2) {
        out.denom = 2;
        for (int o = 0; o < 2; ++o) {
            members[1] = nb[static_cast<std::size_t>(o)];
            members[2] = nb[static_cast<std::size_t>(1 - o)];
            ++groups[crop_key(g, cfg, members, 3)];
        }
    } else if (D == 1) {
        out.denom = 1;
        members[1] = nb[0];
        ++groups[crop_key(g, cfg, members, 2)];
    } else {
        out.denom = 1;
        ++groups[crop_key(g, cfg, members, 1)];
    }
    out.groups.reserve(groups.size());
    for (const auto& [key, count] : groups) {
        CropGroup cg;
        cg.crop.assign(key.begin(), key.end());
        cg.count = count;
        out.groups.push_back(std::move(cg));
    }
    return out;
}

NodeCropSum lrp_feature_sum(const Egonet& e, const LrpFeaturizeConfig& cfg) {
    if (e.depth != 1)
        throw DepthUnsupported("crop sums require depth-1 egonets, got depth " +
                               std::to_string(e.depth));
    return lrp_feature_sum(e.graph, 1, cfg);
}

LrpFeatures lrp_featurize(const AttributedGraph& g,
                          const LrpFeaturizeConfig& cfg) {
    LrpFeatures f;
    f.channels = cfg.channels();
    f.nodes.reserve(static_cast<std::size_t>(g.node_count()));
    for (int v = 1; v <= g.node_count(); ++v)
        f.nodes.push_back(lrp_feature_sum(g, v, cfg));
    return f;
}

std::uint64_t sbfs_size(int degree) {
    if (degree < 0) throw ValidationError("negative degree");
    if (degree > 20) throw OverflowError("factorial exceeds 64 bits");
    std::uint64_t f = 1;
    for (int i = 2; i <= degree; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::size_t LrpModel::off_a1() const {
    return static_cast<std::size_t>(cfg.hidden) * 16 *
           static_cast<std::size_t>(cfg.channels);
}
std::size_t LrpModel::off_c1() const {
    return off_a1() + static_cast<std::size_t>(cfg.hidden);
}
std::size_t LrpModel::off_a2() const {
    return off_c1() + static_cast<std::size_t>(cfg.hidden);
}
std::size_t LrpModel::off_c2() const {
    return off_a2() + static_cast<std::size_t>(cfg.hidden) *
                          static_cast<std::size_t>(cfg.hidden);
}
std::size_t LrpModel::off_w1() const {
    return off_c2() + static_cast<std::size_t>(cfg.hidden);
}
std::size_t LrpModel::off_b1() const {
    return off_w1() + static_cast<std::size_t>(cfg.hidden);
}
std::size_t LrpModel::param_count() const { return off_b1() + 1; }

LrpModel LrpModel::init(const LrpConfig& cfg, std::uint64_t seed) {
    if (cfg.hidden < 1 || cfg.channels < 1)
        throw ValidationError("lrp config values must be positive");
    LrpModel m;
    m.cfg = cfg;
    m.theta.assign(m.param_count(), 0.0);
    Rng rng = named_stream(seed, "lrp-init");
    const std::size_t H = static_cast<std::size_t>(cfg.hidden);
    const std::size_t F = 16 * static_cast<std::size_t>(cfg.channels);
    auto fill = [&](std::size_t off, std::size_t n, double fan_in) {
        const double bound = 1.0 / std::sqrt(fan_in);
        for (std::size_t i = 0; i < n; ++i)
            m.theta[off + i] = rng.next_symmetric() * bound;
    };
    fill(m.off_w2(), H * F, static_cast<double>(F));
    fill(m.off_a1(), H, 1.0);
    fill(m.off_c1(), H, 1.0);
    fill(m.off_a2(), H * H, static_cast<double>(H));
    fill(m.off_c2(), H, static_cast<double>(H));
    fill(m.off_w1(), H, static_cast<double>(H));
    fill(m.off_b1(), 1, static_cast<double>(H));
    return m;
}

namespace {

struct LrpView {
    const double* w2;
    const double* a1;
    const double* c1;
    const double* a2;
    const double* c2;
    const double* w1;
    const double* b1;
    std::size_t H, F;

    explicit LrpView(const LrpModel& m)
        : w2(m.theta.data() + m.off_w2()),
          a1(m.theta.data() + m.off_a1()),
          c1(m.theta.data() + m.off_c1()),
          a2(m.theta.data() + m.off_a2()),
          c2(m.theta.data() + m.off_c2()),
          w1(m.theta.data() + m.off_w1()),
          b1(m.theta.data() + m.off_b1()),
          H(static_cast<std::size_t>(m.cfg.hidden)),
          F(16 * static_cast<std::size_t>(m.cfg.channels)) {}
};

// Per-node forward pieces, reused by backward.
struct NodeWork {
    std::vector<double> meanf, hrelu, mlpout;
};

void node_forward(const LrpView& v, const NodeCropSum& nf, NodeWork& w) {
    w.meanf.assign(v.H, 0.0);
    for (const CropGroup& g : nf.groups) {
        const double* crop = g.crop.data();
        const double cnt = static_cast<double>(g.count);
        for (std::size_t j = 0; j < v.H; ++j) {
            const double* wj = v.w2 + j * v.F;
            double dot = 0;
            for (std::size_t f = 0; f < v.F; ++f) dot += wj[f] * crop[f];
            w.meanf[j] += cnt * std::tanh(dot);
        }
    }
    const double inv_denom = 1.0 / static_cast<double>(nf.denom);
    for (std::size_t j = 0; j < v.H; ++j) w.meanf[j] *= inv_denom;

    const double D = static_cast<double>(nf.degree);
    w.hrelu.resize(v.H);
    for (std::size_t k = 0; k < v.H; ++k) {
        double pre = v.a1[k] * D + v.c1[k];
        w.hrelu[k] = pre > 0 ? pre : 0;
    }
    w.mlpout.resize(v.H);
    for (std::size_t j = 0; j < v.H; ++j) {
        double acc = v.c2[j];
        const double* row = v.a2 + j * v.H;
        for (std::size_t k = 0; k < v.H; ++k) acc += row[k] * w.hrelu[k];
        w.mlpout[j] = acc;
    }
}

}  // namespace

double lrp_forward(const LrpModel& model, const LrpFeatures& feats) {
    if (feats.channels != model.cfg.channels)
        throw DimensionMismatch("featurization channels " +
                                std::to_string(feats.channels) +
                                " do not match model channels " +
                                std::to_string(model.cfg.channels));
    LrpView v(model);
    NodeWork w;
    std::vector<double> zsum(v.H, 0.0);
    for (const NodeCropSum& nf : feats.nodes) {
        node_forward(v, nf, w);
        for (std::size_t j = 0; j < v.H; ++j) {
            double gate = w.mlpout[j] * w.meanf[j];
            if (gate > 0) zsum[j] += gate;
        }
    }
    double y = *v.b1;
    for (std::size_t j = 0; j < v.H; ++j) y += v.w1[j] * zsum[j];
    return y;
}

double lrp_loss_grad(const LrpModel& model,
                     const std::vector<const LrpFeatures*>& batch,
                     const std::vector<double>& targets,
                     std::vector<double>& grad) {
    if (batch.empty()) throw EmptySelection("empty batch");
    if (batch.size() != targets.size())
        throw DimensionMismatch("batch/target size mismatch");
    LrpView v(model);
    grad.assign(model.param_count(), 0.0);
    double* g_w2 = grad.data() + model.off_w2();
    double* g_a1 = grad.data() + model.off_a1();
    double* g_c1 = grad.data() + model.off_c1();
    double* g_a2 = grad.data() + model.off_a2();
    double* g_c2 = grad.data() + model.off_c2();
    double* g_w1 = grad.data() + model.off_w1();
    double* g_b1 = grad.data() + model.off_b1();

    const double invB = 1.0 / static_cast<double>(batch.size());
    double loss = 0;
    std::vector<NodeWork> works;
    std::vector<double> zsum(v.H), gmean(v.H), gmlp(v.H);

    for (std::size_t b = 0; b < batch.size(); ++b) {
        const LrpFeatures& feats = *batch[b];
        if (feats.channels != model.cfg.channels)
            throw DimensionMismatch("featurization/model channel mismatch");
        const std::size_t n = feats.nodes.size();
        if (works.size() < n) works.resize(n);
        std::fill(zsum.begin(), zsum.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            node_forward(v, feats.nodes[i], works[i]);
            const NodeWork& w = works[i];
            for (std::size_t j = 0; j < v.H; ++j) {
                double gate = w.mlpout[j] * w.meanf[j];
                if (gate > 0) zsum[j] += gate;
            }
        }
        double y = *v.b1;
        for (std::size_t j = 0; j < v.H; ++j) y += v.w1[j] * zsum[j];
        const double err = y - targets[b];
        loss += err * err * invB;

        const double gy = 2.0 * err * invB;
        *g_b1 += gy;
        for (std::size_t j = 0; j < v.H; ++j) g_w1[j] += gy * zsum[j];

        for (std::size_t i = 0; i < n; ++i) {
            const NodeCropSum& nf = feats.nodes[i];
            const NodeWork& w = works[i];
            bool any = false;
            for (std::size_t j = 0; j < v.H; ++j) {
                double gate = w.mlpout[j] * w.meanf[j];
                if (gate > 0) {
                    double gz = gy * v.w1[j];
                    gmlp[j] = gz * w.meanf[j];
                    gmean[j] = gz * w.mlpout[j];
                    any = true;
                } else {
                    gmlp[j] = 0;
                    gmean[j] = 0;
                }
            }
            if (!any) continue;

            const double inv_denom = 1.0 / static_cast<double>(nf.denom);
            for (const CropGroup& cg : nf.groups) {
                const double* crop = cg.crop.data();
                const double cnt = static_cast<double>(cg.count);
                for (std::size_t j = 0; j < v.H; ++j) {
                    if (gmean[j] == 0) continue;
                    const double* wj = v.w2 + j * v.F;
                    double dot = 0;
                    for (std::size_t f = 0; f < v.F; ++f) dot += wj[f] * crop[f];
                    const double th = std::tanh(dot);
                    const double du =
                        gmean[j] * cnt * inv_denom * (1.0 - th * th);
                    double* gj = g_w2 + j * v.F;
                    for (std::size_t f = 0; f < v.F; ++f) gj[f] += du * crop[f];
                }
            }

            const double D = static_cast<double>(nf.degree);
            for (std::size_t j = 0; j < v.H; ++j) {
                const double gm = gmlp[j];
                if (gm == 0) continue;
                g_c2[j] += gm;
                double* grow = g_a2 + j * v.H;
                for (std::size_t k = 0; k < v.H; ++k)
                    grow[k] += gm * w.hrelu[k];
            }
            for (std::size_t k = 0; k < v.H; ++k) {
                if (w.hrelu[k] <= 0) continue;
                double gh = 0;
                for (std::size_t j = 0; j < v.H; ++j)
                    if (gmlp[j] != 0) gh += v.a2[j * v.H + k] * gmlp[j];
                g_c1[k] += gh;
                g_a1[k] += gh * D;
            }
        }
    }
    return loss;
}

double lrp_mse(const LrpModel& model, const std::vector<LrpFeatures>& feats,
               const std::vector<double>& labels,
               const std::vector<int>& idx) {
    if (idx.empty()) throw EmptySplit("mse over empty index set");
    double acc = 0;
    for (int i : idx) {
        double y = lrp_forward(model, feats[static_cast<std::size_t>(i)]);
        double err = y - labels[static_cast<std::size_t>(i)];
        acc += err * err;
    }
    return acc / static_cast<double>(idx.size());
}

TrainResult train_lrp(const LrpConfig& mcfg, const TrainConfig& tcfg,
                      const std::vector<LrpFeatures>& feats,
                      const std::vector<double>& labels,
                      const std::vector<int>& train_idx,
                      const std::vector<int>& val_idx,
                      const std::vector<int>& test_idx) {
    if (feats.size() != labels.size())
        throw DimensionMismatch("features/labels size mismatch");
    if (train_idx.empty() || val_idx.empty() || test_idx.empty())
        throw EmptySplit("all three splits must be non-empty");
    if (tcfg.epochs < 1 || tcfg.batch_size < 1 || tcfg.lr <= 0)
        throw ValidationError("bad training config");

    LrpModel model = LrpModel::init(mcfg, tcfg.seed);
    const std::size_t P = model.param_count();
    std::vector<double> adam_m(P, 0.0), adam_v(P, 0.0), grad;
    Rng shuffler = named_stream(tcfg.seed, "train-shuffle");
    std::vector<int> perm = train_idx;

    TrainResult res;
    res.best_val_mse = std::numeric_limits<double>::infinity();

    std::vector<const LrpFeatures*> batch;
    std::vector<double> targets;
    std::int64_t step = 0;
    for (int epoch = 1; epoch <= tcfg.epochs; ++epoch) {
        shuffler.shuffle(perm);
        for (std::size_t start = 0; start < perm.size();
             start += static_cast<std::size_t>(tcfg.batch_size)) {
            const std::size_t stop =
                std::min(perm.size(), start + static_cast<std::size_t>(tcfg.batch_size));
            batch.clear();
            targets.clear();
            for (std::size_t i = start; i < stop; ++i) {
                batch.push_back(&feats[static_cast<std::size_t>(perm[i])]);
                targets.push_back(labels[static_cast<std::size_t>(perm[i])]);
            }
            lrp_loss_grad(model, batch, targets, grad);
            ++step;
            const double bc1 = 1.0 - std::pow(tcfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(tcfg.beta2, static_cast<double>(step));
            for (std::size_t p = 0; p < P; ++p) {
                adam_m[p] = tcfg.beta1 * adam_m[p] + (1.0 - tcfg.beta1) * grad[p];
                adam_v[p] =
                    tcfg.beta2 * adam_v[p] + (1.0 - tcfg.beta2) * grad[p] * grad[p];
                const double mhat = adam_m[p] / bc1;
                const double vhat = adam_v[p] / bc2;
                model.theta[p] -= tcfg.lr * mhat / (std::sqrt(vhat) + tcfg.eps);
            }
        }
        EpochStats st;
        st.epoch = epoch;
        st.train_mse = lrp_mse(model, feats, labels, train_idx);
        st.val_mse = lrp_mse(model, feats, labels, val_idx);
        st.test_mse = lrp_mse(model, feats, labels, test_idx);
        res.history.push_back(st);
        if (st.val_mse < res.best_val_mse) {
            res.best_val_mse = st.val_mse;
            res.best = model;
            res.best_epoch = epoch;
            res.test_mse_at_best = st.test_mse;
        }
    }
    return res;
}

}  // namespace subcount
