#pragma once

// Graph convolution layers over skeleton sequences. Each layer runs, in
// order: the spatial graph convolution (per-subset adjacency times
// per-subset 1x1 weights), an inter-frame extension stage that convolves
// over graph neighbors at the previous frame, and a plain temporal
// convolution. ReLU follows the spatial stage and the temporal stage.
// The classifier head is global average pooling, an affine map, and
// softmax.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "stgcn/autodiff.hpp"
#include "stgcn/partition.hpp"
#include "stgcn/rng.hpp"
#include "stgcn/tensor.hpp"
#include "stgcn/topology.hpp"

namespace stgcn {

// How the inter-frame stage combines with the frame-t features:
//   residual  out_t = f_t + g_t   (default; keeps frame-t content)
//   replace   out_t = g_t         (pure previous-frame form)
//   off       stage absent entirely
enum class TemMode { residual, replace, off };

inline TemMode tem_mode_from_string(const std::string& s) {
    if (s == "residual") return TemMode::residual;
    if (s == "replace") return TemMode::replace;
    if (s == "off") return TemMode::off;
    throw std::invalid_argument("unknown tem mode '" + s + "' (residual|replace|off)");
}

inline const char* to_string(TemMode m) {
    switch (m) {
    case TemMode::residual: return "residual";
    case TemMode::replace: return "replace";
    default: return "off";
    }
}

struct LayerSpec {
    int out_channels = 0;
    int stride = 1;
};

struct ModelConfig {
    SkeletonTopology topology;
    int in_channels = 3;
    std::vector<LayerSpec> layers;
    int class_count = 2;
    int temporal_kernel = 9;  // gamma
    int spatial_hops = 1;     // D^S
    int temporal_hops = 1;    // D^T
    TemMode tem_mode = TemMode::residual;
    bool tem_trainable = true;  // false: inter-frame weights zeroed and frozen
    double epsilon = kDegreeEpsilon;
    std::uint64_t seed = 1;
};

inline void validate_config(const ModelConfig& cfg) {
    validate_topology(cfg.topology);
    if (cfg.layers.empty()) throw std::invalid_argument("model config: needs at least one layer");
    if (cfg.temporal_kernel % 2 == 0 || cfg.temporal_kernel < 1)
        throw std::invalid_argument("model config: temporal kernel must be odd and positive");
    if (cfg.in_channels < 1) throw std::invalid_argument("model config: in_channels must be positive");
    if (cfg.class_count < 1) throw std::invalid_argument("model config: class_count must be positive");
    for (const LayerSpec& l : cfg.layers) {
        if (l.out_channels < 1)
            throw std::invalid_argument("model config: channel widths must be positive");
        if (l.stride < 1) throw std::invalid_argument("model config: strides must be positive");
    }
}

// Learnable values of one layer. The temporal kernel is stored flat with
// shape {gamma, C_out, C_out}.
struct LayerParams {
    int in_channels = 0;
    int out_channels = 0;
    int stride = 1;
    std::vector<Matrix> spatial_w;  // K of C_in x C_out
    std::vector<Matrix> spatial_m;  // K of N x N, all-ones at init
    std::vector<Matrix> tem_w;      // K^T of C_out x C_out
    std::vector<Matrix> tem_m;      // K^T of N x N
    std::vector<double> tconv_kernel;  // gamma * C_out * C_out
    std::vector<double> tconv_bias;    // C_out
};

struct ModelParams {
    std::vector<LayerParams> layers;
    Matrix fc_w;                // C_last x classes
    std::vector<double> fc_b;   // classes
};

// A configured model: partition matrices are fixed at build time, the
// parameters are the mutable training state.
struct Model {
    ModelConfig config;
    PartitionedAdjacency spatial;
    PartitionedAdjacency temporal;
    ModelParams params;
};

namespace detail {

inline Matrix glorot_matrix(int rows, int cols, Rng& rng) {
    const double s = std::sqrt(6.0 / (rows + cols));
    Matrix m(rows, cols);
    for (double& x : m.data) x = rng.uniform(-s, s);
    return m;
}

}  // namespace detail

// Fresh parameters from the config seed. M matrices start at all-ones so
// the masked adjacency acts unmodified; W matrices draw from a symmetric
// uniform range with Glorot scaling. Draw order is fixed: per layer,
// spatial W_k, inter-frame W_k, temporal kernel, then the classifier.
inline ModelParams init_params(const ModelConfig& cfg) {
    validate_config(cfg);
    Rng rng(cfg.seed);
    const int n = cfg.topology.joint_count;
    ModelParams p;
    int cin = cfg.in_channels;
    for (const LayerSpec& spec : cfg.layers) {
        LayerParams lp;
        lp.in_channels = cin;
        lp.out_channels = spec.out_channels;
        lp.stride = spec.stride;
        for (int k = 0; k < kSubsetCount; ++k) {
            lp.spatial_w.push_back(detail::glorot_matrix(cin, spec.out_channels, rng));
            lp.spatial_m.push_back(Matrix::ones(n, n));
        }
        for (int k = 0; k < kSubsetCount; ++k) {
            if (cfg.tem_trainable)
                lp.tem_w.push_back(detail::glorot_matrix(spec.out_channels, spec.out_channels, rng));
            else
                lp.tem_w.push_back(Matrix(spec.out_channels, spec.out_channels, 0.0));
            lp.tem_m.push_back(Matrix::ones(n, n));
        }
        const int g = cfg.temporal_kernel;
        const int c = spec.out_channels;
        const double s = std::sqrt(6.0 / (static_cast<double>(g) * c + static_cast<double>(g) * c));
        lp.tconv_kernel.resize(static_cast<std::size_t>(g) * c * c);
        for (double& x : lp.tconv_kernel) x = rng.uniform(-s, s);
        lp.tconv_bias.assign(c, 0.0);
        p.layers.push_back(std::move(lp));
        cin = spec.out_channels;
    }
    p.fc_w = detail::glorot_matrix(cin, cfg.class_count, rng);
    p.fc_b.assign(cfg.class_count, 0.0);
    return p;
}

inline Model make_model(ModelConfig cfg) {
    validate_config(cfg);
    Model m;
    m.config = std::move(cfg);
    HopDistanceTable dist = path_distance(m.config.topology);
    m.spatial = build_spatial_partition(m.config.topology, m.config.spatial_hops, dist,
                                        m.config.epsilon);
    m.temporal = build_temporal_partition(m.config.topology, m.config.temporal_hops, dist,
                                          m.config.epsilon);
    m.params = init_params(m.config);
    return m;
}

// ---------------------------------------------------------------------------
// Named parameter slots, the single enumeration order used by the
// optimizer, the checkpoint writer, and gradient checking.

struct ParamSlot {
    std::string name;
    std::vector<double>* data = nullptr;
    std::vector<int> shape;
    bool trainable = true;
};

inline std::vector<ParamSlot> param_slots(Model& model) {
    std::vector<ParamSlot> slots;
    const int n = model.config.topology.joint_count;
    const int g = model.config.temporal_kernel;
    for (std::size_t li = 0; li < model.params.layers.size(); ++li) {
        LayerParams& lp = model.params.layers[li];
        const std::string base = "layer" + std::to_string(li) + ".";
        for (int k = 0; k < kSubsetCount; ++k) {
            slots.push_back({base + "spatial.w" + std::to_string(k), &lp.spatial_w[k].data,
                             {lp.in_channels, lp.out_channels}, true});
            slots.push_back({base + "spatial.m" + std::to_string(k), &lp.spatial_m[k].data,
                             {n, n}, true});
        }
        for (int k = 0; k < kSubsetCount; ++k) {
            slots.push_back({base + "tem.w" + std::to_string(k), &lp.tem_w[k].data,
                             {lp.out_channels, lp.out_channels}, model.config.tem_trainable});
            slots.push_back({base + "tem.m" + std::to_string(k), &lp.tem_m[k].data,
                             {n, n}, model.config.tem_trainable});
        }
        slots.push_back({base + "tconv.kernel", &lp.tconv_kernel,
                         {g, lp.out_channels, lp.out_channels}, true});
        slots.push_back({base + "tconv.bias", &lp.tconv_bias, {lp.out_channels}, true});
    }
    slots.push_back({"fc.weight", &model.params.fc_w.data,
                     {model.params.fc_w.rows, model.params.fc_w.cols}, true});
    slots.push_back({"fc.bias", &model.params.fc_b,
                     {static_cast<int>(model.params.fc_b.size())}, true});
    return slots;
}

// ---------------------------------------------------------------------------
// Tape-recorded building blocks. Each takes already-recorded ids for the
// learnable values so a caller controls which leaves exist on the tape.

// Spatial graph convolution: per frame, out = sum_k ((A_k .* M_k) in) W_k.
inline Tape::Id spatial_gcn_record(Tape& tape, Tape::Id f_in, const PartitionedAdjacency& adj,
                                   const std::vector<Tape::Id>& m_ids,
                                   const std::vector<Tape::Id>& w_ids) {
    if (adj.normalized.size() != m_ids.size() || m_ids.size() != w_ids.size())
        throw std::invalid_argument("spatial_gcn: subset count mismatch");
    Tape::Id out{};
    for (std::size_t k = 0; k < adj.normalized.size(); ++k) {
        Tape::Id a_const = tape.input(adj.normalized[k]);
        Tape::Id masked = tape.mul(a_const, m_ids[k]);
        Tape::Id mixed = tape.joint_transform(masked, f_in);
        Tape::Id term = tape.channel_transform(mixed, w_ids[k]);
        out = out.valid() ? tape.add(out, term) : term;
    }
    return out;
}

// Inter-frame stage: g_t = sum_k ((A_k .* M_k) f_{t-1}) W_k with a zero
// tensor standing in for frame -1; residual mode adds the frame-t input.
inline Tape::Id tem_record(Tape& tape, Tape::Id f_in, const PartitionedAdjacency& adj,
                           const std::vector<Tape::Id>& m_ids,
                           const std::vector<Tape::Id>& w_ids, TemMode mode) {
    if (mode == TemMode::off) return f_in;
    Tape::Id shifted = tape.shift_frames(f_in);
    Tape::Id g = spatial_gcn_record(tape, shifted, adj, m_ids, w_ids);
    return mode == TemMode::residual ? tape.add(f_in, g) : g;
}

// Ids of one layer's leaves on a tape, in param_slots order.
struct LayerIds {
    std::vector<Tape::Id> spatial_w, spatial_m, tem_w, tem_m;
    Tape::Id kernel, bias;
};

struct RecordedForward {
    Tape::Id input;
    std::vector<LayerIds> layers;
    Tape::Id fc_w, fc_b;
    Tape::Id logits;
    std::vector<Tape::Id> slot_ids;  // aligned with param_slots(model)
};

inline LayerIds record_layer_params(Tape& tape, const LayerParams& lp, int gamma) {
    LayerIds ids;
    for (int k = 0; k < kSubsetCount; ++k) {
        ids.spatial_w.push_back(tape.input(lp.spatial_w[k], true));
        ids.spatial_m.push_back(tape.input(lp.spatial_m[k], true));
    }
    for (int k = 0; k < kSubsetCount; ++k) {
        ids.tem_w.push_back(tape.input(lp.tem_w[k], true));
        ids.tem_m.push_back(tape.input(lp.tem_m[k], true));
    }
    ids.kernel = tape.input({gamma, lp.out_channels, lp.out_channels}, lp.tconv_kernel, true);
    ids.bias = tape.input(lp.tconv_bias, true);
    return ids;
}

// One full layer: relu(conv_time(tem(relu(spatial_gcn(x))))).
inline Tape::Id layer_forward_record(Tape& tape, Tape::Id x, const Model& model,
                                     const LayerIds& ids, const LayerParams& lp) {
    Tape::Id s = tape.relu(spatial_gcn_record(tape, x, model.spatial, ids.spatial_m, ids.spatial_w));
    Tape::Id t = tem_record(tape, s, model.temporal, ids.tem_m, ids.tem_w, model.config.tem_mode);
    Tape::Id c = tape.conv_time(t, ids.kernel, ids.bias, lp.stride);
    return tape.relu(c);
}

// Records the whole forward chain up to the logits.
inline RecordedForward record_forward(Tape& tape, const Model& model,
                                      const FeatureTensor& input) {
    if (input.joints != model.config.topology.joint_count)
        throw std::invalid_argument("model forward: input has " + std::to_string(input.joints) +
                                    " joints, topology has " +
                                    std::to_string(model.config.topology.joint_count));
    if (input.channels != model.config.in_channels)
        throw std::invalid_argument("model forward: input has " + std::to_string(input.channels) +
                                    " channels, config expects " +
                                    std::to_string(model.config.in_channels));
    RecordedForward rec;
    rec.input = tape.input(input);
    Tape::Id x = rec.input;
    for (const LayerParams& lp : model.params.layers) {
        LayerIds ids = record_layer_params(tape, lp, model.config.temporal_kernel);
        x = layer_forward_record(tape, x, model, ids, lp);
        rec.layers.push_back(ids);
    }
    Tape::Id pooled = tape.global_average_pool(x);
    rec.fc_w = tape.input(model.params.fc_w, true);
    rec.fc_b = tape.input(model.params.fc_b, true);
    rec.logits = tape.linear(pooled, rec.fc_w, rec.fc_b);
    for (const LayerIds& ids : rec.layers) {
        for (int k = 0; k < kSubsetCount; ++k) {
            rec.slot_ids.push_back(ids.spatial_w[k]);
            rec.slot_ids.push_back(ids.spatial_m[k]);
        }
        for (int k = 0; k < kSubsetCount; ++k) {
            rec.slot_ids.push_back(ids.tem_w[k]);
            rec.slot_ids.push_back(ids.tem_m[k]);
        }
        rec.slot_ids.push_back(ids.kernel);
        rec.slot_ids.push_back(ids.bias);
    }
    rec.slot_ids.push_back(rec.fc_w);
    rec.slot_ids.push_back(rec.fc_b);
    return rec;
}

// ---------------------------------------------------------------------------
// Plain-value entry points (each records on a scratch tape internally).

// Spatial graph convolution of a feature tensor using a layer's spatial
// parameters.
inline FeatureTensor spatial_gcn(const FeatureTensor& f_in, const PartitionedAdjacency& adj,
                                 const std::vector<Matrix>& m, const std::vector<Matrix>& w) {
    Tape tape;
    Tape::Id x = tape.input(f_in);
    std::vector<Tape::Id> m_ids, w_ids;
    for (const Matrix& mk : m) m_ids.push_back(tape.input(mk));
    for (const Matrix& wk : w) w_ids.push_back(tape.input(wk));
    return tape.tensor_value(spatial_gcn_record(tape, x, adj, m_ids, w_ids));
}

// Inter-frame extension stage on plain values.
inline FeatureTensor tem_forward(const FeatureTensor& f_in, const PartitionedAdjacency& adj,
                                 const std::vector<Matrix>& m, const std::vector<Matrix>& w,
                                 TemMode mode) {
    Tape tape;
    Tape::Id x = tape.input(f_in);
    std::vector<Tape::Id> m_ids, w_ids;
    for (const Matrix& mk : m) m_ids.push_back(tape.input(mk));
    for (const Matrix& wk : w) w_ids.push_back(tape.input(wk));
    return tape.tensor_value(tem_record(tape, x, adj, m_ids, w_ids, mode));
}

// Class probabilities for one sequence.
inline std::vector<double> model_forward(const Model& model, const FeatureTensor& input) {
    Tape tape;
    RecordedForward rec = record_forward(tape, model, input);
    return softmax(tape.vector_value(rec.logits));
}

}  // namespace stgcn
