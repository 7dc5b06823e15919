#pragma once

// Recorded-operation reverse-mode differentiation over a fixed primitive
// set. Every forward call appends one node to the tape; backward walks
// the nodes in reverse, accumulating adjoints. Values are flat double
// buffers with a semantic shape (rank 0 scalar, rank 1 vector, rank 2
// row-major matrix, rank 3 frame-major feature tensor {N, F, C}).
//
// Accumulation order inside each primitive is fixed, so identical inputs
// give bit-identical outputs and gradients.

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stgcn/tensor.hpp"

namespace stgcn {

namespace tape_detail {
inline std::string shape_to_string(const std::vector<int>& s) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << "]";
    return os.str();
}
}  // namespace tape_detail

class Tape {
public:
    struct Id {
        int v = -1;
        bool valid() const { return v >= 0; }
    };

    struct Value {
        std::vector<int> shape;
        std::vector<double> data;
        int rank() const { return static_cast<int>(shape.size()); }
    };

    // ---- leaves --------------------------------------------------------

    Id input(std::vector<int> shape, std::vector<double> data, bool learnable = false) {
        std::size_t want = 1;
        for (int d : shape) want *= static_cast<std::size_t>(d);
        if (data.size() != want)
            throw std::invalid_argument("tape input: data length " +
                                        std::to_string(data.size()) + " does not match shape " +
                                        tape_detail::shape_to_string(shape));
        for (double x : data)
            if (!std::isfinite(x))
                throw std::invalid_argument("tape input: non-finite entry");
        Node n;
        n.kind = Op::leaf;
        n.learnable = learnable;
        return push(std::move(n), {std::move(shape), std::move(data)});
    }

    Id input(const FeatureTensor& t, bool learnable = false) {
        return input({t.joints, t.frames, t.channels}, t.data, learnable);
    }
    Id input(const Matrix& m, bool learnable = false) {
        return input({m.rows, m.cols}, m.data, learnable);
    }
    Id input(const std::vector<double>& v, bool learnable = false) {
        return input({static_cast<int>(v.size())}, v, learnable);
    }

    // ---- elementwise ----------------------------------------------------

    Id add(Id a, Id b) { return elementwise_binary(Op::add, a, b); }
    Id mul(Id a, Id b) { return elementwise_binary(Op::mul, a, b); }

    Id scale(Id a, double factor) {
        const Value& va = val(a);
        Value out{va.shape, va.data};
        for (double& x : out.data) x *= factor;
        Node n;
        n.kind = Op::scale;
        n.a = a.v;
        n.x0 = factor;
        return push(std::move(n), std::move(out));
    }

    Id relu(Id a) {
        const Value& va = val(a);
        Value out{va.shape, va.data};
        for (double& x : out.data) x = x > 0.0 ? x : 0.0;
        Node n;
        n.kind = Op::relu;
        n.a = a.v;
        return push(std::move(n), std::move(out));
    }

    Id sum(Id a) {
        const Value& va = val(a);
        double acc = 0.0;
        for (double x : va.data) acc += x;
        Node n;
        n.kind = Op::sum;
        n.a = a.v;
        return push(std::move(n), Value{{}, {acc}});
    }

    // ---- matrix ops ------------------------------------------------------

    Id matmul(Id a, Id b) {
        const Value& va = val(a);
        const Value& vb = val(b);
        require(va.rank() == 2 && vb.rank() == 2, "matmul", a, b);
        require(va.shape[1] == vb.shape[0], "matmul", a, b);
        const int r = va.shape[0], k = va.shape[1], c = vb.shape[1];
        Value out{{r, c}, std::vector<double>(static_cast<std::size_t>(r) * c)};
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                double acc = 0.0;
                for (int m = 0; m < k; ++m)
                    acc += va.data[static_cast<std::size_t>(i) * k + m] *
                           vb.data[static_cast<std::size_t>(m) * c + j];
                out.data[static_cast<std::size_t>(i) * c + j] = acc;
            }
        Node n;
        n.kind = Op::matmul;
        n.a = a.v;
        n.b = b.v;
        return push(std::move(n), std::move(out));
    }

    // out[i,f,c] = sum_j L[i,j] * t[j,f,c]; L is N x N, t is {N,F,C}.
    Id joint_transform(Id l, Id t) {
        const Value& vl = val(l);
        const Value& vt = val(t);
        require(vl.rank() == 2 && vt.rank() == 3, "joint_transform", l, t);
        require(vl.shape[0] == vl.shape[1] && vl.shape[1] == vt.shape[0],
                "joint_transform", l, t);
        const int nj = vt.shape[0], nf = vt.shape[1], nc = vt.shape[2];
        Value out{vt.shape, std::vector<double>(vt.data.size())};
        for (int f = 0; f < nf; ++f)
            for (int i = 0; i < nj; ++i)
                for (int c = 0; c < nc; ++c) {
                    double acc = 0.0;
                    for (int j = 0; j < nj; ++j)
                        acc += vl.data[static_cast<std::size_t>(i) * nj + j] *
                               vt.data[tix(j, f, c, nj, nc)];
                    out.data[tix(i, f, c, nj, nc)] = acc;
                }
        Node n;
        n.kind = Op::joint_transform;
        n.a = l.v;
        n.b = t.v;
        return push(std::move(n), std::move(out));
    }

    // out[n,f,o] = sum_i t[n,f,i] * W[i,o]; W is C_in x C_out.
    Id channel_transform(Id t, Id w) {
        const Value& vt = val(t);
        const Value& vw = val(w);
        require(vt.rank() == 3 && vw.rank() == 2, "channel_transform", t, w);
        require(vt.shape[2] == vw.shape[0], "channel_transform", t, w);
        const int nj = vt.shape[0], nf = vt.shape[1], ci = vt.shape[2], co = vw.shape[1];
        Value out{{nj, nf, co}, std::vector<double>(static_cast<std::size_t>(nj) * nf * co)};
        for (int f = 0; f < nf; ++f)
            for (int n2 = 0; n2 < nj; ++n2)
                for (int o = 0; o < co; ++o) {
                    double acc = 0.0;
                    for (int i = 0; i < ci; ++i)
                        acc += vt.data[tix(n2, f, i, nj, ci)] *
                               vw.data[static_cast<std::size_t>(i) * co + o];
                    out.data[tix(n2, f, o, nj, co)] = acc;
                }
        Node n;
        n.kind = Op::channel_transform;
        n.a = t.v;
        n.b = w.v;
        return push(std::move(n), std::move(out));
    }

    // One-frame delay with a zero pad at frame 0: out[:,f,:] = in[:,f-1,:].
    Id shift_frames(Id t) {
        const Value& vt = val(t);
        require(vt.rank() == 3, "shift_frames", t, t);
        const int nj = vt.shape[0], nf = vt.shape[1], nc = vt.shape[2];
        Value out{vt.shape, std::vector<double>(vt.data.size(), 0.0)};
        for (int f = 1; f < nf; ++f)
            for (int n2 = 0; n2 < nj; ++n2)
                for (int c = 0; c < nc; ++c)
                    out.data[tix(n2, f, c, nj, nc)] = vt.data[tix(n2, f - 1, c, nj, nc)];
        Node n;
        n.kind = Op::shift_frames;
        n.a = t.v;
        return push(std::move(n), std::move(out));
    }

    // Temporal convolution: kernel is {gamma, C_in, C_out}, gamma odd,
    // zero padding of gamma/2 frames on both ends, frames never mix joints.
    // Output frame count is ceil(F / stride).
    Id conv_time(Id t, Id kernel, Id bias, int stride) {
        const Value& vt = val(t);
        const Value& vk = val(kernel);
        const Value& vb = val(bias);
        require(vt.rank() == 3 && vk.rank() == 3 && vb.rank() == 1, "conv_time", t, kernel);
        const int gamma = vk.shape[0];
        if (gamma % 2 == 0)
            throw std::invalid_argument("conv_time: kernel size must be odd, got " +
                                        std::to_string(gamma));
        if (stride < 1)
            throw std::invalid_argument("conv_time: stride must be >= 1, got " +
                                        std::to_string(stride));
        require(vk.shape[1] == vt.shape[2], "conv_time", t, kernel);
        require(vb.shape[0] == vk.shape[2], "conv_time", kernel, bias);
        const int nj = vt.shape[0], nf = vt.shape[1], ci = vt.shape[2], co = vk.shape[2];
        const int pad = gamma / 2;
        const int fo_count = (nf + stride - 1) / stride;
        Value out{{nj, fo_count, co},
                  std::vector<double>(static_cast<std::size_t>(nj) * fo_count * co)};
        for (int fo = 0; fo < fo_count; ++fo)
            for (int n2 = 0; n2 < nj; ++n2)
                for (int o = 0; o < co; ++o) {
                    double acc = vb.data[o];
                    for (int g = 0; g < gamma; ++g) {
                        const int fi = fo * stride + g - pad;
                        if (fi < 0 || fi >= nf) continue;
                        for (int i = 0; i < ci; ++i)
                            acc += vt.data[tix(n2, fi, i, nj, ci)] *
                                   vk.data[kix(g, i, o, ci, co)];
                    }
                    out.data[tix(n2, fo, o, nj, co)] = acc;
                }
        Node n;
        n.kind = Op::conv_time;
        n.a = t.v;
        n.b = kernel.v;
        n.c = bias.v;
        n.i0 = stride;
        return push(std::move(n), std::move(out));
    }

    // Mean over all joint/frame positions per channel.
    Id global_average_pool(Id t) {
        const Value& vt = val(t);
        require(vt.rank() == 3, "global_average_pool", t, t);
        const int nj = vt.shape[0], nf = vt.shape[1], nc = vt.shape[2];
        Value out{{nc}, std::vector<double>(nc, 0.0)};
        for (int f = 0; f < nf; ++f)
            for (int n2 = 0; n2 < nj; ++n2)
                for (int c = 0; c < nc; ++c)
                    out.data[c] += vt.data[tix(n2, f, c, nj, nc)];
        const double inv = 1.0 / (static_cast<double>(nj) * nf);
        for (double& x : out.data) x *= inv;
        Node n;
        n.kind = Op::gap;
        n.a = t.v;
        return push(std::move(n), std::move(out));
    }

    // out[o] = b[o] + sum_i x[i] W[i,o].
    Id linear(Id x, Id w, Id b) {
        const Value& vx = val(x);
        const Value& vw = val(w);
        const Value& vb = val(b);
        require(vx.rank() == 1 && vw.rank() == 2 && vb.rank() == 1, "linear", x, w);
        require(vw.shape[0] == vx.shape[0], "linear", x, w);
        require(vw.shape[1] == vb.shape[0], "linear", w, b);
        const int ci = vx.shape[0], co = vw.shape[1];
        Value out{{co}, std::vector<double>(co)};
        for (int o = 0; o < co; ++o) {
            double acc = vb.data[o];
            for (int i = 0; i < ci; ++i)
                acc += vx.data[i] * vw.data[static_cast<std::size_t>(i) * co + o];
            out.data[o] = acc;
        }
        Node n;
        n.kind = Op::linear;
        n.a = x.v;
        n.b = w.v;
        n.c = b.v;
        return push(std::move(n), std::move(out));
    }

    // Stabilized softmax + negative log likelihood. The node value is the
    // scalar loss; the probabilities are cached and readable afterwards.
    Id softmax_cross_entropy(Id logits, int true_class) {
        const Value& vl = val(logits);
        require(vl.rank() == 1 && vl.shape[0] >= 1, "softmax_cross_entropy", logits, logits);
        if (true_class < 0 || true_class >= vl.shape[0])
            throw std::invalid_argument("softmax_cross_entropy: class " +
                                        std::to_string(true_class) + " out of range [0," +
                                        std::to_string(vl.shape[0]) + ")");
        const int k = vl.shape[0];
        double mx = vl.data[0];
        for (int i = 1; i < k; ++i) mx = std::max(mx, vl.data[i]);
        std::vector<double> probs(k);
        double denom = 0.0;
        for (int i = 0; i < k; ++i) {
            probs[i] = std::exp(vl.data[i] - mx);
            denom += probs[i];
        }
        for (double& p : probs) p /= denom;
        const double loss = -(vl.data[true_class] - mx - std::log(denom));
        Node n;
        n.kind = Op::softmax_ce;
        n.a = logits.v;
        n.i0 = true_class;
        n.cached = probs;
        return push(std::move(n), Value{{}, {loss}});
    }

    // ---- access ----------------------------------------------------------

    const Value& value(Id id) const { return values_[check(id)]; }
    double scalar(Id id) const {
        const Value& v = value(id);
        if (v.data.size() != 1)
            throw std::invalid_argument("tape: value is not a scalar");
        return v.data[0];
    }
    FeatureTensor tensor_value(Id id) const {
        const Value& v = value(id);
        if (v.rank() != 3) throw std::invalid_argument("tape: value is not rank 3");
        FeatureTensor t(v.shape[0], v.shape[1], v.shape[2]);
        t.data = v.data;
        return t;
    }
    std::vector<double> vector_value(Id id) const {
        const Value& v = value(id);
        if (v.rank() != 1) throw std::invalid_argument("tape: value is not rank 1");
        return v.data;
    }
    // Cached softmax probabilities of a softmax_cross_entropy node.
    const std::vector<double>& probabilities(Id ce) const {
        const Node& n = nodes_[check(ce)];
        if (n.kind != Op::softmax_ce)
            throw std::invalid_argument("tape: node is not a softmax_cross_entropy");
        return n.cached;
    }
    std::size_t node_count() const { return nodes_.size(); }

    // ---- backward --------------------------------------------------------

    struct Gradients {
        std::vector<std::vector<double>> adjoint;  // aligned with node ids
        const std::vector<double>& at(Id id) const { return adjoint[id.v]; }
    };

    // Reverse traversal from a scalar loss. Every node receives an adjoint
    // of its own shape; learnable leaves read theirs out of the result.
    Gradients backward(Id loss) const {
        const Value& lv = value(loss);
        if (!(lv.rank() == 0 && lv.data.size() == 1))
            throw std::invalid_argument("backward: loss must be a scalar value");
        Gradients g;
        g.adjoint.resize(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            g.adjoint[i].assign(values_[i].data.size(), 0.0);
        g.adjoint[loss.v][0] = 1.0;
        for (int idx = loss.v; idx >= 0; --idx) accumulate(idx, g);
        return g;
    }

private:
    enum class Op {
        leaf, add, mul, scale, relu, sum, matmul, joint_transform,
        channel_transform, shift_frames, conv_time, gap, linear, softmax_ce,
    };

    struct Node {
        Op kind = Op::leaf;
        int a = -1, b = -1, c = -1;
        int i0 = 0;       // stride or class index
        double x0 = 0.0;  // scale factor
        bool learnable = false;
        std::vector<double> cached;
    };

    std::vector<Node> nodes_;
    std::vector<Value> values_;

    static std::size_t tix(int n, int f, int c, int joints, int channels) {
        return (static_cast<std::size_t>(f) * joints + n) * channels + c;
    }
    static std::size_t kix(int g, int i, int o, int ci, int co) {
        return (static_cast<std::size_t>(g) * ci + i) * co + o;
    }

    int check(Id id) const {
        if (!id.valid() || id.v >= static_cast<int>(nodes_.size()))
            throw std::invalid_argument("tape: invalid value id");
        return id.v;
    }
    const Value& val(Id id) const { return values_[check(id)]; }

    void require(bool ok, const char* op, Id a, Id b) const {
        if (ok) return;
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    tape_detail::shape_to_string(val(a).shape) + " vs " +
                                    tape_detail::shape_to_string(val(b).shape));
    }

    Id push(Node n, Value v) {
        nodes_.push_back(std::move(n));
        values_.push_back(std::move(v));
        return Id{static_cast<int>(nodes_.size()) - 1};
    }

    Id elementwise_binary(Op op, Id a, Id b) {
        const Value& va = val(a);
        const Value& vb = val(b);
        require(va.shape == vb.shape, op == Op::add ? "add" : "mul", a, b);
        Value out{va.shape, std::vector<double>(va.data.size())};
        if (op == Op::add)
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] = va.data[i] + vb.data[i];
        else
            for (std::size_t i = 0; i < out.data.size(); ++i)
                out.data[i] = va.data[i] * vb.data[i];
        Node n;
        n.kind = op;
        n.a = a.v;
        n.b = b.v;
        return push(std::move(n), std::move(out));
    }

    void accumulate(int idx, Gradients& g) const {
        const Node& n = nodes_[idx];
        const std::vector<double>& gout = g.adjoint[idx];
        switch (n.kind) {
        case Op::leaf:
            break;
        case Op::add:
            for (std::size_t i = 0; i < gout.size(); ++i) {
                g.adjoint[n.a][i] += gout[i];
                g.adjoint[n.b][i] += gout[i];
            }
            break;
        case Op::mul:
            for (std::size_t i = 0; i < gout.size(); ++i) {
                g.adjoint[n.a][i] += gout[i] * values_[n.b].data[i];
                g.adjoint[n.b][i] += gout[i] * values_[n.a].data[i];
            }
            break;
        case Op::scale:
            for (std::size_t i = 0; i < gout.size(); ++i)
                g.adjoint[n.a][i] += gout[i] * n.x0;
            break;
        case Op::relu:
            for (std::size_t i = 0; i < gout.size(); ++i)
                if (values_[n.a].data[i] > 0.0) g.adjoint[n.a][i] += gout[i];
            break;
        case Op::sum:
            for (std::size_t i = 0; i < g.adjoint[n.a].size(); ++i)
                g.adjoint[n.a][i] += gout[0];
            break;
        case Op::matmul: {
            const Value& va = values_[n.a];
            const Value& vb = values_[n.b];
            const int r = va.shape[0], k = va.shape[1], c = vb.shape[1];
            for (int i = 0; i < r; ++i)
                for (int m = 0; m < k; ++m) {
                    double acc = 0.0;
                    for (int j = 0; j < c; ++j)
                        acc += gout[static_cast<std::size_t>(i) * c + j] *
                               vb.data[static_cast<std::size_t>(m) * c + j];
                    g.adjoint[n.a][static_cast<std::size_t>(i) * k + m] += acc;
                }
            for (int m = 0; m < k; ++m)
                for (int j = 0; j < c; ++j) {
                    double acc = 0.0;
                    for (int i = 0; i < r; ++i)
                        acc += va.data[static_cast<std::size_t>(i) * k + m] *
                               gout[static_cast<std::size_t>(i) * c + j];
                    g.adjoint[n.b][static_cast<std::size_t>(m) * c + j] += acc;
                }
            break;
        }
        case Op::joint_transform: {
            const Value& vl = values_[n.a];
            const Value& vt = values_[n.b];
            const int nj = vt.shape[0], nf = vt.shape[1], nc = vt.shape[2];
            for (int i = 0; i < nj; ++i)
                for (int j = 0; j < nj; ++j) {
                    double acc = 0.0;
                    for (int f = 0; f < nf; ++f)
                        for (int c = 0; c < nc; ++c)
                            acc += gout[tix(i, f, c, nj, nc)] * vt.data[tix(j, f, c, nj, nc)];
                    g.adjoint[n.a][static_cast<std::size_t>(i) * nj + j] += acc;
                }
            for (int f = 0; f < nf; ++f)
                for (int j = 0; j < nj; ++j)
                    for (int c = 0; c < nc; ++c) {
                        double acc = 0.0;
                        for (int i = 0; i < nj; ++i)
                            acc += vl.data[static_cast<std::size_t>(i) * nj + j] *
                                   gout[tix(i, f, c, nj, nc)];
                        g.adjoint[n.b][tix(j, f, c, nj, nc)] += acc;
                    }
            break;
        }
        case Op::channel_transform: {
            const Value& vt = values_[n.a];
            const Value& vw = values_[n.b];
            const int nj = vt.shape[0], nf = vt.shape[1], ci = vt.shape[2], co = vw.shape[1];
            for (int f = 0; f < nf; ++f)
                for (int n2 = 0; n2 < nj; ++n2)
                    for (int i = 0; i < ci; ++i) {
                        double acc = 0.0;
                        for (int o = 0; o < co; ++o)
                            acc += gout[tix(n2, f, o, nj, co)] *
                                   vw.data[static_cast<std::size_t>(i) * co + o];
                        g.adjoint[n.a][tix(n2, f, i, nj, ci)] += acc;
                    }
            for (int i = 0; i < ci; ++i)
                for (int o = 0; o < co; ++o) {
                    double acc = 0.0;
                    for (int f = 0; f < nf; ++f)
                        for (int n2 = 0; n2 < nj; ++n2)
                            acc += vt.data[tix(n2, f, i, nj, ci)] * gout[tix(n2, f, o, nj, co)];
                    g.adjoint[n.b][static_cast<std::size_t>(i) * co + o] += acc;
                }
            break;
        }
        case Op::shift_frames: {
            const Value& vt = values_[n.a];
            const int nj = vt.shape[0], nf = vt.shape[1], nc = vt.shape[2];
            for (int f = 1; f < nf; ++f)
                for (int n2 = 0; n2 < nj; ++n2)
                    for (int c = 0; c < nc; ++c)
                        g.adjoint[n.a][tix(n2, f - 1, c, nj, nc)] += gout[tix(n2, f, c, nj, nc)];
            break;
        }
        case Op::conv_time: {
            const Value& vt = values_[n.a];
            const Value& vk = values_[n.b];
            const int nj = vt.shape[0], nf = vt.shape[1], ci = vt.shape[2];
            const int gamma = vk.shape[0], co = vk.shape[2];
            const int pad = gamma / 2, stride = n.i0;
            const int fo_count = (nf + stride - 1) / stride;
            for (int fo = 0; fo < fo_count; ++fo)
                for (int n2 = 0; n2 < nj; ++n2)
                    for (int o = 0; o < co; ++o) {
                        const double go = gout[tix(n2, fo, o, nj, co)];
                        g.adjoint[n.c][o] += go;
                        for (int gk = 0; gk < gamma; ++gk) {
                            const int fi = fo * stride + gk - pad;
                            if (fi < 0 || fi >= nf) continue;
                            for (int i = 0; i < ci; ++i) {
                                g.adjoint[n.a][tix(n2, fi, i, nj, ci)] +=
                                    go * vk.data[kix(gk, i, o, ci, co)];
                                g.adjoint[n.b][kix(gk, i, o, ci, co)] +=
                                    go * vt.data[tix(n2, fi, i, nj, ci)];
                            }
                        }
                    }
            break;
        }
        case Op::gap: {
            const Value& vt = values_[n.a];
            const int nj = vt.shape[0], nf = vt.shape[1], nc = vt.shape[2];
            const double inv = 1.0 / (static_cast<double>(nj) * nf);
            for (int f = 0; f < nf; ++f)
                for (int n2 = 0; n2 < nj; ++n2)
                    for (int c = 0; c < nc; ++c)
                        g.adjoint[n.a][tix(n2, f, c, nj, nc)] += gout[c] * inv;
            break;
        }
        case Op::linear: {
            const Value& vx = values_[n.a];
            const Value& vw = values_[n.b];
            const int ci = vx.shape[0], co = vw.shape[1];
            for (int i = 0; i < ci; ++i) {
                double acc = 0.0;
                for (int o = 0; o < co; ++o)
                    acc += gout[o] * vw.data[static_cast<std::size_t>(i) * co + o];
                g.adjoint[n.a][i] += acc;
            }
            for (int i = 0; i < ci; ++i)
                for (int o = 0; o < co; ++o)
                    g.adjoint[n.b][static_cast<std::size_t>(i) * co + o] +=
                        vx.data[i] * gout[o];
            for (int o = 0; o < co; ++o) g.adjoint[n.c][o] += gout[o];
            break;
        }
        case Op::softmax_ce: {
            const int k = static_cast<int>(n.cached.size());
            for (int i = 0; i < k; ++i) {
                double d = n.cached[i] - (i == n.i0 ? 1.0 : 0.0);
                g.adjoint[n.a][i] += gout[0] * d;
            }
            break;
        }
        }
    }
};

// Plain stabilized softmax, for turning logits into probabilities outside
// a recorded loss.
inline std::vector<double> softmax(const std::vector<double>& logits) {
    if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
    double mx = logits[0];
    for (double x : logits) mx = std::max(mx, x);
    std::vector<double> p(logits.size());
    double denom = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        denom += p[i];
    }
    for (double& x : p) x /= denom;
    return p;
}

}  // namespace stgcn
