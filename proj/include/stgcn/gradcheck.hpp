#pragma once

// Central-difference gradient verification. For every scalar parameter
// theta_i the loss is re-evaluated at theta_i +/- h and the quotient
// (L+ - L-) / 2h is compared against the reverse-mode gradient with
// relative error |a - n| / max(|a|, |n|, 1e-12).
//
// The suite at the bottom covers each tape primitive on random inputs and
// a small two-layer model end to end; the command-line `gradcheck`
// subcommand and the acceptance tests both run it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stgcn/autodiff.hpp"
#include "stgcn/layers.hpp"
#include "stgcn/rng.hpp"
#include "stgcn/train.hpp"

namespace stgcn {

struct GradCheckParam {
    std::string name;
    std::vector<double>* data = nullptr;       // perturbed in place
    const std::vector<double>* analytic = nullptr;  // reverse-mode gradient
};

struct GradCheckEntry {
    std::string name;
    double max_rel_err = 0.0;
    long fail_index = -1;  // index of the worst scalar, -1 if the vector is empty
    double step = 0.0;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> per_param;
    double max_rel_err = 0.0;
    double step = 0.0;

    bool within(double tolerance) const { return max_rel_err <= tolerance; }
};

// loss must be pure: same parameter values, same loss.
inline GradCheckReport finite_diff_gradients(const std::function<double()>& loss,
                                             const std::vector<GradCheckParam>& params,
                                             double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite_diff_gradients: step must be > 0");
    GradCheckReport report;
    report.step = step;
    for (const GradCheckParam& p : params) {
        GradCheckEntry entry;
        entry.name = p.name;
        entry.step = step;
        for (std::size_t i = 0; i < p.data->size(); ++i) {
            const double saved = (*p.data)[i];
            (*p.data)[i] = saved + step;
            const double up = loss();
            (*p.data)[i] = saved - step;
            const double down = loss();
            (*p.data)[i] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw std::runtime_error("finite_diff_gradients: non-finite loss when perturbing '" +
                                         p.name + "' at index " + std::to_string(i));
            const double numeric = (up - down) / (2.0 * step);
            const double analytic = (*p.analytic)[i];
            const double rel = std::abs(analytic - numeric) /
                               std::max({std::abs(analytic), std::abs(numeric), 1e-12});
            if (rel > entry.max_rel_err) {
                entry.max_rel_err = rel;
                entry.fail_index = static_cast<long>(i);
            }
        }
        report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
        report.per_param.push_back(std::move(entry));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Suite

namespace gradcheck_detail {

inline std::vector<double> random_values(std::size_t n, Rng& rng, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Random values bounded away from zero, for ops with a kink there.
inline std::vector<double> random_values_off_zero(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (double& x : v) {
        do {
            x = rng.uniform(-10.0, 10.0);
        } while (std::abs(x) < 1e-2);
    }
    return v;
}

}  // namespace gradcheck_detail

// Checks one primitive: `record` must map already-recorded input ids to
// the op output; the output is folded to a scalar through a fixed random
// weighting so the adjoint pattern is non-uniform.
inline GradCheckReport check_primitive(
    const std::string& name, std::vector<std::vector<int>> shapes,
    const std::function<Tape::Id(Tape&, const std::vector<Tape::Id>&)>& record,
    std::uint64_t seed, bool off_zero = false, double step = 1e-5) {
    Rng rng(seed);
    std::vector<std::vector<double>> buffers;
    std::vector<std::size_t> sizes;
    for (const auto& s : shapes) {
        std::size_t n = 1;
        for (int d : s) n *= static_cast<std::size_t>(d);
        sizes.push_back(n);
        buffers.push_back(off_zero ? gradcheck_detail::random_values_off_zero(n, rng)
                                   : gradcheck_detail::random_values(n, rng, -10.0, 10.0));
    }
    std::vector<double> fold;  // fixed weighting, created on first run

    auto run = [&](Tape& tape) {
        std::vector<Tape::Id> ids;
        for (std::size_t i = 0; i < shapes.size(); ++i)
            ids.push_back(tape.input(shapes[i], buffers[i], true));
        Tape::Id out = record(tape, ids);
        if (tape.value(out).rank() == 0) return std::pair{out, ids};
        if (fold.empty()) {
            Rng wrng(seed ^ 0x9e3779b97f4a7c15ull);
            fold = gradcheck_detail::random_values(tape.value(out).data.size(), wrng, -1.0, 1.0);
        }
        Tape::Id w = tape.input(tape.value(out).shape, fold);
        return std::pair{tape.sum(tape.mul(out, w)), ids};
    };

    Tape tape;
    auto [loss_id, ids] = run(tape);
    Tape::Gradients grads = tape.backward(loss_id);
    std::vector<std::vector<double>> analytic;
    for (std::size_t i = 0; i < ids.size(); ++i) analytic.push_back(grads.at(ids[i]));

    std::vector<GradCheckParam> params;
    for (std::size_t i = 0; i < buffers.size(); ++i)
        params.push_back({name + ".in" + std::to_string(i), &buffers[i], &analytic[i]});
    auto loss = [&]() {
        Tape t;
        return t.scalar(run(t).first);
    };
    return finite_diff_gradients(loss, params, step);
}

// Every primitive with learnable inputs, one report per op.
inline std::vector<std::pair<std::string, GradCheckReport>> check_primitive_gradients(
    std::uint64_t seed = 2024) {
    std::vector<std::pair<std::string, GradCheckReport>> out;
    auto add_case = [&](const std::string& name, std::vector<std::vector<int>> shapes,
                        std::function<Tape::Id(Tape&, const std::vector<Tape::Id>&)> rec,
                        bool off_zero = false) {
        out.push_back({name, check_primitive(name, std::move(shapes), rec, seed, off_zero)});
    };
    add_case("matmul", {{5, 4}, {4, 3}},
             [](Tape& t, const std::vector<Tape::Id>& in) { return t.matmul(in[0], in[1]); });
    add_case("add", {{3, 4}, {3, 4}},
             [](Tape& t, const std::vector<Tape::Id>& in) { return t.add(in[0], in[1]); });
    add_case("mul", {{3, 4}, {3, 4}},
             [](Tape& t, const std::vector<Tape::Id>& in) { return t.mul(in[0], in[1]); });
    add_case("scale", {{2, 5}},
             [](Tape& t, const std::vector<Tape::Id>& in) { return t.scale(in[0], -1.7); });
    add_case("relu", {{4, 5}},
             [](Tape& t, const std::vector<Tape::Id>& in) { return t.relu(in[0]); }, true);
    add_case("sum", {{3, 3}},
             [](Tape& t, const std::vector<Tape::Id>& in) { return t.sum(in[0]); });
    add_case("joint_transform", {{4, 4}, {4, 3, 2}},
             [](Tape& t, const std::vector<Tape::Id>& in) {
                 return t.joint_transform(in[0], in[1]);
             });
    add_case("channel_transform", {{4, 3, 2}, {2, 5}},
             [](Tape& t, const std::vector<Tape::Id>& in) {
                 return t.channel_transform(in[0], in[1]);
             });
    add_case("shift_frames", {{3, 4, 2}},
             [](Tape& t, const std::vector<Tape::Id>& in) { return t.shift_frames(in[0]); });
    add_case("conv_time", {{2, 5, 3}, {3, 3, 2}, {2}},
             [](Tape& t, const std::vector<Tape::Id>& in) {
                 return t.conv_time(in[0], in[1], in[2], 1);
             });
    add_case("conv_time_stride2", {{2, 6, 2}, {5, 2, 2}, {2}},
             [](Tape& t, const std::vector<Tape::Id>& in) {
                 return t.conv_time(in[0], in[1], in[2], 2);
             });
    add_case("global_average_pool", {{3, 4, 2}},
             [](Tape& t, const std::vector<Tape::Id>& in) {
                 return t.global_average_pool(in[0]);
             });
    add_case("linear", {{4}, {4, 3}, {3}},
             [](Tape& t, const std::vector<Tape::Id>& in) {
                 return t.linear(in[0], in[1], in[2]);
             });
    add_case("softmax_cross_entropy", {{4}},
             [](Tape& t, const std::vector<Tape::Id>& in) {
                 return t.softmax_cross_entropy(in[0], 1);
             });
    return out;
}

// Full reverse-mode check of a two-layer model on one random sequence.
// Every parameter gets a small random offset first so none sits at an
// initialization special case (all-ones M, zero biases).
inline GradCheckReport check_model_gradients(std::uint64_t seed = 7) {
    ModelConfig cfg;
    cfg.topology = chain_topology(3);
    cfg.in_channels = 2;
    cfg.layers = {{3, 1}, {3, 1}};
    cfg.class_count = 3;
    cfg.temporal_kernel = 3;
    cfg.tem_mode = TemMode::residual;
    cfg.seed = seed;
    Model model = make_model(cfg);

    Rng rng(seed ^ 0xabcdef);
    std::vector<ParamSlot> slots = param_slots(model);
    for (ParamSlot& s : slots)
        for (double& x : *s.data) x += rng.uniform(-0.05, 0.05);

    FeatureTensor input(3, 4, 2);
    for (double& x : input.data) x = rng.uniform(-1.0, 1.0);
    const int label = 1;

    Tape tape;
    RecordedForward rec = record_forward(tape, model, input);
    Tape::Id loss_id = tape.softmax_cross_entropy(rec.logits, label);
    Tape::Gradients grads = tape.backward(loss_id);

    std::vector<std::vector<double>> analytic;
    for (std::size_t i = 0; i < slots.size(); ++i) analytic.push_back(grads.at(rec.slot_ids[i]));
    std::vector<GradCheckParam> params;
    for (std::size_t i = 0; i < slots.size(); ++i)
        params.push_back({slots[i].name, slots[i].data, &analytic[i]});

    auto loss = [&]() {
        Tape t;
        RecordedForward r = record_forward(t, model, input);
        return t.scalar(t.softmax_cross_entropy(r.logits, label));
    };
    return finite_diff_gradients(loss, params, 1e-5);
}

struct GradCheckSuiteResult {
    std::vector<std::pair<std::string, GradCheckReport>> primitives;
    GradCheckReport model;
    double primitive_tolerance = 1e-6;
    double model_tolerance = 1e-5;

    bool pass() const {
        for (const auto& [name, report] : primitives)
            if (!report.within(primitive_tolerance)) return false;
        return model.within(model_tolerance);
    }
};

inline GradCheckSuiteResult run_gradcheck_suite(std::uint64_t seed = 2024) {
    GradCheckSuiteResult result;
    result.primitives = check_primitive_gradients(seed);
    result.model = check_model_gradients(seed ^ 0x5555);
    return result;
}

}  // namespace stgcn
