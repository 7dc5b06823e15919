#pragma once

// Mini-batch training with Nesterov-momentum SGD and top-k evaluation.
// Per batch, with g' = grad + weight_decay * theta:
//     v     <- momentum * v - lr * g'
//     theta <- theta + momentum * v - lr * g'
// Gradients are averaged over the batch in sample-index order, epochs are
// shuffled by the seeded generator, and updates are applied slot by slot,
// so a (seed, config, dataset) triple always reproduces the same run
// bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "stgcn/autodiff.hpp"
#include "stgcn/dataset.hpp"
#include "stgcn/layers.hpp"
#include "stgcn/rng.hpp"

namespace stgcn {

enum class LrSchedule { fixed, step };

struct TrainConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;
    double weight_decay = 0.0001;
    int batch_size = 8;
    int epochs = 10;
    std::uint64_t seed = 1;
    LrSchedule lr_schedule = LrSchedule::step;
    std::vector<int> lr_step_epochs;  // empty: decay at 50% and 75% of epochs
    double lr_step_factor = 0.1;
};

inline void validate_train_config(const TrainConfig& c) {
    if (!(c.learning_rate > 0.0))
        throw std::invalid_argument("train config: learning_rate must be > 0");
    if (c.momentum < 0.0 || c.momentum >= 1.0)
        throw std::invalid_argument("train config: momentum must lie in [0,1)");
    if (c.weight_decay < 0.0)
        throw std::invalid_argument("train config: weight_decay must be >= 0");
    if (c.batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
    if (c.epochs < 0) throw std::invalid_argument("train config: epochs must be >= 0");
    if (!(c.lr_step_factor > 0.0))
        throw std::invalid_argument("train config: lr_step_factor must be > 0");
}

struct EpochStats {
    int epoch = 0;
    double learning_rate = 0.0;
    double mean_loss = 0.0;
    double train_accuracy = 0.0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
};

// Effective learning rate for a 0-based epoch index.
inline double scheduled_lr(const TrainConfig& c, int epoch, int total_epochs) {
    if (c.lr_schedule == LrSchedule::fixed) return c.learning_rate;
    std::vector<int> steps = c.lr_step_epochs;
    if (steps.empty()) steps = {total_epochs / 2, (3 * total_epochs) / 4};
    double lr = c.learning_rate;
    for (int s : steps)
        if (epoch >= s) lr *= c.lr_step_factor;
    return lr;
}

// One recorded forward+loss for a sample; returns the loss node. The
// cached probabilities on the loss node give the prediction for accuracy
// bookkeeping.
inline Tape::Id record_loss(Tape& tape, const Model& model, const SkeletonSequenceSample& s,
                            RecordedForward& rec) {
    rec = record_forward(tape, model, s.features);
    return tape.softmax_cross_entropy(rec.logits, s.label);
}

// Index of the largest probability; ties go to the lower class index.
inline int argmax_class(const std::vector<double>& probs) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(probs.size()); ++i)
        if (probs[i] > probs[best]) best = i;
    return best;
}

inline TrainHistory train(Model& model, const Dataset& data, const TrainConfig& cfg) {
    validate_train_config(cfg);
    if (data.samples.empty()) throw std::invalid_argument("train: dataset is empty");
    if (data.class_count != model.config.class_count)
        throw std::invalid_argument("train: dataset has " + std::to_string(data.class_count) +
                                    " classes, model expects " +
                                    std::to_string(model.config.class_count));
    std::vector<ParamSlot> slots = param_slots(model);
    std::vector<std::vector<double>> velocity(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) velocity[i].assign(slots[i].data->size(), 0.0);

    Rng rng(cfg.seed);
    std::vector<int> order(data.samples.size());
    std::iota(order.begin(), order.end(), 0);

    TrainHistory history;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = scheduled_lr(cfg, epoch, cfg.epochs);
        rng.shuffle(order);
        double loss_sum = 0.0;
        int correct = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            const int batch = static_cast<int>(stop - start);
            std::vector<std::vector<double>> grad(slots.size());
            for (std::size_t i = 0; i < slots.size(); ++i)
                grad[i].assign(slots[i].data->size(), 0.0);
            for (std::size_t pos = start; pos < stop; ++pos) {
                const SkeletonSequenceSample& s = data.samples[order[pos]];
                Tape tape;
                RecordedForward rec;
                Tape::Id loss = record_loss(tape, model, s, rec);
                const double value = tape.scalar(loss);
                if (!std::isfinite(value))
                    throw std::runtime_error("train: non-finite loss at epoch " +
                                             std::to_string(epoch) + ", batch " +
                                             std::to_string(start / cfg.batch_size) +
                                             ", sample '" + s.sample_id + "'");
                loss_sum += value;
                if (argmax_class(tape.probabilities(loss)) == s.label) ++correct;
                Tape::Gradients g = tape.backward(loss);
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    const std::vector<double>& gi = g.at(rec.slot_ids[i]);
                    for (std::size_t j = 0; j < gi.size(); ++j) grad[i][j] += gi[j];
                }
            }
            const double inv_batch = 1.0 / batch;
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (!slots[i].trainable) continue;
                std::vector<double>& theta = *slots[i].data;
                for (std::size_t j = 0; j < theta.size(); ++j) {
                    const double g_eff = grad[i][j] * inv_batch + cfg.weight_decay * theta[j];
                    velocity[i][j] = cfg.momentum * velocity[i][j] - lr * g_eff;
                    theta[j] += cfg.momentum * velocity[i][j] - lr * g_eff;
                }
            }
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.learning_rate = lr;
        stats.mean_loss = loss_sum / static_cast<double>(order.size());
        stats.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
        history.epochs.push_back(stats);
    }
    return history;
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalReport {
    int sample_count = 0;
    double top1 = 0.0;
    double top5 = 0.0;
    std::vector<int> per_class_total;
    std::vector<int> per_class_correct;
    std::vector<std::vector<int>> confusion;  // [true][predicted]
};

// Top-k counts a sample as correct when the true class is among the k
// highest probabilities; ties are broken toward the lower class index.
// With five classes or fewer, top-5 is defined as 1.0.
inline EvalReport evaluate(const Model& model, const Dataset& data) {
    if (data.class_count != model.config.class_count)
        throw std::invalid_argument("evaluate: dataset has " + std::to_string(data.class_count) +
                                    " classes, model expects " +
                                    std::to_string(model.config.class_count));
    const int classes = model.config.class_count;
    EvalReport report;
    report.sample_count = static_cast<int>(data.samples.size());
    report.per_class_total.assign(classes, 0);
    report.per_class_correct.assign(classes, 0);
    report.confusion.assign(classes, std::vector<int>(classes, 0));
    int top1 = 0, top5 = 0;
    for (const SkeletonSequenceSample& s : data.samples) {
        std::vector<double> probs = model_forward(model, s.features);
        std::vector<int> ranked(classes);
        std::iota(ranked.begin(), ranked.end(), 0);
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](int a, int b) { return probs[a] > probs[b]; });
        const int pred = ranked[0];
        report.per_class_total[s.label] += 1;
        report.confusion[s.label][pred] += 1;
        if (pred == s.label) {
            ++top1;
            report.per_class_correct[s.label] += 1;
        }
        if (classes <= 5) {
            ++top5;
        } else {
            for (int k = 0; k < 5; ++k)
                if (ranked[k] == s.label) {
                    ++top5;
                    break;
                }
        }
    }
    if (report.sample_count > 0) {
        report.top1 = static_cast<double>(top1) / report.sample_count;
        report.top5 = static_cast<double>(top5) / report.sample_count;
    }
    return report;
}

}  // namespace stgcn
