#pragma once

// Run configuration: line-oriented `key = value` text. Unknown keys and
// duplicate keys are errors; '#' begins a comment line. Model geometry
// that depends on the data (input channels, class count) comes from the
// sequence file header, not from here.

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stgcn/layers.hpp"
#include "stgcn/train.hpp"

namespace stgcn {

struct RunConfig {
    std::string topology;            // built-in name or topology file path
    std::string data;                // sequence file path (train input)
    std::vector<int> channels;       // per-layer output widths
    std::vector<int> strides;        // per-layer strides, defaults to all 1
    int gamma = 9;
    int spatial_hops = 1;
    int temporal_hops = 1;
    TemMode tem_mode = TemMode::residual;
    bool tem_trainable = true;
    double epsilon = kDegreeEpsilon;
    TrainConfig train;
};

namespace config_detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<int> parse_int_list(const std::string& value, const std::string& key) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw std::invalid_argument("config: empty element in list for '" + key + "'");
        std::size_t used = 0;
        int v = std::stoi(item, &used);
        if (used != item.size())
            throw std::invalid_argument("config: bad integer '" + item + "' for '" + key + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("config: empty list for '" + key + "'");
    return out;
}

inline double parse_double(const std::string& value, const std::string& key) {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size())
        throw std::invalid_argument("config: bad number '" + value + "' for '" + key + "'");
    return v;
}

inline int parse_int(const std::string& value, const std::string& key) {
    std::size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size())
        throw std::invalid_argument("config: bad integer '" + value + "' for '" + key + "'");
    return v;
}

inline bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: bad boolean '" + value + "' for '" + key + "'");
}

}  // namespace config_detail

inline RunConfig parse_run_config(std::istream& in) {
    using namespace config_detail;
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": duplicate key '" + key + "'");
    }

    RunConfig cfg;
    auto take = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::pair{false, std::string{}};
        auto value = it->second;
        kv.erase(it);
        return std::pair{true, value};
    };
    if (auto [ok, v] = take("topology"); ok) cfg.topology = v;
    else throw std::invalid_argument("config: missing required key 'topology'");
    if (auto [ok, v] = take("channels"); ok) cfg.channels = parse_int_list(v, "channels");
    else throw std::invalid_argument("config: missing required key 'channels'");
    if (auto [ok, v] = take("data"); ok) cfg.data = v;
    if (auto [ok, v] = take("strides"); ok) cfg.strides = parse_int_list(v, "strides");
    else cfg.strides.assign(cfg.channels.size(), 1);
    if (cfg.strides.size() != cfg.channels.size())
        throw std::invalid_argument("config: 'strides' length must match 'channels'");
    if (auto [ok, v] = take("gamma"); ok) cfg.gamma = parse_int(v, "gamma");
    if (auto [ok, v] = take("spatial_hops"); ok) cfg.spatial_hops = parse_int(v, "spatial_hops");
    if (auto [ok, v] = take("temporal_hops"); ok) cfg.temporal_hops = parse_int(v, "temporal_hops");
    if (auto [ok, v] = take("tem"); ok) cfg.tem_mode = tem_mode_from_string(v);
    if (auto [ok, v] = take("tem_train"); ok) cfg.tem_trainable = parse_bool(v, "tem_train");
    if (auto [ok, v] = take("epsilon"); ok) cfg.epsilon = parse_double(v, "epsilon");
    if (auto [ok, v] = take("lr"); ok) cfg.train.learning_rate = parse_double(v, "lr");
    if (auto [ok, v] = take("momentum"); ok) cfg.train.momentum = parse_double(v, "momentum");
    if (auto [ok, v] = take("weight_decay"); ok)
        cfg.train.weight_decay = parse_double(v, "weight_decay");
    if (auto [ok, v] = take("batch_size"); ok) cfg.train.batch_size = parse_int(v, "batch_size");
    if (auto [ok, v] = take("epochs"); ok) cfg.train.epochs = parse_int(v, "epochs");
    if (auto [ok, v] = take("seed"); ok)
        cfg.train.seed = static_cast<std::uint64_t>(std::stoull(v));
    if (auto [ok, v] = take("lr_schedule"); ok) {
        if (v == "fixed") cfg.train.lr_schedule = LrSchedule::fixed;
        else if (v == "step") cfg.train.lr_schedule = LrSchedule::step;
        else throw std::invalid_argument("config: bad lr_schedule '" + v + "' (fixed|step)");
    }
    if (auto [ok, v] = take("lr_step_epochs"); ok)
        cfg.train.lr_step_epochs = parse_int_list(v, "lr_step_epochs");
    if (auto [ok, v] = take("lr_step_factor"); ok)
        cfg.train.lr_step_factor = parse_double(v, "lr_step_factor");

    if (!kv.empty())
        throw std::invalid_argument("config: unknown key '" + kv.begin()->first + "'");
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_run_config(in);
}

// Builds the model half of a run config; channel/class geometry comes
// from the dataset header.
inline ModelConfig model_config_from_run(const RunConfig& run, int in_channels, int class_count) {
    ModelConfig cfg;
    cfg.topology = resolve_topology(run.topology);
    cfg.in_channels = in_channels;
    cfg.class_count = class_count;
    for (std::size_t i = 0; i < run.channels.size(); ++i)
        cfg.layers.push_back({run.channels[i], run.strides[i]});
    cfg.temporal_kernel = run.gamma;
    cfg.spatial_hops = run.spatial_hops;
    cfg.temporal_hops = run.temporal_hops;
    cfg.tem_mode = run.tem_mode;
    cfg.tem_trainable = run.tem_trainable;
    cfg.epsilon = run.epsilon;
    cfg.seed = run.train.seed;
    return cfg;
}

}  // namespace stgcn
