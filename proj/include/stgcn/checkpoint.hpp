#pragma once

// Checkpoint file: magic "SKPT", version byte 0x01, little-endian u32
// entry count, then per entry a u16 name length, the UTF-8 name, a u8
// rank, u32 extents per dimension, and the values as 64-bit little-endian
// IEEE-754, row-major. A model checkpoint stores every parameter slot by
// name plus meta.* entries that pin the topology and configuration, so a
// checkpoint alone reconstructs a runnable model.

#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stgcn/binary_io.hpp"
#include "stgcn/layers.hpp"

namespace stgcn {

struct NamedEntry {
    std::string name;
    std::vector<int> shape;
    std::vector<double> values;
};

inline void write_checkpoint(std::ostream& out, const std::vector<NamedEntry>& entries) {
    out.write("SKPT", 4);
    out.put(0x01);
    io_detail::put_u32(out, static_cast<std::uint32_t>(entries.size()));
    for (const NamedEntry& e : entries) {
        if (e.name.size() > std::numeric_limits<std::uint16_t>::max())
            throw std::invalid_argument("checkpoint: entry name too long: " + e.name);
        io_detail::put_u16(out, static_cast<std::uint16_t>(e.name.size()));
        out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        out.put(static_cast<char>(e.shape.size()));
        for (int d : e.shape) io_detail::put_u32(out, static_cast<std::uint32_t>(d));
        std::size_t want = io_detail::checked_element_count(e.shape, "checkpoint entry");
        if (e.values.size() != want)
            throw std::invalid_argument("checkpoint: entry '" + e.name +
                                        "' value count does not match shape");
        for (double v : e.values) io_detail::put_f64(out, v);
    }
    if (!out) throw std::runtime_error("checkpoint: write failed");
}

inline std::vector<NamedEntry> read_checkpoint(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::string(magic, 4) != "SKPT")
        throw std::runtime_error("checkpoint: bad magic (not a SKPT file)");
    int version = in.get();
    if (version != 0x01)
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    std::uint32_t count = io_detail::get_u32(in, "entry count");
    std::vector<NamedEntry> entries;
    entries.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        NamedEntry e;
        std::uint16_t name_len = io_detail::get_u16(in, "name length");
        e.name = io_detail::get_string(in, name_len, "entry name");
        int rank = static_cast<int>(io_detail::get_bytes(in, 1, "rank"));
        for (int d = 0; d < rank; ++d)
            e.shape.push_back(static_cast<int>(io_detail::get_u32(in, "dimension")));
        std::size_t n = io_detail::checked_element_count(e.shape, "checkpoint entry");
        e.values.resize(n);
        for (std::size_t v = 0; v < n; ++v)
            e.values[v] = io_detail::get_f64(in, "entry values");
        entries.push_back(std::move(e));
    }
    return entries;
}

// ---------------------------------------------------------------------------
// Model <-> entries

namespace ckpt_detail {

inline NamedEntry scalar_entry(const std::string& name, double v) {
    return {name, {}, {v}};
}

inline double find_scalar(const std::vector<NamedEntry>& entries, const std::string& name) {
    for (const NamedEntry& e : entries)
        if (e.name == name) {
            if (e.values.size() != 1)
                throw std::runtime_error("checkpoint: entry '" + name + "' is not a scalar");
            return e.values[0];
        }
    throw std::runtime_error("checkpoint: missing entry '" + name + "'");
}

inline const NamedEntry& find_entry(const std::vector<NamedEntry>& entries,
                                    const std::string& name) {
    for (const NamedEntry& e : entries)
        if (e.name == name) return e;
    throw std::runtime_error("checkpoint: missing entry '" + name + "'");
}

}  // namespace ckpt_detail

inline std::vector<NamedEntry> model_to_entries(const Model& model) {
    std::vector<NamedEntry> entries;
    const ModelConfig& cfg = model.config;
    entries.push_back(ckpt_detail::scalar_entry("meta.joints", cfg.topology.joint_count));
    entries.push_back(ckpt_detail::scalar_entry("meta.cog", cfg.topology.cog_joint));
    {
        NamedEntry bones{"meta.bones",
                         {static_cast<int>(cfg.topology.bones.size()), 2},
                         {}};
        for (auto [a, b] : cfg.topology.bones) {
            bones.values.push_back(a);
            bones.values.push_back(b);
        }
        entries.push_back(std::move(bones));
    }
    entries.push_back(ckpt_detail::scalar_entry("meta.in_channels", cfg.in_channels));
    entries.push_back(ckpt_detail::scalar_entry("meta.class_count", cfg.class_count));
    entries.push_back(ckpt_detail::scalar_entry("meta.temporal_kernel", cfg.temporal_kernel));
    entries.push_back(ckpt_detail::scalar_entry("meta.spatial_hops", cfg.spatial_hops));
    entries.push_back(ckpt_detail::scalar_entry("meta.temporal_hops", cfg.temporal_hops));
    entries.push_back(ckpt_detail::scalar_entry("meta.tem_mode", static_cast<int>(cfg.tem_mode)));
    entries.push_back(ckpt_detail::scalar_entry("meta.tem_trainable", cfg.tem_trainable ? 1 : 0));
    entries.push_back(ckpt_detail::scalar_entry("meta.epsilon", cfg.epsilon));
    entries.push_back(
        ckpt_detail::scalar_entry("meta.seed_hi", static_cast<double>(cfg.seed >> 32)));
    entries.push_back(
        ckpt_detail::scalar_entry("meta.seed_lo", static_cast<double>(cfg.seed & 0xffffffffull)));
    {
        NamedEntry ch{"meta.channels", {static_cast<int>(cfg.layers.size())}, {}};
        NamedEntry st{"meta.strides", {static_cast<int>(cfg.layers.size())}, {}};
        for (const LayerSpec& l : cfg.layers) {
            ch.values.push_back(l.out_channels);
            st.values.push_back(l.stride);
        }
        entries.push_back(std::move(ch));
        entries.push_back(std::move(st));
    }
    for (const ParamSlot& slot : param_slots(const_cast<Model&>(model)))
        entries.push_back({slot.name, slot.shape, *slot.data});
    return entries;
}

inline Model model_from_entries(const std::vector<NamedEntry>& entries) {
    using ckpt_detail::find_entry;
    using ckpt_detail::find_scalar;
    ModelConfig cfg;
    cfg.topology.joint_count = static_cast<int>(find_scalar(entries, "meta.joints"));
    cfg.topology.cog_joint = static_cast<int>(find_scalar(entries, "meta.cog"));
    const NamedEntry& bones = find_entry(entries, "meta.bones");
    if (bones.shape.size() != 2 || (bones.shape.size() == 2 && bones.shape[1] != 2))
        throw std::runtime_error("checkpoint: meta.bones has wrong shape");
    for (int i = 0; i < bones.shape[0]; ++i)
        cfg.topology.bones.push_back({static_cast<int>(bones.values[2 * i]),
                                      static_cast<int>(bones.values[2 * i + 1])});
    cfg.in_channels = static_cast<int>(find_scalar(entries, "meta.in_channels"));
    cfg.class_count = static_cast<int>(find_scalar(entries, "meta.class_count"));
    cfg.temporal_kernel = static_cast<int>(find_scalar(entries, "meta.temporal_kernel"));
    cfg.spatial_hops = static_cast<int>(find_scalar(entries, "meta.spatial_hops"));
    cfg.temporal_hops = static_cast<int>(find_scalar(entries, "meta.temporal_hops"));
    cfg.tem_mode = static_cast<TemMode>(static_cast<int>(find_scalar(entries, "meta.tem_mode")));
    cfg.tem_trainable = find_scalar(entries, "meta.tem_trainable") != 0.0;
    cfg.epsilon = find_scalar(entries, "meta.epsilon");
    cfg.seed = (static_cast<std::uint64_t>(find_scalar(entries, "meta.seed_hi")) << 32) |
               static_cast<std::uint64_t>(find_scalar(entries, "meta.seed_lo"));
    const NamedEntry& ch = find_entry(entries, "meta.channels");
    const NamedEntry& st = find_entry(entries, "meta.strides");
    if (ch.values.size() != st.values.size())
        throw std::runtime_error("checkpoint: channels/strides length mismatch");
    for (std::size_t i = 0; i < ch.values.size(); ++i)
        cfg.layers.push_back({static_cast<int>(ch.values[i]), static_cast<int>(st.values[i])});

    Model model = make_model(cfg);
    for (const ParamSlot& slot : param_slots(model)) {
        const NamedEntry& e = find_entry(entries, slot.name);
        if (e.shape != slot.shape)
            throw std::runtime_error("checkpoint: entry '" + slot.name + "' has wrong shape");
        *slot.data = e.values;
    }
    return model;
}

inline void save_model(const std::string& path, const Model& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    write_checkpoint(out, model_to_entries(model));
}

inline Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    return model_from_entries(read_checkpoint(in));
}

}  // namespace stgcn
