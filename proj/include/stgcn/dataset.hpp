#pragma once

// Labeled skeleton sequences and the sequence file format: magic "SKSQ",
// version byte 0x01, little-endian u32 sample count, u32 joints, u32
// frames, u32 channels, u32 class count; per sample a u32 label, a u16
// id length plus the UTF-8 id, then joints*frames*channels values as
// 64-bit little-endian IEEE-754 in frame-major order.
//
// The synthetic generator stands in for motion-capture data at desk
// scale: each class is a deterministic motion template over a fixed base
// pose, with optional Gaussian noise on top. Coordinates stay roughly in
// [-1, 1].

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stgcn/binary_io.hpp"
#include "stgcn/rng.hpp"
#include "stgcn/tensor.hpp"
#include "stgcn/topology.hpp"

namespace stgcn {

struct SkeletonSequenceSample {
    FeatureTensor features;
    int label = 0;
    std::string sample_id;
};

struct Dataset {
    int joints = 0;
    int frames = 0;
    int channels = 0;
    int class_count = 0;
    std::vector<SkeletonSequenceSample> samples;
};

inline void validate_dataset(const Dataset& d) {
    for (const SkeletonSequenceSample& s : d.samples) {
        if (s.label < 0 || s.label >= d.class_count)
            throw std::invalid_argument("dataset: sample '" + s.sample_id + "' label " +
                                        std::to_string(s.label) + " outside class count " +
                                        std::to_string(d.class_count));
        if (s.features.joints != d.joints || s.features.frames != d.frames ||
            s.features.channels != d.channels)
            throw std::invalid_argument("dataset: sample '" + s.sample_id +
                                        "' shape does not match header");
    }
}

inline void write_sequence_file(std::ostream& out, const Dataset& d) {
    validate_dataset(d);
    out.write("SKSQ", 4);
    out.put(0x01);
    io_detail::put_u32(out, static_cast<std::uint32_t>(d.samples.size()));
    io_detail::put_u32(out, static_cast<std::uint32_t>(d.joints));
    io_detail::put_u32(out, static_cast<std::uint32_t>(d.frames));
    io_detail::put_u32(out, static_cast<std::uint32_t>(d.channels));
    io_detail::put_u32(out, static_cast<std::uint32_t>(d.class_count));
    for (const SkeletonSequenceSample& s : d.samples) {
        io_detail::put_u32(out, static_cast<std::uint32_t>(s.label));
        io_detail::put_u16(out, static_cast<std::uint16_t>(s.sample_id.size()));
        out.write(s.sample_id.data(), static_cast<std::streamsize>(s.sample_id.size()));
        for (double v : s.features.data) io_detail::put_f64(out, v);
    }
    if (!out) throw std::runtime_error("sequence file: write failed");
}

inline Dataset read_sequence_file(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::string(magic, 4) != "SKSQ")
        throw std::runtime_error("sequence file: bad magic (not a SKSQ file)");
    int version = in.get();
    if (version != 0x01)
        throw std::runtime_error("sequence file: unsupported version " + std::to_string(version));
    Dataset d;
    std::uint32_t count = io_detail::get_u32(in, "sample count");
    d.joints = static_cast<int>(io_detail::get_u32(in, "joint count"));
    d.frames = static_cast<int>(io_detail::get_u32(in, "frame count"));
    d.channels = static_cast<int>(io_detail::get_u32(in, "channel count"));
    d.class_count = static_cast<int>(io_detail::get_u32(in, "class count"));
    const std::size_t per_sample =
        io_detail::checked_element_count({d.joints, d.frames, d.channels}, "sequence file");
    d.samples.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        SkeletonSequenceSample s;
        s.label = static_cast<int>(io_detail::get_u32(in, "sample label"));
        std::uint16_t id_len = io_detail::get_u16(in, "sample id length");
        s.sample_id = io_detail::get_string(in, id_len, "sample id");
        s.features = FeatureTensor(d.joints, d.frames, d.channels);
        for (std::size_t v = 0; v < per_sample; ++v)
            s.features.data[v] = io_detail::get_f64(in, "sample values");
        d.samples.push_back(std::move(s));
    }
    validate_dataset(d);
    return d;
}

inline void save_dataset(const std::string& path, const Dataset& d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open sequence file for writing: " + path);
    write_sequence_file(out, d);
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sequence file: " + path);
    return read_sequence_file(in);
}

// ---------------------------------------------------------------------------
// Synthetic data

namespace synth_detail {

// Deterministic base pose: joints spread along x by index, lifted along y
// by hop distance from the cog, with a small per-joint z offset.
inline std::vector<double> base_position(int joint, int channels, int joint_count,
                                         const HopDistanceTable& dist, int cog) {
    std::vector<double> pos(channels, 0.0);
    const double span = joint_count > 1 ? static_cast<double>(joint_count - 1) : 1.0;
    pos[0] = -0.5 + joint / span;
    int max_hop = 1;
    for (int j = 0; j < joint_count; ++j) max_hop = std::max(max_hop, dist.at(cog, j));
    if (channels > 1) pos[1] = -0.25 + 0.5 * dist.at(cog, joint) / max_hop;
    if (channels > 2) pos[2] = 0.2 * std::sin(1.7 * joint);
    return pos;
}

// Class motion templates. Classes 0 and 1 translate the whole skeleton
// along +x / -x; higher classes oscillate at a class-specific frequency
// and axis and swing the endpoints of one bone in opposite directions.
inline void apply_motion(std::vector<double>& pos, int cls, int joint, double tau,
                         const SkeletonTopology& topo) {
    const int channels = static_cast<int>(pos.size());
    if (cls == 0) {
        pos[0] += 0.4 * tau;
    } else if (cls == 1) {
        pos[0] -= 0.4 * tau;
    } else {
        const double freq = cls;  // 2, 3, ...
        const int axis = cls % channels;
        const double phase = 0.7 * cls;
        pos[axis] += 0.3 * std::sin(6.283185307179586 * freq * tau + phase);
        const auto& bone = topo.bones[(cls - 2) % topo.bones.size()];
        const int y_axis = channels > 1 ? 1 : 0;
        if (joint == bone.first) pos[y_axis] += 0.25 * std::sin(6.283185307179586 * freq * tau);
        if (joint == bone.second) pos[y_axis] -= 0.25 * std::sin(6.283185307179586 * freq * tau);
    }
}

}  // namespace synth_detail

// The noise-free feature values of one class template, shared by every
// sample of that class.
inline FeatureTensor class_template(const SkeletonTopology& topo, const HopDistanceTable& dist,
                                    int cls, int frames, int channels) {
    FeatureTensor t(topo.joint_count, frames, channels);
    for (int f = 0; f < frames; ++f) {
        const double tau = frames > 1 ? static_cast<double>(f) / (frames - 1) : 0.0;
        for (int j = 0; j < topo.joint_count; ++j) {
            std::vector<double> pos = synth_detail::base_position(j, channels, topo.joint_count,
                                                                  dist, topo.cog_joint);
            synth_detail::apply_motion(pos, cls, j, tau, topo);
            for (int c = 0; c < channels; ++c) t.at(j, f, c) = pos[c];
        }
    }
    return t;
}

inline Dataset generate_synthetic(const SkeletonTopology& topo, int class_count,
                                  int samples_per_class, int frames, int channels,
                                  double noise_sigma, std::uint64_t seed) {
    validate_topology(topo);
    if (class_count < 2)
        throw std::invalid_argument("generate_synthetic: class_count must be >= 2");
    if (samples_per_class < 1 || frames < 1 || channels < 1)
        throw std::invalid_argument("generate_synthetic: counts must be positive");
    HopDistanceTable dist = path_distance(topo);
    Dataset d;
    d.joints = topo.joint_count;
    d.frames = frames;
    d.channels = channels;
    d.class_count = class_count;
    Rng rng(seed);
    for (int cls = 0; cls < class_count; ++cls) {
        FeatureTensor tmpl = class_template(topo, dist, cls, frames, channels);
        for (int s = 0; s < samples_per_class; ++s) {
            SkeletonSequenceSample sample;
            sample.label = cls;
            sample.sample_id = "c" + std::to_string(cls) + "_s" + std::to_string(s);
            sample.features = tmpl;
            if (noise_sigma > 0.0)
                for (double& v : sample.features.data) v += noise_sigma * rng.gauss();
            d.samples.push_back(std::move(sample));
        }
    }
    return d;
}

}  // namespace stgcn
