#pragma once

// Three-subset neighbor partition and its normalized adjacency stack.
// Every neighbor j of a root vertex i with hop distance <= D falls into
// exactly one subset: 0 the root itself, 1 neighbors strictly closer to
// the center of gravity (centripetal), 2 the remainder (centrifugal).
// The same rule serves the intra-frame and the inter-frame graph; only
// the kind tag differs.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "stgcn/tensor.hpp"
#include "stgcn/topology.hpp"

namespace stgcn {

inline constexpr int kSubsetCount = 3;        // K and K^T
inline constexpr double kDegreeEpsilon = 1e-6;

enum class PartitionKind { spatial, temporal };

struct PartitionedAdjacency {
    PartitionKind kind = PartitionKind::spatial;
    int joint_count = 0;
    std::vector<Matrix> subset_masks;  // K binary N x N
    std::vector<Matrix> normalized;    // K real N x N
    double epsilon = kDegreeEpsilon;
};

// Symmetric degree normalization per subset: out_k = L^-1/2 Abar_k L^-1/2
// with L diagonal, L[i][i] = row sum of Abar_k plus epsilon. Subset 0
// already carries the self-loops, so no identity is added here.
inline std::vector<Matrix> normalize_partition(const std::vector<Matrix>& masks,
                                               double epsilon) {
    if (epsilon <= 0.0)
        throw std::invalid_argument("normalize_partition: epsilon must be positive");
    std::vector<Matrix> out;
    out.reserve(masks.size());
    for (const Matrix& mask : masks) {
        if (mask.rows != mask.cols)
            throw std::invalid_argument("normalize_partition: mask not square: " +
                                        shape_string(mask));
        const int n = mask.rows;
        std::vector<double> inv_sqrt_deg(n);
        for (int i = 0; i < n; ++i) {
            double deg = 0.0;
            for (int j = 0; j < n; ++j) deg += mask.at(i, j);
            inv_sqrt_deg[i] = 1.0 / std::sqrt(deg + epsilon);
        }
        Matrix norm(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                norm.at(i, j) = inv_sqrt_deg[i] * mask.at(i, j) * inv_sqrt_deg[j];
        out.push_back(std::move(norm));
    }
    return out;
}

namespace detail {

inline PartitionedAdjacency build_partition(const SkeletonTopology& t, int max_hop,
                                            const HopDistanceTable& dist,
                                            PartitionKind kind, double epsilon) {
    if (max_hop < 1)
        throw std::invalid_argument("build_partition: max hop must be >= 1, got " +
                                    std::to_string(max_hop));
    if (dist.joint_count != t.joint_count)
        throw std::invalid_argument("build_partition: distance table size " +
                                    std::to_string(dist.joint_count) +
                                    " does not match joint count " +
                                    std::to_string(t.joint_count));
    const int n = t.joint_count;
    PartitionedAdjacency p;
    p.kind = kind;
    p.joint_count = n;
    p.epsilon = epsilon;
    p.subset_masks.assign(kSubsetCount, Matrix(n, n));
    for (int i = 0; i < n; ++i) {
        p.subset_masks[0].at(i, i) = 1.0;  // the root itself
        for (int j = 0; j < n; ++j) {
            int d = dist.at(i, j);
            if (d == 0 || d > max_hop) continue;
            // Equal cog distance counts as centrifugal.
            int label = dist.at(j, t.cog_joint) < dist.at(i, t.cog_joint) ? 1 : 2;
            p.subset_masks[label].at(i, j) = 1.0;
        }
    }
    p.normalized = normalize_partition(p.subset_masks, epsilon);
    return p;
}

}  // namespace detail

inline PartitionedAdjacency build_spatial_partition(const SkeletonTopology& t, int max_hop,
                                                    const HopDistanceTable& dist,
                                                    double epsilon = kDegreeEpsilon) {
    return detail::build_partition(t, max_hop, dist, PartitionKind::spatial, epsilon);
}

// Inter-frame variant: subsets of the same joints at the previous frame,
// labeled by the identical rule. Subset 0 is the same-joint connection
// across frames.
inline PartitionedAdjacency build_temporal_partition(const SkeletonTopology& t, int max_hop,
                                                     const HopDistanceTable& dist,
                                                     double epsilon = kDegreeEpsilon) {
    return detail::build_partition(t, max_hop, dist, PartitionKind::temporal, epsilon);
}

}  // namespace stgcn
