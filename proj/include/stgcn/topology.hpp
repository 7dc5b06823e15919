#pragma once

// Skeleton graphs: joints as vertices, bones as undirected edges, plus a
// designated center-of-gravity joint that orients the neighbor
// partition. Hop distances between joints drive both the spatial and the
// inter-frame sampling areas.

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stgcn {

struct SkeletonTopology {
    int joint_count = 0;
    std::vector<std::pair<int, int>> bones;  // unordered pairs, stored i<j
    int cog_joint = 0;
    std::vector<std::string> joint_names;  // optional; empty or joint_count entries
};

struct HopDistanceTable {
    int joint_count = 0;
    std::vector<int> dist;  // row-major N*N

    int at(int i, int j) const { return dist[static_cast<std::size_t>(i) * joint_count + j]; }
    int& at(int i, int j) { return dist[static_cast<std::size_t>(i) * joint_count + j]; }
};

namespace detail {
inline std::string joint_label(const SkeletonTopology& t, int j) {
    if (j >= 0 && j < static_cast<int>(t.joint_names.size()) && !t.joint_names[j].empty())
        return t.joint_names[j] + " (#" + std::to_string(j) + ")";
    return "#" + std::to_string(j);
}
}  // namespace detail

// Checks the structural invariants: endpoints in range, no self-loops or
// duplicate bones, and every joint reachable from the cog joint. Throws
// on the first violation found.
inline void validate_topology(const SkeletonTopology& t) {
    if (t.joint_count <= 0)
        throw std::invalid_argument("topology: joint_count must be positive");
    if (t.cog_joint < 0 || t.cog_joint >= t.joint_count)
        throw std::invalid_argument("topology: cog joint " + std::to_string(t.cog_joint) +
                                    " out of range [0," + std::to_string(t.joint_count) + ")");
    if (!t.joint_names.empty() && static_cast<int>(t.joint_names.size()) != t.joint_count)
        throw std::invalid_argument("topology: joint_names length does not match joint_count");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : t.bones) {
        if (a < 0 || a >= t.joint_count || b < 0 || b >= t.joint_count)
            throw std::invalid_argument("topology: bone (" + std::to_string(a) + "," +
                                        std::to_string(b) + ") endpoint out of range");
        if (a == b)
            throw std::invalid_argument("topology: self-loop bone at joint " + std::to_string(a));
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second)
            throw std::invalid_argument("topology: duplicate bone (" + std::to_string(key.first) +
                                        "," + std::to_string(key.second) + ")");
    }
    // Reachability from the cog joint.
    std::vector<char> visited(t.joint_count, 0);
    std::vector<int> stack{t.cog_joint};
    visited[t.cog_joint] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [a, b] : t.bones) {
            int other = -1;
            if (a == v) other = b;
            else if (b == v) other = a;
            if (other >= 0 && !visited[other]) {
                visited[other] = 1;
                stack.push_back(other);
            }
        }
    }
    for (int j = 0; j < t.joint_count; ++j)
        if (!visited[j])
            throw std::invalid_argument("topology: joint " + detail::joint_label(t, j) +
                                        " is not reachable from the cog joint");
}

// All-pairs bone-path hop counts via Floyd-Warshall over hop weights.
// The test suite cross-checks this against a per-source breadth-first
// search written independently.
inline HopDistanceTable path_distance(const SkeletonTopology& t) {
    validate_topology(t);
    const int n = t.joint_count;
    const int inf = std::numeric_limits<int>::max() / 4;
    HopDistanceTable table;
    table.joint_count = n;
    table.dist.assign(static_cast<std::size_t>(n) * n, inf);
    for (int i = 0; i < n; ++i) table.at(i, i) = 0;
    for (auto [a, b] : t.bones) {
        table.at(a, b) = 1;
        table.at(b, a) = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int via = table.at(i, k) + table.at(k, j);
                if (via < table.at(i, j)) table.at(i, j) = via;
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (table.at(i, j) >= inf)
                throw std::invalid_argument("topology: joint " + detail::joint_label(t, j) +
                                            " unreachable from joint " + detail::joint_label(t, i));
    return table;
}

// ---------------------------------------------------------------------------
// Built-in skeleton formats and small test graphs.

// 25-joint Kinect v2 skeleton. Bones follow the published joint pairs;
// the cog defaults to the mid-spine joint.
inline SkeletonTopology ntu25_topology() {
    SkeletonTopology t;
    t.joint_count = 25;
    t.cog_joint = 1;  // mid spine
    t.bones = {
        {0, 1},   {1, 20},  {2, 20},  {3, 2},   {4, 20},  {5, 4},
        {6, 5},   {7, 6},   {8, 20},  {9, 8},   {10, 9},  {11, 10},
        {12, 0},  {13, 12}, {14, 13}, {15, 14}, {16, 0},  {17, 16},
        {18, 17}, {19, 18}, {21, 22}, {22, 7},  {23, 24}, {24, 11},
    };
    t.joint_names = {
        "base_spine", "mid_spine",  "neck",       "head",       "l_shoulder",
        "l_elbow",    "l_wrist",    "l_hand",     "r_shoulder", "r_elbow",
        "r_wrist",    "r_hand",     "l_hip",      "l_knee",     "l_ankle",
        "l_foot",     "r_hip",      "r_knee",     "r_ankle",    "r_foot",
        "spine_shoulder", "l_hand_tip", "l_thumb", "r_hand_tip", "r_thumb",
    };
    return t;
}

// 18-joint OpenPose/COCO skeleton; cog defaults to the neck joint.
inline SkeletonTopology openpose18_topology() {
    SkeletonTopology t;
    t.joint_count = 18;
    t.cog_joint = 1;  // neck
    t.bones = {
        {4, 3},  {3, 2},  {7, 6},   {6, 5},   {13, 12}, {12, 11},
        {10, 9}, {9, 8},  {11, 5},  {8, 2},   {5, 1},   {2, 1},
        {0, 1},  {15, 0}, {14, 0},  {17, 15}, {16, 14},
    };
    t.joint_names = {
        "nose",    "neck",    "r_shoulder", "r_elbow", "r_wrist", "l_shoulder",
        "l_elbow", "l_wrist", "r_hip",      "r_knee",  "r_ankle", "l_hip",
        "l_knee",  "l_ankle", "r_eye",      "l_eye",   "r_ear",   "l_ear",
    };
    return t;
}

// Path graph 0-1-2-...-(n-1); cog at the middle joint.
inline SkeletonTopology chain_topology(int n) {
    SkeletonTopology t;
    t.joint_count = n;
    t.cog_joint = n / 2;
    for (int i = 0; i + 1 < n; ++i) t.bones.push_back({i, i + 1});
    return t;
}

// Star with joint 0 as hub; cog at the hub.
inline SkeletonTopology star_topology(int n) {
    SkeletonTopology t;
    t.joint_count = n;
    t.cog_joint = 0;
    for (int i = 1; i < n; ++i) t.bones.push_back({0, i});
    return t;
}

// ---------------------------------------------------------------------------
// Topology file: line-oriented text.
//   joints <N>
//   cog <index>
//   bone <i> <j>      (one per bone)
// '#' begins a comment line; blank lines are skipped.

inline SkeletonTopology parse_topology(std::istream& in) {
    SkeletonTopology t;
    bool have_joints = false, have_cog = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        auto first = trimmed.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (trimmed[first] == '#') continue;
        std::istringstream ls(trimmed);
        std::string word;
        ls >> word;
        auto want_int = [&](const char* what) {
            long long v;
            if (!(ls >> v))
                throw std::invalid_argument("topology file line " + std::to_string(line_no) +
                                            ": expected integer after '" + what + "'");
            return static_cast<int>(v);
        };
        if (word == "joints") {
            if (have_joints)
                throw std::invalid_argument("topology file line " + std::to_string(line_no) +
                                            ": repeated 'joints' line");
            t.joint_count = want_int("joints");
            have_joints = true;
        } else if (word == "cog") {
            if (!have_joints)
                throw std::invalid_argument("topology file: 'cog' before 'joints'");
            t.cog_joint = want_int("cog");
            have_cog = true;
        } else if (word == "bone") {
            if (!have_cog)
                throw std::invalid_argument("topology file: 'bone' before 'cog'");
            int a = want_int("bone");
            int b = want_int("bone");
            t.bones.push_back({a, b});
        } else {
            throw std::invalid_argument("topology file line " + std::to_string(line_no) +
                                        ": unknown directive '" + word + "'");
        }
    }
    if (!have_joints) throw std::invalid_argument("topology file: missing 'joints' line");
    if (!have_cog) throw std::invalid_argument("topology file: missing 'cog' line");
    validate_topology(t);
    return t;
}

inline SkeletonTopology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology file: " + path);
    return parse_topology(in);
}

// Resolves a user-facing topology argument: a built-in name or a file path.
inline SkeletonTopology resolve_topology(const std::string& name_or_path) {
    if (name_or_path == "ntu25") return ntu25_topology();
    if (name_or_path == "openpose18") return openpose18_topology();
    return load_topology(name_or_path);
}

}  // namespace stgcn
