#pragma once

// Dense value types shared by every stage: a row-major matrix and a
// rank-3 feature tensor over (joint, frame, channel). All arithmetic in
// the project runs on 64-bit floats with a fixed accumulation order so
// repeated runs are bit-identical.

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stgcn {

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
        if (r < 0 || c < 0) throw std::invalid_argument("Matrix: negative extent");
    }

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
    static Matrix ones(int r, int c) { return Matrix(r, c, 1.0); }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

// Feature map of one skeleton sequence. Shape is (joints N, frames F,
// channels C); storage is frame-major: index (n, f, c) lives at
// (f*N + n)*C + c.
struct FeatureTensor {
    int joints = 0;
    int frames = 0;
    int channels = 0;
    std::vector<double> data;

    FeatureTensor() = default;
    FeatureTensor(int n, int f, int c, double fill = 0.0)
        : joints(n), frames(f), channels(c),
          data(static_cast<std::size_t>(n) * f * c, fill) {
        if (n < 0 || f < 0 || c < 0)
            throw std::invalid_argument("FeatureTensor: negative extent");
    }

    std::size_t index(int n, int f, int c) const {
        return (static_cast<std::size_t>(f) * joints + n) * channels + c;
    }
    double& at(int n, int f, int c) { return data[index(n, f, c)]; }
    double at(int n, int f, int c) const { return data[index(n, f, c)]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const FeatureTensor& o) const {
        return joints == o.joints && frames == o.frames && channels == o.channels;
    }
};

inline std::string shape_string(const Matrix& m) {
    std::ostringstream os;
    os << m.rows << "x" << m.cols;
    return os.str();
}

inline std::string shape_string(const FeatureTensor& t) {
    std::ostringstream os;
    os << "(" << t.joints << " joints, " << t.frames << " frames, " << t.channels
       << " channels)";
    return os.str();
}

// Plain matrix product. Accumulation is row-by-row, left to right.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw std::invalid_argument("matmul: shape mismatch " + shape_string(a) +
                                    " * " + shape_string(b));
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            double acc = 0.0;
            for (int k = 0; k < a.cols; ++k) acc += a.at(i, k) * b.at(k, j);
            out.at(i, j) = acc;
        }
    return out;
}

inline Matrix transpose(const Matrix& m) {
    Matrix out(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(j, i) = m.at(i, j);
    return out;
}

}  // namespace stgcn
