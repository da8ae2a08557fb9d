#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sddpg {

using Vector = std::vector<double>;
using SpikeVector = std::vector<std::uint8_t>;

// Dense row-major matrix. All network weights use this.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return data.size(); }
};

// y = W x
inline void matvec(const Matrix& w, const double* x, double* y) {
    for (int i = 0; i < w.rows; ++i) {
        const double* wr = w.row(i);
        double acc = 0.0;
        for (int j = 0; j < w.cols; ++j) acc += wr[j] * x[j];
        y[i] = acc;
    }
}

// y += W o for binary o (spike vector); skips silent channels.
inline void matvec_spikes_add(const Matrix& w, const std::uint8_t* o, double* y) {
    for (int i = 0; i < w.rows; ++i) {
        const double* wr = w.row(i);
        double acc = 0.0;
        for (int j = 0; j < w.cols; ++j)
            if (o[j]) acc += wr[j];
        y[i] += acc;
    }
}

// y = W^T x
inline void matvec_transposed(const Matrix& w, const double* x, double* y) {
    for (int j = 0; j < w.cols; ++j) y[j] = 0.0;
    for (int i = 0; i < w.rows; ++i) {
        const double* wr = w.row(i);
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (int j = 0; j < w.cols; ++j) y[j] += wr[j] * xi;
    }
}

// m += u v^T
inline void outer_add(Matrix& m, const double* u, const double* v) {
    for (int i = 0; i < m.rows; ++i) {
        double* mr = m.row(i);
        const double ui = u[i];
        if (ui == 0.0) continue;
        for (int j = 0; j < m.cols; ++j) mr[j] += ui * v[j];
    }
}

// m += u o^T for binary o.
inline void outer_spikes_add(Matrix& m, const double* u, const std::uint8_t* o) {
    for (int i = 0; i < m.rows; ++i) {
        double* mr = m.row(i);
        const double ui = u[i];
        if (ui == 0.0) continue;
        for (int j = 0; j < m.cols; ++j)
            if (o[j]) mr[j] += ui;
    }
}

inline bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline bool all_finite(const Matrix& m) {
    for (double x : m.data)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace sddpg
