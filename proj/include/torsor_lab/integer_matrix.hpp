#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "torsor_lab/errors.hpp"

namespace torsor_lab {

using BigInt = boost::multiprecision::cpp_int;

/// Dense matrix of arbitrary-precision integers, row-major.
struct IntMatrix {
    int rows = 0, cols = 0;
    std::vector<BigInt> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    BigInt& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const BigInt& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols != o.rows) throw InputError("matrix dimension mismatch");
        IntMatrix r(rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                const BigInt& x = at(i, k);
                if (x == 0) continue;
                for (int j = 0; j < o.cols; ++j) r.at(i, j) += x * o.at(k, j);
            }
        return r;
    }

    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

/// U * M * W = S with U, W unimodular and S diagonal with the divisibility
/// chain d1 | d2 | ... (entries nonnegative).
struct SnfResult {
    IntMatrix u, s, w;
    std::vector<BigInt> diagonal;
};

/// Smith normal form by row/column reduction; pivots are chosen with minimal
/// absolute value to limit coefficient growth.
inline SnfResult smith_normal_form(IntMatrix m) {
    const int rows = m.rows, cols = m.cols;
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix w = IntMatrix::identity(cols);

    auto swap_rows = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < cols; ++k) std::swap(m.at(i, k), m.at(j, k));
        for (int k = 0; k < rows; ++k) std::swap(u.at(i, k), u.at(j, k));
    };
    auto swap_cols = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < rows; ++k) std::swap(m.at(k, i), m.at(k, j));
        for (int k = 0; k < cols; ++k) std::swap(w.at(k, i), w.at(k, j));
    };
    auto add_row = [&](int dst, int src, const BigInt& q) { // row dst += q * row src
        if (q == 0) return;
        for (int k = 0; k < cols; ++k) m.at(dst, k) += q * m.at(src, k);
        for (int k = 0; k < rows; ++k) u.at(dst, k) += q * u.at(src, k);
    };
    auto add_col = [&](int dst, int src, const BigInt& q) { // col dst += q * col src
        if (q == 0) return;
        for (int k = 0; k < rows; ++k) m.at(k, dst) += q * m.at(k, src);
        for (int k = 0; k < cols; ++k) w.at(k, dst) += q * w.at(k, src);
    };

    const int steps = std::min(rows, cols);
    for (int t = 0; t < steps; ++t) {
        for (;;) {
            int pi = -1, pj = -1;
            for (int i = t; i < rows; ++i)
                for (int j = t; j < cols; ++j) {
                    if (m.at(i, j) == 0) continue;
                    if (pi < 0 || abs(m.at(i, j)) < abs(m.at(pi, pj))) {
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) { t = steps; break; } // all zero: done
            swap_rows(t, pi);
            swap_cols(t, pj);

            bool dirty = false;
            for (int i = t + 1; i < rows; ++i) {
                if (m.at(i, t) == 0) continue;
                add_row(i, t, -(m.at(i, t) / m.at(t, t)));
                if (m.at(i, t) != 0) dirty = true;
            }
            for (int j = t + 1; j < cols; ++j) {
                if (m.at(t, j) == 0) continue;
                add_col(j, t, -(m.at(t, j) / m.at(t, t)));
                if (m.at(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // Pivot must divide the remaining submatrix for the chain d1 | d2 | ...
            bool fixed = true;
            for (int i = t + 1; i < rows && fixed; ++i)
                for (int j = t + 1; j < cols && fixed; ++j)
                    if (m.at(i, j) % m.at(t, t) != 0) {
                        add_row(t, i, 1);
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (t >= steps) break;
    }

    for (int t = 0; t < steps; ++t) {
        if (m.at(t, t) < 0) {
            for (int k = 0; k < cols; ++k) m.at(t, k) = -m.at(t, k);
            for (int k = 0; k < rows; ++k) u.at(t, k) = -u.at(t, k);
        }
    }

    SnfResult r;
    r.u = std::move(u);
    r.w = std::move(w);
    r.diagonal.reserve(steps);
    for (int t = 0; t < steps; ++t) r.diagonal.push_back(m.at(t, t));
    r.s = std::move(m);
    return r;
}

} // namespace torsor_lab
