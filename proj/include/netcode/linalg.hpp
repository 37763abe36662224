#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "netcode/error.hpp"
#include "netcode/field.hpp"

namespace netcode {

/// Dense row-major matrix over a finite field, entries stored as canonical values.
class FieldMatrix {
public:
    using Value = Field::Value;

    FieldMatrix() = default;
    FieldMatrix(Field field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static FieldMatrix identity(const Field& field, std::size_t n) {
        FieldMatrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    [[nodiscard]] const Field& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    Value& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Value operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] std::vector<Value> column(std::size_t c) const {
        std::vector<Value> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }
    void set_column(std::size_t c, std::span<const Value> v) {
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
    }

    [[nodiscard]] FieldMatrix select_columns(std::span<const std::size_t> cols) const {
        FieldMatrix out(field_, rows_, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t r = 0; r < rows_; ++r) out(r, j) = (*this)(r, cols[j]);
        return out;
    }

    friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
        if (!(a.field_ == b.field_)) throw Error(ErrorCode::SpecMismatch, "matrix product");
        if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidArgument, "matrix shapes do not conform");
        FieldMatrix out(a.field_, a.rows_, b.cols_);
        const Field& f = a.field_;
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Value aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
            }
        return out;
    }

    friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Reduced row echelon form in place; returns pivot columns.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t c = 0; c < cols_ && row < rows_; ++c) {
            std::size_t sel = row;
            while (sel < rows_ && (*this)(sel, c) == 0) ++sel;
            if (sel == rows_) continue;
            swap_rows(sel, row);
            const Value scale = field_.inv((*this)(row, c));
            for (std::size_t j = c; j < cols_; ++j) (*this)(row, j) = field_.mul((*this)(row, j), scale);
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == row) continue;
                const Value factor = (*this)(r, c);
                if (factor == 0) continue;
                for (std::size_t j = c; j < cols_; ++j)
                    (*this)(r, j) = field_.sub((*this)(r, j), field_.mul(factor, (*this)(row, j)));
            }
            pivots.push_back(c);
            ++row;
        }
        return pivots;
    }

    [[nodiscard]] std::size_t rank() const {
        FieldMatrix tmp = *this;
        return tmp.rref().size();
    }

    [[nodiscard]] std::size_t column_rank(std::span<const std::size_t> cols) const {
        return select_columns(cols).rank();
    }

    [[nodiscard]] std::optional<FieldMatrix> inverse() const {
        if (rows_ != cols_) return std::nullopt;
        FieldMatrix aug(field_, rows_, 2 * cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
            aug(r, cols_ + r) = field_.one();
        }
        const auto pivots = aug.rref();
        if (pivots.size() < rows_ || pivots.back() >= cols_) return std::nullopt;
        FieldMatrix out(field_, rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(r, c) = aug(r, cols_ + c);
        return out;
    }

private:
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }

    Field field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Value> data_;
};

/// Whether A x = b has a solution (A given by its columns).
inline bool is_consistent(const FieldMatrix& a, std::span<const Field::Value> b) {
    FieldMatrix aug(a.field(), a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r];
    }
    const auto pivots = aug.rref();
    return pivots.empty() || pivots.back() != a.cols();
}

/// The lexicographically smallest x (canonical element order, first coordinate most
/// significant) with A x = b, or nullopt when the system is inconsistent.
inline std::optional<std::vector<Field::Value>> solve_lexicographic(const FieldMatrix& a,
                                                                    std::span<const Field::Value> b) {
    const Field& f = a.field();
    if (!is_consistent(a, b)) return std::nullopt;
    std::vector<Field::Value> x(a.cols(), 0);
    std::vector<Field::Value> rhs(b.begin(), b.end());
    // Fix coordinates one at a time; the remaining columns must still reach the residual.
    for (std::size_t j = 0; j < a.cols(); ++j) {
        std::vector<std::size_t> rest;
        for (std::size_t c = j + 1; c < a.cols(); ++c) rest.push_back(c);
        const FieldMatrix tail = a.select_columns(rest);
        for (Field::Value v = 0; v < f.order(); ++v) {
            std::vector<Field::Value> residual(rhs);
            for (std::size_t r = 0; r < a.rows(); ++r) residual[r] = f.sub(residual[r], f.mul(v, a(r, j)));
            const bool ok = rest.empty() ? std::all_of(residual.begin(), residual.end(), [](auto e) { return e == 0; })
                                         : is_consistent(tail, residual);
            if (ok) {
                x[j] = v;
                rhs = std::move(residual);
                break;
            }
        }
    }
    return x;
}

}  // namespace netcode
