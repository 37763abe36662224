#pragma once

// Turning a GF(2) linear multicast into one over an arbitrary finite field:
// binary kernel matrix -> row-equivalent form with <= 2 ones per column -> signed
// (0, +-1) matrix with at most one +1 and one -1 per column -> entrywise image in GF(q).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "netcode/code.hpp"
#include "netcode/error.hpp"
#include "netcode/field.hpp"
#include "netcode/linalg.hpp"
#include "netcode/matroid.hpp"

namespace netcode {

/// Row-major matrix with one label per column.
template <class T>
struct LabeledMatrix {
    std::size_t rows = 0;
    std::vector<std::string> labels;
    std::vector<T> entries;

    LabeledMatrix() = default;
    LabeledMatrix(std::size_t r, std::vector<std::string> l)
        : rows(r), labels(std::move(l)), entries(rows * labels.size(), T{}) {}

    [[nodiscard]] std::size_t cols() const noexcept { return labels.size(); }
    T& operator()(std::size_t r, std::size_t c) { return entries[r * cols() + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return entries[r * cols() + c]; }

    [[nodiscard]] std::size_t column_weight(std::size_t c) const {
        std::size_t w = 0;
        for (std::size_t r = 0; r < rows; ++r) w += (*this)(r, c) != T{} ? 1 : 0;
        return w;
    }

    friend bool operator==(const LabeledMatrix&, const LabeledMatrix&) = default;
};

using BinaryMatrix = LabeledMatrix<std::uint8_t>;
using SignedMatrix = LabeledMatrix<int>;

/// Global kernels of a GF(2) code side by side, in network link order.
inline BinaryMatrix juxtapose_kernels(const LinearCode& code) {
    const Field& f = code.field();
    if (f.characteristic() != 2 || f.degree() != 1)
        throw Error(ErrorCode::NonBinaryField, "code is over GF(" + f.to_string() + ")");
    const auto& g = code.global();
    BinaryMatrix b(g.matrix.rows(), g.labels);
    for (std::size_t r = 0; r < b.rows; ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) = static_cast<std::uint8_t>(g.matrix(r, c));
    return b;
}

inline BinaryMatrix to_binary(const FieldMatrix& m, std::vector<std::string> labels) {
    BinaryMatrix b(m.rows(), std::move(labels));
    for (std::size_t r = 0; r < b.rows; ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) = static_cast<std::uint8_t>(m(r, c) & 1u);
    return b;
}

inline FieldMatrix to_field_matrix(const BinaryMatrix& b) {
    FieldMatrix m(Field::prime(2), b.rows, b.cols());
    for (std::size_t r = 0; r < b.rows; ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) m(r, c) = b(r, c) & 1u;
    return m;
}

struct GraphicForm {
    FieldMatrix transform;  // invertible omega x omega over GF(2)
    BinaryMatrix reduced;   // transform * input, at most two ones per column
};

/// Searches invertible binary transforms T (rows as bit masks over the input rows, ascending,
/// which makes the first hit the lexicographically smallest T) for one giving T*b at most two
/// ones per column. Throws NotGraphic when none exists and CapExceeded beyond `cap` rows.
inline GraphicForm graphic_row_reduce(const BinaryMatrix& b, std::size_t cap = 6) {
    const std::size_t omega = b.rows;
    if (omega > cap || omega > 16)
        throw Error(ErrorCode::CapExceeded, std::to_string(omega) + " rows exceed search cap " + std::to_string(cap));
    std::vector<std::uint32_t> columns;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        std::uint32_t mask = 0;
        for (std::size_t r = 0; r < omega; ++r)
            if (b(r, c) & 1u) mask |= 1u << r;
        if (mask != 0) columns.push_back(mask);
    }
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());

    const std::uint32_t limit = 1u << omega;
    std::vector<std::uint32_t> chosen;
    std::vector<std::uint8_t> weight(columns.size(), 0);

    // echelon basis of chosen rows keyed by leading bit, for independence tests
    auto independent = [&](std::uint32_t candidate) {
        std::vector<std::uint32_t> basis;
        for (auto r : chosen) {
            for (auto v : basis) r = std::min(r, r ^ v);
            if (r) basis.push_back(r);
        }
        for (auto v : basis) candidate = std::min(candidate, candidate ^ v);
        return candidate != 0;
    };

    auto search = [&](auto&& self, std::uint32_t from) -> bool {
        if (chosen.size() == omega) return true;
        for (std::uint32_t row = from; row < limit; ++row) {
            if (!independent(row)) continue;
            bool ok = true;
            std::size_t i = 0;
            for (; i < columns.size(); ++i) {
                weight[i] = static_cast<std::uint8_t>(weight[i] + (std::popcount(row & columns[i]) & 1));
                if (weight[i] > 2) {
                    ok = false;
                    ++i;
                    break;
                }
            }
            if (ok) {
                chosen.push_back(row);
                if (self(self, row + 1)) return true;
                chosen.pop_back();
            }
            for (std::size_t k = 0; k < i; ++k)
                weight[k] = static_cast<std::uint8_t>(weight[k] - (std::popcount(row & columns[k]) & 1));
        }
        return false;
    };
    if (!search(search, 1)) throw Error(ErrorCode::NotGraphic, "no row transform gives at most two ones per column");

    const Field gf2 = Field::prime(2);
    FieldMatrix t(gf2, omega, omega);
    for (std::size_t i = 0; i < omega; ++i)
        for (std::size_t j = 0; j < omega; ++j) t(i, j) = (chosen[i] >> j) & 1u;
    return {t, to_binary(t * to_field_matrix(b), b.labels)};
}

/// Weight-2 columns become +1 (lower-indexed row) / -1 (higher row); weight-1 columns keep +1.
inline SignedMatrix sign_to_tu(const BinaryMatrix& b) {
    SignedMatrix s(b.rows, b.labels);
    for (std::size_t c = 0; c < b.cols(); ++c) {
        if (b.column_weight(c) > 2)
            throw Error(ErrorCode::ColumnWeight, "column '" + b.labels[c] + "' has weight " +
                                                     std::to_string(b.column_weight(c)));
        bool first = true;
        for (std::size_t r = 0; r < b.rows; ++r)
            if (b(r, c) & 1u) {
                s(r, c) = first ? 1 : -1;
                first = false;
            }
    }
    return s;
}

inline long long integer_determinant(const std::vector<std::vector<long long>>& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    long long det = 0;
    for (std::size_t p = 0; p < n; ++p) {
        if (m[0][p] == 0) continue;
        std::vector<std::vector<long long>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<long long> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != p) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        det += (p % 2 == 0 ? 1 : -1) * m[0][p] * integer_determinant(minor);
    }
    return det;
}

namespace detail {

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Exhaustive total-unimodularity test over every square submatrix (exact integer determinants).
inline bool verify_tu(const SignedMatrix& s, std::size_t cap = 4) {
    const std::size_t limit = std::min(s.rows, s.cols());
    if (limit > cap)
        throw Error(ErrorCode::CapExceeded, "exhaustive TU check limited to " + std::to_string(cap) + " rows or columns");
    for (std::size_t k = 1; k <= limit; ++k) {
        std::vector<std::size_t> rows(k);
        std::iota(rows.begin(), rows.end(), 0);
        do {
            std::vector<std::size_t> cols(k);
            std::iota(cols.begin(), cols.end(), 0);
            do {
                std::vector<std::vector<long long>> sub(k, std::vector<long long>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) sub[i][j] = s(rows[i], cols[j]);
                if (std::llabs(integer_determinant(sub)) > 1) return false;
            } while (detail::next_combination(cols, s.cols()));
        } while (detail::next_combination(rows, s.rows));
    }
    return true;
}

/// Rank over the rationals of the selected integer columns (fraction-free elimination).
inline std::size_t rational_column_rank(const SignedMatrix& s, const std::vector<std::size_t>& cols) {
    std::vector<std::vector<long long>> m(s.rows, std::vector<long long>(cols.size()));
    for (std::size_t r = 0; r < s.rows; ++r)
        for (std::size_t j = 0; j < cols.size(); ++j) m[r][j] = s(r, cols[j]);
    std::size_t rank = 0;
    long long prev = 1;
    for (std::size_t c = 0; c < cols.size() && rank < s.rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < s.rows && m[pivot][c] == 0) ++pivot;
        if (pivot == s.rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < s.rows; ++r) {
            for (std::size_t j = c + 1; j < cols.size(); ++j)
                m[r][j] = (m[rank][c] * m[r][j] - m[r][c] * m[rank][j]) / prev;
            m[r][c] = 0;
        }
        prev = m[rank][c];
        ++rank;
    }
    return rank;
}

/// Column matroid of an integer matrix over the rationals.
inline Matroid rational_vector_matroid(const SignedMatrix& s) {
    return Matroid(s.labels, [s](const ElementSet& x) { return rational_column_rank(s, x) == x.size(); });
}

inline Matroid binary_vector_matroid(const BinaryMatrix& b) { return vector_matroid(to_field_matrix(b), b.labels); }

/// Entrywise image of the signed matrix in `field`; labels carried over.
inline GlobalKernelMatrix view_over_field(const SignedMatrix& s, const Field& field) {
    FieldMatrix m(field, s.rows, s.cols());
    for (std::size_t r = 0; r < s.rows; ++r)
        for (std::size_t c = 0; c < s.cols(); ++c) m(r, c) = field.from_signed(s(r, c));
    return {std::move(m), s.labels};
}

struct MatrixLift {
    GraphicForm graphic;
    SignedMatrix signed_matrix;
    GlobalKernelMatrix viewed;
};

/// Steps reduce / sign / view applied to a bare binary matrix (no topology).
inline MatrixLift lift_matrix(const BinaryMatrix& b, const Field& target, std::size_t cap = 6) {
    auto graphic = graphic_row_reduce(b, cap);
    auto signed_matrix = sign_to_tu(graphic.reduced);
    auto viewed = view_over_field(signed_matrix, target);
    return {std::move(graphic), std::move(signed_matrix), std::move(viewed)};
}

struct LiftResult {
    GraphicForm graphic;
    SignedMatrix signed_matrix;
    GlobalKernelMatrix viewed;     // signed matrix read over the target field
    FieldMatrix normalizer;        // inverse of the viewed imaginary columns
    LinearCode lifted;             // global kernels = normalizer * viewed
    bool matroid_checked = false;  // basis-family comparison ran (<= 20 columns)
};

/// Lifts a GF(2) linear multicast to `target`. The viewed matrix is left-multiplied by the inverse of
/// its imaginary columns so those become the standard basis again; local kernels are then recovered
/// link by link. Postconditions (multicast over `target`, unchanged column matroid) are checked.
inline LiftResult lift_solution(const LinearCode& code, const Field& target, std::size_t cap = 6) {
    const auto& n = code.network();
    auto binary = juxtapose_kernels(code);
    if (!verify_multicast(code))
        throw Error(ErrorCode::InvalidArgument, "input code is not a linear multicast");

    auto pieces = lift_matrix(binary, target, cap);
    const FieldMatrix imaginary = pieces.viewed.matrix.select_columns(n.imaginary_links());
    auto normalizer = imaginary.inverse();
    if (!normalizer)
        throw Error(ErrorCode::RecoveryInfeasible, "imaginary columns are singular over GF(" + target.to_string() + ")");
    GlobalKernelMatrix kernels{*normalizer * pieces.viewed.matrix, pieces.viewed.labels};

    LinearCode lifted(code.network_ptr(), recover_local_kernels(n, kernels));
    if (!(lifted.global() == kernels))
        throw Error(ErrorCode::RecoveryInfeasible, "recovered local kernels do not reproduce the lifted kernels");
    if (auto verdict = verify_multicast(lifted); !verdict) {
        std::string nodes;
        for (const auto& v : verdict.failing) nodes += (nodes.empty() ? "" : ",") + v;
        throw Error(ErrorCode::RecoveryInfeasible, "lifted code fails multicast at " + nodes);
    }
    bool checked = false;
    if (kernels.labels.size() <= EnumerationBudget{}.max_ground) {
        const Matroid before = binary_vector_matroid(pieces.graphic.reduced);
        const Matroid after = vector_matroid(kernels.matrix, kernels.labels);
        if (!matroids_equal(before, after))
            throw Error(ErrorCode::RecoveryInfeasible, "lift changed the column matroid");
        checked = true;
    }
    return {std::move(pieces.graphic), std::move(pieces.signed_matrix), std::move(pieces.viewed), std::move(*normalizer),
            std::move(lifted), checked};
}

}  // namespace netcode
