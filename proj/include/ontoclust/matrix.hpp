#ifndef ONTOCLUST_MATRIX_HPP
#define ONTOCLUST_MATRIX_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace ontoclust {

/// Dense row-major matrix of doubles. Rows are records, columns are features.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (values_.size() != rows_ * cols_) {
            throw InvariantError("matrix storage size " + std::to_string(values_.size()) +
                                 " does not match " + std::to_string(rows_) + "x" + std::to_string(cols_));
        }
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        Matrix out;
        out.rows_ = rows.size();
        out.cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
        out.values_.reserve(out.rows_ * out.cols_);
        for (const auto& row : rows) {
            if (row.size() != out.cols_) {
                throw InvariantError("ragged matrix literal");
            }
            out.values_.insert(out.values_.end(), row.begin(), row.end());
        }
        return out;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return values_.empty(); }

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return values_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return values_[r * cols_ + c];
    }

    std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    bool all_finite() const {
        for (double v : values_) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) {
        s.add(x);
    }
    return s.value();
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return acc;
}

} // namespace ontoclust

#endif // ONTOCLUST_MATRIX_HPP
