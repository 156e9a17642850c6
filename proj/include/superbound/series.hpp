#pragma once

#include "graded_core.hpp"

#include <vector>

namespace superbound {

/// Truncated power series sum_k c_k u^k with operator coefficients.
/// In the rational sector u = 1/lambda.
class OperatorSeries {
public:
    OperatorSeries() = default;
    OperatorSeries(std::vector<Mat> coeffs, int order) : c_(std::move(coeffs)), order_(order) {
        if (c_.empty()) throw std::invalid_argument("series needs a leading coefficient");
        const auto n = c_.front().rows();
        c_.resize(static_cast<std::size_t>(order_ + 1), Mat::Zero(n, n));
    }

    static OperatorSeries constant(const Mat& a, int order) { return OperatorSeries({a}, order); }

    int order() const { return order_; }
    Eigen::Index rows() const { return c_.front().rows(); }
    const Mat& coeff(int k) const { return c_.at(static_cast<std::size_t>(k)); }
    Mat& coeff(int k) { return c_.at(static_cast<std::size_t>(k)); }

    OperatorSeries operator+(const OperatorSeries& o) const {
        check(o);
        OperatorSeries r = *this;
        for (int k = 0; k <= order_; ++k) r.coeff(k) += o.coeff(k);
        return r;
    }

    OperatorSeries operator*(const OperatorSeries& o) const {
        check(o);
        OperatorSeries r({Mat::Zero(rows(), rows())}, order_);
        for (int i = 0; i <= order_; ++i) {
            if (max_abs(coeff(i)) == 0.0) continue;
            for (int j = 0; i + j <= order_; ++j) r.coeff(i + j) += coeff(i) * o.coeff(j);
        }
        return r;
    }

    OperatorSeries scaled(cplx s) const {
        OperatorSeries r = *this;
        for (auto& m : r.c_) m *= s;
        return r;
    }

    /// Inverse for an invertible leading coefficient, by the usual recursion.
    OperatorSeries inverse() const {
        Eigen::PartialPivLU<Mat> lu(coeff(0));
        const Mat a0i = lu.inverse();
        OperatorSeries r({a0i}, order_);
        for (int k = 1; k <= order_; ++k) {
            Mat acc = Mat::Zero(rows(), rows());
            for (int j = 1; j <= k; ++j) acc += coeff(j) * r.coeff(k - j);
            r.coeff(k) = -a0i * acc;
        }
        return r;
    }

    Mat evaluate(cplx u) const {
        Mat s = coeff(order_);
        for (int k = order_ - 1; k >= 0; --k) s = (s * u).eval() + coeff(k);
        return s;
    }

private:
    void check(const OperatorSeries& o) const {
        if (o.order_ != order_ || o.rows() != rows()) throw std::invalid_argument("series shape mismatch");
    }

    std::vector<Mat> c_;
    int order_ = 0;
};

}  // namespace superbound
