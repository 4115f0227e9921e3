#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trunctail/burr.hpp"

namespace trunctail {

/// Order-statistic view of a truncated sample with the Lynden-Bell and
/// Woodroofe product-limit estimators evaluated at every X_{i:n}.
///
/// Index i below is 0-based, so x_order()[i] is X_{i+1:n}.
///
///   C_n(x)     = n^{-1} #{j : X_j <= x <= Y_j}
///   F^LB(x)    = prod_{j : X_j > x} (1 - 1/(n C_n(X_j)))
///   F^W(x)     = prod_{j : X_j > x} exp(-1/(n C_n(X_j)))
///
/// Ties in X are kept (stable sort); the products run over observations
/// strictly greater than the evaluation point.
class SortedSample {
public:
    std::size_t n() const noexcept { return x_.size(); }

    std::span<const double> x_order() const noexcept { return x_; }
    std::span<const double> y_co() const noexcept { return y_; }
    /// n * C_n(X_{i:n}); always >= 1.
    std::span<const std::size_t> at_risk() const noexcept { return at_risk_; }
    std::span<const double> flb_at_order() const noexcept { return flb_; }
    std::span<const double> fw_at_order() const noexcept { return fw_; }

    double cn_at(std::size_t i) const { return static_cast<double>(at_risk_[i]) / static_cast<double>(n()); }

    /// Empirical df of the observed X at x.
    double fn(double x) const;
    /// C_n(x) at an arbitrary point.
    double cn(double x) const;

    /// First sorted index whose X is strictly greater than x (n if none).
    std::size_t first_above(double x) const;

    /// F^LB / F^W at an arbitrary point.
    double lynden_bell(double x) const;
    double woodroofe(double x) const;

    /// Number of zero Lynden-Bell factors (n C_n = 1) among sorted indices >= from.
    std::size_t zero_factors_from(std::size_t from) const;

private:
    friend SortedSample build_sorted(const TruncatedSample& sample);

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> y_sorted_;
    std::vector<std::size_t> at_risk_;
    std::vector<double> flb_;
    std::vector<double> fw_;
    // lb_tail_[m] = product of LB factors over sorted indices m..n-1; size n+1
    std::vector<double> lb_tail_;
    // hazard_tail_[m] = sum of 1/(n C_n) over sorted indices m..n-1; size n+1
    std::vector<double> hazard_tail_;
    // zero_tail_[m] = number of zero LB factors over sorted indices m..n-1
    std::vector<std::size_t> zero_tail_;
};

/// O(n log n) construction.
SortedSample build_sorted(const TruncatedSample& sample);

double lynden_bell_cdf(const SortedSample& s, double x);
double woodroofe_cdf(const SortedSample& s, double x);

/// Which product-limit estimator supplies the jumps.
enum class ProductLimit { LyndenBell, Woodroofe };

/// Jump weight F(X_{i:n}) / (n C_n(X_{i:n})) at sorted index i.
double jump_weight(const SortedSample& s, ProductLimit kind, std::size_t i);

/// Survival of the product-limit estimator at X_{n-k:n} in sum form,
///   (1/n) sum_{i=1}^k F(X_{n-i+1:n}) / C_n(X_{n-i+1:n}).
/// Requires 1 <= k <= n-1.
double survival_at_kth(const SortedSample& s, ProductLimit kind, std::size_t k);

inline double lb_survival_at_kth(const SortedSample& s, std::size_t k) {
    return survival_at_kth(s, ProductLimit::LyndenBell, k);
}

}  // namespace trunctail
