#include "trunctail/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trunctail/errors.hpp"

namespace trunctail {

SortedSample build_sorted(const TruncatedSample& sample) {
    const auto& pairs = sample.pairs();
    const std::size_t n = pairs.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pairs[a].x < pairs[b].x; });

    SortedSample s;
    s.x_.resize(n);
    s.y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.x_[i] = pairs[order[i]].x;
        s.y_[i] = pairs[order[i]].y;
    }
    s.y_sorted_ = s.y_;
    std::sort(s.y_sorted_.begin(), s.y_sorted_.end());

    // n C_n(x) = #{X_j <= x} - #{Y_j < x}, because Y_j < x forces X_j <= x.
    s.at_risk_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto le = static_cast<std::size_t>(
            std::upper_bound(s.x_.begin(), s.x_.end(), s.x_[i]) - s.x_.begin());
        const auto below = static_cast<std::size_t>(
            std::lower_bound(s.y_sorted_.begin(), s.y_sorted_.end(), s.x_[i]) - s.y_sorted_.begin());
        s.at_risk_[i] = le - below;
    }

    s.lb_tail_.assign(n + 1, 1.0);
    s.hazard_tail_.assign(n + 1, 0.0);
    s.zero_tail_.assign(n + 1, 0);
    for (std::size_t m = n; m-- > 0;) {
        const double inv = 1.0 / static_cast<double>(s.at_risk_[m]);
        s.lb_tail_[m] = s.lb_tail_[m + 1] * (1.0 - inv);
        s.hazard_tail_[m] = s.hazard_tail_[m + 1] + inv;
        s.zero_tail_[m] = s.zero_tail_[m + 1] + (s.at_risk_[m] == 1 ? 1 : 0);
    }

    s.flb_.resize(n);
    s.fw_.resize(n);
    // walk tie groups from the top; all members share the product over larger X
    std::size_t hi = n;
    while (hi > 0) {
        std::size_t lo = hi - 1;
        while (lo > 0 && s.x_[lo - 1] == s.x_[hi - 1]) --lo;
        for (std::size_t i = lo; i < hi; ++i) {
            s.flb_[i] = s.lb_tail_[hi];
            s.fw_[i] = std::exp(-s.hazard_tail_[hi]);
        }
        hi = lo;
    }
    return s;
}

std::size_t SortedSample::first_above(double x) const {
    return static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
}

double SortedSample::fn(double x) const {
    return static_cast<double>(first_above(x)) / static_cast<double>(n());
}

double SortedSample::cn(double x) const {
    const auto below = static_cast<std::size_t>(
        std::lower_bound(y_sorted_.begin(), y_sorted_.end(), x) - y_sorted_.begin());
    return static_cast<double>(first_above(x) - below) / static_cast<double>(n());
}

double SortedSample::lynden_bell(double x) const { return lb_tail_[first_above(x)]; }

double SortedSample::woodroofe(double x) const { return std::exp(-hazard_tail_[first_above(x)]); }

std::size_t SortedSample::zero_factors_from(std::size_t from) const {
    return from >= n() ? 0 : zero_tail_[from];
}

double lynden_bell_cdf(const SortedSample& s, double x) { return s.lynden_bell(x); }

double woodroofe_cdf(const SortedSample& s, double x) { return s.woodroofe(x); }

double jump_weight(const SortedSample& s, ProductLimit kind, std::size_t i) {
    const double f = kind == ProductLimit::LyndenBell ? s.flb_at_order()[i] : s.fw_at_order()[i];
    return f / static_cast<double>(s.at_risk()[i]);
}

double survival_at_kth(const SortedSample& s, ProductLimit kind, std::size_t k) {
    const std::size_t n = s.n();
    if (k < 1 || k >= n)
        throw DomainError("k must satisfy 1 <= k <= n-1 (k=" + std::to_string(k) +
                          ", n=" + std::to_string(n) + ")");
    double sum = 0.0;
    for (std::size_t i = 1; i <= k; ++i) sum += jump_weight(s, kind, n - i);
    return sum;
}

}  // namespace trunctail
