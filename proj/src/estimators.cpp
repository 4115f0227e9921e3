#include "trunctail/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "trunctail/errors.hpp"

namespace trunctail {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_k(std::size_t k, std::size_t n, std::size_t k_lo) {
    if (k < k_lo || k + 1 > n)
        throw DomainError("k=" + std::to_string(k) + " outside [" + std::to_string(k_lo) + ", " +
                          std::to_string(n == 0 ? 0 : n - 1) + "] for n=" + std::to_string(n));
}

EstimatorTag tag_of(ProductLimit kind) {
    return kind == ProductLimit::LyndenBell ? EstimatorTag::LB : EstimatorTag::W;
}

std::vector<double> positive_sorted(std::span<const double> xs) {
    std::vector<double> v(xs.begin(), xs.end());
    for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("tail data must be positive and finite");
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

std::string_view to_string(EstimatorTag tag) noexcept {
    switch (tag) {
        case EstimatorTag::LB: return "lb";
        case EstimatorTag::W: return "w";
        case EstimatorTag::WormsFixed: return "worms-fixed";
        case EstimatorTag::Hill: return "hill";
        case EstimatorTag::Ratio: return "ratio";
    }
    return "?";
}

std::optional<EstimatorTag> parse_estimator_tag(std::string_view text) noexcept {
    for (auto tag : {EstimatorTag::LB, EstimatorTag::W, EstimatorTag::WormsFixed, EstimatorTag::Hill,
                     EstimatorTag::Ratio})
        if (to_string(tag) == text) return tag;
    return std::nullopt;
}

double hill_estimator(std::span<const double> xs, std::size_t k) {
    const auto v = positive_sorted(xs);
    const std::size_t n = v.size();
    check_k(k, n, 1);
    const double thr = v[n - k - 1];
    double sum = 0.0;
    for (std::size_t i = 1; i <= k; ++i) sum += std::log(v[n - i] / thr);
    return sum / static_cast<double>(k);
}

WeightVector product_limit_weights(const SortedSample& s, ProductLimit kind, std::size_t k) {
    const std::size_t n = s.n();
    check_k(k, n, 1);
    WeightVector w;
    w.a.resize(k);
    double total = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        w.a[i - 1] = jump_weight(s, kind, n - i);
        total += w.a[i - 1];
    }
    if (!(total > 0.0)) throw DegenerateError("product-limit jump sum is zero");
    for (double& a : w.a) a /= total;
    return w;
}

TailEstimate product_limit_tail_index(const SortedSample& s, ProductLimit kind, std::size_t k) {
    const std::size_t n = s.n();
    check_k(k, n, 2);
    const auto x = s.x_order();
    const double thr = x[n - k - 1];

    // n Fbar(X_{n-k:n}) in jump-sum form, so the weights are an exact convex combination
    double denom = 0.0;
    double numer = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        const double w = jump_weight(s, kind, n - i);
        denom += w;
        numer += w * std::log(x[n - i] / thr);
    }
    if (!(denom > 0.0)) throw DegenerateError("product-limit survival at X_{n-k:n} is zero");

    TailEstimate est;
    est.gamma1_hat = numer / denom;
    est.estimator = tag_of(kind);
    est.k = k;
    est.threshold = thr;
    est.exceedances = n - s.first_above(thr);
    if (kind == ProductLimit::LyndenBell) est.degenerate_zero_factors = s.zero_factors_from(n - k - 1);
    return est;
}

TailEstimate worms_fixed_threshold(const SortedSample& s, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("threshold must be positive and finite");
    const std::size_t n = s.n();
    const std::size_t from = s.first_above(t);
    const std::size_t m = n - from;
    if (m < 2)
        throw DegenerateError("fewer than 2 observations exceed threshold " + std::to_string(t));
    const auto x = s.x_order();
    double denom = 0.0;
    double numer = 0.0;
    for (std::size_t i = n; i-- > from;) {
        const double w = jump_weight(s, ProductLimit::LyndenBell, i);
        denom += w;
        numer += w * std::log(x[i] / t);
    }
    if (!(denom > 0.0)) throw DegenerateError("Lynden-Bell survival at the threshold is zero");

    TailEstimate est;
    est.gamma1_hat = numer / denom;
    est.estimator = EstimatorTag::WormsFixed;
    est.threshold = t;
    est.exceedances = m;
    est.degenerate_zero_factors = s.zero_factors_from(from);
    return est;
}

double ratio_from_indices(double gamma_hat, double gamma2_hat) {
    if (!(gamma2_hat > gamma_hat))
        throw DegenerateError("ratio estimator needs gamma2_hat > gamma_hat");
    if (std::isinf(gamma2_hat)) return gamma_hat;
    return gamma_hat * gamma2_hat / (gamma2_hat - gamma_hat);
}

TailEstimate ratio_tail_index(const TruncatedSample& sample, std::size_t k_x, std::size_t k_y) {
    std::vector<double> xs, ys;
    xs.reserve(sample.n());
    ys.reserve(sample.n());
    for (const auto& p : sample.pairs()) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const double gamma_hat = hill_estimator(xs, k_x);
    const double gamma2_hat = hill_estimator(ys, k_y);

    std::sort(xs.begin(), xs.end());
    TailEstimate est;
    est.gamma1_hat = ratio_from_indices(gamma_hat, gamma2_hat);
    est.estimator = EstimatorTag::Ratio;
    est.k = k_x;
    est.threshold = xs[xs.size() - k_x - 1];
    est.exceedances = k_x;
    return est;
}

double asymptotic_sigma2(double gamma1, double gamma2) {
    if (!(gamma1 > 0.0) || !(gamma2 > gamma1))
        throw DomainError("asymptotic variance requires 0 < gamma1 < gamma2");
    const double gamma = gamma1 * gamma2 / (gamma1 + gamma2);
    const double r = gamma1 / gamma2;
    return gamma * gamma * (1.0 + r) * (1.0 + r * r) / std::pow(1.0 - r, 3);
}

ConfidenceInterval confidence_interval(const TailEstimate& est, double sigma2, double level,
                                       std::optional<std::size_t> count) {
    const std::optional<std::size_t> k = est.k ? est.k : count;
    if (!k) throw DomainError("confidence interval needs k or an exceedance count");
    if (*k < 2) throw DomainError("confidence interval needs k >= 2");
    if (!(level > 0.5 && level < 1.0)) throw DomainError("level must lie in (0.5, 1)");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("sigma2 must be positive");
    const boost::math::normal_distribution<double> std_normal;
    const double z = boost::math::quantile(std_normal, 0.5 * (1.0 + level));
    const double half = z * std::sqrt(sigma2 / static_cast<double>(*k));
    return {est.gamma1_hat - half, est.gamma1_hat + half, level};
}

double tail_process_lb(const SortedSample& s, std::size_t k, double x, double gamma1) {
    const std::size_t n = s.n();
    check_k(k, n, 2);
    if (!(x > 0.0)) throw DomainError("tail process argument must be positive");
    if (!(gamma1 > 0.0)) throw DomainError("gamma1 must be positive");

    const auto jump_sum_above = [&](double v) {
        double sum = 0.0;
        for (std::size_t i = n; i-- > s.first_above(v);) sum += jump_weight(s, ProductLimit::LyndenBell, i);
        return sum;
    };
    const double thr = s.x_order()[n - k - 1];
    const double base = jump_sum_above(thr);
    if (!(base > 0.0)) throw DegenerateError("Lynden-Bell survival at X_{n-k:n} is zero");
    const double ratio = x == 1.0 ? 1.0 : jump_sum_above(thr * x) / base;
    return std::sqrt(static_cast<double>(k)) * (ratio - std::pow(x, -1.0 / gamma1));
}

EstimatePath estimate_path(const SortedSample& s, ProductLimit kind, std::size_t k_min, std::size_t k_max) {
    const std::size_t n = s.n();
    if (k_max == 0) k_max = n >= 2 ? n - 1 : 0;
    if (k_min < 1 || k_min > k_max || k_max + 1 > n)
        throw DomainError("k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                          "] invalid for n=" + std::to_string(n));
    const auto x = s.x_order();

    EstimatePath path;
    path.k_min = k_min;
    path.values.resize(k_max - k_min + 1);
    long double jumps = 0.0L;
    long double weighted_logs = 0.0L;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double w = jump_weight(s, kind, n - k);
        jumps += w;
        weighted_logs += static_cast<long double>(w) * std::log(static_cast<long double>(x[n - k]));
        if (k < k_min) continue;
        path.values[k - k_min] =
            jumps > 0.0L
                ? static_cast<double>(weighted_logs / jumps - std::log(static_cast<long double>(x[n - k - 1])))
                : kNaN;
    }
    return path;
}

EstimatePath hill_path(std::span<const double> sorted_ascending, std::size_t k_min, std::size_t k_max) {
    const std::size_t n = sorted_ascending.size();
    if (k_max == 0) k_max = n >= 2 ? n - 1 : 0;
    if (k_min < 1 || k_min > k_max || k_max + 1 > n)
        throw DomainError("k range invalid for n=" + std::to_string(n));
    for (double v : sorted_ascending)
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("tail data must be positive and finite");

    EstimatePath path;
    path.k_min = k_min;
    path.values.resize(k_max - k_min + 1);
    long double logs = 0.0L;
    for (std::size_t k = 1; k <= k_max; ++k) {
        logs += std::log(static_cast<long double>(sorted_ascending[n - k]));
        if (k < k_min) continue;
        path.values[k - k_min] = static_cast<double>(
            logs / static_cast<long double>(k) - std::log(static_cast<long double>(sorted_ascending[n - k - 1])));
    }
    return path;
}

}  // namespace trunctail
