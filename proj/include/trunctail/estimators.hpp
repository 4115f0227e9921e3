#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trunctail/burr.hpp"
#include "trunctail/empirical.hpp"

namespace trunctail {

enum class EstimatorTag { LB, W, WormsFixed, Hill, Ratio };

std::string_view to_string(EstimatorTag tag) noexcept;
/// Accepts the CLI spellings: lb, w, worms-fixed, hill, ratio.
std::optional<EstimatorTag> parse_estimator_tag(std::string_view text) noexcept;

struct ConfidenceInterval {
    double lower;
    double upper;
    double level;
};

struct TailEstimate {
    double gamma1_hat = 0.0;
    EstimatorTag estimator = EstimatorTag::LB;
    std::optional<std::size_t> k;      // absent for fixed-threshold estimates
    double threshold = 0.0;            // X_{n-k:n} or the fixed t
    std::size_t exceedances = 0;       // observations above the threshold
    std::size_t degenerate_zero_factors = 0;
    std::optional<ConfidenceInterval> ci;
};

struct WeightVector {
    std::vector<double> a;  // a[i-1] pairs with X_{n-i+1:n}
};

/// Hill estimator on the top k of `xs` (any order).
double hill_estimator(std::span<const double> xs, std::size_t k);

/// Normalized jump weights of the top k order statistics.
WeightVector product_limit_weights(const SortedSample& s, ProductLimit kind, std::size_t k);

inline WeightVector lb_weights(const SortedSample& s, std::size_t k) {
    return product_limit_weights(s, ProductLimit::LyndenBell, k);
}

/// Random-threshold integral estimator,
///   sum_{i=1}^k a_i log(X_{n-i+1:n} / X_{n-k:n}),
/// with a_i the normalized product-limit jumps. Requires 2 <= k <= n-1.
TailEstimate product_limit_tail_index(const SortedSample& s, ProductLimit kind, std::size_t k);

inline TailEstimate lb_tail_index(const SortedSample& s, std::size_t k) {
    return product_limit_tail_index(s, ProductLimit::LyndenBell, k);
}
inline TailEstimate woodroofe_tail_index(const SortedSample& s, std::size_t k) {
    return product_limit_tail_index(s, ProductLimit::Woodroofe, k);
}

/// Lynden-Bell integral over the observations strictly above a fixed t.
TailEstimate worms_fixed_threshold(const SortedSample& s, double t);

/// 1/gamma1 = 1/gamma - 1/gamma2; throws DegenerateError when gamma2_hat <= gamma_hat.
double ratio_from_indices(double gamma_hat, double gamma2_hat);

/// Hill on the observed X (index gamma of F) and on the observed Y (gamma2),
/// combined through ratio_from_indices.
TailEstimate ratio_tail_index(const TruncatedSample& sample, std::size_t k_x, std::size_t k_y);

/// Asymptotic variance of sqrt(k)(gamma1_hat - gamma1); needs 0 < gamma1 < gamma2.
double asymptotic_sigma2(double gamma1, double gamma2);

/// gamma1_hat +- z sqrt(sigma2 / k). Uses est.k, or `count` when est has no k.
/// The asymptotic bias term is ignored, so the interval is centered on the estimate.
ConfidenceInterval confidence_interval(const TailEstimate& est, double sigma2, double level,
                                       std::optional<std::size_t> count = std::nullopt);

/// Empirical tail Lynden-Bell process at x:
///   sqrt(k) (Fbar(X_{n-k:n} x) / Fbar(X_{n-k:n}) - x^{-1/gamma1}),
/// with Fbar evaluated as the jump sum above its argument.
double tail_process_lb(const SortedSample& s, std::size_t k, double x, double gamma1);

/// Estimates for every k in [k_min, k_max]; values[k - k_min]. A NaN entry
/// marks a k whose estimate is degenerate.
struct EstimatePath {
    std::size_t k_min = 0;
    std::vector<double> values;

    std::size_t k_max() const noexcept { return k_min + values.size() - 1; }
    double at(std::size_t k) const { return values.at(k - k_min); }
};

/// All-k path of the product-limit estimator in O(n) from prefix sums of the
/// jumps and of jump * log X. Default range is [2, n-1].
EstimatePath estimate_path(const SortedSample& s, ProductLimit kind, std::size_t k_min = 2,
                           std::size_t k_max = 0);

/// All-k Hill path over ascending-sorted positive values.
EstimatePath hill_path(std::span<const double> sorted_ascending, std::size_t k_min = 2,
                       std::size_t k_max = 0);

}  // namespace trunctail
