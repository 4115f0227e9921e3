#pragma once

// Test-only brute-force references. Nothing here calls into the library's
// estimator code paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "trunctail/burr.hpp"

namespace oracle {

using trunctail::ObservedPair;

inline double cn(const std::vector<ObservedPair>& s, double x) {
    std::size_t c = 0;
    for (const auto& p : s)
        if (p.x <= x && x <= p.y) ++c;
    return static_cast<double>(c) / static_cast<double>(s.size());
}

inline double lynden_bell(const std::vector<ObservedPair>& s, double x) {
    const double n = static_cast<double>(s.size());
    double prod = 1.0;
    for (const auto& p : s)
        if (p.x > x) prod *= 1.0 - 1.0 / (n * cn(s, p.x));
    return prod;
}

inline double woodroofe(const std::vector<ObservedPair>& s, double x) {
    const double n = static_cast<double>(s.size());
    double prod = 1.0;
    for (const auto& p : s)
        if (p.x > x) prod *= std::exp(-1.0 / (n * cn(s, p.x)));
    return prod;
}

inline std::vector<double> sorted_x(const std::vector<ObservedPair>& s) {
    std::vector<double> x;
    for (const auto& p : s) x.push_back(p.x);
    std::sort(x.begin(), x.end());
    return x;
}

// (1/n) sum_{X_i > t} F(X_i) / C_n(X_i), distinct X assumed
template <class Cdf>
double jump_sum_above(const std::vector<ObservedPair>& s, double t, Cdf cdf) {
    double sum = 0.0;
    for (const auto& p : s)
        if (p.x > t) sum += cdf(s, p.x) / cn(s, p.x);
    return sum / static_cast<double>(s.size());
}

// Direct form of the random-threshold estimator for distinct X.
template <class Cdf>
double integral_estimator(const std::vector<ObservedPair>& s, std::size_t k, Cdf cdf) {
    const auto x = sorted_x(s);
    const double thr = x[x.size() - k - 1];
    double num = 0.0, den = 0.0;
    for (const auto& p : s)
        if (p.x > thr) {
            const double w = cdf(s, p.x) / cn(s, p.x);
            num += w * std::log(p.x / thr);
            den += w;
        }
    return num / den;
}

inline double hill(std::vector<double> x, std::size_t k) {
    std::sort(x.begin(), x.end());
    const double thr = x[x.size() - k - 1];
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(x[x.size() - 1 - i] / thr);
    return sum / static_cast<double>(k);
}

// Naive O(K^2) Reiss-Thomas criterion over finite entries; values[j] is the estimate at k_min + j.
inline std::vector<double> rt_criterion(const std::vector<double>& values, std::size_t k_min, double theta) {
    std::vector<double> out;
    for (std::size_t j = 0; j < values.size(); ++j) {
        std::vector<double> window;
        for (std::size_t i = 0; i <= j; ++i)
            if (std::isfinite(values[i])) window.push_back(values[i]);
        if (!std::isfinite(values[j])) {
            out.push_back(NAN);
            continue;
        }
        std::sort(window.begin(), window.end());
        const double med = window[(window.size() + 1) / 2 - 1];
        double sum = 0.0;
        for (std::size_t i = 0; i <= j; ++i)
            if (std::isfinite(values[i]))
                sum += std::pow(static_cast<double>(k_min + i), theta) * std::abs(values[i] - med);
        out.push_back(sum / static_cast<double>(k_min + j));
    }
    return out;
}

inline std::size_t rt_argmin(const std::vector<double>& crit, std::size_t k_min) {
    std::size_t best = 0;
    double best_v = INFINITY;
    for (std::size_t j = 0; j < crit.size(); ++j)
        if (std::isfinite(crit[j]) && crit[j] < best_v) {
            best_v = crit[j];
            best = k_min + j;
        }
    return best;
}

// Random truncated sample of size n with distinct X; uses std::mt19937_64,
// independent of the library's generator.
inline std::vector<ObservedPair> random_truncated(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> ex(1.0);
    std::vector<ObservedPair> s;
    while (s.size() < n) {
        const double x = std::exp(ex(rng) * 0.7);
        const double y = std::exp(ex(rng) * 1.5);
        if (x <= y) s.push_back({x, y});
    }
    return s;
}

// Untruncated fixture: Pareto-like X, every Y = 2 max X.
inline std::vector<ObservedPair> complete_fixture(std::mt19937_64& rng, std::size_t n, double gamma = 0.5) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = std::pow(1.0 - u(rng), -gamma);
    const double ymax = 2.0 * *std::max_element(x.begin(), x.end());
    std::vector<ObservedPair> s;
    for (double v : x) s.push_back({v, ymax});
    return s;
}

}  // namespace oracle
