#include "trunctail/burr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "trunctail/errors.hpp"
#include "trunctail/rng.hpp"

namespace trunctail {

BurrModel::BurrModel(double delta, double gamma) : delta_(delta), gamma_(gamma) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw DomainError("Burr delta must be positive and finite, got " + std::to_string(delta));
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("Burr gamma must be positive and finite, got " + std::to_string(gamma));
}

double BurrModel::survival(double x) const {
    if (!(x >= 0.0)) throw DomainError("burr survival: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return std::exp(-(delta_ / gamma_) * std::log1p(std::pow(x, 1.0 / delta_)));
}

double BurrModel::quantile(double u) const {
    if (!(u > 0.0 && u <= 1.0)) throw DomainError("burr quantile: u must lie in (0, 1]");
    if (u == 1.0) return 0.0;
    // u^{-gamma/delta} - 1 via expm1 keeps precision for u close to 1
    const double base = std::expm1(-(gamma_ / delta_) * std::log(u));
    return std::pow(base, delta_);
}

double solve_gamma2(double gamma1, double p) {
    if (!(gamma1 > 0.0)) throw DomainError("gamma1 must be positive");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    return p * gamma1 / (1.0 - p);
}

TruncationScheme TruncationScheme::from_p(double gamma1, double p, double delta) {
    return TruncationScheme{BurrModel(delta, gamma1), BurrModel(delta, solve_gamma2(gamma1, p))};
}

TruncatedSample::TruncatedSample(std::vector<ObservedPair> pairs, std::optional<std::size_t> source_n)
    : pairs_(std::move(pairs)), source_n_(source_n) {
    if (pairs_.empty()) throw EmptySampleError("truncated sample has no observed pairs");
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const auto [x, y] = pairs_[i];
        if (!(x > 0.0) || !std::isfinite(x) || !std::isfinite(y) || !(x <= y))
            throw DomainError("pair " + std::to_string(i) + " violates 0 < x <= y");
    }
    if (source_n_ && *source_n_ < pairs_.size())
        throw DomainError("latent sample size smaller than observed count");
}

namespace {
constexpr std::uint64_t kStreamX = 0x58;  // 'X'
constexpr std::uint64_t kStreamY = 0x59;  // 'Y'
}  // namespace

TruncatedSample generate_truncated_sample(const TruncationScheme& scheme, std::size_t N,
                                          std::uint64_t seed) {
    if (N == 0) throw DomainError("latent sample size N must be >= 1");
    const CounterRng xs(mix_seed(seed, kStreamX));
    const CounterRng ys(mix_seed(seed, kStreamY));
    std::vector<ObservedPair> kept;
    kept.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = scheme.f.quantile(xs.uniform_at(i));
        // very light truncation (large gamma2) can overflow; saturate so Y stays finite
        const double y = std::min(scheme.g.quantile(ys.uniform_at(i)), std::numeric_limits<double>::max());
        // x == 0 only when the uniform rounds to 1; the open-interval draw excludes it
        if (x <= y && x > 0.0) kept.push_back({x, y});
    }
    if (kept.empty())
        throw EmptySampleError("no pair survived truncation (N=" + std::to_string(N) + ")");
    return TruncatedSample(std::move(kept), N);
}

}  // namespace trunctail
