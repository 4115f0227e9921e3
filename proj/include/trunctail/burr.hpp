#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace trunctail {

/// Burr XII law with survival (1 + x^{1/delta})^{-delta/gamma}, x >= 0.
/// `gamma` is the tail index: the survival function is regularly varying
/// with index -1/gamma.
class BurrModel {
public:
    BurrModel(double delta, double gamma);

    double delta() const noexcept { return delta_; }
    double gamma() const noexcept { return gamma_; }

    double survival(double x) const;
    /// Inverse of survival: returns x with survival(x) = u, for u in (0, 1].
    double quantile(double u) const;
    /// Second-order parameter of the tail quantile function, -gamma/delta.
    double second_order_tau() const noexcept { return -gamma_ / delta_; }

private:
    double delta_;
    double gamma_;
};

inline double burr_survival(const BurrModel& m, double x) { return m.survival(x); }
inline double burr_quantile(const BurrModel& m, double u) { return m.quantile(u); }
inline double burr_second_order_tau(const BurrModel& m) { return m.second_order_tau(); }

/// gamma2 such that p = gamma2 / (gamma1 + gamma2).
double solve_gamma2(double gamma1, double p);

/// Variable of interest X ~ f, truncation variable Y ~ g, X observed iff X <= Y.
struct TruncationScheme {
    BurrModel f;
    BurrModel g;

    /// P(X <= Y) for a matched-delta Burr pair.
    double truncation_probability() const noexcept {
        return g.gamma() / (f.gamma() + g.gamma());
    }
    /// Asymptotic normality of the tail estimators needs gamma1 < gamma2.
    bool normality_valid() const noexcept { return f.gamma() < g.gamma(); }

    static TruncationScheme from_p(double gamma1, double p, double delta = 0.25);
};

struct ObservedPair {
    double x;
    double y;
    friend bool operator==(const ObservedPair&, const ObservedPair&) = default;
};

/// Observed pairs (x <= y). `source_n` is the latent sample size when the
/// data were simulated.
class TruncatedSample {
public:
    explicit TruncatedSample(std::vector<ObservedPair> pairs,
                             std::optional<std::size_t> source_n = std::nullopt);

    const std::vector<ObservedPair>& pairs() const noexcept { return pairs_; }
    std::size_t n() const noexcept { return pairs_.size(); }
    std::optional<std::size_t> source_n() const noexcept { return source_n_; }

private:
    std::vector<ObservedPair> pairs_;
    std::optional<std::size_t> source_n_;
};

/// Draws N latent X from scheme.f and N latent Y from scheme.g by inverse
/// transform and keeps the pairs with X <= Y, in draw order. X_i and Y_i are
/// read from two independent counter streams keyed by `seed`, so the i-th
/// latent pair does not depend on N. Throws EmptySampleError if none survive.
TruncatedSample generate_truncated_sample(const TruncationScheme& scheme,
                                          std::size_t N, std::uint64_t seed);

}  // namespace trunctail
