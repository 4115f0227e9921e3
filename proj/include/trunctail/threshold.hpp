#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "trunctail/empirical.hpp"
#include "trunctail/estimators.hpp"

namespace trunctail {

inline constexpr double kDefaultTheta = 0.3;
/// Candidates below ceil(fraction * n) are not considered by select_k_for.
inline constexpr double kDefaultFloorFraction = 0.1;

struct SelectionOptions {
    double theta = kDefaultTheta;
    double floor_fraction = kDefaultFloorFraction;
};

struct KSelection {
    std::size_t k_star = 0;
    /// (k, criterion); NaN where the estimate at k is degenerate.
    std::vector<std::pair<std::size_t, double>> criterion;
    double theta = kDefaultTheta;
    std::size_t k_min = 0;
    std::size_t k_max = 0;
    std::size_t first_candidate = 0;  // smallest k eligible for k*
};

/// Reiss-Thomas choice of k over an estimate path:
///
///   k* = argmin_k  (1/k) sum_{i=k_min}^{k} i^theta |g(i) - med(g(k_min), ..., g(k))|
///
/// with the lower median for even counts and ties resolved to the smallest k.
/// Non-finite path entries are left out of medians and sums and are never
/// selected. The criterion is reported for every k of the path but k* is
/// searched over [first_candidate, k_max] only (0 means k_min). O(K log K)
/// via Fenwick trees keyed by value rank.
KSelection reiss_thomas_select(const EstimatePath& path, double theta = kDefaultTheta,
                               std::size_t first_candidate = 0);

/// First eligible k for a sample of n observations: the single-entry window
/// at k_min always scores zero, so it is skipped, and so are the
/// ceil(fraction * n) smallest k, whose estimates are dominated by noise.
std::size_t candidate_floor(std::size_t n, std::size_t k_min, double floor_fraction);

/// Path of a random-threshold estimator (LB, W or Hill on the observed X).
EstimatePath estimator_path(const SortedSample& s, EstimatorTag tag, std::size_t k_min = 2,
                            std::size_t k_max = 0);

/// Builds the estimator's path over [2, n-1] and applies reiss_thomas_select
/// with candidate_floor. Requires n >= 5.
KSelection select_k_for(const SortedSample& s, EstimatorTag tag, const SelectionOptions& options = {});

/// Hill path plus Reiss-Thomas choice on arbitrary positive data (e.g. the
/// observed truncation variable when plugging in gamma2).
std::pair<EstimatePath, KSelection> select_k_hill(std::span<const double> values,
                                                  const SelectionOptions& options = {});

}  // namespace trunctail
