#include "trunctail/threshold.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "trunctail/errors.hpp"

namespace trunctail {

namespace {

// Fenwick tree of (count, weight, weight * value) keyed by 1-based rank.
class RankTree {
public:
    explicit RankTree(std::size_t size)
        : count_(size + 1, 0), weight_(size + 1, 0.0L), moment_(size + 1, 0.0L) {}

    void insert(std::size_t rank, long double w, long double v) {
        for (std::size_t i = rank; i < count_.size(); i += i & (~i + 1)) {
            ++count_[i];
            weight_[i] += w;
            moment_[i] += w * v;
        }
    }

    // (weight, weight * value) over ranks 1..rank
    std::pair<long double, long double> prefix(std::size_t rank) const {
        long double w = 0.0L, m = 0.0L;
        for (std::size_t i = rank; i > 0; i -= i & (~i + 1)) {
            w += weight_[i];
            m += moment_[i];
        }
        return {w, m};
    }

    // smallest rank whose prefix count reaches `target` (1-based)
    std::size_t find_kth(std::size_t target) const {
        std::size_t pos = 0;
        std::size_t step = std::bit_floor(count_.size() - 1);
        for (; step > 0; step >>= 1) {
            const std::size_t next = pos + step;
            if (next < count_.size() && count_[next] < target) {
                pos = next;
                target -= count_[next];
            }
        }
        return pos + 1;
    }

private:
    std::vector<std::size_t> count_;
    std::vector<long double> weight_;
    std::vector<long double> moment_;
};

}  // namespace

KSelection reiss_thomas_select(const EstimatePath& path, double theta, std::size_t first_candidate) {
    if (path.values.empty()) throw DomainError("Reiss-Thomas selection on an empty path");
    if (path.values.size() < 3) throw DomainError("Reiss-Thomas selection needs a path of length >= 3");
    if (!(theta >= 0.0 && theta <= 0.5)) throw DomainError("theta must lie in [0, 1/2]");
    const std::size_t len = path.values.size();

    // rank finite entries by (value, k)
    std::vector<std::size_t> finite;
    for (std::size_t j = 0; j < len; ++j)
        if (std::isfinite(path.values[j])) finite.push_back(j);
    if (finite.empty()) throw DegenerateError("every estimate on the path is degenerate");
    std::vector<std::size_t> by_value = finite;
    std::stable_sort(by_value.begin(), by_value.end(),
                     [&](std::size_t a, std::size_t b) { return path.values[a] < path.values[b]; });
    // deviations are accumulated relative to a reference value so that equal
    // entries cancel exactly
    const double ref = path.values[finite.front()];
    std::vector<std::size_t> rank(len, 0);
    std::vector<double> value_at_rank(by_value.size() + 1, 0.0);
    for (std::size_t r = 0; r < by_value.size(); ++r) {
        rank[by_value[r]] = r + 1;
        value_at_rank[r + 1] = path.values[by_value[r]];
    }

    KSelection sel;
    sel.theta = theta;
    sel.k_min = path.k_min;
    sel.k_max = path.k_max();
    sel.first_candidate = std::max(first_candidate, path.k_min);
    if (sel.first_candidate > sel.k_max) throw DomainError("first candidate k lies beyond the path");
    sel.criterion.reserve(len);

    RankTree tree(by_value.size());
    std::size_t inserted = 0;
    long double total_w = 0.0L, total_m = 0.0L;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < len; ++j) {
        const std::size_t k = path.k_min + j;
        if (rank[j] == 0) {
            sel.criterion.emplace_back(k, std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const long double w = std::pow(static_cast<long double>(k), static_cast<long double>(theta));
        const long double v = static_cast<long double>(path.values[j]) - ref;
        tree.insert(rank[j], w, v);
        total_w += w;
        total_m += w * v;
        ++inserted;

        const std::size_t med_rank = tree.find_kth((inserted + 1) / 2);
        const long double med = static_cast<long double>(value_at_rank[med_rank]) - ref;
        const auto [low_w, low_m] = tree.prefix(med_rank);
        const long double dev = (med * low_w - low_m) + ((total_m - low_m) - med * (total_w - low_w));
        const double crit = std::max(0.0, static_cast<double>(dev / static_cast<long double>(k)));
        sel.criterion.emplace_back(k, crit);
        if (k >= sel.first_candidate && crit < best) {
            best = crit;
            sel.k_star = k;
        }
    }
    if (sel.k_star == 0) throw DegenerateError("no finite estimate among the candidate k values");
    return sel;
}

std::size_t candidate_floor(std::size_t n, std::size_t k_min, double floor_fraction) {
    if (!(floor_fraction >= 0.0 && floor_fraction < 1.0)) throw DomainError("floor fraction must lie in [0, 1)");
    const auto scaled = static_cast<std::size_t>(std::ceil(floor_fraction * static_cast<double>(n)));
    const std::size_t k_max = n >= 2 ? n - 1 : 0;
    return std::min(std::max(k_min + 1, scaled), k_max);
}

EstimatePath estimator_path(const SortedSample& s, EstimatorTag tag, std::size_t k_min, std::size_t k_max) {
    switch (tag) {
        case EstimatorTag::LB: return estimate_path(s, ProductLimit::LyndenBell, k_min, k_max);
        case EstimatorTag::W: return estimate_path(s, ProductLimit::Woodroofe, k_min, k_max);
        case EstimatorTag::Hill: return hill_path(s.x_order(), k_min, k_max);
        default: break;
    }
    throw DomainError("no k-path for estimator '" + std::string(to_string(tag)) + "'");
}

KSelection select_k_for(const SortedSample& s, EstimatorTag tag, const SelectionOptions& options) {
    if (s.n() < 5) throw DomainError("threshold selection needs n >= 5");
    const auto path = estimator_path(s, tag);
    return reiss_thomas_select(path, options.theta, candidate_floor(s.n(), path.k_min, options.floor_fraction));
}

std::pair<EstimatePath, KSelection> select_k_hill(std::span<const double> values, const SelectionOptions& options) {
    if (values.size() < 5) throw DomainError("threshold selection needs n >= 5");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto path = hill_path(sorted);
    auto sel = reiss_thomas_select(path, options.theta,
                                   candidate_floor(sorted.size(), path.k_min, options.floor_fraction));
    return {std::move(path), std::move(sel)};
}

}  // namespace trunctail
