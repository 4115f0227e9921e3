#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "trunctail/estimators.hpp"
#include "trunctail/threshold.hpp"

namespace trunctail {

/// One Monte Carlo study: Burr(delta, gamma1) truncated by Burr(delta, gamma2)
/// with gamma2 chosen so that P(X <= Y) = p.
struct ExperimentConfig {
    double gamma1 = 0.6;
    double p = 0.55;
    double delta = 0.25;
    std::vector<std::size_t> sizes{100};
    std::size_t replications = 1000;
    std::uint64_t seed = 42;
    std::vector<EstimatorTag> estimators{EstimatorTag::LB, EstimatorTag::W};
    double theta = kDefaultTheta;
    double floor_fraction = kDefaultFloorFraction;
    /// Use this k instead of Reiss-Thomas when nonzero (clamped to n-1).
    std::size_t fixed_k = 0;

    /// Throws DomainError on an unusable configuration.
    void validate() const;
    TruncationScheme scheme() const { return TruncationScheme::from_p(gamma1, p, delta); }
    SelectionOptions selection() const { return {theta, floor_fraction}; }
};

/// Flat key=value form; keys gamma1, p, delta, sizes, reps, seed, estimators,
/// theta, k_floor and (optional) k. Lines starting with '#' are comments.
std::string to_kv_text(const ExperimentConfig& config);
ExperimentConfig parse_kv_text(std::string_view text);

struct EstimatorOutcome {
    EstimatorTag estimator = EstimatorTag::LB;
    double gamma1_hat = 0.0;
    std::size_t k = 0;
    std::size_t zero_factors = 0;
    bool failed = false;
};

struct ReplicationResult {
    std::size_t N = 0;
    std::size_t rep = 0;
    std::size_t n = 0;
    bool failed = false;  // sample unusable (n < 5); outcomes empty
    std::vector<EstimatorOutcome> outcomes;
};

/// Stable per-replication seed: mix of (seed, N, rep).
std::uint64_t replication_seed(std::uint64_t seed, std::size_t N, std::size_t rep) noexcept;

/// Generates one truncated sample and evaluates every requested estimator on it.
/// Degenerate outcomes are recorded, not thrown.
ReplicationResult run_replication(const ExperimentConfig& config, std::size_t N, std::size_t rep);

struct SummaryRow {
    std::size_t N = 0;
    std::size_t n = 0;  // mean observed count, rounded half-up
    EstimatorTag estimator = EstimatorTag::LB;
    double abs_bias = 0.0;  // |mean(gamma1_hat) - gamma1|
    double rmse = 0.0;
    std::size_t k_star = 0;  // mean selected k, rounded half-up
    std::size_t failed = 0;  // replications excluded from this cell

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;  // ordered by N, then by configured estimator order
    friend bool operator==(const SummaryTable&, const SummaryTable&) = default;
};

/// Reduces replications (any order) into a table; results are sorted by
/// (N, rep) first so the reduction is schedule independent.
SummaryTable summarize(const ExperimentConfig& config, std::vector<ReplicationResult> results);

/// Runs all (N, rep) units on `workers` threads and summarizes.
SummaryTable run_experiment(const ExperimentConfig& config, unsigned workers = 1);

enum class TableFormat { Csv, Markdown };

std::string emit_table(const SummaryTable& table, TableFormat format);
/// Inverse of the csv emitter (the failure column is not part of the csv).
SummaryTable parse_table_csv(std::string_view text);

}  // namespace trunctail
