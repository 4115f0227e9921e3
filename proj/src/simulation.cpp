#include "trunctail/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "trunctail/errors.hpp"
#include "trunctail/rng.hpp"
#include "trunctail/text.hpp"

namespace trunctail {

namespace {

constexpr std::size_t kMinObserved = 5;

std::size_t round_half_up(double v) { return static_cast<std::size_t>(std::floor(v + 0.5)); }

std::vector<EstimatorTag> parse_tag_list(std::string_view list) {
    std::vector<EstimatorTag> tags;
    for (auto tok : text::split(list, ',')) {
        const auto tag = parse_estimator_tag(text::trim(tok));
        if (!tag) throw DomainError("unknown estimator '" + std::string(text::trim(tok)) + "'");
        tags.push_back(*tag);
    }
    return tags;
}

std::vector<std::size_t> parse_size_list(std::string_view list) {
    std::vector<std::size_t> sizes;
    for (auto tok : text::split(list, ',')) {
        const auto v = text::parse_u64(tok);
        if (!v) throw DomainError("bad size '" + std::string(text::trim(tok)) + "'");
        sizes.push_back(static_cast<std::size_t>(*v));
    }
    return sizes;
}

EstimatorOutcome evaluate(const ExperimentConfig& config, const TruncatedSample& sample,
                          const SortedSample& sorted, EstimatorTag tag) {
    EstimatorOutcome out;
    out.estimator = tag;
    const std::size_t n = sorted.n();
    try {
        if (tag == EstimatorTag::Ratio) {
            std::vector<double> ys;
            ys.reserve(n);
            for (const auto& p : sample.pairs()) ys.push_back(p.y);
            const auto x_sel = select_k_hill(sorted.x_order(), config.selection());
            const auto y_sel = select_k_hill(ys, config.selection());
            const std::size_t kx = config.fixed_k ? std::min(config.fixed_k, n - 1) : x_sel.second.k_star;
            const std::size_t ky = config.fixed_k ? std::min(config.fixed_k, n - 1) : y_sel.second.k_star;
            out.gamma1_hat = ratio_from_indices(x_sel.first.at(kx), y_sel.first.at(ky));
            out.k = kx;
        } else {
            const auto path = estimator_path(sorted, tag);
            const std::size_t k =
                config.fixed_k ? std::min(config.fixed_k, n - 1)
                               : reiss_thomas_select(path, config.theta,
                                                     candidate_floor(n, path.k_min, config.floor_fraction))
                                     .k_star;
            out.gamma1_hat = path.at(k);
            out.k = k;
            if (tag == EstimatorTag::LB) out.zero_factors = sorted.zero_factors_from(n - k - 1);
        }
        out.failed = !std::isfinite(out.gamma1_hat);
    } catch (const Error&) {
        out.failed = true;
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(gamma1 > 0.0) || !std::isfinite(gamma1)) throw DomainError("gamma1 must be positive");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
    if (sizes.empty()) throw DomainError("at least one sample size is required");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw DomainError("sample sizes must be >= 1");
        if (std::find(sizes.begin(), sizes.begin() + i, sizes[i]) != sizes.begin() + i)
            throw DomainError("duplicate sample size " + std::to_string(sizes[i]));
    }
    if (replications == 0) throw DomainError("replications must be >= 1");
    if (estimators.empty()) throw DomainError("at least one estimator is required");
    for (auto tag : estimators)
        if (tag == EstimatorTag::WormsFixed)
            throw DomainError("the fixed-threshold estimator has no k-path and cannot be simulated");
    if (!(theta >= 0.0 && theta <= 0.5)) throw DomainError("theta must lie in [0, 1/2]");
    if (!(floor_fraction >= 0.0 && floor_fraction < 1.0)) throw DomainError("k floor fraction must lie in [0, 1)");
    if (fixed_k == 1) throw DomainError("fixed k must be >= 2");
}

std::string to_kv_text(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "gamma1=" << text::exact(c.gamma1) << '\n'
        << "p=" << text::exact(c.p) << '\n'
        << "delta=" << text::exact(c.delta) << '\n'
        << "sizes=";
    for (std::size_t i = 0; i < c.sizes.size(); ++i) out << (i ? "," : "") << c.sizes[i];
    out << '\n' << "reps=" << c.replications << '\n' << "seed=" << c.seed << '\n' << "estimators=";
    for (std::size_t i = 0; i < c.estimators.size(); ++i) out << (i ? "," : "") << to_string(c.estimators[i]);
    out << '\n' << "theta=" << text::exact(c.theta) << '\n' << "k_floor=" << text::exact(c.floor_fraction) << '\n';
    if (c.fixed_k) out << "k=" << c.fixed_k << '\n';
    return out.str();
}

ExperimentConfig parse_kv_text(std::string_view input) {
    ExperimentConfig c;
    std::size_t line_no = 0;
    for (auto raw : text::split(input, '\n')) {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw InputError("expected key=value", line_no);
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::trim(line.substr(eq + 1));
        const auto need_double = [&] {
            const auto v = text::parse_double(value);
            if (!v) throw InputError("bad number for '" + std::string(key) + "'", line_no);
            return *v;
        };
        const auto need_u64 = [&] {
            const auto v = text::parse_u64(value);
            if (!v) throw InputError("bad integer for '" + std::string(key) + "'", line_no);
            return *v;
        };
        try {
            if (key == "gamma1") c.gamma1 = need_double();
            else if (key == "p") c.p = need_double();
            else if (key == "delta") c.delta = need_double();
            else if (key == "sizes") c.sizes = parse_size_list(value);
            else if (key == "reps") c.replications = static_cast<std::size_t>(need_u64());
            else if (key == "seed") c.seed = need_u64();
            else if (key == "estimators") c.estimators = parse_tag_list(value);
            else if (key == "theta") c.theta = need_double();
            else if (key == "k_floor") c.floor_fraction = need_double();
            else if (key == "k") c.fixed_k = static_cast<std::size_t>(need_u64());
            else throw InputError("unknown key '" + std::string(key) + "'", line_no);
        } catch (const DomainError& e) {
            throw InputError(e.what(), line_no);
        }
    }
    return c;
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t N, std::size_t rep) noexcept {
    return mix_seed(mix_seed(seed, N), rep);
}

ReplicationResult run_replication(const ExperimentConfig& config, std::size_t N, std::size_t rep) {
    ReplicationResult result;
    result.N = N;
    result.rep = rep;
    const auto scheme = config.scheme();
    std::optional<TruncatedSample> sample;
    try {
        sample.emplace(generate_truncated_sample(scheme, N, replication_seed(config.seed, N, rep)));
    } catch (const EmptySampleError&) {
        result.failed = true;
        return result;
    }
    result.n = sample->n();
    if (result.n < kMinObserved) {
        result.failed = true;
        return result;
    }
    const auto sorted = build_sorted(*sample);
    result.outcomes.reserve(config.estimators.size());
    for (auto tag : config.estimators) result.outcomes.push_back(evaluate(config, *sample, sorted, tag));
    return result;
}

SummaryTable summarize(const ExperimentConfig& config, std::vector<ReplicationResult> results) {
    std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
        return std::pair(a.N, a.rep) < std::pair(b.N, b.rep);
    });
    SummaryTable table;
    for (std::size_t N : config.sizes) {
        const auto first = std::find_if(results.begin(), results.end(), [&](const auto& r) { return r.N == N; });
        const auto last = std::find_if(first, results.end(), [&](const auto& r) { return r.N != N; });
        if (first == last) throw DomainError("no replications for N=" + std::to_string(N));

        double n_sum = 0.0;
        for (auto r = first; r != last; ++r) n_sum += static_cast<double>(r->n);
        const auto reps = static_cast<double>(last - first);

        for (std::size_t e = 0; e < config.estimators.size(); ++e) {
            SummaryRow row;
            row.N = N;
            row.n = round_half_up(n_sum / reps);
            row.estimator = config.estimators[e];
            double sum = 0.0, sq = 0.0, k_sum = 0.0;
            std::size_t used = 0;
            for (auto r = first; r != last; ++r) {
                if (r->failed || r->outcomes[e].failed) {
                    ++row.failed;
                    continue;
                }
                const auto& o = r->outcomes[e];
                const double err = o.gamma1_hat - config.gamma1;
                sum += o.gamma1_hat;
                sq += err * err;
                k_sum += static_cast<double>(o.k);
                ++used;
            }
            if (used == 0)
                throw DegenerateError("every replication failed for N=" + std::to_string(N) + ", estimator " +
                                      std::string(to_string(row.estimator)));
            const double u = static_cast<double>(used);
            row.abs_bias = std::abs(sum / u - config.gamma1);
            row.rmse = std::sqrt(sq / u);
            row.k_star = round_half_up(k_sum / u);
            table.rows.push_back(row);
        }
    }
    return table;
}

SummaryTable run_experiment(const ExperimentConfig& config, unsigned workers) {
    config.validate();
    struct Unit {
        std::size_t N, rep;
    };
    std::vector<Unit> units;
    for (auto N : config.sizes)
        for (std::size_t rep = 0; rep < config.replications; ++rep) units.push_back({N, rep});

    std::vector<ReplicationResult> results(units.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < units.size(); i = next++)
            results[i] = run_replication(config, units[i].N, units[i].rep);
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(units.size())));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return summarize(config, std::move(results));
}

std::string emit_table(const SummaryTable& table, TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::Csv) {
        out << "N,n,estimator,abs_bias,rmse,k_star\n";
        for (const auto& r : table.rows)
            out << r.N << ',' << r.n << ',' << to_string(r.estimator) << ',' << text::fixed(r.abs_bias, 4) << ','
                << text::fixed(r.rmse, 4) << ',' << r.k_star << '\n';
        return out.str();
    }

    // one block per estimator, in order of first appearance
    std::vector<EstimatorTag> order;
    for (const auto& r : table.rows)
        if (std::find(order.begin(), order.end(), r.estimator) == order.end()) order.push_back(r.estimator);
    for (std::size_t b = 0; b < order.size(); ++b) {
        if (b) out << '\n';
        out << "### " << to_string(order[b]) << "\n\n"
            << "| N | n | abs bias | rmse | k* |\n"
            << "|---:|---:|---:|---:|---:|\n";
        std::size_t failed = 0;
        for (const auto& r : table.rows) {
            if (r.estimator != order[b]) continue;
            out << "| " << r.N << " | " << r.n << " | " << text::fixed(r.abs_bias, 4) << " | "
                << text::fixed(r.rmse, 4) << " | " << r.k_star << " |\n";
            failed += r.failed;
        }
        if (failed) out << "\nexcluded replications: " << failed << '\n';
    }
    return out.str();
}

SummaryTable parse_table_csv(std::string_view input) {
    SummaryTable table;
    std::size_t line_no = 0;
    bool header = true;
    for (auto raw : text::split(input, '\n')) {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty()) continue;
        if (header) {
            if (line != "N,n,estimator,abs_bias,rmse,k_star") throw InputError("unexpected table header", line_no);
            header = false;
            continue;
        }
        const auto f = text::split(line, ',');
        if (f.size() != 6) throw InputError("expected 6 fields", line_no);
        const auto N = text::parse_u64(f[0]);
        const auto n = text::parse_u64(f[1]);
        const auto tag = parse_estimator_tag(text::trim(f[2]));
        const auto bias = text::parse_double(f[3]);
        const auto rmse = text::parse_double(f[4]);
        const auto k = text::parse_u64(f[5]);
        if (!N || !n || !tag || !bias || !rmse || !k) throw InputError("malformed table row", line_no);
        table.rows.push_back({static_cast<std::size_t>(*N), static_cast<std::size_t>(*n), *tag, *bias, *rmse,
                              static_cast<std::size_t>(*k), 0});
    }
    if (header) throw InputError("empty table");
    return table;
}

}  // namespace trunctail
