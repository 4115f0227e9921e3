// trunctail: tail-index estimation for randomly right-truncated data.
//
// Exit codes: 0 success, 2 input or validation error, 3 numeric/degenerate failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "trunctail/errors.hpp"
#include "trunctail/estimators.hpp"
#include "trunctail/pair_csv.hpp"
#include "trunctail/simulation.hpp"
#include "trunctail/text.hpp"
#include "trunctail/threshold.hpp"

namespace tt = trunctail;
using tt::text::exact;
using tt::text::fixed;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr std::uint64_t kDefaultSeed = 42;

std::string slurp(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tt::InputError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), {}};
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
    if (opt->count()) return flag_value;
    if (const char* env = std::getenv("TRUNCTAIL_SEED")) {
        const auto v = tt::text::parse_u64(env);
        if (!v) throw tt::InputError("TRUNCTAIL_SEED is not an unsigned integer");
        return *v;
    }
    return kDefaultSeed;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string file;
    std::string estimator = "lb";
    std::string k = "auto";
    std::optional<double> threshold;
    double theta = tt::kDefaultTheta;
    double k_floor = tt::kDefaultFloorFraction;
    double level = 0.95;
    std::string format = "text";
};

struct EstimateReport {
    tt::TailEstimate est;
    std::size_t n = 0;
    std::optional<double> gamma2_hat;
    std::optional<double> sigma2;
    std::vector<std::string> warnings;
};

std::optional<std::size_t> parse_k(const std::string& k, std::size_t n) {
    if (k == "auto") return std::nullopt;
    const auto v = tt::text::parse_u64(k);
    if (!v) throw tt::InputError("--k must be 'auto' or a positive integer");
    if (*v < 2 || *v + 1 > n)
        throw tt::InputError("--k " + k + " outside [2, " + std::to_string(n - 1) + "] for n=" + std::to_string(n));
    return static_cast<std::size_t>(*v);
}

void require_auto_size(std::size_t n) {
    if (n < 5) throw tt::InputError("automatic k selection needs at least 5 rows (got " + std::to_string(n) + ")");
}

EstimateReport run_estimate(const EstimateArgs& args) {
    const auto tag = tt::parse_estimator_tag(args.estimator);
    if (!tag) throw tt::InputError("unknown estimator '" + args.estimator + "'");
    if (args.threshold && *tag != tt::EstimatorTag::WormsFixed)
        throw tt::InputError("--threshold only applies to --estimator worms-fixed");
    const tt::SelectionOptions options{args.theta, args.k_floor};
    if (!(options.theta >= 0.0 && options.theta <= 0.5)) throw tt::InputError("--theta must lie in [0, 0.5]");
    if (!(args.level > 0.5 && args.level < 1.0)) throw tt::InputError("--level must lie in (0.5, 1)");

    const auto sample = tt::read_pairs_csv(slurp(args.file));
    const auto sorted = tt::build_sorted(sample);
    const std::size_t n = sorted.n();
    if (n < 3) throw tt::InputError("estimation needs at least 3 rows");

    std::vector<double> ys;
    for (const auto& p : sample.pairs()) ys.push_back(p.y);

    EstimateReport report;
    report.n = n;
    switch (*tag) {
        case tt::EstimatorTag::LB:
        case tt::EstimatorTag::W:
        case tt::EstimatorTag::Hill: {
            auto k = parse_k(args.k, n);
            if (!k) {
                require_auto_size(n);
                k = tt::select_k_for(sorted, *tag, options).k_star;
            }
            if (*tag == tt::EstimatorTag::Hill) {
                report.est.gamma1_hat = tt::hill_estimator(sorted.x_order(), *k);
                report.est.estimator = tt::EstimatorTag::Hill;
                report.est.k = *k;
                report.est.threshold = sorted.x_order()[n - *k - 1];
                report.est.exceedances = *k;
            } else {
                const auto kind =
                    *tag == tt::EstimatorTag::LB ? tt::ProductLimit::LyndenBell : tt::ProductLimit::Woodroofe;
                report.est = tt::product_limit_tail_index(sorted, kind, *k);
            }
            break;
        }
        case tt::EstimatorTag::WormsFixed:
            if (!args.threshold) throw tt::InputError("--estimator worms-fixed requires --threshold");
            if (args.k != "auto") throw tt::InputError("--k does not apply to worms-fixed");
            report.est = tt::worms_fixed_threshold(sorted, *args.threshold);
            break;
        case tt::EstimatorTag::Ratio: {
            auto k = parse_k(args.k, n);
            std::size_t kx, ky;
            if (k) {
                kx = ky = *k;
            } else {
                require_auto_size(n);
                kx = tt::select_k_hill(sorted.x_order(), options).second.k_star;
                ky = tt::select_k_hill(ys, options).second.k_star;
            }
            report.est = tt::ratio_tail_index(sample, kx, ky);
            break;
        }
    }

    if (report.est.degenerate_zero_factors > 0)
        report.warnings.push_back(std::to_string(report.est.degenerate_zero_factors) +
                                  " zero Lynden-Bell factor(s) near the threshold");

    // plug-in variance: gamma2 from Hill on the observed truncation variable
    if (n >= 5) {
        const auto [path, sel] = tt::select_k_hill(ys, options);
        report.gamma2_hat = path.at(sel.k_star);
        if (report.est.gamma1_hat > 0.0 && report.est.gamma1_hat < *report.gamma2_hat) {
            report.sigma2 = tt::asymptotic_sigma2(report.est.gamma1_hat, *report.gamma2_hat);
            report.est.ci = tt::confidence_interval(report.est, *report.sigma2, args.level, report.est.exceedances);
        } else {
            report.warnings.push_back("gamma1_hat >= gamma2_hat: asymptotic variance unavailable");
        }
    }
    return report;
}

void print_estimate(const EstimateReport& r, const std::string& format) {
    const auto& e = r.est;
    if (format == "json-lines") {
        nlohmann::ordered_json j;
        j["estimator"] = std::string(tt::to_string(e.estimator));
        j["n"] = r.n;
        j["k"] = e.k ? nlohmann::ordered_json(*e.k) : nlohmann::ordered_json(nullptr);
        j["threshold"] = e.threshold;
        j["exceedances"] = e.exceedances;
        j["gamma1_hat"] = e.gamma1_hat;
        j["gamma2_hat"] = r.gamma2_hat ? nlohmann::ordered_json(*r.gamma2_hat) : nlohmann::ordered_json(nullptr);
        j["sigma2"] = r.sigma2 ? nlohmann::ordered_json(*r.sigma2) : nlohmann::ordered_json(nullptr);
        if (e.ci) j["ci"] = {{"lower", e.ci->lower}, {"upper", e.ci->upper}, {"level", e.ci->level}};
        else j["ci"] = nullptr;
        j["zero_factors"] = e.degenerate_zero_factors;
        j["warnings"] = r.warnings;
        std::cout << j.dump() << '\n';
        return;
    }
    if (format == "csv") {
        const auto opt = [](const std::optional<double>& v) { return v ? exact(*v) : std::string(); };
        std::cout << "estimator,n,k,threshold,gamma1_hat,gamma2_hat,sigma2,ci_lower,ci_upper,level,zero_factors\n"
                  << tt::to_string(e.estimator) << ',' << r.n << ',' << (e.k ? std::to_string(*e.k) : "") << ','
                  << exact(e.threshold) << ',' << exact(e.gamma1_hat) << ',' << opt(r.gamma2_hat) << ','
                  << opt(r.sigma2) << ',' << (e.ci ? exact(e.ci->lower) : "") << ','
                  << (e.ci ? exact(e.ci->upper) : "") << ',' << (e.ci ? exact(e.ci->level) : "") << ','
                  << e.degenerate_zero_factors << '\n';
        return;
    }
    std::cout << "estimator:   " << tt::to_string(e.estimator) << '\n'
              << "n:           " << r.n << '\n';
    if (e.k) std::cout << "k:           " << *e.k << '\n';
    else std::cout << "exceedances: " << e.exceedances << '\n';
    std::cout << "threshold:   " << exact(e.threshold) << '\n'
              << "gamma1_hat:  " << fixed(e.gamma1_hat, 6) << '\n';
    if (r.gamma2_hat) std::cout << "gamma2_hat:  " << fixed(*r.gamma2_hat, 6) << '\n';
    if (r.sigma2) std::cout << "sigma2:      " << fixed(*r.sigma2, 6) << '\n';
    if (e.ci)
        std::cout << "ci:          [" << fixed(e.ci->lower, 6) << ", " << fixed(e.ci->upper, 6) << "] at level "
                  << exact(e.ci->level) << " (asymptotic bias not corrected)\n";
    for (const auto& w : r.warnings) std::cout << "warning:     " << w << '\n';
}

// ---------------------------------------------------------------- select-k

struct SelectArgs {
    std::string file;
    std::string from_path;
    std::string estimator = "lb";
    double theta = tt::kDefaultTheta;
    double k_floor = tt::kDefaultFloorFraction;
    bool path = false;
};

tt::EstimatePath read_path_csv(std::string_view input) {
    tt::EstimatePath path;
    std::size_t line_no = 0;
    bool header = true;
    for (auto raw : tt::text::split(input, '\n')) {
        ++line_no;
        const auto line = tt::text::trim(raw);
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line == "k,gamma1_hat") continue;
        }
        const auto f = tt::text::split(line, ',');
        const auto k = f.size() == 2 ? tt::text::parse_u64(f[0]) : std::nullopt;
        const auto v = f.size() == 2 ? tt::text::parse_double(f[1]) : std::nullopt;
        if (!k || !v) throw tt::InputError("line " + std::to_string(line_no) + ": expected 'k,gamma1_hat'", line_no);
        if (path.values.empty()) path.k_min = static_cast<std::size_t>(*k);
        else if (*k != path.k_min + path.values.size())
            throw tt::InputError("line " + std::to_string(line_no) + ": k values must be consecutive", line_no);
        path.values.push_back(*v);
    }
    if (path.values.size() < 3) throw tt::InputError("a path needs at least 3 rows");
    return path;
}

void run_select(const SelectArgs& args) {
    if (!(args.theta >= 0.0 && args.theta <= 0.5)) throw tt::InputError("--theta must lie in [0, 0.5]");
    tt::EstimatePath path;
    tt::KSelection sel;
    if (!args.from_path.empty()) {
        path = read_path_csv(slurp(args.from_path));
        sel = tt::reiss_thomas_select(path, args.theta);
    } else {
        const auto tag = tt::parse_estimator_tag(args.estimator);
        if (!tag || (*tag != tt::EstimatorTag::LB && *tag != tt::EstimatorTag::W && *tag != tt::EstimatorTag::Hill))
            throw tt::InputError("select-k supports --estimator lb, w or hill");
        const auto sorted = tt::build_sorted(tt::read_pairs_csv(slurp(args.file)));
        require_auto_size(sorted.n());
        path = tt::estimator_path(sorted, *tag);
        sel = tt::reiss_thomas_select(path, args.theta,
                                      tt::candidate_floor(sorted.n(), path.k_min, args.k_floor));
    }
    if (args.path) {
        std::cout << "k,gamma1_hat,criterion\n";
        for (std::size_t j = 0; j < path.values.size(); ++j)
            std::cout << sel.criterion[j].first << ',' << exact(path.values[j]) << ',' << exact(sel.criterion[j].second)
                      << '\n';
        return;
    }
    std::cout << "k_star:          " << sel.k_star << '\n'
              << "gamma1_hat:      " << fixed(path.at(sel.k_star), 6) << '\n'
              << "theta:           " << exact(sel.theta) << '\n'
              << "k_range:         " << sel.k_min << ".." << sel.k_max << '\n'
              << "first_candidate: " << sel.first_candidate << '\n';
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
    double gamma1 = 0.0;
    std::optional<double> p;
    std::optional<double> gamma2;
    double delta = 0.25;
    std::size_t N = 0;
    std::uint64_t seed = kDefaultSeed;
};

void run_sample(const SampleArgs& args, const CLI::Option* seed_opt) {
    if (args.p.has_value() == args.gamma2.has_value()) throw tt::InputError("give exactly one of --p and --gamma2");
    if (!(args.gamma1 > 0.0)) throw tt::InputError("--gamma1 must be positive");
    if (args.N == 0) throw tt::InputError("--N must be >= 1");
    tt::TruncationScheme scheme{tt::BurrModel(1.0, 1.0), tt::BurrModel(1.0, 1.0)};
    try {
        const double gamma2 = args.gamma2 ? *args.gamma2 : tt::solve_gamma2(args.gamma1, *args.p);
        scheme = tt::TruncationScheme{tt::BurrModel(args.delta, args.gamma1), tt::BurrModel(args.delta, gamma2)};
    } catch (const tt::DomainError& e) {
        throw tt::InputError(e.what());
    }
    const auto sample = tt::generate_truncated_sample(scheme, args.N, resolve_seed(seed_opt, args.seed));
    std::cout << tt::write_pairs_csv(sample);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config_file;
    double gamma1 = 0.6;
    double p = 0.55;
    double delta = 0.25;
    std::string sizes = "100";
    std::size_t reps = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::string estimators = "lb,w";
    double theta = tt::kDefaultTheta;
    double k_floor = tt::kDefaultFloorFraction;
    std::size_t fixed_k = 0;
    std::string format = "csv";
    unsigned workers = 0;
};

void run_simulate(const SimulateArgs& a, const CLI::App& cmd) {
    tt::ExperimentConfig c;
    if (!a.config_file.empty()) c = tt::parse_kv_text(slurp(a.config_file));
    const auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };
    if (!a.config_file.empty() && (!given("--gamma1") || !given("--p"))) {
        // config supplies what the flags do not
    } else if (a.config_file.empty() && (!given("--gamma1") || !given("--p"))) {
        throw tt::InputError("simulate requires --gamma1 and --p (or --config)");
    }
    if (given("--gamma1")) c.gamma1 = a.gamma1;
    if (given("--p")) c.p = a.p;
    if (given("--delta") || a.config_file.empty()) c.delta = a.delta;
    if (given("--sizes") || a.config_file.empty()) {
        c.sizes.clear();
        for (auto tok : tt::text::split(a.sizes, ',')) {
            const auto v = tt::text::parse_u64(tok);
            if (!v) throw tt::InputError("--sizes must be a comma list of positive integers");
            c.sizes.push_back(static_cast<std::size_t>(*v));
        }
    }
    if (given("--reps") || a.config_file.empty()) c.replications = a.reps;
    if (given("--seed")) c.seed = a.seed;
    else if (a.config_file.empty()) c.seed = resolve_seed(cmd.get_option("--seed"), a.seed);
    if (given("--estimators") || a.config_file.empty()) {
        c.estimators.clear();
        for (auto tok : tt::text::split(a.estimators, ',')) {
            const auto tag = tt::parse_estimator_tag(tt::text::trim(tok));
            if (!tag) throw tt::InputError("unknown estimator '" + std::string(tt::text::trim(tok)) + "'");
            c.estimators.push_back(*tag);
        }
    }
    if (given("--theta") || a.config_file.empty()) c.theta = a.theta;
    if (given("--k-floor") || a.config_file.empty()) c.floor_fraction = a.k_floor;
    if (given("--k") || a.config_file.empty()) c.fixed_k = a.fixed_k;
    try {
        c.validate();
    } catch (const tt::DomainError& e) {
        throw tt::InputError(e.what());
    }
    const unsigned workers = a.workers ? a.workers : std::max(1u, std::thread::hardware_concurrency());
    const auto table = tt::run_experiment(c, workers);
    std::cout << tt::emit_table(table, a.format == "md" ? tt::TableFormat::Markdown : tt::TableFormat::Csv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail-index estimation for randomly right-truncated heavy-tailed data"};
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate the tail index from an x,y CSV of observed pairs");
    estimate->add_option("file", est.file, "CSV file with header x,y ('-' for stdin)")->required();
    estimate->add_option("--estimator", est.estimator, "lb | w | hill | ratio | worms-fixed")
        ->check(CLI::IsMember({"lb", "w", "hill", "ratio", "worms-fixed"}));
    estimate->add_option("--k", est.k, "auto (Reiss-Thomas) or number of top order statistics");
    estimate->add_option("--threshold", est.threshold, "fixed threshold for worms-fixed");
    estimate->add_option("--theta", est.theta, "Reiss-Thomas weight exponent in [0, 1/2]");
    estimate->add_option("--k-floor", est.k_floor, "smallest eligible k as a fraction of n");
    estimate->add_option("--level", est.level, "confidence level");
    estimate->add_option("--format", est.format, "text | csv | json-lines")
        ->check(CLI::IsMember({"text", "csv", "json-lines"}));

    SelectArgs sel;
    auto* select = app.add_subcommand("select-k", "Choose k by the Reiss-Thomas rule");
    select->add_option("file", sel.file, "CSV file with header x,y ('-' for stdin)");
    select->add_option("--from-path", sel.from_path, "CSV of k,gamma1_hat to select on directly");
    select->add_option("--estimator", sel.estimator, "lb | w | hill");
    select->add_option("--theta", sel.theta, "Reiss-Thomas weight exponent in [0, 1/2]");
    select->add_option("--k-floor", sel.k_floor, "smallest eligible k as a fraction of n");
    select->add_flag("--path", sel.path, "print the full k, estimate, criterion path as CSV");

    SampleArgs smp;
    auto* sample = app.add_subcommand("sample", "Draw a right-truncated Burr sample as x,y CSV");
    sample->add_option("--gamma1", smp.gamma1, "tail index of X")->required();
    sample->add_option("--p", smp.p, "observed fraction P(X <= Y)");
    sample->add_option("--gamma2", smp.gamma2, "tail index of Y");
    sample->add_option("--delta", smp.delta, "Burr shape");
    sample->add_option("--N", smp.N, "latent sample size")->required();
    auto* sample_seed = sample->add_option("--seed", smp.seed, "seed (fallback: TRUNCTAIL_SEED, then 42)");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo bias/rmse table");
    simulate->add_option("--config", sim.config_file, "key=value experiment file; flags override it");
    simulate->add_option("--gamma1", sim.gamma1, "tail index of X");
    simulate->add_option("--p", sim.p, "observed fraction");
    simulate->add_option("--delta", sim.delta, "Burr shape");
    simulate->add_option("--sizes", sim.sizes, "comma list of latent sample sizes N");
    simulate->add_option("--reps", sim.reps, "replications per size");
    simulate->add_option("--seed", sim.seed, "seed (fallback: TRUNCTAIL_SEED, then 42)");
    simulate->add_option("--estimators", sim.estimators, "comma list from lb,w,hill,ratio");
    simulate->add_option("--theta", sim.theta, "Reiss-Thomas weight exponent in [0, 1/2]");
    simulate->add_option("--k-floor", sim.k_floor, "smallest eligible k as a fraction of n");
    simulate->add_option("--k", sim.fixed_k, "use this fixed k instead of Reiss-Thomas");
    simulate->add_option("--format", sim.format, "csv | md")->check(CLI::IsMember({"csv", "md"}));
    simulate->add_option("--workers", sim.workers, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*estimate) print_estimate(run_estimate(est), est.format);
        else if (*select) {
            if (sel.file.empty() == sel.from_path.empty())
                throw tt::InputError("give either a data file or --from-path");
            run_select(sel);
        } else if (*sample) run_sample(smp, sample_seed);
        else if (*simulate) run_simulate(sim, *simulate);
    } catch (const tt::InputError& e) {
        const std::string msg = e.what();
        std::cerr << "error: ";
        if (e.line() > 0 && msg.rfind("line ", 0) != 0) std::cerr << "line " << e.line() << ": ";
        std::cerr << msg << '\n';
        return kExitInput;
    } catch (const tt::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const tt::DegenerateError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const tt::EmptySampleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    std::cout.flush();
    return 0;
}
