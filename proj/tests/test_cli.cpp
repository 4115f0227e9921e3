#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "trunctail/pair_csv.hpp"
#include "trunctail/simulation.hpp"
#include "trunctail/text.hpp"

namespace fs = std::filesystem;
namespace tt = trunctail;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("trunctail_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_file(const std::string& name, const std::string& body) {
    const auto p = scratch() / name;
    std::ofstream(p, std::ios::binary) << body;
    return p;
}

Run run(const std::string& args, const std::string& env = "") {
    const auto out = scratch() / "stdout.txt";
    const auto err = scratch() / "stderr.txt";
    const std::string cmd = env + " '" TRUNCTAIL_CLI "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), read_file(out), read_file(err)};
}

std::string field(const std::string& report, const std::string& key) {
    std::istringstream in(report);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(key + ":", 0) == 0) return std::string(tt::text::trim(line.substr(key.size() + 1)));
    return {};
}

const std::string kS3 = "x,y\n1,2\n3,4\n2,5\n";

}  // namespace

TEST_CASE("estimate on S3 with k=2") {
    const auto f = write_file("s3.csv", kS3);
    const auto r = run("estimate " + f.string() + " --estimator lb --k 2");
    CHECK(r.code == 0);
    CHECK(field(r.out, "gamma1_hat") == "0.963457");
    CHECK(field(r.out, "k") == "2");
    CHECK(field(r.out, "threshold") == "1");
}

TEST_CASE("x > y row exits 2 naming the line") {
    const auto f = write_file("bad.csv", kS3 + "5,4\n");
    const auto r = run("estimate " + f.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("line 5") != std::string::npos);
}

TEST_CASE("malformed input never crashes") {
    for (const std::string body : {"", "x,y\n", "a,b\n1,2\n", "x,y\n1,nan\n", "x,y\n1,inf\n", "x,y\n-1,2\n",
                                   "x,y\n0,2\n", "x,y\n1,2,3\n", "x,y\n1\n", "x,y\n1e999,1e999\n", "x,y\n1;2\n"}) {
        const auto f = write_file("junk.csv", body);
        CAPTURE(body);
        CHECK(run("estimate " + f.string()).code == 2);
        CHECK(run("select-k " + f.string()).code == 2);
    }
    CHECK(run("estimate /definitely/missing.csv").code == 2);
    CHECK(run("estimate").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("").code == 2);
    const auto s3 = write_file("s3.csv", kS3);
    CHECK(run("estimate " + s3.string() + " --k 7").code == 2);
    CHECK(run("estimate " + s3.string() + " --k many").code == 2);
    CHECK(run("estimate " + s3.string()).code == 2);  // auto k needs 5 rows
    CHECK(run("estimate " + s3.string() + " --estimator worms-fixed").code == 2);
}

TEST_CASE("worms-fixed with too few exceedances exits 3") {
    const auto f = write_file("s3.csv", kS3);
    CHECK(run("estimate " + f.string() + " --estimator worms-fixed --threshold 2.5").code == 3);
}

TEST_CASE("lb and hill coincide on an untruncated fixture") {
    std::mt19937_64 rng(11);
    std::exponential_distribution<double> e(1.0);
    std::ostringstream csv;
    csv << "x,y\n";
    for (int i = 0; i < 60; ++i) csv << tt::text::exact(std::exp(0.5 * e(rng))) << ",1e9\n";
    const auto f = write_file("complete.csv", csv.str());
    const auto lb = run("estimate " + f.string() + " --estimator lb --k 10 --format json-lines");
    const auto hill = run("estimate " + f.string() + " --estimator hill --k 10 --format json-lines");
    REQUIRE(lb.code == 0);
    REQUIRE(hill.code == 0);
    const auto g = [](const std::string& s) {
        const auto at = s.find("\"gamma1_hat\":") + 13;
        return std::stod(s.substr(at, s.find(',', at) - at));
    };
    CHECK(g(lb.out) == doctest::Approx(g(hill.out)).epsilon(1e-12));
}

TEST_CASE("sample output re-ingests") {
    const auto r = run("sample --gamma1 0.6 --p 0.55 --N 100 --seed 7");
    REQUIRE(r.code == 0);
    const auto sample = tt::read_pairs_csv(r.out);
    CHECK(sample.n() >= 35);
    CHECK(sample.n() <= 75);
    const auto f = write_file("sampled.csv", r.out);
    CHECK(run("estimate " + f.string()).code == 0);
    CHECK(run("select-k " + f.string()).code == 0);
}

TEST_CASE("sample: --gamma2 5.4 matches --p 0.9 up to rounding") {
    const auto a = run("sample --gamma1 0.6 --p 0.9 --N 400 --seed 3");
    const auto b = run("sample --gamma1 0.6 --gamma2 5.4 --N 400 --seed 3");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const auto sa = tt::read_pairs_csv(a.out).pairs();
    const auto sb = tt::read_pairs_csv(b.out).pairs();
    REQUIRE(sa.size() == sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        CHECK(sa[i].x == sb[i].x);
        CHECK(sa[i].y == doctest::Approx(sb[i].y).epsilon(1e-12));
    }
}

TEST_CASE("sample: validation and seed fallback") {
    CHECK(run("sample --gamma1 0.6 --N 10").code == 2);
    CHECK(run("sample --gamma1 0.6 --p 0.5 --gamma2 1 --N 10").code == 2);
    CHECK(run("sample --gamma1 -1 --p 0.5 --N 10").code == 2);
    CHECK(run("sample --gamma1 0.6 --p 1.5 --N 10").code == 2);
    CHECK(run("sample --gamma1 0.6 --p 0.5 --N 0").code == 2);
    const auto flag = run("sample --gamma1 0.6 --p 0.5 --N 50 --seed 99");
    const auto env = run("sample --gamma1 0.6 --p 0.5 --N 50", "TRUNCTAIL_SEED=99");
    const auto dflt = run("sample --gamma1 0.6 --p 0.5 --N 50");
    const auto explicit42 = run("sample --gamma1 0.6 --p 0.5 --N 50 --seed 42");
    CHECK(flag.out == env.out);
    CHECK(dflt.out == explicit42.out);
    CHECK(flag.out != dflt.out);
    CHECK(run("sample --gamma1 0.6 --p 0.5 --N 50", "TRUNCTAIL_SEED=x").code == 2);
}

TEST_CASE("select-k path has one row per k") {
    const auto data = run("sample --gamma1 0.6 --p 0.9 --N 300 --seed 5");
    const auto f = write_file("sel.csv", data.out);
    const auto n = tt::read_pairs_csv(data.out).n();
    const auto r = run("select-k " + f.string() + " --path");
    REQUIRE(r.code == 0);
    const auto rows = tt::text::split(tt::text::trim(r.out), '\n');
    CHECK(rows.front() == "k,gamma1_hat,criterion");
    CHECK(rows.size() - 1 == (n - 1) - 2 + 1);
}

TEST_CASE("select-k on a constant path picks k_min") {
    const auto f = write_file("path.csv", "k,gamma1_hat\n3,0.7\n4,0.7\n5,0.7\n6,0.7\n7,0.7\n");
    const auto r = run("select-k --from-path " + f.string());
    REQUIRE(r.code == 0);
    CHECK(field(r.out, "k_star") == "3");
}

TEST_CASE("simulate: reps=1 gives rmse == abs bias") {
    const auto r = run("simulate --gamma1 0.6 --p 0.9 --reps 1 --sizes 100");
    REQUIRE(r.code == 0);
    const auto table = tt::parse_table_csv(r.out);
    REQUIRE(table.rows.size() == 2);
    for (const auto& row : table.rows) CHECK(row.rmse == row.abs_bias);
}

TEST_CASE("simulate: deterministic across runs and worker counts") {
    const std::string flags = "simulate --gamma1 0.6 --p 0.7 --sizes 150,300 --reps 40 --estimators lb,w,hill,ratio";
    const auto a = run(flags + " --workers 1");
    const auto b = run(flags + " --workers 1");
    const auto c = run(flags + " --workers 5");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const auto md1 = run(flags + " --format md --workers 2");
    const auto md2 = run(flags + " --format md --workers 3");
    CHECK(md1.out == md2.out);
    CHECK(md1.out.find("| N | n | abs bias | rmse | k* |") != std::string::npos);
}

TEST_CASE("simulate: config file with flag overrides") {
    const auto cfg = write_file("exp.cfg", "# experiment\ngamma1=0.6\np=0.9\nsizes=120\nreps=6\nseed=9\nestimators=lb\n");
    const auto from_file = run("simulate --config " + cfg.string());
    const auto from_flags = run("simulate --gamma1 0.6 --p 0.9 --sizes 120 --reps 6 --seed 9 --estimators lb");
    REQUIRE(from_file.code == 0);
    CHECK(from_file.out == from_flags.out);
    const auto overridden = run("simulate --config " + cfg.string() + " --seed 10");
    CHECK(overridden.out != from_file.out);
    const auto bad = write_file("bad.cfg", "gamma1=0.6\np=0.9\nbogus=1\n");
    const auto r = run("simulate --config " + bad.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("simulate: invalid flags exit 2") {
    CHECK(run("simulate --gamma1 0.6 --p 1.5").code == 2);
    CHECK(run("simulate --gamma1 0 --p 0.5").code == 2);
    CHECK(run("simulate --gamma1 0.6").code == 2);
    CHECK(run("simulate --gamma1 0.6 --p 0.5 --estimators lb,foo").code == 2);
    CHECK(run("simulate --gamma1 0.6 --p 0.5 --format xml").code == 2);
    CHECK(run("simulate --gamma1 0.6 --p 0.5 --theta 0.9").code == 2);
}
