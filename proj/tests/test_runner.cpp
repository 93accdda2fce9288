#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zonalsim/csv.hpp"
#include "zonalsim/results_io.hpp"
#include "zonalsim/runner.hpp"
#include "zonalsim/synthetic.hpp"

using namespace zonalsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("zonalsim-runner-" + std::to_string(getpid()) + "-" + name);
    fs::remove_all(p);
    return p;
}

fs::path demo() { return fs::path(ZONALSIM_FIXTURES) / "two-bus-demo"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Relative path -> contents for every file below dir.
std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
    return out;
}

int cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(ZONALSIM_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const fs::path& small_bundle() {
    static const fs::path dir = [] {
        SyntheticConfig c;
        c.buses = 24;
        c.units = 40;
        c.days = 4;
        c.peak_load_mw = 3000;
        c.start_date = "2024-02-27";
        auto g = generate_synthetic(c, 21);
        auto p = scratch("bundle");
        write_bundle(g.bundle, p);
        return p;
    }();
    return dir;
}

RunConfig small_config(int jobs) {
    RunConfig cfg;
    cfg.bundle = small_bundle();
    cfg.designs = {Design::National, Design::Zonal, Design::Nodal};
    cfg.policy = 3;
    cfg.seed = 5;
    cfg.jobs = jobs;
    return cfg;
}

}  // namespace

TEST(RunConfig, Validation) {
    RunConfig c;
    EXPECT_NO_THROW(validate_run_config(c));
    c.jobs = 0;
    EXPECT_THROW(validate_run_config(c), std::invalid_argument);
    c = RunConfig{};
    c.rent_share = 1.5;
    EXPECT_THROW(validate_run_config(c), std::invalid_argument);
    c = RunConfig{};
    c.designs = {Design::National};
    c.policy = 2;
    EXPECT_THROW(validate_run_config(c), std::invalid_argument);
    c = RunConfig{};
    c.from = "2024-05-01";
    c.to = "2024-04-01";
    EXPECT_THROW(validate_run_config(c), std::invalid_argument);
}

TEST(Runner, DemoDayFiles) {
    RunConfig cfg;
    cfg.bundle = demo();
    auto r = run(cfg);
    ASSERT_EQ(r.days.size(), 1u);
    EXPECT_FALSE(r.days[0].error.has_value());
    auto out = scratch("demo");
    write_results(r, out);
    EXPECT_TRUE(fs::exists(out / "day-2024-03-21.json"));
    EXPECT_TRUE(fs::exists(out / "monthly.csv"));
    EXPECT_TRUE(fs::exists(out / "summary.json"));
    EXPECT_FALSE(fs::exists(out / "policy.csv"));
}

TEST(Runner, RangeOutsideCoverage) {
    RunConfig cfg;
    cfg.bundle = demo();
    cfg.from = "2024-03-22";
    try {
        load_run_bundle(cfg);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("outside bundle coverage"), std::string::npos);
    }
}

TEST(Runner, EmptyResultsHeaderOnly) {
    RunResults r;
    auto out = scratch("empty");
    write_results(r, out);
    const auto monthly = slurp(out / "monthly.csv");
    EXPECT_EQ(std::count(monthly.begin(), monthly.end(), '\n'), 1);
    EXPECT_EQ(monthly.rfind("month,design,", 0), 0u);
}

TEST(Runner, DeterministicAndParallelSafe) {
    auto a = scratch("a"), b = scratch("b"), c = scratch("c");
    write_results(run(small_config(1)), a);
    write_results(run(small_config(1)), b);
    write_results(run(small_config(4)), c);
    const auto ta = tree(a);
    EXPECT_GE(ta.size(), 8u);
    EXPECT_EQ(ta, tree(b));
    EXPECT_EQ(ta, tree(c));
}

TEST(Runner, MonthRowsAndPolicyColumn) {
    auto r = run(small_config(1));
    ASSERT_EQ(r.days.size(), 4u);
    ASSERT_EQ(r.months.size(), 2u);  // February and March
    EXPECT_EQ(r.months[0].days, 3);
    ASSERT_TRUE(r.policy.has_value());
    ASSERT_TRUE(r.policy->rho.has_value());
    for (const auto& u : r.policy->units)
        if (u.restoration) EXPECT_DOUBLE_EQ(*u.restoration, *r.policy->rho);
    auto out = scratch("policy");
    write_results(r, out);
    const auto policy = slurp(out / "policy.csv");
    EXPECT_NE(policy.substr(0, policy.find('\n')).find("restoration"), std::string::npos);
}

// Reported, not enforced: days where zonal balancing volume exceeds national.
TEST(Runner, VolumeOrderViolationsReported) {
    auto r = run(small_config(1));
    std::vector<std::string> expect;
    for (const auto& d : r.days) {
        const auto *n = d.find(Design::National), *z = d.find(Design::Zonal);
        if (z->volume_up + z->volume_down > n->volume_up + n->volume_down + 1e-6) expect.push_back(d.date);
    }
    EXPECT_EQ(r.zonal_volume_above_national, expect);
    auto out = scratch("volume-order");
    write_results(r, out);
    EXPECT_NE(slurp(out / "summary.json").find("zonal_volume_above_national"), std::string::npos);
}

TEST(Runner, FailedDayIsLoggedAndSkipped) {
    auto b = load_bundle(small_bundle());
    b.days[1].load.begin()->second[0] = 1e9;  // no supply can meet this
    RunConfig cfg = small_config(1);
    cfg.calibrate = false;
    auto r = run_bundle(b, cfg);
    EXPECT_TRUE(r.days[1].error.has_value());
    EXPECT_EQ(r.failed_days, 1);
    cfg.fail_fast = true;
    EXPECT_ANY_THROW(run_bundle(b, cfg));
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
    std::vector<int> hit(100, 0);
    parallel_for(hit.size(), 8, [&](std::size_t i) { hit[i] += 1; });
    EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 100);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}

TEST(Cli, ExitCodes) {
    auto out = scratch("cli-out");
    auto log = scratch("cli-log");
    EXPECT_EQ(cli("run --bundle " + demo().string() + " --out " + out.string() + " --quiet", log), 0);
    EXPECT_TRUE(fs::exists(out / "day-2024-03-21.json"));
    EXPECT_EQ(cli("report " + out.string(), log), 0);
    EXPECT_NE(slurp(log).find("Consumer cost stack"), std::string::npos);

    EXPECT_EQ(cli("run --bundle " + demo().string() + " --from 2025-01-01 --out " + out.string(), log), 1);
    EXPECT_NE(slurp(log).find("outside bundle coverage"), std::string::npos);

    auto empty = scratch("cli-empty");
    fs::create_directories(empty);
    EXPECT_EQ(cli("report " + empty.string(), log), 1);
    EXPECT_EQ(cli("run --bundle " + demo().string() + " --out " + out.string() + " --jobs 0", log), 1);
    EXPECT_EQ(cli("frobnicate", log), 1);
}

TEST(Cli, CalibrateAndSynth) {
    auto log = scratch("cli-log2");
    auto bundle = scratch("cli-synth");
    EXPECT_EQ(cli("synth --out " + bundle.string() + " --days 1 --buses 12 --units 20 --peak-load 2000", log), 0);
    EXPECT_TRUE(fs::exists(bundle / "days"));
    EXPECT_EQ(cli("calibrate --bundle " + demo().string(), log), 0);
    EXPECT_NE(slurp(log).find("2024-03-21"), std::string::npos);
}

TEST(Report, MissingResults) {
    std::ostringstream os;
    EXPECT_THROW(print_report(scratch("nothing-here"), os), DataError);
}
