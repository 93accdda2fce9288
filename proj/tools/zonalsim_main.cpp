#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "zonalsim/results_io.hpp"
#include "zonalsim/runner.hpp"
#include "zonalsim/synthetic.hpp"

using namespace zonalsim;

namespace {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kInternalError = 2;

std::vector<Design> parse_designs(const std::string& list) {
    std::vector<Design> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto d = parse_design(item);
        if (!d) throw std::invalid_argument("unknown design '" + item + "'");
        out.push_back(*d);
    }
    if (out.empty()) throw std::invalid_argument("--designs is empty");
    return out;
}

std::optional<int> parse_policy(const std::string& p) {
    if (p == "none") return std::nullopt;
    if (p == "1" || p == "2" || p == "3") return std::stoi(p);
    throw std::invalid_argument("--policy must be none, 1, 2 or 3");
}

struct Common {
    std::string bundle;
    std::string from, to;
    std::uint64_t seed = 0;
    int jobs = 1;

    void add(CLI::App* app) {
        if (const char* env = std::getenv("ZONALSIM_BUNDLE")) bundle = env;
        app->add_option("--bundle", bundle, "scenario bundle directory (default $ZONALSIM_BUNDLE)");
        app->add_option("--from", from, "first date, YYYY-MM-DD");
        app->add_option("--to", to, "last date, YYYY-MM-DD");
        app->add_option("--seed", seed, "seed for sampled ROC values");
        app->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    }
    void apply(RunConfig& cfg) const {
        if (bundle.empty()) throw std::invalid_argument("no bundle: pass --bundle or set ZONALSIM_BUNDLE");
        cfg.bundle = bundle;
        if (!from.empty()) cfg.from = from;
        if (!to.empty()) cfg.to = to;
        cfg.seed = seed;
        cfg.jobs = jobs;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backcasting simulator for national, zonal and nodal electricity market designs"};
    app.require_subcommand(1);

    Common run_opts;
    std::string designs = "national,zonal", policy = "none", run_out;
    double rent_share = 1.0, markup = 30.0;
    bool fail_fast = false, quiet = false;
    std::optional<double> fixed_tau;
    auto* run_cmd = app.add_subcommand("run", "clear, redispatch, settle and report a date range");
    run_opts.add(run_cmd);
    run_cmd->add_option("--designs", designs, "comma list of national, zonal, nodal");
    run_cmd->add_option("--policy", policy, "none, 1, 2 or 3");
    run_cmd->add_option("--rent-share", rent_share, "share of intra-GB rent allocated to the policy");
    run_cmd->add_option("--markup", markup, "balancing premium in GBP/MWh");
    run_cmd->add_option("--out", run_out, "results directory")->required();
    run_cmd->add_option("--tau", fixed_tau, "skip calibration and use this tuning factor");
    run_cmd->add_flag("--fail-fast", fail_fast, "abort on the first failing day");
    run_cmd->add_flag("--quiet", quiet, "suppress per-stage log lines");

    Common cal_opts;
    std::string cal_out;
    auto* cal_cmd = app.add_subcommand("calibrate", "calibrate the tuning factor per day");
    cal_opts.add(cal_cmd);
    cal_cmd->add_option("--out", cal_out, "write the table to this file instead of stdout");

    std::string report_dir;
    auto* report_cmd = app.add_subcommand("report", "print summary tables of a results directory");
    report_cmd->add_option("--out,results", report_dir, "results directory")->required();

    SyntheticConfig syn;
    std::uint64_t syn_seed = 1;
    std::string syn_out;
    std::vector<double> regimes;
    bool no_ic = false;
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic scenario bundle");
    synth_cmd->add_option("--out", syn_out, "bundle directory")->required();
    synth_cmd->add_option("--seed", syn_seed, "generator seed");
    synth_cmd->add_option("--days", syn.days, "number of days");
    synth_cmd->add_option("--start", syn.start_date, "first date");
    synth_cmd->add_option("--buses", syn.buses, "bus count");
    synth_cmd->add_option("--zones", syn.zones, "zone count");
    synth_cmd->add_option("--units", syn.units, "unit count");
    synth_cmd->add_option("--peak-load", syn.peak_load_mw, "peak system load in MW");
    synth_cmd->add_option("--regimes", regimes, "low,high,extreme wind regime weights")->delimiter(',')->expected(3);
    synth_cmd->add_option("--volatility", syn.price_volatility, "relative price volatility");
    synth_cmd->add_flag("--unconstrained-links", syn.unconstrained_links, "no transmission limits");
    synth_cmd->add_flag("--no-interconnectors", no_ic, "omit interconnectors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kDataError;
    }

    try {
        if (*run_cmd) {
            RunConfig cfg;
            run_opts.apply(cfg);
            cfg.designs = parse_designs(designs);
            cfg.policy = parse_policy(policy);
            cfg.rent_share = rent_share;
            cfg.markup = markup;
            cfg.out = run_out;
            cfg.fail_fast = fail_fast;
            if (fixed_tau) {
                cfg.calibrate = false;
                cfg.fixed_tau = *fixed_tau;
            }
            LogSink log;
            if (!quiet) log = [](const std::string& line) { std::cerr << line << '\n'; };
            const auto results = run(cfg, log);
            write_results(results, cfg.out);
            std::cerr << "summary days=" << results.days.size() << " failed=" << results.failed_days
                      << " stack_exhausted=" << results.exhausted_warnings
                      << " calibration_warnings=" << results.calibration_warnings
                      << " policy_warnings=" << results.policy_warnings
                      << " zonal_volume_above_national=" << results.zonal_volume_above_national.size() << '\n';
            return results.failed_days > 0 && results.failed_days == static_cast<int>(results.days.size())
                       ? kDataError
                       : kOk;
        }
        if (*cal_cmd) {
            RunConfig cfg;
            cal_opts.apply(cfg);
            cfg.designs = {Design::National};
            const auto bundle = load_run_bundle(cfg);
            const auto res = calibrate_bundle(bundle, cfg);
            std::ofstream file;
            if (!cal_out.empty()) {
                file.open(cal_out, std::ios::binary | std::ios::trunc);
                if (!file) throw std::runtime_error(cal_out + ": cannot write");
            }
            std::ostream& out = cal_out.empty() ? std::cout : file;
            out << "date,tau,iterations,target_mwh,achieved_mwh,converged,non_monotone\n";
            std::size_t k = 0;
            for (const auto& d : bundle.days) {
                const DateRange range{cfg.from, cfg.to};
                if (!range.contains(d.date)) continue;
                const auto& c = res[k++];
                out << d.date << ',' << format_double(c.tau) << ',' << c.iterations << ','
                    << format_double(c.target_volume) << ',' << format_double(c.achieved_volume) << ','
                    << (c.converged ? 1 : 0) << ',' << (c.non_monotone ? 1 : 0) << '\n';
            }
            return kOk;
        }
        if (*report_cmd) {
            print_report(report_dir, std::cout);
            return kOk;
        }
        if (*synth_cmd) {
            if (!regimes.empty()) syn.regime_weights = {regimes[0], regimes[1], regimes[2]};
            syn.interconnectors = !no_ic;
            const auto s = generate_synthetic(syn, syn_seed);
            write_bundle(s.bundle, syn_out);
            std::ofstream out(std::filesystem::path(syn_out) / "regimes.csv", std::ios::binary | std::ios::trunc);
            out << "date,period,regime\n";
            for (const auto& [date, rs] : s.regimes)
                for (std::size_t t = 0; t < rs.size(); ++t) out << date << ',' << t + 1 << ',' << to_string(rs[t]) << '\n';
            std::cerr << "wrote " << s.bundle.days.size() << " days to " << syn_out << '\n';
            return kOk;
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
    return kOk;
}
