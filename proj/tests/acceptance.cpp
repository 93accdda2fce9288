// Acceptance run: one PASS/FAIL line per criterion.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "testkit.hpp"
#include "zonalsim/calibration.hpp"
#include "zonalsim/lp.hpp"
#include "zonalsim/policy.hpp"
#include "zonalsim/redispatch.hpp"
#include "zonalsim/results_io.hpp"
#include "zonalsim/rng.hpp"
#include "zonalsim/runner.hpp"
#include "zonalsim/synthetic.hpp"

using namespace zonalsim;
namespace fs = std::filesystem;

namespace tol {
constexpr double kExact = 1e-6;          // two-bus values, oracle objectives
constexpr double kRelative = 1e-6;       // no-congestion equivalence
constexpr double kMoney = 1e-3;          // one milli-pound
constexpr double kCalRel = 0.02;
constexpr double kCalAbs = 10.0;         // MWh
constexpr int kCalIterations = 40;
constexpr double kSeb = 0.05;
constexpr double kShare = 0.02;          // classification, absolute share
constexpr double kRhoOne = 1e-9;
constexpr double kTwoBusSeconds = 1.0;
constexpr double kNoCongestionSeconds = 30.0;
constexpr double kDaySeconds = 10.0;
constexpr double kYearSeconds = 1800.0;
}  // namespace tol

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

int only_id = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& check) {
    if (only_id != 0 && id != only_id) return;
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s %02d %s | %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("zonalsim-acceptance-" + std::to_string(getpid()) + "-" + name);
    fs::remove_all(p);
    return p;
}

// Days of a synthetic bundle with inferred ROCs and filled cost curves.
std::vector<DayScenario> costed_days(const SyntheticBundle& g, std::uint64_t seed) {
    auto cost = prepare_cost_inputs(*g.bundle.units, g.bundle.history, seed);
    auto units = std::make_shared<UnitRegistry>(with_inferred_rocs(*g.bundle.units, cost.rocs));
    std::vector<DayScenario> out;
    for (auto day : g.bundle.days) {
        day.units = units;
        apply_cost_model(day, cost);
        out.push_back(std::move(day));
    }
    return out;
}

SyntheticConfig mid_config(int days) {
    SyntheticConfig c;
    c.buses = 60;
    c.units = 90;
    c.peak_load_mw = 6000;
    c.days = days;
    return c;
}

bool near_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// ---------------------------------------------------------------- criteria

Verdict two_bus() {
    const auto t0 = Clock::now();
    auto inst = testkit::two_bus();
    auto z = clear(inst.day, inst.topo, Design::Zonal, 1.0);
    auto n = clear(inst.day, inst.topo, Design::National, 1.0);
    auto rent = congestion_rent(z, inst.day, inst.topo);
    auto a = redispatch(n, inst.day, inst.topo, 1.0);
    const double volume = balancing_volume(n, a, default_groups(inst.day, inst.topo)).congestion_volume();
    const double secs = seconds_since(t0);
    auto zo = testkit::vertex_oracle(inst.day, inst.topo, Design::Zonal);
    auto no = testkit::vertex_oracle(inst.day, inst.topo, Design::National);

    double err = 0.0;
    auto chk = [&](double got, double want) { err = std::max(err, std::abs(got - want)); };
    chk(z.dispatch.at("gen-north")[0], 50);
    chk(z.dispatch.at("gen-south")[0], 70);
    chk(z.prices[0][0], 10);
    chk(z.prices[1][0], 50);
    chk(rent.intra[0], 1000);
    chk(n.dispatch.at("gen-north")[0], 100);
    chk(n.dispatch.at("gen-south")[0], 20);
    chk(n.prices[0][0], 50);
    chk(volume, 50);
    chk(z.objective, zo.value_or(NAN));
    chk(n.objective, no.value_or(NAN));
    const bool pass = err <= tol::kExact && secs < tol::kTwoBusSeconds;
    return {pass, "max abs error " + fmt(err) + " (tol 1e-6), redispatch " + fmt(volume) +
                      " MWh/day, " + fmt(secs) + " s (< 1 s)"};
}

Verdict no_congestion() {
    auto cfg = mid_config(50);
    cfg.unconstrained_links = true;
    auto g = generate_synthetic(cfg, 101);
    auto days = costed_days(g, 101);
    const auto t0 = Clock::now();
    double worst = 0.0, volume = 0.0;
    bool ok = true;
    auto track = [&](double a, double b) {
        const double rel = std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
        worst = std::max(worst, rel);
        if (rel > tol::kRelative) ok = false;
    };
    for (const auto& day : days) {
        auto n = testkit::run_design(day, g.bundle.topology, Design::National);
        auto z = testkit::run_design(day, g.bundle.topology, Design::Zonal);
        track(n.wholesale.objective, z.wholesale.objective);
        for (const auto& zp : z.wholesale.prices)
            for (std::size_t t = 0; t < zp.size(); ++t) track(n.wholesale.prices[0][t], zp[t]);
        track(consumer_costs(settle(n, day, g.bundle.topology)).total(),
              consumer_costs(settle(z, day, g.bundle.topology)).total());
        volume = std::max({volume, n.balancing.congestion_volume(), z.balancing.congestion_volume()});
    }
    const double secs = seconds_since(t0);
    const bool pass = ok && volume <= tol::kExact && secs < tol::kNoCongestionSeconds;
    return {pass, "50 days, worst relative gap " + fmt(worst) + " (tol 1e-6), max balancing volume " +
                      fmt(volume) + " MWh, " + fmt(secs) + " s (< 30 s)"};
}

Verdict oracle() {
    int compared = 0, infeasible = 0, mismatched = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1000; seed < 1200; ++seed) {
        auto inst = testkit::micro_instance(seed);
        for (Design d : {Design::National, Design::Zonal, Design::Nodal}) {
            auto want = testkit::vertex_oracle(inst.day, inst.topo, d);
            if (!want) {
                ++infeasible;
                try {
                    clear(inst.day, inst.topo, d, 1.0);
                    ++mismatched;
                } catch (const InfeasibleError&) {
                }
                continue;
            }
            ++compared;
            const double got = clear(inst.day, inst.topo, d, 1.0).objective;
            const double err = std::abs(got - *want) / std::max(1.0, std::abs(*want));
            worst = std::max(worst, err);
            if (err > tol::kExact) ++mismatched;
        }
    }
    return {mismatched == 0, "200 instances x 3 designs: " + std::to_string(compared) + " optima compared, " +
                                 std::to_string(infeasible) + " infeasible agreed, worst relative gap " +
                                 fmt(worst) + " (tol 1e-6)"};
}

Verdict money() {
    double worst = 0.0;
    int periods = 0;
    auto check = [&](const DayScenario& day, const NetworkTopology& topo) {
        for (Design d : {Design::National, Design::Zonal, Design::Nodal}) {
            auto o = testkit::run_design(day, topo, d);
            auto L = settle(o, day, topo);
            for (int t = 0; t < L.periods; ++t) {
                const auto ti = static_cast<std::size_t>(t);
                double producers = 0.0;
                for (const auto& [u, rev] : L.wholesale_revenue) producers += rev[ti];
                const double gap = L.consumer_wholesale_cost[ti] -
                                   (producers + L.ic_trade[ti] + L.congestion_rent_intra[ti]);
                worst = std::max(worst, std::abs(gap));
                ++periods;
            }
        }
    };
    auto demo = load_bundle(fs::path(ZONALSIM_FIXTURES) / "two-bus-demo");
    {
        auto day = demo.days[0];
        CostInputs in;
        apply_cost_model(day, in);
        check(day, demo.topology);
    }
    auto cfg = mid_config(10);
    cfg.regime_weights = {0.4, 0.5, 0.1};
    auto g = generate_synthetic(cfg, 202);
    for (const auto& day : costed_days(g, 202)) check(day, g.bundle.topology);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto inst = testkit::micro_instance(seed);
        if (!testkit::vertex_oracle(inst.day, inst.topo, Design::Nodal)) continue;
        check(inst.day, inst.topo);
    }
    return {worst <= tol::kMoney, std::to_string(periods) + " design-periods, worst imbalance GBP " +
                                      fmt(worst) + " (tol 0.001)"};
}

Verdict calibration() {
    auto cfg = mid_config(20);
    cfg.regime_weights = {0.0, 0.9, 0.1};
    auto g = generate_synthetic(cfg, 303);
    auto days = costed_days(g, 303);
    Rng rng(303, "planted-tau");
    int ok = 0, worst_iter = 0;
    double worst_excess = -1e300;
    for (const auto& day : days) {
        const double planted = std::exp(rng.uniform(std::log(0.3), std::log(3.0)));
        auto n = clear(day, g.bundle.topology, Design::National, 1.0);
        auto a = redispatch(n, day, g.bundle.topology, planted);
        const double target =
            balancing_volume(n, a, default_groups(day, g.bundle.topology)).congestion_volume();
        auto c = calibrate(day, g.bundle.topology, target, {}, &n);
        const double allowed = std::max(tol::kCalAbs, tol::kCalRel * target);
        const double miss = std::abs(c.achieved_volume - target);
        worst_excess = std::max(worst_excess, miss / allowed);
        worst_iter = std::max(worst_iter, c.iterations);
        if (c.converged && miss <= allowed && c.iterations <= tol::kCalIterations) ++ok;
    }
    return {ok == 20, std::to_string(ok) + "/20 days within max(2%, 10 MWh), worst miss " +
                          fmt(worst_excess) + " of tolerance, max " + std::to_string(worst_iter) +
                          " iterations (<= 40)"};
}

// Zonal settlement pieces of a synthetic congested corpus, for Policy 2.
Verdict policy_invariants() {
    std::vector<std::string> notes;
    bool pass = true;

    // Policy 2: post-policy revenue of every covered dispatched unit equals
    // its dispatch valued at the reference price plus subsidy.
    {
        auto cfg = mid_config(5);
        cfg.regime_weights = {0.0, 0.9, 0.1};
        auto g = generate_synthetic(cfg, 404);
        const auto& topo = g.bundle.topology;
        PolicyRunData pd;
        std::map<std::string, double> value_at_ref, subsidy, zonal_rev, national_rev, ftr;
        std::map<std::string, Series> zonal_q;
        std::map<std::string, std::pair<double, int>> zone_sum;
        double nat_sum = 0.0;
        int nat_n = 0;
        for (const auto& day : costed_days(g, 404)) {
            auto n = testkit::run_design(day, topo, Design::National);
            auto z = testkit::run_design(day, topo, Design::Zonal);
            auto Ln = settle(n, day, topo);
            auto Lz = settle(z, day, topo);
            pd.rent_available += consumer_costs(Lz).congestion_rent_income;
            const auto& reg = z.wholesale.regions;
            std::vector<Series> load(reg.names.size(), Series(48, 0.0));
            for (std::size_t b = 0; b < topo.buses.size(); ++b)
                for (std::size_t t = 0; t < 48; ++t)
                    load[static_cast<std::size_t>(reg.bus_region[b])][t] += day.load.at(topo.buses[b])[t];
            Series pref(48);
            for (std::size_t t = 0; t < 48; ++t) {
                std::vector<double> zp, zl;
                for (std::size_t k = 0; k < reg.names.size(); ++k) {
                    zp.push_back(z.wholesale.prices[k][t]);
                    zl.push_back(load[k][t]);
                    zone_sum[reg.names[k]].first += z.wholesale.prices[k][t];
                    zone_sum[reg.names[k]].second += 1;
                }
                pref[t] = reference_price(zp, zl);
                nat_sum += n.wholesale.prices[0][t];
                ++nat_n;
            }
            for (const auto& u : *day.units) {
                if (!u.is_generator()) continue;
                const auto& q = z.wholesale.dispatch.at(u.id);
                const auto& own = z.wholesale.prices[static_cast<std::size_t>(
                    reg.bus_region[*topo.bus_index(u.bus)])];
                for (std::size_t t = 0; t < 48; ++t) {
                    value_at_ref[u.id] += q[t] * pref[t] * kPeriodHours;
                    zonal_rev[u.id] += Lz.wholesale_revenue.at(u.id)[t];
                    national_rev[u.id] += Ln.wholesale_revenue.at(u.id)[t] + Ln.ro_payment.at(u.id)[t] +
                                          Ln.cfd_topup.at(u.id)[t];
                    subsidy[u.id] += Lz.ro_payment.at(u.id)[t] + Lz.cfd_topup.at(u.id)[t];
                }
                ftr[u.id] += ftr_spread_payout(q, pref, own);
                auto& zq = zonal_q[u.id];
                zq.insert(zq.end(), q.begin(), q.end());
            }
        }
        for (const auto& [zone, acc] : zone_sum) pd.zone_mean_price[zone] = acc.first / acc.second;
        pd.national_mean_price = nat_sum / nat_n;
        for (const auto& u : *g.bundle.units) {
            if (!u.is_generator()) continue;
            PolicyUnitData pu;
            pu.unit = u.id;
            pu.zone = topo.zones.at(u.bus);
            pu.tech = u.tech;
            pu.cfd = u.subsidy.variant == SubsidyScheme::Variant::CfD;
            pu.national_revenue = national_rev[u.id];
            pu.zonal_revenue = zonal_rev[u.id] + subsidy[u.id];
            pu.ftr_spread_payout = ftr[u.id];
            pd.units.push_back(pu);
        }
        // Unconstrained budget (s = 1); each covered unit then has its own
        // zone price replaced with dispatch and P_ref held fixed.
        PolicyRunData rich = pd;
        rich.rent_available = 1e12;
        auto base = policy2(rich, 1.0);
        double worst = 0.0;
        int checked = 0;
        for (const auto& o : base.units) {
            if (zonal_q[o.unit].empty() || value_at_ref[o.unit] <= 0.0) continue;
            ++checked;
            worst = std::max(worst, std::abs(o.post_revenue - (value_at_ref[o.unit] + subsidy[o.unit])));
            for (double shift : {-40.0, 25.0}) {
                PolicyRunData alt = rich;
                for (auto& u : alt.units) {
                    if (u.unit != o.unit) continue;
                    double energy = 0.0;
                    for (double q : zonal_q[o.unit]) energy += q * kPeriodHours;
                    u.zonal_revenue += shift * energy;
                    u.ftr_spread_payout -= shift * energy;
                }
                for (const auto& a : policy2(alt, 1.0).units)
                    if (a.unit == o.unit) worst = std::max(worst, std::abs(a.post_revenue - o.post_revenue));
            }
        }
        const bool ok = base.scale == 1.0 && checked > 0 && worst <= tol::kMoney;
        pass = pass && ok;
        notes.push_back("P2 at s=" + fmt(base.scale) + ", " + std::to_string(checked) +
                        " covered dispatched units, zone price shifted by -40/+25, worst deviation GBP " + fmt(worst) +
                        " (run budget alone gives s=" + fmt(policy2(pd, 1.0).scale) + ")");

        // Policies 2 and 3 leave consumers the same saving at equal rent share.
        pd.consumer_saving_full = 1.0e6;
        pd.served_load_mwh = 1.0e5;
        double gap = 0.0;
        for (double share : {0.0, 0.25, 0.5, 1.0})
            gap = std::max(gap, std::abs(policy2(pd, share).residual_saving - policy3(pd, share).residual_saving));
        pass = pass && gap <= tol::kMoney;
        notes.push_back("P2/P3 saving gap GBP " + fmt(gap));
    }

    // Policy 3 through the full pipeline: one ratio for every covered unit.
    {
        auto cfg = mid_config(4);
        cfg.regime_weights = {0.0, 0.9, 0.1};
        auto g = generate_synthetic(cfg, 405);
        RunConfig rc;
        rc.policy = 3;
        rc.seed = 405;
        auto r = run_bundle(g.bundle, rc);
        bool uniform = r.policy && r.policy->rho;
        double worst = 0.0;
        int covered = 0;
        if (uniform)
            for (const auto& u : r.policy->units) {
                if (!u.restoration) continue;
                ++covered;
                if (*u.restoration != *r.policy->rho) uniform = false;
                worst = std::max(worst, std::abs(u.post_revenue / u.national_revenue - *r.policy->rho));
            }
        uniform = uniform && covered > 0 && worst <= 1e-12;
        pass = pass && uniform;
        notes.push_back("P3 rho=" + (r.policy && r.policy->rho ? fmt(*r.policy->rho) : std::string("none")) +
                        " over " + std::to_string(covered) + " units, worst ratio gap " + fmt(worst));
    }

    // Fixture: northern wind delivers the same energy in both designs and the
    // rent covers the price gap.
    {
        Bundle b;
        auto& t = b.topology;
        t.buses = {"N", "S"};
        t.links = {Link{"N", "S", Capacity::limited(50)}};
        t.zones = {{"N", "Z1"}, {"S", "Z2"}};
        t.bands = {{"N", Band::North}, {"S", Band::South}};
        t.boundaries = {Boundary{"B6", {0}}};
        b.units = std::make_shared<UnitRegistry>(UnitRegistry{
            testkit::wind("wind-north", "N", SubsidyScheme::none()), testkit::thermal("gas-north", "N", 10),
            testkit::thermal("gas-south", "S", 50)});
        auto day = testkit::blank_day(t, b.units, 48);
        day.availability["wind-north"] = Series(48, 50.0);
        day.availability["gas-north"] = Series(48, 100.0);
        day.availability["gas-south"] = Series(48, 300.0);
        day.load["S"] = Series(48, 200.0);
        day.boundary_ntc["B6"] = Series(48, 50.0);
        day.day_ahead_price_gb = Series(48, 50.0);
        b.days.push_back(day);
        RunConfig rc;
        rc.policy = 3;
        rc.calibrate = false;
        auto r = run_bundle(b, rc);
        const double rho = r.policy && r.policy->rho ? *r.policy->rho : NAN;
        const bool ok = std::abs(rho - 1.0) <= tol::kRhoOne;
        pass = pass && ok;
        notes.push_back("fixture rho=" + fmt(rho));
    }

    std::string detail;
    for (const auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
    return {pass, detail + " (tol 0.001 GBP, exact ratio, rho within 1e-9)"};
}

Verdict seb() {
    auto cfg = mid_config(90);
    cfg.price_volatility = 0.0;  // constant fuel and neighbour prices
    auto g = generate_synthetic(cfg, 505);
    RunConfig rc;
    rc.seed = 505;
    rc.markup = cfg.balancing_markup;
    auto r = run_bundle(g.bundle, rc);
    SebComponents total;
    for (const auto& d : r.days)
        if (d.seb) total += *d.seb;
    const double bu = total.total_bottom_up(), td = total.total_top_down;
    const double rel = std::abs(td - bu) / std::abs(bu);

    auto ucfg = mid_config(10);
    ucfg.price_volatility = 0.0;
    ucfg.unconstrained_links = true;
    auto ug = generate_synthetic(ucfg, 506);
    auto ur = run_bundle(ug.bundle, rc);
    double worst_zero = 0.0;
    for (const auto& d : ur.days) {
        if (!d.seb) {
            worst_zero = INFINITY;
            continue;
        }
        worst_zero = std::max({worst_zero, std::abs(static_cast<double>(to_milli(d.seb->total_bottom_up()))),
                               std::abs(static_cast<double>(to_milli(d.seb->total_top_down)))});
    }
    const bool pass = rel <= tol::kSeb && worst_zero == 0.0 && r.failed_days == 0 && ur.failed_days == 0;
    return {pass, "90 days: bottom-up GBP " + fmt(bu) + ", top-down GBP " + fmt(td) + ", gap " +
                      fmt(100 * rel) + "% (tol 5%); 10 uncongested days max |SEB| " + fmt(worst_zero) +
                      " milli-GBP (must be 0), failed days " +
                      std::to_string(r.failed_days + ur.failed_days)};
}

Verdict classification() {
    auto cfg = mid_config(209);  // 10,032 periods
    auto g = generate_synthetic(cfg, 606);
    std::array<int, 3> n{};
    int total = 0, agree = 0;
    auto days = costed_days(g, 606);
    for (const auto& day : days) {
        auto nat = clear(day, g.bundle.topology, Design::National, 1.0);
        auto zon = clear(day, g.bundle.topology, Design::Zonal, 1.0);
        const auto& drawn = g.regimes.at(day.date);
        for (int t = 0; t < day.periods; ++t) {
            std::vector<double> zp;
            for (const auto& p : zon.prices) zp.push_back(p[static_cast<std::size_t>(t)]);
            const auto c = classify_period(zp, national_price_setter(nat, day, t));
            ++n[static_cast<std::size_t>(c)];
            ++total;
            if (c == drawn[static_cast<std::size_t>(t)]) ++agree;
        }
    }
    double worst = 0.0;
    std::string shares;
    for (std::size_t i = 0; i < 3; ++i) {
        const double s = static_cast<double>(n[i]) / total;
        worst = std::max(worst, std::abs(s - cfg.regime_weights[i]));
        shares += (i ? "/" : "") + fmt(100 * s);
    }
    return {worst <= tol::kShare, std::to_string(total) + " periods, shares low/high/extreme " + shares +
                                      "% vs 69/30/1, worst deviation " + fmt(100 * worst) +
                                      " points (tol 2), " + std::to_string(agree) + " match the drawn regime"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
    return out;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(ZONALSIM_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict determinism() {
    auto bundle = scratch("det-bundle");
    auto a = scratch("det-a"), b = scratch("det-b"), c = scratch("det-c");
    if (cli("synth --out " + bundle.string() + " --seed 707 --days 6 --buses 60 --units 90 --peak-load 6000") != 0)
        return {false, "synth failed"};
    const std::string common = "run --bundle " + bundle.string() +
                               " --designs national,zonal,nodal --policy 2 --seed 707 --quiet --out ";
    const int ra = cli(common + a.string() + " --jobs 1");
    const int rb = cli(common + b.string() + " --jobs 1");
    const int rc = cli(common + c.string() + " --jobs 8");
    const auto ta = tree(a), tb = tree(b), tc = tree(c);
    std::size_t bytes = 0;
    for (const auto& [k, v] : ta) bytes += v.size();
    const bool pass = ra == 0 && rb == 0 && rc == 0 && !ta.empty() && ta == tb && ta == tc;
    return {pass, std::to_string(ta.size()) + " files, " + std::to_string(bytes) +
                      " bytes; repeat identical: " + (ta == tb ? "yes" : "no") +
                      "; jobs 8 == jobs 1: " + (ta == tc ? "yes" : "no")};
}

Verdict performance(bool year) {
    SyntheticConfig full;
    full.days = 1;
    auto g = generate_synthetic(full, 808);
    RunConfig rc;
    rc.designs = {Design::National, Design::Zonal, Design::Nodal};
    rc.seed = 808;
    auto t0 = Clock::now();
    auto r = run_bundle(g.bundle, rc);
    const double day_secs = seconds_since(t0);
    bool pass = day_secs < tol::kDaySeconds && r.failed_days == 0;
    std::string detail = "full-size day (300 buses, 450 units, 3 designs, calibration) " + fmt(day_secs) +
                         " s (< 10 s)";
    const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
    if (year) {
        SyntheticConfig y;
        y.days = 365;
        auto gy = generate_synthetic(y, 809);
        rc.jobs = 8;
        t0 = Clock::now();
        auto ry = run_bundle(gy.bundle, rc);
        const double year_secs = seconds_since(t0);
        pass = pass && year_secs < tol::kYearSeconds && ry.failed_days == 0;
        detail += "; 365-day year at jobs 8 on " + std::to_string(cores) + " core(s) " + fmt(year_secs) +
                  " s (< 1800 s), " + std::to_string(ry.failed_days) + " failed days";
    } else {
        pass = false;
        detail += "; year run skipped";
    }
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
    bool year = true;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--skip-year") year = false;
        if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    only_id = only;
    report(1, "two-bus worked example", two_bus);
    report(2, "no-congestion equivalence", no_congestion);
    report(3, "oracle equivalence", oracle);
    report(4, "money conservation", money);
    report(5, "calibration", calibration);
    report(6, "policy invariants", policy_invariants);
    report(7, "SEB cross-check", seb);
    report(8, "classification shares", classification);
    report(9, "determinism and parallel safety", determinism);
    report(10, "performance envelope", [&] { return performance(year); });
    std::printf("%d of %d criteria failed\n", failures, only_id ? 1 : 10);
    return failures == 0 ? 0 : 1;
}
