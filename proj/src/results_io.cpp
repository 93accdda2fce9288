#include "zonalsim/results_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "zonalsim/csv.hpp"

namespace zonalsim {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(file.string() + ": cannot write");
    return out;
}

ojson stack_json(const ConsumerCostStack& c) {
    ojson j;
    j["wholesale_cost_mgbp"] = to_milli(c.wholesale_cost);
    j["bm_cost_mgbp"] = to_milli(c.bm_cost);
    j["ro_payments_mgbp"] = to_milli(c.ro_payments);
    j["cfd_payments_mgbp"] = to_milli(c.cfd_payments);
    j["congestion_rent_income_mgbp"] = to_milli(c.congestion_rent_income);
    j["total_mgbp"] = to_milli(c.total());
    j["served_load_mwh"] = c.served_load_mwh;
    return j;
}

ojson seb_json(const SebComponents& s) {
    ojson j;
    j["export_revenue_delta_mgbp"] = to_milli(s.export_revenue_delta);
    j["import_cost_delta_mgbp"] = to_milli(s.import_cost_delta);
    j["ic_rent_delta_mgbp"] = to_milli(s.ic_rent_delta);
    j["prevented_thermal_balancing_mgbp"] = to_milli(s.prevented_thermal_balancing);
    j["prevented_thermal_wholesale_mgbp"] = to_milli(s.prevented_thermal_wholesale);
    j["total_bottom_up_mgbp"] = to_milli(s.total_bottom_up());
    j["total_top_down_mgbp"] = to_milli(s.total_top_down);
    return j;
}

ojson day_json(const DayResult& d) {
    ojson j;
    j["date"] = d.date;
    if (d.error) {
        j["error"] = *d.error;
        return j;
    }
    j["tau"] = d.tau;
    j["calibration"] = {{"iterations", d.calibration.iterations},
                        {"converged", d.calibration.converged},
                        {"non_monotone", d.calibration.non_monotone},
                        {"target_mwh", d.calibration.target_volume},
                        {"achieved_mwh", d.calibration.achieved_volume}};
    ojson designs = ojson::object();
    for (const auto& dd : d.designs) {
        ojson x;
        x["objective_mgbp"] = to_milli(dd.objective);
        x["consumer"] = stack_json(dd.consumer);
        x["balancing"] = {{"up_mwh", dd.volume_up},
                          {"down_mwh", dd.volume_down},
                          {"bm_cost_mgbp", to_milli(dd.bm_cost)},
                          {"exhausted_warnings", dd.exhausted_warnings}};
        x["congestion_rent_intra_mgbp"] = to_milli(dd.rent_intra);
        x["congestion_rent_ic_mgbp"] = to_milli(dd.rent_ic);
        x["ic_trade_mgbp"] = to_milli(dd.ic_trade);
        x["market_curtailment_mwh"] = dd.market_curtailment;
        x["redispatch_curtailment_mwh"] = dd.redispatch_curtailment;
        ojson prices = ojson::object();
        for (std::size_t k = 0; k < dd.regions.size(); ++k) prices[dd.regions[k]] = dd.prices[k];
        x["prices"] = std::move(prices);
        designs[to_string(dd.design)] = std::move(x);
    }
    j["designs"] = std::move(designs);
    if (!d.classification.empty()) {
        ojson c = ojson::array();
        for (auto w : d.classification) c.push_back(to_string(w));
        j["classification"] = std::move(c);
    }
    if (d.seb) j["seb"] = seb_json(*d.seb);
    j["unlocked_wind"] = {{"energy_mwh", d.unlocked.energy_mwh}, {"co2_tonnes", d.unlocked.co2_tonnes}};
    return j;
}

std::string opt_num(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

constexpr Design kAll[] = {Design::National, Design::Zonal, Design::Nodal};

}  // namespace

void write_results(const RunResults& r, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw std::runtime_error(dir.string() + ": cannot create results directory");

    for (const auto& d : r.days) {
        auto out = open_out(dir / ("day-" + d.date + ".json"));
        out << day_json(d).dump(2) << '\n';
    }

    {
        auto out = open_out(dir / "monthly.csv");
        out << "month,design,days,served_load_mwh,wholesale_cost_mgbp,bm_cost_mgbp,ro_payments_mgbp,"
               "cfd_payments_mgbp,congestion_rent_income_mgbp,total_mgbp,per_mwh\n";
        for (const auto& m : r.months)
            for (Design d : kAll) {
                auto it = m.consumer.find(d);
                if (it == m.consumer.end()) continue;
                const auto& c = it->second;
                out << m.month << ',' << to_string(d) << ',' << m.days << ','
                    << format_double(c.served_load_mwh) << ',' << to_milli(c.wholesale_cost) << ','
                    << to_milli(c.bm_cost) << ',' << to_milli(c.ro_payments) << ','
                    << to_milli(c.cfd_payments) << ',' << to_milli(c.congestion_rent_income) << ','
                    << to_milli(c.total()) << ',' << opt_num(c.per_mwh()) << '\n';
            }
    }

    {
        auto out = open_out(dir / "welfare.csv");
        out << "month,export_revenue_delta_mgbp,import_cost_delta_mgbp,ic_rent_delta_mgbp,"
               "prevented_thermal_balancing_mgbp,prevented_thermal_wholesale_mgbp,total_bottom_up_mgbp,"
               "total_top_down_mgbp,curtailment_national_mwh,curtailment_zonal_mwh,unlocked_wind_mwh,"
               "co2_tonnes\n";
        for (const auto& m : r.months) {
            if (!m.seb) continue;
            const auto& s = *m.seb;
            out << m.month << ',' << to_milli(s.export_revenue_delta) << ',' << to_milli(s.import_cost_delta)
                << ',' << to_milli(s.ic_rent_delta) << ',' << to_milli(s.prevented_thermal_balancing) << ','
                << to_milli(s.prevented_thermal_wholesale) << ',' << to_milli(s.total_bottom_up()) << ','
                << to_milli(s.total_top_down) << ',' << format_double(m.curtailment_national_mwh) << ','
                << format_double(m.curtailment_zonal_mwh) << ',' << format_double(m.unlocked.energy_mwh)
                << ',' << format_double(m.unlocked.co2_tonnes) << '\n';
        }
    }

    {
        auto out = open_out(dir / "units.csv");
        out << "unit,zone,tech,national_wholesale_mgbp,national_balancing_mgbp,national_subsidy_mgbp,"
               "national_total_mgbp,zonal_wholesale_mgbp,zonal_balancing_mgbp,zonal_subsidy_mgbp,"
               "zonal_total_mgbp,percent_change,markup\n";
        for (const auto& p : r.producers) {
            out << p.unit << ',' << r.unit_zone.at(p.unit) << ',' << to_string(r.unit_tech.at(p.unit)) << ','
                << to_milli(p.national.wholesale) << ',' << to_milli(p.national.balancing) << ','
                << to_milli(p.national.subsidy) << ',' << to_milli(p.national.total()) << ','
                << to_milli(p.zonal.wholesale) << ',' << to_milli(p.zonal.balancing) << ','
                << to_milli(p.zonal.subsidy) << ',' << to_milli(p.zonal.total()) << ','
                << opt_num(p.percent_change) << ',' << format_double(p.markup) << '\n';
        }
    }

    if (r.policy) {
        auto out = open_out(dir / "policy.csv");
        out << "policy,unit,zone,national_revenue_mgbp,zonal_revenue_mgbp,payout_mgbp,post_revenue_mgbp,"
               "restoration\n";
        for (const auto& u : r.policy->units)
            out << r.policy->policy << ',' << u.unit << ',' << u.zone << ',' << to_milli(u.national_revenue)
                << ',' << to_milli(u.zonal_revenue) << ',' << to_milli(u.payout) << ','
                << to_milli(u.post_revenue) << ',' << opt_num(u.restoration) << '\n';
    }

    ojson s;
    ojson cfg;
    cfg["from"] = r.days.empty() ? std::string() : r.days.front().date;
    cfg["to"] = r.days.empty() ? std::string() : r.days.back().date;
    ojson designs = ojson::array();
    for (Design d : r.config.designs) designs.push_back(to_string(d));
    cfg["designs"] = std::move(designs);
    cfg["policy"] = r.config.policy ? std::to_string(*r.config.policy) : std::string("none");
    cfg["rent_share"] = r.config.rent_share;
    cfg["markup"] = r.config.markup;
    cfg["seed"] = r.config.seed;
    s["config"] = std::move(cfg);
    s["days"] = r.days.size();
    s["failed_days"] = r.failed_days;
    s["warnings"] = {{"balancing_stack_exhausted", r.exhausted_warnings},
                     {"calibration", r.calibration_warnings},
                     {"zonal_volume_above_national", r.zonal_volume_above_national},
                     {"policy", r.policy_warnings}};
    ojson classes = ojson::object();
    for (const auto& [k, v] : r.class_counts) classes[k] = v;
    s["classification"] = std::move(classes);
    ojson vol = ojson::object();
    for (const auto& [d, regions] : r.volatility) {
        ojson x = ojson::object();
        for (const auto& [region, sd] : regions) x[region] = sd;
        vol[to_string(d)] = std::move(x);
    }
    s["price_volatility"] = std::move(vol);
    s["unlocked_wind"] = {{"energy_mwh", r.unlocked.energy_mwh}, {"co2_tonnes", r.unlocked.co2_tonnes}};
    if (r.policy) {
        const auto& p = *r.policy;
        ojson x;
        x["policy"] = p.policy;
        x["rent_share"] = p.rent_share;
        x["rent_available_mgbp"] = to_milli(p.rent_available);
        x["rent_budget_mgbp"] = to_milli(p.rent_budget);
        x["payout_total_mgbp"] = to_milli(p.payout_total);
        x["scale"] = p.scale;
        if (p.rho) x["rho"] = *p.rho;
        x["residual_saving_mgbp"] = to_milli(p.residual_saving);
        if (p.residual_saving_per_mwh) x["residual_saving_per_mwh"] = *p.residual_saving_per_mwh;
        x["covered_units"] = p.units.size();
        s["policy"] = std::move(x);
    }
    if (r.regression) {
        s["regression"] = {{"slope", r.regression->slope},
                           {"intercept", r.regression->intercept},
                           {"r_squared", r.regression->r_squared},
                           {"scale", r.config.regression_scale},
                           {"projected_annual_mgbp", to_milli(r.regression->projected_annual)}};
    } else if (r.regression_note) {
        s["regression"] = {{"note", *r.regression_note}};
    }
    s["notes"] = {"interconnector trade payments are part of the wholesale cost line",
                  "policy revenues exclude balancing receipts",
                  "northern thermal units are outside policy coverage"};
    auto out = open_out(dir / "summary.json");
    out << s.dump(2) << '\n';
}

}  // namespace zonalsim
