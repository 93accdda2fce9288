#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include <json.hpp>

#include "zonalsim/csv.hpp"
#include "zonalsim/results_io.hpp"

namespace zonalsim {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double mgbp(const CsvTable& t, std::size_t r, int c) { return field_double(t, r, c) / 1000.0; }

void histogram(std::ostream& out, const std::vector<double>& xs, double lo, double hi, double step,
               const char* label) {
    const auto bins = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    std::vector<int> counts(bins + 2, 0);
    for (double x : xs) {
        if (x < lo) ++counts.front();
        else if (x >= hi) ++counts.back();
        else ++counts[1 + static_cast<std::size_t>((x - lo) / step)];
    }
    out << "  " << label << " < " << lo << ": " << counts.front() << '\n';
    for (std::size_t b = 0; b < bins; ++b)
        out << "  [" << lo + step * static_cast<double>(b) << ", " << lo + step * static_cast<double>(b + 1)
            << "): " << counts[b + 1] << '\n';
    out << "  " << label << " >= " << hi << ": " << counts.back() << '\n';
}

}  // namespace

void print_report(const fs::path& dir, std::ostream& out) {
    if (!fs::is_directory(dir)) throw DataError(dir.string() + ": results directory not found");
    if (!fs::exists(dir / "summary.json") || !fs::exists(dir / "monthly.csv"))
        throw DataError(dir.string() + ": no results (summary.json or monthly.csv missing)");
    nlohmann::json summary;
    {
        std::ifstream in(dir / "summary.json");
        try {
            in >> summary;
        } catch (const nlohmann::json::exception& e) {
            throw DataError((dir / "summary.json").string() + ": " + e.what());
        }
    }

    out << "Consumer cost stack (GBP million; per MWh in GBP)\n";
    {
        const auto t = read_csv(dir / "monthly.csv");
        const int cm = t.require_column("month"), cd = t.require_column("design"),
                  cw = t.require_column("wholesale_cost_mgbp"), cb = t.require_column("bm_cost_mgbp"),
                  cr = t.require_column("ro_payments_mgbp"), cc = t.require_column("cfd_payments_mgbp"),
                  cn = t.require_column("congestion_rent_income_mgbp"), ct = t.require_column("total_mgbp"),
                  cp = t.require_column("per_mwh");
        out << "  month    design    wholesale        bm        ro       cfd      rent     total   per_mwh\n";
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            char line[256];
            std::snprintf(line, sizeof line, "  %-8s %-8s %10.3f %9.3f %9.3f %9.3f %9.3f %9.3f %9s\n",
                          field(t, r, cm).c_str(), field(t, r, cd).c_str(), mgbp(t, r, cw) / 1e6,
                          mgbp(t, r, cb) / 1e6, mgbp(t, r, cr) / 1e6, mgbp(t, r, cc) / 1e6,
                          mgbp(t, r, cn) / 1e6, mgbp(t, r, ct) / 1e6,
                          field(t, r, cp).empty() ? "-" : fmt("%.2f", field_double(t, r, cp)).c_str());
            out << line;
        }
    }

    if (fs::exists(dir / "units.csv")) {
        const auto t = read_csv(dir / "units.csv");
        const int cz = t.require_column("zone"), ct = t.require_column("tech"),
                  cp = t.require_column("percent_change");
        std::map<std::string, std::vector<double>> groups;
        std::vector<double> all;
        int undefined = 0;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto v = field_optional_double(t, r, cp);
            if (!v) {
                ++undefined;
                continue;
            }
            groups[field(t, r, ct) + "/" + field(t, r, cz)].push_back(*v);
            all.push_back(*v);
        }
        out << "\nProducer surplus change, zonal vs national (percent)\n";
        out << "  group                      units    median\n";
        for (auto& [g, xs] : groups) {
            std::sort(xs.begin(), xs.end());
            const double med = xs.size() % 2 ? xs[xs.size() / 2]
                                             : 0.5 * (xs[xs.size() / 2 - 1] + xs[xs.size() / 2]);
            char line[128];
            std::snprintf(line, sizeof line, "  %-24s %7zu %9.2f\n", g.c_str(), xs.size(), med);
            out << line;
        }
        out << "  undefined (zero national surplus): " << undefined << '\n';
        histogram(out, all, -100.0, 100.0, 20.0, "change");
    }

    if (fs::exists(dir / "policy.csv")) {
        const auto t = read_csv(dir / "policy.csv");
        const int cr = t.require_column("restoration");
        std::vector<double> ratios;
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            if (auto v = field_optional_double(t, r, cr)) ratios.push_back(*v);
        out << "\nPolicy restoration ratio (post-policy / national revenue), " << t.rows.size()
            << " covered units\n";
        histogram(out, ratios, 0.0, 1.2, 0.1, "ratio");
        if (summary.contains("policy")) {
            const auto& p = summary["policy"];
            out << "  policy " << p["policy"].get<int>() << ": payout "
                << fmt("%.3f", p["payout_total_mgbp"].get<double>() / 1e9) << " GBPm of budget "
                << fmt("%.3f", p["rent_budget_mgbp"].get<double>() / 1e9) << " GBPm";
            if (p.contains("rho")) out << ", rho " << fmt("%.4f", p["rho"].get<double>());
            out << ", scale " << fmt("%.4f", p["scale"].get<double>()) << '\n';
        }
    }

    if (fs::exists(dir / "welfare.csv")) {
        const auto t = read_csv(dir / "welfare.csv");
        out << "\nSocioeconomic benefit components (GBP thousand)\n";
        out << "  month      exports   imports    ic_rent  therm_bal  therm_whl  bottom_up   top_down  curtail_MWh\n";
        const int cm = t.require_column("month");
        const char* cols[] = {"export_revenue_delta_mgbp", "import_cost_delta_mgbp", "ic_rent_delta_mgbp",
                              "prevented_thermal_balancing_mgbp", "prevented_thermal_wholesale_mgbp",
                              "total_bottom_up_mgbp", "total_top_down_mgbp"};
        const int cc = t.require_column("curtailment_national_mwh");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            out << "  " << field(t, r, cm);
            for (const char* c : cols) out << fmt(" %10.1f", mgbp(t, r, t.require_column(c)) / 1e3);
            out << fmt(" %12.1f", field_double(t, r, cc)) << '\n';
        }
    }

    out << "\nCurtailment regression\n";
    if (summary.contains("regression") && summary["regression"].contains("slope")) {
        const auto& g = summary["regression"];
        out << "  SEB = " << fmt("%.4f", g["slope"].get<double>()) << " x curtailment + "
            << fmt("%.1f", g["intercept"].get<double>()) << "  (R^2 " << fmt("%.4f", g["r_squared"].get<double>())
            << ")\n  projected annual SEB at " << g["scale"].get<double>() << "x curtailment: "
            << fmt("%.3f", g["projected_annual_mgbp"].get<double>() / 1e9) << " GBPm\n";
    } else if (summary.contains("regression")) {
        out << "  unavailable: " << summary["regression"]["note"].get<std::string>() << '\n';
    } else {
        out << "  unavailable\n";
    }
    if (summary.contains("unlocked_wind")) {
        const auto& w = summary["unlocked_wind"];
        out << "\nUnlocked wind " << fmt("%.1f", w["energy_mwh"].get<double>()) << " MWh, avoided CO2 "
            << fmt("%.1f", w["co2_tonnes"].get<double>()) << " t\n";
    }
    if (summary.contains("warnings")) out << "Warnings " << summary["warnings"].dump() << '\n';
}

}  // namespace zonalsim
