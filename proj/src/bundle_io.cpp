#include "zonalsim/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "zonalsim/dates.hpp"

namespace zonalsim {

namespace fs = std::filesystem;

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

int parse_period(const CsvTable& t, std::size_t row, int col) {
    const int p = field_int(t, row, col);
    if (p < 1 || p > kPeriodsPerDay) field_error(t, row, col, "is outside 1..48");
    return p - 1;
}

NetworkTopology read_topology(const fs::path& dir) {
    NetworkTopology topo;
    const auto buses = read_csv(dir / "topology.csv");
    const int cb = buses.require_column("bus");
    const int cz = buses.require_column("zone");
    const int cn = buses.require_column("band");
    for (std::size_t r = 0; r < buses.rows.size(); ++r) {
        const auto& bus = field(buses, r, cb);
        if (bus.empty()) field_error(buses, r, cb, "is empty");
        if (topo.zones.count(bus)) field_error(buses, r, cb, "duplicates bus " + bus);
        auto band = parse_band(field(buses, r, cn));
        if (!band) field_error(buses, r, cn, "must be north or south");
        topo.buses.push_back(bus);
        topo.zones[bus] = field(buses, r, cz);
        topo.bands[bus] = *band;
    }

    const auto links = read_csv(dir / "links.csv");
    const int cf = links.require_column("from");
    const int ct = links.require_column("to");
    const int cc = links.require_column("capacity_mw");
    const int cbd = links.require_column("boundary");
    std::map<std::string, std::size_t> boundary_pos;
    for (std::size_t r = 0; r < links.rows.size(); ++r) {
        Link l;
        l.from = field(links, r, cf);
        l.to = field(links, r, ct);
        if (!topo.zones.count(l.from)) field_error(links, r, cf, "names undeclared bus " + l.from);
        if (!topo.zones.count(l.to)) field_error(links, r, ct, "names undeclared bus " + l.to);
        const auto& cap = field(links, r, cc);
        if (cap == "unconstrained") {
            l.capacity = Capacity::unlimited();
        } else {
            const double v = field_double(links, r, cc);
            if (v < 0.0) field_error(links, r, cc, "is negative");
            l.capacity = Capacity::limited(v);
        }
        const auto& b = field(links, r, cbd);
        if (!b.empty()) {
            auto [it, fresh] = boundary_pos.emplace(b, topo.boundaries.size());
            if (fresh) topo.boundaries.push_back(Boundary{b, {}});
            topo.boundaries[it->second].members.push_back(topo.links.size());
        }
        topo.links.push_back(std::move(l));
    }
    return topo;
}

UnitRegistry read_units(const fs::path& dir, const NetworkTopology& topo) {
    const auto t = read_csv(dir / "units.csv");
    auto col = [&](const char* n) { return t.require_column(n); };
    const int c_id = col("id"), c_bus = col("bus"), c_kind = col("kind"), c_tech = col("tech"),
              c_sv = col("subsidy_variant"), c_sval = col("subsidy_value"),
              c_pc = col("power_cap_mw"), c_ec = col("energy_cap_mwh"), c_d = col("damping"),
              c_q = col("daily_quota_mwh"), c_ic = col("import_cap_mw"),
              c_xc = col("export_cap_mw"), c_r = col("ramp_mw"), c_eff = col("efficiency"),
              c_bc = col("base_cost");
    UnitRegistry units;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        Unit u;
        u.id = field(t, r, c_id);
        if (u.id.empty()) field_error(t, r, c_id, "is empty");
        if (!seen.insert(u.id).second) field_error(t, r, c_id, "duplicates unit " + u.id);
        u.bus = field(t, r, c_bus);
        if (!topo.zones.count(u.bus)) field_error(t, r, c_bus, "names undeclared bus " + u.bus);
        auto kind = parse_unit_kind(field(t, r, c_kind));
        if (!kind) field_error(t, r, c_kind, "is not a unit kind");
        u.kind = *kind;
        auto tech = parse_tech(field(t, r, c_tech));
        if (!tech) field_error(t, r, c_tech, "is not a technology");
        u.tech = *tech;
        const auto& sv = field(t, r, c_sv);
        const auto value = field_optional_double(t, r, c_sval);
        if (sv.empty() || sv == "none") {
            u.subsidy = SubsidyScheme::none();
        } else if (sv == "ro") {
            u.subsidy = SubsidyScheme::ro(value);
        } else if (sv == "cfd") {
            if (!value) field_error(t, r, c_sval, "must hold the CfD strike");
            u.subsidy = SubsidyScheme::cfd(*value);
        } else {
            field_error(t, r, c_sv, "must be none, ro or cfd");
        }
        auto num = [&](int c, double dflt) { return field_optional_double(t, r, c).value_or(dflt); };
        u.power_cap_mw = num(c_pc, 0.0);
        u.energy_cap_mwh = num(c_ec, 0.0);
        u.damping = num(c_d, 1.0);
        u.daily_quota_mwh = num(c_q, 0.0);
        u.import_cap_mw = num(c_ic, 0.0);
        u.export_cap_mw = num(c_xc, 0.0);
        u.ramp_mw = num(c_r, 0.0);
        u.efficiency = num(c_eff, 0.99);
        u.base_cost = field_optional_double(t, r, c_bc);
        units.push_back(std::move(u));
    }
    return units;
}

CostHistory read_history(const fs::path& dir) {
    CostHistory h;
    if (fs::exists(dir / "bid_history.csv")) {
        const auto t = read_csv(dir / "bid_history.csv");
        const int cu = t.require_column("unit"), cp = t.require_column("price");
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            h.bid_history[field(t, r, cu)].push_back(field_double(t, r, cp));
    }
    if (fs::exists(dir / "dispatch_history.csv")) {
        const auto t = read_csv(dir / "dispatch_history.csv");
        const int cd = t.require_column("date"), cp = t.require_column("period"),
                  cu = t.require_column("unit"), cm = t.require_column("mw"),
                  cl = t.require_column("mel"), cg = t.require_column("gb_price");
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            DispatchRecord rec;
            rec.date = field(t, r, cd);
            if (!parse_date(rec.date)) field_error(t, r, cd, "is not a YYYY-MM-DD date");
            rec.period = parse_period(t, r, cp);
            rec.unit = field(t, r, cu);
            rec.mw = field_double(t, r, cm);
            rec.mel = field_double(t, r, cl);
            rec.gb_price = field_double(t, r, cg);
            h.dispatch_history.push_back(std::move(rec));
        }
    }
    return h;
}

// Reads a long-format (key, period, value) file into complete series.
void read_long(const fs::path& file, const char* key_col, const char* value_col,
               const std::set<std::string>& keys, std::map<std::string, Series>& out) {
    const auto t = read_csv(file);
    const int ck = t.require_column(key_col);
    const int cp = t.require_column("period");
    const int cv = t.require_column(value_col);
    for (const auto& k : keys) out[k] = Series(kPeriodsPerDay, kMissing);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& k = field(t, r, ck);
        auto it = out.find(k);
        if (it == out.end()) field_error(t, r, ck, "references unknown " + std::string(key_col) + " " + k);
        const int p = parse_period(t, r, cp);
        auto& slot = it->second[static_cast<std::size_t>(p)];
        if (!std::isnan(slot)) field_error(t, r, cp, "duplicates " + k + " period " + std::to_string(p + 1));
        slot = field_double(t, r, cv);
    }
    for (const auto& [k, s] : out)
        for (std::size_t p = 0; p < s.size(); ++p)
            if (std::isnan(s[p]))
                throw DataError(file.string() + ": no value for " + k + " period " + std::to_string(p + 1));
}

DayScenario read_day(const fs::path& dir, const std::string& date, const NetworkTopology& topo,
                     const std::shared_ptr<const UnitRegistry>& units) {
    for (const char* f : {"availability.csv", "load.csv", "prices.csv", "ntc.csv", "balancing.csv"})
        if (!fs::exists(dir / f)) throw DataError(std::string(f) + " missing for " + date);

    DayScenario d;
    d.date = date;
    d.periods = kPeriodsPerDay;
    d.units = units;
    std::set<std::string> generators, ics;
    for (const auto& u : *units) {
        if (u.is_generator()) generators.insert(u.id);
        if (u.kind == UnitKind::Interconnector) ics.insert(u.id);
    }
    read_long(dir / "availability.csv", "unit", "mw", generators, d.availability);
    read_long(dir / "load.csv", "bus", "mw", {topo.buses.begin(), topo.buses.end()}, d.load);
    std::set<std::string> boundaries;
    for (const auto& b : topo.boundaries) boundaries.insert(b.id);
    read_long(dir / "ntc.csv", "boundary", "mw", boundaries, d.boundary_ntc);

    const auto prices = read_csv(dir / "prices.csv");
    const int cp = prices.require_column("period");
    const int cg = prices.require_column("gb_price");
    std::map<std::string, int> ic_cols;
    for (const auto& ic : ics) ic_cols[ic] = prices.require_column(ic);
    d.day_ahead_price_gb.assign(kPeriodsPerDay, kMissing);
    for (const auto& ic : ics) d.neighbor_price[ic] = Series(kPeriodsPerDay, kMissing);
    for (std::size_t r = 0; r < prices.rows.size(); ++r) {
        const auto p = static_cast<std::size_t>(parse_period(prices, r, cp));
        if (!std::isnan(d.day_ahead_price_gb[p])) field_error(prices, r, cp, "is duplicated");
        d.day_ahead_price_gb[p] = field_double(prices, r, cg);
        for (const auto& [ic, c] : ic_cols) d.neighbor_price[ic][p] = field_double(prices, r, c);
    }
    for (std::size_t p = 0; p < d.day_ahead_price_gb.size(); ++p)
        if (std::isnan(d.day_ahead_price_gb[p]))
            throw DataError((dir / "prices.csv").string() + ": no row for period " + std::to_string(p + 1));

    const auto bal = read_csv(dir / "balancing.csv");
    const int cs = bal.require_column("side");
    const int cpr = bal.require_column("price");
    const int cv = bal.require_column("volume");
    bool have_volume = false;
    for (std::size_t r = 0; r < bal.rows.size(); ++r) {
        const auto& side = field(bal, r, cs);
        const double v = field_double(bal, r, cv);
        if (v < 0.0) field_error(bal, r, cv, "is negative");
        if (side == "offer") {
            d.observed_balancing.accepted_offers.push_back({field_double(bal, r, cpr), v});
        } else if (side == "bid") {
            d.observed_balancing.accepted_bids.push_back({field_double(bal, r, cpr), v});
        } else if (side == "congestion_volume") {
            if (have_volume) field_error(bal, r, cs, "repeats congestion_volume");
            d.observed_balancing.congestion_volume = v;
            have_volume = true;
        } else {
            field_error(bal, r, cs, "must be offer, bid or congestion_volume");
        }
    }
    if (!have_volume) throw DataError((dir / "balancing.csv").string() + ": congestion_volume row missing");
    return d;
}

std::ofstream open_out(const fs::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(file.string() + ": cannot write");
    return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::vector<std::string> bundle_dates(const fs::path& dir) {
    std::vector<std::string> dates;
    const auto days = dir / "days";
    if (!fs::is_directory(days)) return dates;
    for (const auto& e : fs::directory_iterator(days)) {
        if (!e.is_directory()) continue;
        const auto name = e.path().filename().string();
        if (parse_date(name)) dates.push_back(name);
    }
    std::sort(dates.begin(), dates.end());
    return dates;
}

Bundle load_bundle(const fs::path& dir, const DateRange& range) {
    if (!fs::is_directory(dir)) throw DataError(dir.string() + ": bundle directory not found");
    for (const char* f : {"topology.csv", "links.csv", "units.csv"})
        if (!fs::exists(dir / f)) throw DataError(std::string(f) + " missing in " + dir.string());
    Bundle b;
    b.topology = read_topology(dir);
    b.units = std::make_shared<const UnitRegistry>(read_units(dir, b.topology));
    b.history = read_history(dir);
    for (const auto& date : bundle_dates(dir)) {
        if (!range.contains(date)) continue;
        auto day = read_day(dir / "days" / date, date, b.topology, b.units);
        const auto violations = validate_scenario(day, b.topology);
        if (!violations.empty()) throw DataError(date + ": " + violations.front());
        b.days.push_back(std::move(day));
    }
    return b;
}

void write_bundle(const Bundle& b, const fs::path& dir) {
    fs::create_directories(dir / "days");
    const auto& topo = b.topology;
    {
        auto out = open_out(dir / "topology.csv");
        out << "bus,zone,band\n";
        for (const auto& bus : topo.buses)
            out << bus << ',' << topo.zones.at(bus) << ',' << to_string(topo.bands.at(bus)) << '\n';
    }
    {
        std::vector<std::string> boundary_of(topo.links.size());
        for (const auto& bd : topo.boundaries)
            for (auto m : bd.members) {
                if (!boundary_of[m].empty())
                    throw std::runtime_error("link " + std::to_string(m) + " belongs to two boundaries");
                boundary_of[m] = bd.id;
            }
        auto out = open_out(dir / "links.csv");
        out << "from,to,capacity_mw,boundary\n";
        for (std::size_t l = 0; l < topo.links.size(); ++l) {
            const auto& link = topo.links[l];
            out << link.from << ',' << link.to << ','
                << (link.capacity.unconstrained ? std::string("unconstrained")
                                                : format_double(link.capacity.mw))
                << ',' << boundary_of[l] << '\n';
        }
    }
    {
        auto out = open_out(dir / "units.csv");
        out << "id,bus,kind,tech,subsidy_variant,subsidy_value,power_cap_mw,energy_cap_mwh,damping,"
               "daily_quota_mwh,import_cap_mw,export_cap_mw,ramp_mw,efficiency,base_cost\n";
        for (const auto& u : *b.units) {
            const char* sv = u.subsidy.variant == SubsidyScheme::Variant::RO    ? "ro"
                             : u.subsidy.variant == SubsidyScheme::Variant::CfD ? "cfd"
                                                                                : "none";
            out << u.id << ',' << u.bus << ',' << to_string(u.kind) << ',' << to_string(u.tech)
                << ',' << sv << ',' << opt(u.subsidy.value) << ',' << format_double(u.power_cap_mw)
                << ',' << format_double(u.energy_cap_mwh) << ',' << format_double(u.damping) << ','
                << format_double(u.daily_quota_mwh) << ',' << format_double(u.import_cap_mw) << ','
                << format_double(u.export_cap_mw) << ',' << format_double(u.ramp_mw) << ','
                << format_double(u.efficiency) << ',' << opt(u.base_cost) << '\n';
        }
    }
    if (!b.history.bid_history.empty()) {
        auto out = open_out(dir / "bid_history.csv");
        out << "unit,price\n";
        for (const auto& [unit, bids] : b.history.bid_history)
            for (double p : bids) out << unit << ',' << format_double(p) << '\n';
    }
    if (!b.history.dispatch_history.empty()) {
        auto out = open_out(dir / "dispatch_history.csv");
        out << "date,period,unit,mw,mel,gb_price\n";
        for (const auto& r : b.history.dispatch_history)
            out << r.date << ',' << r.period + 1 << ',' << r.unit << ',' << format_double(r.mw) << ','
                << format_double(r.mel) << ',' << format_double(r.gb_price) << '\n';
    }
    for (const auto& d : b.days) {
        const auto dd = dir / "days" / d.date;
        fs::create_directories(dd);
        auto write_long = [&](const char* file, const char* key,
                              const std::map<std::string, Series>& m) {
            auto out = open_out(dd / file);
            out << key << ",period,mw\n";
            for (const auto& [k, s] : m)
                for (std::size_t t = 0; t < s.size(); ++t)
                    out << k << ',' << t + 1 << ',' << format_double(s[t]) << '\n';
        };
        write_long("availability.csv", "unit", d.availability);
        write_long("load.csv", "bus", d.load);
        write_long("ntc.csv", "boundary", d.boundary_ntc);
        {
            auto out = open_out(dd / "prices.csv");
            out << "period,gb_price";
            for (const auto& [ic, s] : d.neighbor_price) out << ',' << ic;
            out << '\n';
            for (std::size_t t = 0; t < d.day_ahead_price_gb.size(); ++t) {
                out << t + 1 << ',' << format_double(d.day_ahead_price_gb[t]);
                for (const auto& [ic, s] : d.neighbor_price) out << ',' << format_double(s[t]);
                out << '\n';
            }
        }
        {
            auto out = open_out(dd / "balancing.csv");
            out << "side,price,volume\n";
            for (const auto& e : d.observed_balancing.accepted_offers)
                out << "offer," << format_double(e.price) << ',' << format_double(e.volume) << '\n';
            for (const auto& e : d.observed_balancing.accepted_bids)
                out << "bid," << format_double(e.price) << ',' << format_double(e.volume) << '\n';
            out << "congestion_volume,," << format_double(d.observed_balancing.congestion_volume) << '\n';
        }
    }
}

}  // namespace zonalsim
