#include "testkit.hpp"

#include <cmath>
#include <limits>

#include "zonalsim/redispatch.hpp"
#include "zonalsim/rng.hpp"

namespace zonalsim::testkit {

Unit thermal(const std::string& id, const std::string& bus, double cost) {
    Unit u;
    u.id = id;
    u.bus = bus;
    u.kind = UnitKind::Thermal;
    u.tech = Tech::Gas;
    u.base_cost = cost;
    return u;
}

Unit wind(const std::string& id, const std::string& bus, SubsidyScheme subsidy) {
    Unit u;
    u.id = id;
    u.bus = bus;
    u.kind = UnitKind::Simple;
    u.tech = Tech::Wind;
    u.subsidy = subsidy;
    return u;
}

DayScenario blank_day(const NetworkTopology& topo, std::shared_ptr<const UnitRegistry> units,
                      int periods, const std::string& date) {
    DayScenario d;
    d.date = date;
    d.periods = periods;
    d.units = std::move(units);
    const auto n = static_cast<std::size_t>(periods);
    for (const auto& u : *d.units) {
        if (u.is_generator()) d.availability[u.id] = Series(n, 0.0);
        if (u.kind == UnitKind::Interconnector) d.neighbor_price[u.id] = Series(n, 0.0);
    }
    for (const auto& b : topo.buses) d.load[b] = Series(n, 0.0);
    for (const auto& b : topo.boundaries) d.boundary_ntc[b.id] = Series(n, 0.0);
    d.day_ahead_price_gb = Series(n, 0.0);
    return d;
}

void plain_costs(DayScenario& s) {
    CostInputs in;
    in.config.apply_correction = false;
    apply_cost_model(s, in);
}

Instance two_bus(int periods, Capacity link) {
    Instance inst;
    auto& t = inst.topo;
    t.buses = {"N", "S"};
    t.links = {Link{"N", "S", link}};
    t.zones = {{"N", "Z1"}, {"S", "Z2"}};
    t.bands = {{"N", Band::North}, {"S", Band::South}};
    t.boundaries = {Boundary{"B6", {0}}};
    auto units = std::make_shared<UnitRegistry>(
        UnitRegistry{thermal("gen-north", "N", 10.0), thermal("gen-south", "S", 50.0)});
    inst.day = blank_day(t, units, periods);
    const auto n = static_cast<std::size_t>(periods);
    inst.day.availability["gen-north"] = Series(n, 100.0);
    inst.day.availability["gen-south"] = Series(n, 100.0);
    inst.day.load["S"] = Series(n, 120.0);
    inst.day.boundary_ntc["B6"] = Series(n, link.unconstrained ? 0.0 : link.mw);
    inst.day.day_ahead_price_gb = Series(n, 50.0);
    CostInputs in;
    apply_cost_model(inst.day, in);
    return inst;
}

namespace {

struct Var {
    double lo = 0.0, hi = 0.0, cost = 0.0;
    std::vector<std::pair<int, double>> rows;  // region, coefficient
};

// Solves A x = b for the k chosen columns; false unless the solution is
// unique and consistent.
bool solve_basis(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                 std::vector<double>& x) {
    const std::size_t m = A.size();
    const std::size_t k = m ? A[0].size() : 0;
    std::vector<std::vector<double>> M = A;
    std::vector<double> r = b;
    std::size_t row = 0;
    std::vector<std::size_t> pivot_row(k);
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t best = row;
        for (std::size_t i = row; i < m; ++i)
            if (std::abs(M[i][c]) > std::abs(M[best][c])) best = i;
        if (row >= m || std::abs(M[best][c]) < 1e-12) return false;
        std::swap(M[best], M[row]);
        std::swap(r[best], r[row]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row) continue;
            const double f = M[i][c] / M[row][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) M[i][j] -= f * M[row][j];
            r[i] -= f * r[row];
        }
        pivot_row[c] = row++;
    }
    for (std::size_t i = row; i < m; ++i)
        if (std::abs(r[i]) > 1e-7) return false;
    x.assign(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) x[c] = r[pivot_row[c]] / M[pivot_row[c]][c];
    return true;
}

std::optional<double> period_optimum(const std::vector<Var>& vars, const std::vector<double>& load) {
    const std::size_t m = load.size();
    const std::size_t n = vars.size();
    std::optional<double> best;
    for (std::uint32_t basis = 0; basis < (1u << n); ++basis) {
        std::vector<std::size_t> B, N;
        for (std::size_t j = 0; j < n; ++j) ((basis >> j) & 1u ? B : N).push_back(j);
        if (B.size() > m) continue;
        for (std::uint32_t side = 0; side < (1u << N.size()); ++side) {
            std::vector<double> value(n, 0.0);
            std::vector<double> rhs = load;
            for (std::size_t i = 0; i < N.size(); ++i) {
                const auto& v = vars[N[i]];
                value[N[i]] = (side >> i) & 1u ? v.hi : v.lo;
                for (auto [r, a] : v.rows) rhs[static_cast<std::size_t>(r)] -= a * value[N[i]];
            }
            std::vector<std::vector<double>> A(m, std::vector<double>(B.size(), 0.0));
            for (std::size_t c = 0; c < B.size(); ++c)
                for (auto [r, a] : vars[B[c]].rows) A[static_cast<std::size_t>(r)][c] += a;
            std::vector<double> x;
            if (!solve_basis(A, rhs, x)) continue;
            bool ok = true;
            for (std::size_t c = 0; c < B.size(); ++c) {
                const auto& v = vars[B[c]];
                if (x[c] < v.lo - 1e-9 || x[c] > v.hi + 1e-9) ok = false;
                value[B[c]] = x[c];
            }
            if (!ok) continue;
            double cost = 0.0;
            for (std::size_t j = 0; j < n; ++j) cost += vars[j].cost * value[j];
            if (!best || cost < *best) best = cost;
        }
    }
    return best;
}

}  // namespace

std::optional<double> vertex_oracle(const DayScenario& s, const NetworkTopology& topo, Design design) {
    constexpr double kBig = 1e5;
    std::map<std::string, int> region_of_key;
    std::vector<int> bus_region(topo.buses.size());
    for (std::size_t b = 0; b < topo.buses.size(); ++b) {
        const std::string key = design == Design::National ? std::string("GB")
                                : design == Design::Zonal  ? topo.zones.at(topo.buses[b])
                                                           : topo.buses[b];
        auto it = region_of_key.emplace(key, static_cast<int>(region_of_key.size())).first;
        bus_region[b] = it->second;
    }
    const std::size_t R = region_of_key.size();
    auto bus_of = [&](const std::string& id) { return bus_region[*topo.bus_index(id)]; };

    double total = 0.0;
    for (int t = 0; t < s.periods; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        std::vector<Var> vars;
        for (const auto& u : *s.units) {
            Var v;
            v.hi = s.availability.at(u.id)[ti];
            v.cost = s.marginal_costs.at(u.id).corrected_srmc[ti];
            v.rows = {{bus_of(u.bus), 1.0}};
            vars.push_back(v);
        }
        for (const auto& l : topo.links) {
            const int a = bus_of(l.from), b = bus_of(l.to);
            if (a == b) continue;
            Var v;
            v.hi = l.capacity.unconstrained ? kBig : l.capacity.mw;
            v.lo = -v.hi;
            v.rows = {{a, -1.0}, {b, 1.0}};
            vars.push_back(v);
        }
        std::vector<double> load(R, 0.0);
        for (const auto& [bus, series] : s.load) load[static_cast<std::size_t>(bus_of(bus))] += series[ti];
        auto best = period_optimum(vars, load);
        if (!best) return std::nullopt;
        total += *best * kPeriodHours;
    }
    return total;
}

Instance micro_instance(std::uint64_t seed) {
    Rng rng(seed, "micro");
    Instance inst;
    auto& t = inst.topo;
    const int nb = 1 + static_cast<int>(rng.below(3));
    const int periods = 1 + static_cast<int>(rng.below(2));
    for (int b = 0; b < nb; ++b) {
        const std::string id = "B" + std::to_string(b);
        t.buses.push_back(id);
        t.zones[id] = "Z" + std::to_string(rng.below(2));
        t.bands[id] = b == 0 ? Band::North : Band::South;
    }
    for (int a = 0; a < nb; ++a)
        for (int b = a + 1; b < nb; ++b) {
            if (rng.uniform() < 0.25) continue;
            const Capacity cap = rng.uniform() < 0.2 ? Capacity::unlimited()
                                                     : Capacity::limited(std::round(rng.uniform(0, 100)));
            t.links.push_back(Link{t.buses[static_cast<std::size_t>(a)], t.buses[static_cast<std::size_t>(b)], cap});
        }
    auto units = std::make_shared<UnitRegistry>();
    const int nu = 1 + static_cast<int>(rng.below(4));
    for (int i = 0; i < nu; ++i) {
        const std::string bus = t.buses[rng.below(static_cast<std::uint64_t>(nb))];
        const std::string id = "u" + std::to_string(i);
        if (rng.uniform() < 0.3) {
            units->push_back(wind(id, bus, SubsidyScheme::ro(std::round(rng.uniform(10, 60)))));
        } else {
            // integer costs make exact ties common
            units->push_back(thermal(id, bus, std::round(rng.uniform(-20, 150) / 10.0) * 10.0));
        }
    }
    inst.day = blank_day(t, units, periods);
    const auto n = static_cast<std::size_t>(periods);
    for (const auto& u : *units)
        for (std::size_t p = 0; p < n; ++p) inst.day.availability[u.id][p] = std::round(rng.uniform(0, 120));
    for (const auto& b : t.buses)
        for (std::size_t p = 0; p < n; ++p) inst.day.load[b][p] = std::round(rng.uniform(0, 80));
    inst.day.day_ahead_price_gb = Series(n, 60.0);
    plain_costs(inst.day);
    return inst;
}

DesignOutcome run_design(const DayScenario& s, const NetworkTopology& topo, Design design, double tau) {
    DesignOutcome d;
    d.wholesale = clear(s, topo, design, tau);
    d.actual = redispatch(d.wholesale, s, topo, tau);
    d.balancing = balancing_volume(d.wholesale, d.actual, default_groups(s, topo));
    d.balancing_price = price_balancing(d.balancing, s.observed_balancing);
    d.rent = congestion_rent(d.wholesale, s, topo);
    return d;
}

}  // namespace zonalsim::testkit
