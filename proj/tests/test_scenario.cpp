#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "testkit.hpp"
#include "zonalsim/csv.hpp"
#include "zonalsim/ingestion.hpp"
#include "zonalsim/synthetic.hpp"

using namespace zonalsim;
namespace fs = std::filesystem;

namespace {

NetworkTopology demo_topology() { return testkit::two_bus().topo; }

DayScenario demo_day(int periods) {
    auto inst = testkit::two_bus(periods);
    return inst.day;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("zonalsim-test-" + std::to_string(getpid()) + "-" + name);
    fs::remove_all(p);
    return p;
}

fs::path fixture() { return fs::path(ZONALSIM_FIXTURES) / "two-bus-demo"; }

SyntheticConfig small_config() {
    SyntheticConfig c;
    c.buses = 36;
    c.units = 60;
    c.days = 3;
    c.peak_load_mw = 4000;
    return c;
}

}  // namespace

TEST(ValidateScenario, WellFormedIsClean) {
    EXPECT_TRUE(validate_scenario(demo_day(48), demo_topology()).empty());
}

TEST(ValidateScenario, PeriodCount) {
    EXPECT_EQ(validate_scenario(demo_day(47), demo_topology()),
              std::vector<std::string>{"period count != 48"});
}

TEST(ValidateScenario, StorageDamping) {
    auto inst = testkit::two_bus(48);
    auto units = std::make_shared<UnitRegistry>(*inst.day.units);
    Unit st;
    st.id = "bat";
    st.bus = "S";
    st.kind = UnitKind::Storage;
    st.tech = Tech::Battery;
    st.power_cap_mw = 10;
    st.energy_cap_mwh = 20;
    st.damping = 0.0;
    units->push_back(st);
    inst.day.units = units;
    EXPECT_EQ(validate_scenario(inst.day, inst.topo), std::vector<std::string>{"damping out of range"});
}

TEST(ValidateScenario, NegativeLoadAndMissingAvailability) {
    auto d = demo_day(48);
    d.load["S"][3] = -1.0;
    d.availability.erase("gen-north");
    auto errs = validate_scenario(d, demo_topology());
    EXPECT_EQ(errs.size(), 2u);
}

TEST(ValidateScenario, TopologyInvariants) {
    auto t = demo_topology();
    t.links.push_back(Link{"N", "X", Capacity::limited(1)});
    t.zones.erase("S");
    t.boundaries[0].members.push_back(7);
    auto errs = validate_scenario(demo_day(48), t);
    EXPECT_GE(errs.size(), 3u);
}

TEST(Names, RoundTrip) {
    for (auto k : {UnitKind::Simple, UnitKind::Thermal, UnitKind::DailyQuota, UnitKind::Storage,
                   UnitKind::Interconnector})
        EXPECT_EQ(parse_unit_kind(to_string(k)), k);
    for (int i = 0; i <= static_cast<int>(Tech::Ic); ++i) {
        auto t = static_cast<Tech>(i);
        EXPECT_EQ(parse_tech(to_string(t)), t);
    }
    EXPECT_EQ(parse_band("north"), Band::North);
    EXPECT_FALSE(parse_tech("fusion").has_value());
}

TEST(Ingestion, DemoFixture) {
    auto b = load_bundle(fixture());
    EXPECT_EQ(b.topology.buses.size(), 2u);
    ASSERT_EQ(b.days.size(), 1u);
    EXPECT_EQ(b.days[0].date, "2024-03-21");
    EXPECT_EQ(b.days[0].periods, 48);
    EXPECT_DOUBLE_EQ(b.days[0].load.at("S")[47], 120.0);
    EXPECT_DOUBLE_EQ(b.days[0].observed_balancing.congestion_volume, 2400.0);
}

TEST(Ingestion, MissingLoadFile) {
    auto dir = scratch("missing-load");
    fs::copy(fixture(), dir, fs::copy_options::recursive);
    fs::remove(dir / "days" / "2024-03-21" / "load.csv");
    try {
        load_bundle(dir);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("load.csv missing for 2024-03-21"), std::string::npos);
    }
}

TEST(Ingestion, BadFieldNamesFileAndLine) {
    auto dir = scratch("bad-field");
    fs::copy(fixture(), dir, fs::copy_options::recursive);
    std::ofstream(dir / "days" / "2024-03-21" / "ntc.csv", std::ios::app) << "B6,1,abc\n";
    try {
        load_bundle(dir);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("ntc.csv"), std::string::npos);
    }
}

TEST(Ingestion, DaysOrderedByDate) {
    auto gen = generate_synthetic(small_config(), 3);
    auto dir = scratch("three-days");
    write_bundle(gen.bundle, dir);
    auto b = load_bundle(dir);
    ASSERT_EQ(b.days.size(), 3u);
    EXPECT_EQ(b.days[0].date, "2024-01-01");
    EXPECT_EQ(b.days[1].date, "2024-01-02");
    EXPECT_EQ(b.days[2].date, "2024-01-03");
    EXPECT_EQ(bundle_dates(dir).size(), 3u);
    auto one = load_bundle(dir, DateRange{"2024-01-02", "2024-01-02"});
    ASSERT_EQ(one.days.size(), 1u);
    EXPECT_EQ(one.days[0].date, "2024-01-02");
}

TEST(Ingestion, WriteLoadRoundTrip) {
    auto gen = generate_synthetic(small_config(), 11);
    auto dir = scratch("round-trip");
    write_bundle(gen.bundle, dir);
    auto b = load_bundle(dir);
    EXPECT_EQ(b.topology, gen.bundle.topology);
    EXPECT_EQ(*b.units, *gen.bundle.units);
    ASSERT_EQ(b.days.size(), gen.bundle.days.size());
    for (std::size_t i = 0; i < b.days.size(); ++i) EXPECT_TRUE(b.days[i] == gen.bundle.days[i]);
    EXPECT_EQ(b.history.bid_history, gen.bundle.history.bid_history);
}

TEST(Synthetic, DeterministicAndValid) {
    SyntheticConfig c;
    c.days = 30;
    auto a = generate_synthetic(c, 1);
    auto b = generate_synthetic(c, 1);
    ASSERT_EQ(a.bundle.days.size(), 30u);
    EXPECT_EQ(a.bundle.topology.zone_ids().size(), 6u);
    for (std::size_t i = 0; i < a.bundle.days.size(); ++i) {
        EXPECT_TRUE(validate_scenario(a.bundle.days[i], a.bundle.topology).empty());
        EXPECT_TRUE(a.bundle.days[i] == b.bundle.days[i]);
    }
    EXPECT_EQ(a.regimes, b.regimes);
}

TEST(Synthetic, LongerRunExtendsShorter) {
    auto c = small_config();
    auto a = generate_synthetic(c, 5);
    c.days = 5;
    auto b = generate_synthetic(c, 5);
    for (std::size_t i = 0; i < a.bundle.days.size(); ++i)
        EXPECT_TRUE(a.bundle.days[i] == b.bundle.days[i]);
}

TEST(Synthetic, ConfigErrors) {
    auto c = small_config();
    c.mix[Tech::Gas] = 0;
    c.mix[Tech::Coal] = 0;
    c.mix[Tech::Biomass] = 0;
    c.mix[Tech::Oil] = 0;
    EXPECT_THROW(generate_synthetic(c, 1), ConfigError);
    auto w = small_config();
    w.regime_weights = {0.9, -0.1, 0.2};
    EXPECT_THROW(generate_synthetic(w, 1), ConfigError);
}

TEST(Synthetic, RegimeSharesProperty) {
    auto c = small_config();
    c.days = 209;  // 10,032 periods
    auto g = generate_synthetic(c, 2);
    std::array<int, 3> n{};
    int total = 0;
    for (const auto& [d, v] : g.regimes)
        for (auto r : v) {
            ++n[static_cast<std::size_t>(r)];
            ++total;
        }
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_NEAR(static_cast<double>(n[i]) / total, c.regime_weights[i], 0.02);
}
