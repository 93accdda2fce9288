#include <gtest/gtest.h>

#include "testkit.hpp"
#include "zonalsim/cost_model.hpp"

using namespace zonalsim;

TEST(NuclearFloor, MinimumOverDispatchingPeriods) {
    EXPECT_DOUBLE_EQ(estimate_nuclear_floor({{10, true}, {-5, true}, {-50, false}}), -5.0);
    EXPECT_DOUBLE_EQ(estimate_nuclear_floor({{0, true}}), 0.0);
    EXPECT_THROW(estimate_nuclear_floor({{-3, false}}), std::runtime_error);
}

TEST(InferRoc, RecurringBidIsTheRoc) {
    auto r = infer_roc({{"w1", {-48.1, -48.1, -48.1, -52.0}}}, 1);
    EXPECT_DOUBLE_EQ(r.at("w1").roc, 48.1);
    EXPECT_EQ(r.at("w1").source, RocSource::ObservedRecurringBid);
}

TEST(InferRoc, NoModeReachesShareMeansSampled) {
    auto r = infer_roc({{"a", {-40, -40, -40}}, {"w1", {-10, -20, -30, -40}}}, 1);
    EXPECT_EQ(r.at("w1").source, RocSource::SampledFromCohort);
    EXPECT_EQ(r.at("a").source, RocSource::ObservedRecurringBid);
}

TEST(InferRoc, SampledMeanMatchesCohort) {
    std::map<std::string, std::vector<double>> h{
        {"a", {-40, -40, -40}}, {"b", {-50, -50, -50}}, {"c", {-60, -60, -60}}, {"x", {}}};
    double sum = 0.0;
    const int n = 10000;
    for (int seed = 0; seed < n; ++seed) sum += infer_roc(h, static_cast<std::uint64_t>(seed)).at("x").roc;
    EXPECT_NEAR(sum / n, 50.0, 1.0);
}

TEST(InferRoc, SameSeedSameSample) {
    std::map<std::string, std::vector<double>> h{{"a", {-40, -40, -40}}, {"b", {-60, -60, -60}}, {"x", {}}};
    EXPECT_EQ(infer_roc(h, 7).at("x").roc, infer_roc(h, 7).at("x").roc);
}

TEST(InferRoc, EmptyCohortThrows) {
    EXPECT_THROW(infer_roc({{"x", {}}}, 1), std::runtime_error);
}

TEST(ThermalSrmc, WindowMeanAndFallback) {
    EXPECT_DOUBLE_EQ(estimate_thermal_srmc({{80, true}, {120, true}, {500, false}}, std::nullopt), 100.0);
    EXPECT_DOUBLE_EQ(estimate_thermal_srmc({{80, false}}, 95.0), 95.0);
    std::vector<PriceObservation> flat(48, {70.0, true});
    EXPECT_DOUBLE_EQ(estimate_thermal_srmc(flat, std::nullopt), 70.0);
    EXPECT_THROW(estimate_thermal_srmc({}, std::nullopt), std::runtime_error);
}

TEST(CorrectionFactor, ThermalSetterScales) {
    MeritOrder o{{"wind", -45, 50, Tech::Wind, false}, {"gas", 100, 100, Tech::Gas, true}};
    EXPECT_DOUBLE_EQ(correction_factor(o, 120, 200), 2.0);
    o[1].bid = 150;
    EXPECT_DOUBLE_EQ(correction_factor(o, 120, 150), 1.0);
}

TEST(CorrectionFactor, NonThermalOrDegenerateSetterIsOne) {
    MeritOrder o{{"wind", -45, 200, Tech::Wind, false}, {"gas", 100, 100, Tech::Gas, true}};
    EXPECT_DOUBLE_EQ(correction_factor(o, 120, 200), 1.0);
    MeritOrder cheap{{"gas", 0.5, 200, Tech::Gas, true}};
    EXPECT_DOUBLE_EQ(correction_factor(cheap, 120, 80), 1.0);
    MeritOrder neg_da{{"gas", 60, 200, Tech::Gas, true}};
    EXPECT_DOUBLE_EQ(correction_factor(neg_da, 120, -10), 1.0);
    EXPECT_DOUBLE_EQ(correction_factor({}, 120, 80), 1.0);
}

TEST(MeritOrder, AscendingWithIdTies) {
    MeritOrder o{{"gas", 100, 1, Tech::Gas, true},
                 {"cfd-wind", 0, 1, Tech::Wind, false},
                 {"nuclear", -77.29, 1, Tech::Nuclear, false},
                 {"ro-wind", -48, 1, Tech::Wind, false},
                 {"a-solar", 0, 1, Tech::Solar, false}};
    sort_merit_order(o);
    std::vector<std::string> ids;
    for (const auto& e : o) ids.push_back(e.unit);
    EXPECT_EQ(ids, (std::vector<std::string>{"nuclear", "ro-wind", "a-solar", "cfd-wind", "gas"}));
    MeritOrder empty;
    sort_merit_order(empty);
    EXPECT_TRUE(empty.empty());
}

TEST(ApplyCostModel, FixedBidsByScheme) {
    NetworkTopology t;
    t.buses = {"A"};
    t.zones = {{"A", "Z1"}};
    t.bands = {{"A", Band::North}};
    Unit ro = testkit::wind("ro", "A", SubsidyScheme::ro(45.0));
    Unit cfd = testkit::wind("cfd", "A", SubsidyScheme::cfd(60.0));
    Unit nuc = testkit::wind("nuc", "A", SubsidyScheme::none());
    nuc.tech = Tech::Nuclear;
    Unit gas = testkit::thermal("gas", "A", 80.0);
    auto units = std::make_shared<UnitRegistry>(UnitRegistry{ro, cfd, nuc, gas});
    auto d = testkit::blank_day(t, units, 2);
    for (auto& [u, a] : d.availability) a = Series(2, 100.0);
    d.load["A"] = Series(2, 350.0);
    d.day_ahead_price_gb = Series(2, 160.0);
    CostInputs in;
    in.nuclear_floor = -77.29;
    apply_cost_model(d, in);
    EXPECT_DOUBLE_EQ(unit_bid(d, "ro", 0), -45.0);
    EXPECT_DOUBLE_EQ(unit_bid(d, "cfd", 0), 0.0);
    EXPECT_DOUBLE_EQ(unit_bid(d, "nuc", 0), -77.29);
    // gas sets the price at 80 against a day-ahead of 160
    EXPECT_DOUBLE_EQ(unit_bid(d, "gas", 1), 160.0);
    auto order = build_merit_order(d);
    ASSERT_EQ(order.size(), 2u);
    EXPECT_EQ(order[0].front().unit, "nuc");
    EXPECT_EQ(order[0].back().unit, "gas");
}

TEST(ApplyCostModel, CorrectionCanBeDisabled) {
    auto inst = testkit::two_bus();
    inst.day.day_ahead_price_gb = Series(1, 200.0);
    testkit::plain_costs(inst.day);
    EXPECT_DOUBLE_EQ(unit_bid(inst.day, "gen-south", 0), 50.0);
}

TEST(WithInferredRocs, WritesEstimates) {
    UnitRegistry units{testkit::wind("w", "A", SubsidyScheme::ro(std::nullopt))};
    auto out = with_inferred_rocs(units, {{"w", RocEstimate{"w", 42.0, RocSource::SampledFromCohort}}});
    ASSERT_TRUE(out[0].subsidy.value.has_value());
    EXPECT_DOUBLE_EQ(*out[0].subsidy.value, 42.0);
}
