#include <gtest/gtest.h>

#include "zonalsim/policy.hpp"
#include "zonalsim/rng.hpp"

using namespace zonalsim;

namespace {

PolicyUnitData unit(const std::string& id, const std::string& zone, double national, double zonal,
                    double ftr, Tech tech = Tech::Wind, bool cfd = false) {
    PolicyUnitData u;
    u.unit = id;
    u.zone = zone;
    u.tech = tech;
    u.cfd = cfd;
    u.national_revenue = national;
    u.zonal_revenue = zonal;
    u.ftr_spread_payout = ftr;
    return u;
}

PolicyRunData two_zone(double rent) {
    PolicyRunData d;
    d.zone_mean_price = {{"north", 20.0}, {"south", 90.0}};
    d.national_mean_price = 70.0;
    d.rent_available = rent;
    d.consumer_saving_full = 50000.0;
    d.served_load_mwh = 1000.0;
    return d;
}

}  // namespace

TEST(Policy, DepressedZonesAndCoverage) {
    auto d = two_zone(0);
    d.units = {unit("w", "north", 1, 1, 0), unit("gas", "north", 1, 1, 0, Tech::Gas),
               unit("s", "south", 1, 1, 0, Tech::Solar), unit("c", "north", 1, 1, 0, Tech::Wind, true)};
    EXPECT_EQ(price_depressed_zones(d), std::vector<std::string>{"north"});
    EXPECT_EQ(covered_units(d, false).size(), 2u);
    EXPECT_EQ(covered_units(d, true).size(), 1u);
}

TEST(Policy, ReferencePriceIsLoadWeighted) {
    EXPECT_DOUBLE_EQ(reference_price({10, 50}, {100, 300}), 40.0);
    EXPECT_DOUBLE_EQ(reference_price({10, 50}, {0, 0}), 30.0);
}

TEST(Policy2, WorkedPayout) {
    const double roc = 45.0;
    const double ftr = ftr_spread_payout({50}, {85}, {-48});
    EXPECT_DOUBLE_EQ(ftr, 3325.0);
    auto d = two_zone(1e6);
    const double zonal = (-48 + roc) * 50 * 0.5;
    d.units = {unit("w", "north", 5000, zonal, ftr)};
    auto p = policy2(d);
    EXPECT_DOUBLE_EQ(p.scale, 1.0);
    ASSERT_EQ(p.units.size(), 1u);
    EXPECT_DOUBLE_EQ(p.units[0].payout, 3325.0);
    EXPECT_DOUBLE_EQ(p.units[0].post_revenue / 25.0, 85 + roc);
}

TEST(Policy2, ZeroDispatchZeroPayout) {
    EXPECT_DOUBLE_EQ(ftr_spread_payout({0, 0}, {85, 90}, {-48, 10}), 0.0);
}

TEST(Policy2, ScaledToBudget) {
    auto d = two_zone(1000.0);
    d.units = {unit("a", "north", 100, 10, 3000), unit("b", "north", 100, 10, 1000)};
    auto p = policy2(d);
    EXPECT_DOUBLE_EQ(p.scale, 0.25);
    EXPECT_DOUBLE_EQ(p.payout_total, 1000.0);
    EXPECT_DOUBLE_EQ(p.units[0].payout, 750.0);
}

TEST(Policy2, NegativeBudgetWarns) {
    auto d = two_zone(-10.0);
    d.units = {unit("a", "north", 100, 10, 3000)};
    auto p = policy2(d);
    EXPECT_EQ(p.warnings, 1);
    EXPECT_DOUBLE_EQ(p.payout_total, 0.0);
}

// Property: with the budget unconstrained, a covered unit's post-policy
// revenue depends on its dispatch and the reference price only.
TEST(Policy2Property, OwnZonePriceInvariance) {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t T = 1 + rng.below(48);
        Series q(T), pref(T);
        for (std::size_t t = 0; t < T; ++t) {
            q[t] = rng.uniform(0, 300);
            pref[t] = rng.uniform(-20, 150);
        }
        const double subsidy = rng.uniform(0, 5000);
        std::optional<double> first;
        for (int variant = 0; variant < 3; ++variant) {
            Series pz(T);
            double zonal = subsidy;
            for (std::size_t t = 0; t < T; ++t) {
                pz[t] = rng.uniform(-80, 150);
                zonal += pz[t] * q[t] * 0.5;
            }
            auto d = two_zone(1e9);
            d.units = {unit("w", "north", 1e5, zonal, ftr_spread_payout(q, pref, pz))};
            auto p = policy2(d);
            ASSERT_DOUBLE_EQ(p.scale, 1.0);
            const double post = p.units[0].post_revenue;
            if (!first) first = post;
            EXPECT_NEAR(post, *first, 1e-3);
        }
        double expect = subsidy;
        for (std::size_t t = 0; t < T; ++t) expect += q[t] * pref[t] * 0.5;
        EXPECT_NEAR(*first, expect, 1e-3);
    }
}

TEST(Policy3, UniformRatio) {
    auto d = two_zone(300.0);
    d.units = {unit("a", "north", 1000, 600, 0), unit("b", "north", 500, 200, 0, Tech::Hydro),
               unit("c", "north", 0, 0, 0)};
    auto p = policy3(d);
    ASSERT_TRUE(p.rho.has_value());
    EXPECT_DOUBLE_EQ(*p.rho, (800.0 + 300.0) / 1500.0);
    for (const auto& u : p.units) {
        if (u.national_revenue <= 0.0) {
            EXPECT_FALSE(u.restoration.has_value());
            continue;
        }
        EXPECT_DOUBLE_EQ(*u.restoration, *p.rho);
        EXPECT_NEAR(u.post_revenue / u.national_revenue, *p.rho, 1e-12);
    }
    EXPECT_NEAR(p.payout_total, 300.0, 1e-9);
}

TEST(Policy3, RatioCappedAtFullRestoration) {
    auto d = two_zone(1e6);
    d.units = {unit("a", "north", 1000, 600, 0)};
    auto p = policy3(d);
    EXPECT_DOUBLE_EQ(*p.rho, 1.0);
    EXPECT_DOUBLE_EQ(p.units[0].post_revenue, 1000.0);
}

TEST(Policy3, RentCoveringTheGapRestoresFully) {
    // zonal energy equals national energy; rent is exactly the price gap
    auto d = two_zone(50 * (70 - 20) * 0.5);
    d.units = {unit("a", "north", 50 * 70 * 0.5, 50 * 20 * 0.5, 0)};
    auto p = policy3(d);
    EXPECT_DOUBLE_EQ(*p.rho, 1.0);
}

TEST(Policies, EqualRentShareEqualSavings) {
    for (double share : {0.0, 0.3, 1.0}) {
        auto d = two_zone(4000.0);
        d.units = {unit("a", "north", 1000, 600, 800), unit("b", "north", 500, 200, 400)};
        auto p2 = policy2(d, share);
        auto p3 = policy3(d, share);
        EXPECT_NEAR(p2.residual_saving, p3.residual_saving, 1e-3);
        EXPECT_NEAR(p2.residual_saving, 50000.0 - share * 4000.0, 1e-9);
        EXPECT_NEAR(*p2.residual_saving_per_mwh, p2.residual_saving / 1000.0, 1e-12);
    }
}

TEST(Policy1, CfdUnitsKeepZonalRevenue) {
    auto d = two_zone(4000.0);
    d.units = {unit("a", "north", 1000, 600, 800, Tech::Wind, true)};
    auto p = policy1(d);
    EXPECT_DOUBLE_EQ(p.residual_saving, 50000.0);
    EXPECT_DOUBLE_EQ(p.units[0].post_revenue, 600.0);
}
