#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "zonalsim/clearing.hpp"
#include "zonalsim/ingestion.hpp"

namespace zonalsim {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SyntheticConfig {
    int buses = 300;
    int zones = 6;
    int units = 450;
    std::map<Tech, double> mix = default_mix();  // share of the unit count
    int days = 30;
    std::string start_date = "2024-01-01";
    std::array<double, 3> regime_weights{0.69, 0.30, 0.01};  // low, high, extreme
    double peak_load_mw = 30000.0;
    bool interconnectors = true;
    double price_volatility = 0.15;  // relative sd of day-ahead and neighbour prices
    bool unconstrained_links = false;
    bool require_thermal = true;
    bool require_wind = true;
    int links_per_boundary = 3;
    double chord_share = 0.3;        // extra intra-zone links per bus
    double balancing_markup = 30.0;  // offer premium over SRMC in the observed stack
    int history_days = 30;

    static std::map<Tech, double> default_mix();
};

struct SyntheticBundle {
    Bundle bundle;
    std::map<std::string, std::vector<WindCase>> regimes;  // date -> drawn regime per period
};

// Deterministic for a fixed (config, seed). Each day draws from its own
// stream, so a longer run extends a shorter one.
SyntheticBundle generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed);

}  // namespace zonalsim
