#include "zonalsim/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zonalsim/dates.hpp"
#include "zonalsim/rng.hpp"

namespace zonalsim {

double estimate_nuclear_floor(const std::vector<PriceObservation>& history) {
    std::optional<double> lowest;
    for (const auto& h : history)
        if (h.dispatching && (!lowest || h.price < *lowest)) lowest = h.price;
    if (!lowest) throw std::runtime_error("nuclear floor: no dispatching period in history");
    return *lowest;
}

namespace {

std::optional<double> recurring_price(const std::vector<double>& bids, const CostConfig& cfg) {
    if (static_cast<int>(bids.size()) < cfg.recurring_min_bids || bids.empty())
        return std::nullopt;
    std::vector<double> sorted = bids;
    std::sort(sorted.begin(), sorted.end());
    double best = sorted.front();
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (j - i > best_count) {
            best_count = j - i;
            best = sorted[i];
        }
        i = j;
    }
    const double share = static_cast<double>(best_count) / static_cast<double>(bids.size());
    if (share + 1e-12 < cfg.recurring_share) return std::nullopt;
    if (std::abs(best) <= 0.0) return std::nullopt;
    return std::abs(best);
}

}  // namespace

std::map<std::string, RocEstimate> infer_roc(
    const std::map<std::string, std::vector<double>>& bid_history, std::uint64_t seed,
    const CostConfig& cfg) {
    std::map<std::string, RocEstimate> out;
    std::vector<std::string> pending;
    std::vector<double> cohort;
    for (const auto& [unit, bids] : bid_history) {
        if (auto p = recurring_price(bids, cfg)) {
            out[unit] = RocEstimate{unit, *p, RocSource::ObservedRecurringBid};
            cohort.push_back(*p);
        } else {
            pending.push_back(unit);
        }
    }
    if (pending.empty()) return out;
    if (cohort.empty())
        throw std::runtime_error("infer_roc: no recurring-bid estimates to sample " +
                                 pending.front() + " from");
    double mean = 0.0;
    for (double v : cohort) mean += v;
    mean /= static_cast<double>(cohort.size());
    double var = 0.0;
    for (double v : cohort) var += (v - mean) * (v - mean);
    var /= static_cast<double>(cohort.size());
    const double sd = std::sqrt(var);
    for (const auto& unit : pending) {
        Rng rng(seed, unit);
        const double roc = std::max(cfg.roc_floor, rng.normal(mean, sd));
        out[unit] = RocEstimate{unit, roc, RocSource::SampledFromCohort};
    }
    return out;
}

double estimate_thermal_srmc(const std::vector<PriceObservation>& window,
                             std::optional<double> class_mean) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& w : window) {
        if (!w.dispatching) continue;
        sum += w.price;
        ++n;
    }
    if (n > 0) return sum / static_cast<double>(n);
    if (class_mean) return *class_mean;
    throw std::runtime_error("thermal srmc: no dispatching period and no class mean");
}

double correction_factor(const MeritOrder& order, double total_load, double day_ahead_price,
                         const CostConfig& cfg) {
    if (order.empty() || !(total_load > 0.0)) return 1.0;
    const MeritEntry* setter = &order.back();
    double cum = 0.0;
    for (const auto& e : order) {
        cum += e.available_mw;
        if (cum >= total_load) {
            setter = &e;
            break;
        }
    }
    if (!setter->thermal || setter->bid <= cfg.kappa_srmc_floor) return 1.0;
    const double kappa = day_ahead_price / setter->bid;
    return kappa > 0.0 ? kappa : 1.0;
}

void sort_merit_order(MeritOrder& order) {
    std::sort(order.begin(), order.end(), [](const MeritEntry& a, const MeritEntry& b) {
        if (a.bid != b.bid) return a.bid < b.bid;
        return a.unit < b.unit;
    });
}

std::vector<MeritOrder> build_merit_order(const DayScenario& s) {
    std::vector<MeritOrder> out(static_cast<std::size_t>(s.periods));
    if (!s.units) return out;
    for (const auto& u : *s.units) {
        if (!u.is_generator()) continue;
        auto cost = s.marginal_costs.find(u.id);
        if (cost == s.marginal_costs.end())
            throw std::runtime_error("merit order: no cost estimate for unit " + u.id);
        const auto& avail = s.availability.at(u.id);
        for (int t = 0; t < s.periods; ++t) {
            const auto ti = static_cast<std::size_t>(t);
            out[ti].push_back(MeritEntry{u.id, cost->second.corrected_srmc.at(ti), avail.at(ti),
                                         u.tech, u.kind == UnitKind::Thermal});
        }
    }
    for (auto& o : out) sort_merit_order(o);
    return out;
}

CostInputs prepare_cost_inputs(const UnitRegistry& units, const CostHistory& history,
                               std::uint64_t seed, const CostConfig& cfg) {
    CostInputs in;
    in.config = cfg;
    in.dispatch_history = &history.dispatch_history;

    std::map<std::string, std::vector<double>> ro_bids;
    for (const auto& u : units) {
        if (u.subsidy.variant != SubsidyScheme::Variant::RO || u.subsidy.value) continue;
        auto it = history.bid_history.find(u.id);
        ro_bids[u.id] = it == history.bid_history.end() ? std::vector<double>{} : it->second;
    }
    in.rocs = infer_roc(ro_bids, seed, cfg);

    std::vector<PriceObservation> nuclear;
    for (const auto& r : history.dispatch_history) {
        auto it = std::find_if(units.begin(), units.end(),
                               [&](const Unit& u) { return u.id == r.unit; });
        if (it == units.end() || it->tech != Tech::Nuclear) continue;
        nuclear.push_back({r.gb_price, r.mel > 0.0 && r.mw >= cfg.dispatch_threshold * r.mel});
    }
    const bool any_dispatch = std::any_of(nuclear.begin(), nuclear.end(),
                                          [](const PriceObservation& o) { return o.dispatching; });
    in.nuclear_floor = any_dispatch ? estimate_nuclear_floor(nuclear) : cfg.default_nuclear_floor;
    return in;
}

UnitRegistry with_inferred_rocs(const UnitRegistry& units,
                                const std::map<std::string, RocEstimate>& rocs) {
    UnitRegistry out = units;
    for (auto& u : out) {
        if (u.subsidy.variant != SubsidyScheme::Variant::RO || u.subsidy.value) continue;
        auto it = rocs.find(u.id);
        if (it != rocs.end()) u.subsidy.value = it->second.roc;
    }
    return out;
}

namespace {

double fixed_bid(const Unit& u, double nuclear_floor) {
    if (u.base_cost) return *u.base_cost;
    if (u.tech == Tech::Nuclear) return nuclear_floor;
    switch (u.subsidy.variant) {
        case SubsidyScheme::Variant::RO:
            if (!u.subsidy.value) throw std::runtime_error("unit " + u.id + " has no ROC estimate");
            return -*u.subsidy.value;
        case SubsidyScheme::Variant::CfD:
        case SubsidyScheme::Variant::None:
            return 0.0;
    }
    return 0.0;
}

std::vector<PriceObservation> thermal_window(const std::string& unit, const std::string& date,
                                             const CostInputs& in) {
    std::vector<PriceObservation> w;
    if (!in.dispatch_history) return w;
    const std::string first = add_days(date, -in.config.srmc_window_days);
    for (const auto& r : *in.dispatch_history) {
        if (r.unit != unit || r.date < first || r.date >= date) continue;
        w.push_back({r.gb_price, r.mel > 0.0 && r.mw >= in.config.dispatch_threshold * r.mel});
    }
    return w;
}

}  // namespace

void apply_cost_model(DayScenario& s, const CostInputs& in) {
    if (!s.units) throw std::runtime_error("cost model: scenario has no units");
    const auto periods = static_cast<std::size_t>(s.periods);

    std::map<std::string, double> base;
    std::map<Tech, std::vector<double>> class_estimates;
    std::vector<const Unit*> undetermined;
    for (const auto& u : *s.units) {
        if (u.kind == UnitKind::Storage) {
            base[u.id] = 0.0;
        } else if (u.kind == UnitKind::Thermal) {
            if (u.base_cost) {
                base[u.id] = *u.base_cost;
                class_estimates[u.tech].push_back(*u.base_cost);
                continue;
            }
            auto w = thermal_window(u.id, s.date, in);
            const bool has = std::any_of(w.begin(), w.end(),
                                         [](const PriceObservation& o) { return o.dispatching; });
            if (has) {
                base[u.id] = estimate_thermal_srmc(w, std::nullopt);
                class_estimates[u.tech].push_back(base[u.id]);
            } else {
                undetermined.push_back(&u);
            }
        } else if (u.is_generator()) {
            base[u.id] = fixed_bid(u, in.nuclear_floor);
        }
    }
    for (const Unit* u : undetermined) {
        std::optional<double> mean;
        auto it = class_estimates.find(u->tech);
        if (it != class_estimates.end() && !it->second.empty()) {
            double sum = 0.0;
            for (double v : it->second) sum += v;
            mean = sum / static_cast<double>(it->second.size());
        }
        if (!mean)
            throw std::runtime_error("thermal srmc for unit " + u->id +
                                     ": no dispatching period and empty technology class");
        base[u->id] = *mean;
    }

    s.marginal_costs.clear();
    for (const auto& u : *s.units) {
        auto it = base.find(u.id);
        if (it == base.end()) continue;
        s.marginal_costs[u.id] = CostCurve{u.id, it->second, Series(periods, it->second)};
    }
    if (!in.config.apply_correction) return;

    // Price-setter is located on the uncorrected stack.
    const auto order = build_merit_order(s);
    for (std::size_t t = 0; t < periods; ++t) {
        const double kappa = correction_factor(order[t], s.total_load(static_cast<int>(t)),
                                               s.day_ahead_price_gb.at(t), in.config);
        for (const auto& u : *s.units)
            if (u.kind == UnitKind::Thermal) {
                auto& c = s.marginal_costs[u.id];
                c.corrected_srmc[t] = kappa * c.base_srmc;
            }
    }
}

double unit_bid(const DayScenario& s, const std::string& unit, int t) {
    auto it = s.marginal_costs.find(unit);
    if (it == s.marginal_costs.end()) throw std::runtime_error("no cost curve for unit " + unit);
    return it->second.corrected_srmc.at(static_cast<std::size_t>(t));
}

}  // namespace zonalsim
