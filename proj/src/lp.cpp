#include "zonalsim/lp.hpp"

#include <algorithm>
#include <set>

#include "Highs.h"

namespace zonalsim {

int LinearProgram::add_column(double cost, double lo, double hi) {
    cost_.push_back(cost);
    col_lo_.push_back(lo);
    col_hi_.push_back(hi);
    return static_cast<int>(cost_.size()) - 1;
}

int LinearProgram::add_row(double lo, double hi, int group) {
    row_lo_.push_back(lo);
    row_hi_.push_back(hi);
    row_group_.push_back(group);
    return static_cast<int>(row_lo_.size()) - 1;
}

void LinearProgram::add_coefficient(int row, int col, double value) {
    if (value != 0.0) entries_.push_back({row, col, value});
}

void LinearProgram::set_row_bounds(int row, double lo, double hi) {
    row_lo_.at(static_cast<std::size_t>(row)) = lo;
    row_hi_.at(static_cast<std::size_t>(row)) = hi;
}

int LinearProgram::add_group(std::string name) {
    groups_.push_back(std::move(name));
    return static_cast<int>(groups_.size()) - 1;
}

namespace {

HighsLp to_highs(const std::vector<double>& cost, const std::vector<double>& col_lo,
                 const std::vector<double>& col_hi, const std::vector<double>& row_lo,
                 const std::vector<double>& row_hi, int num_cols,
                 std::vector<std::vector<std::pair<int, double>>> columns) {
    HighsLp lp;
    lp.num_col_ = num_cols;
    lp.num_row_ = static_cast<HighsInt>(row_lo.size());
    lp.col_cost_ = cost;
    lp.col_lower_ = col_lo;
    lp.col_upper_ = col_hi;
    lp.row_lower_ = row_lo;
    lp.row_upper_ = row_hi;
    lp.a_matrix_.format_ = MatrixFormat::kColwise;
    lp.a_matrix_.num_col_ = lp.num_col_;
    lp.a_matrix_.num_row_ = lp.num_row_;
    lp.a_matrix_.start_.assign(1, 0);
    for (auto& col : columns) {
        std::sort(col.begin(), col.end());
        for (const auto& [r, v] : col) {
            lp.a_matrix_.index_.push_back(r);
            lp.a_matrix_.value_.push_back(v);
        }
        lp.a_matrix_.start_.push_back(static_cast<HighsInt>(lp.a_matrix_.index_.size()));
    }
    lp.sense_ = ObjSense::kMinimize;
    return lp;
}

void configure(Highs& h) {
    h.setOptionValue("output_flag", false);
    h.setOptionValue("threads", 1);
    h.setOptionValue("random_seed", 0);
}

}  // namespace

struct LpSolver::Impl {
    Highs highs;
    bool solved_once = false;
};

LpSolver::LpSolver(const LinearProgram& lp) : impl_(std::make_unique<Impl>()), lp_(lp) {
    configure(impl_->highs);
    std::vector<std::vector<std::pair<int, double>>> columns(lp_.cost_.size());
    for (const auto& e : lp_.entries_)
        columns[static_cast<std::size_t>(e.col)].emplace_back(e.row, e.value);
    impl_->highs.passModel(to_highs(lp_.cost_, lp_.col_lo_, lp_.col_hi_, lp_.row_lo_,
                                    lp_.row_hi_, lp_.num_columns(), std::move(columns)));
}

LpSolver::~LpSolver() = default;

void LpSolver::set_column_bounds(int col, double lo, double hi) {
    lp_.col_lo_[static_cast<std::size_t>(col)] = lo;
    lp_.col_hi_[static_cast<std::size_t>(col)] = hi;
    impl_->highs.changeColBounds(col, lo, hi);
}

LpSolution LpSolver::solve() {
    Highs& h = impl_->highs;
    h.run();
    auto status = h.getModelStatus();
    if (status == HighsModelStatus::kUnboundedOrInfeasible) {
        // Presolve cannot tell the two apart; the simplex can.
        h.setOptionValue("presolve", "off");
        h.clearSolver();
        h.run();
        h.setOptionValue("presolve", "choose");
        status = h.getModelStatus();
    }
    if (status == HighsModelStatus::kUnknown || status == HighsModelStatus::kSolveError) {
        // cold restart, then without presolve
        for (const char* presolve : {"choose", "off"}) {
            h.setOptionValue("presolve", presolve);
            h.clearSolver();
            h.run();
            status = h.getModelStatus();
            if (status != HighsModelStatus::kUnknown && status != HighsModelStatus::kSolveError) break;
        }
        h.setOptionValue("presolve", "choose");
    }
    if (status == HighsModelStatus::kInfeasible) {
        auto groups = diagnose();
        std::string msg = "infeasible LP; constraint groups needing slack:";
        for (const auto& g : groups) msg += " " + g;
        throw InfeasibleError(msg, std::move(groups));
    }
    if (status == HighsModelStatus::kUnbounded)
        throw UnboundedError("unbounded LP; a price floor is missing");
    if (status != HighsModelStatus::kOptimal)
        throw std::runtime_error("LP solver failed: " + h.modelStatusToString(status));
    impl_->solved_once = true;

    const auto& sol = h.getSolution();
    LpSolution out;
    out.x = sol.col_value;
    out.row_dual = sol.row_dual;
    out.objective = h.getInfo().objective_function_value;
    return out;
}

std::vector<std::string> LpSolver::diagnose() const {
    const int n = lp_.num_columns();
    const int m = lp_.num_rows();
    std::set<std::string> groups;
    for (int j = 0; j < n; ++j)
        if (lp_.col_lo_[static_cast<std::size_t>(j)] > lp_.col_hi_[static_cast<std::size_t>(j)])
            groups.insert("column-bounds");

    // Elastic copy: every row gets a surplus and a deficit column at unit cost.
    std::vector<double> cost(static_cast<std::size_t>(n), 0.0);
    std::vector<double> lo = lp_.col_lo_, hi = lp_.col_hi_;
    for (int j = 0; j < n; ++j)
        if (lo[static_cast<std::size_t>(j)] > hi[static_cast<std::size_t>(j)])
            hi[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
    std::vector<std::vector<std::pair<int, double>>> columns(static_cast<std::size_t>(n));
    for (const auto& e : lp_.entries_)
        columns[static_cast<std::size_t>(e.col)].emplace_back(e.row, e.value);
    for (int i = 0; i < m; ++i) {
        for (double sign : {1.0, -1.0}) {
            cost.push_back(1.0);
            lo.push_back(0.0);
            hi.push_back(kInf);
            columns.push_back({{i, sign}});
        }
    }
    Highs h;
    configure(h);
    h.passModel(to_highs(cost, lo, hi, lp_.row_lo_, lp_.row_hi_, n + 2 * m, std::move(columns)));
    h.run();
    if (h.getModelStatus() != HighsModelStatus::kOptimal) {
        groups.insert("unknown");
        return {groups.begin(), groups.end()};
    }
    const auto& x = h.getSolution().col_value;
    for (int i = 0; i < m; ++i) {
        const double slack = x[static_cast<std::size_t>(n + 2 * i)] +
                             x[static_cast<std::size_t>(n + 2 * i + 1)];
        if (slack > 1e-7)
            groups.insert(lp_.group_name(lp_.row_group_[static_cast<std::size_t>(i)]));
    }
    return {groups.begin(), groups.end()};
}

}  // namespace zonalsim
