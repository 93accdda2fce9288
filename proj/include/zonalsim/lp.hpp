#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace zonalsim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse LP in row/column form: min c'x s.t. row_lo <= Ax <= row_hi,
// col_lo <= x <= col_hi. Each row carries a group label used when reporting
// infeasibility.
class LinearProgram {
public:
    int add_column(double cost, double lo, double hi);
    int add_row(double lo, double hi, int group);
    void add_coefficient(int row, int col, double value);
    void set_row_bounds(int row, double lo, double hi);
    int add_group(std::string name);

    int num_columns() const { return static_cast<int>(cost_.size()); }
    int num_rows() const { return static_cast<int>(row_lo_.size()); }
    const std::string& group_name(int g) const { return groups_.at(static_cast<std::size_t>(g)); }

private:
    friend class LpSolver;
    std::vector<double> cost_, col_lo_, col_hi_;
    std::vector<double> row_lo_, row_hi_;
    std::vector<int> row_group_;
    std::vector<std::string> groups_;
    struct Entry {
        int row, col;
        double value;
    };
    std::vector<Entry> entries_;
};

struct LpSolution {
    std::vector<double> x;
    std::vector<double> row_dual;  // d objective / d rhs
    double objective = 0.0;
};

class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, std::vector<std::string> groups)
        : std::runtime_error(what), groups_(std::move(groups)) {}
    const std::vector<std::string>& groups() const { return groups_; }

private:
    std::vector<std::string> groups_;
};

class UnboundedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Owns one solver instance; bound changes after the first solve re-use the
// previous basis.
class LpSolver {
public:
    explicit LpSolver(const LinearProgram& lp);
    ~LpSolver();
    LpSolver(const LpSolver&) = delete;
    LpSolver& operator=(const LpSolver&) = delete;

    void set_column_bounds(int col, double lo, double hi);
    LpSolution solve();

private:
    std::vector<std::string> diagnose() const;

    struct Impl;
    std::unique_ptr<Impl> impl_;
    LinearProgram lp_;
};

}  // namespace zonalsim
