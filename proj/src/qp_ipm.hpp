#pragma once

// Small dense convex QP solver:
//
//     min  0.5 * u' diag(h) u + g'u    s.t.  A u <= b
//
// Infeasible-start primal-dual interior point with Mehrotra
// predictor-corrector steps. Sized for a handful of variables and a few
// dozen rows; the normal matrix is formed densely and factored by Cholesky.

#include <vector>

namespace fgwp::detail {

struct QpProblem {
    int num_vars{0};
    int num_rows{0};
    std::vector<double> h_diag;  // length num_vars, entries > 0
    std::vector<double> grad;    // length num_vars
    std::vector<double> a;       // row-major num_rows x num_vars
    std::vector<double> rhs;     // a[i] . u <= rhs[i]

    void clear(int vars) {
        num_vars = vars;
        num_rows = 0;
        h_diag.assign(static_cast<std::size_t>(vars), 1.0);
        grad.assign(static_cast<std::size_t>(vars), 0.0);
        a.clear();
        rhs.clear();
    }
    // Appends a row; pads or truncates `row` to num_vars entries.
    void add_row(std::initializer_list<double> row, double b) {
        std::size_t count = 0;
        for (double v : row) {
            if (count++ == static_cast<std::size_t>(num_vars)) break;
            a.push_back(v);
        }
        while (count++ < static_cast<std::size_t>(num_vars)) a.push_back(0.0);
        rhs.push_back(b);
        ++num_rows;
    }
};

struct QpResult {
    std::vector<double> u;
    std::vector<double> duals;  // one per row, >= 0
    bool converged{false};
    int iterations{0};
};

/// Reusable scratch space; pass the same object across calls to avoid
/// reallocation in hot loops.
struct QpWorkspace {
    std::vector<double> s, w, r_d, r_p, m, chol, rhs_vec, du, ds, dw;
    std::vector<double> du_aff, ds_aff, dw_aff, comp, y;
    QpResult result;
};

const QpResult& solve_qp(const QpProblem& qp, QpWorkspace& ws);

}  // namespace fgwp::detail
