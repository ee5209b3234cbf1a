#include "qp_ipm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <cstdlib>

namespace { struct IpmStats { long long iters = 0; long long solves = 0; ~IpmStats() { if (std::getenv("FGWP_IPM_STATS")) std::fprintf(stderr, "ipm: %lld solves, %.1f iters avg\n", solves, solves ? double(iters)/double(solves) : 0.0); } } g_ipm_stats; }

namespace fgwp::detail {

namespace {

// In-place Cholesky solve of M x = rhs (M row-major n x n, destroyed).
// Bumps the diagonal and retries when a pivot collapses.
bool cholesky_solve(std::vector<double>& m, const std::vector<double>& rhs, int n,
                    std::vector<double>& chol, std::vector<double>& y,
                    std::vector<double>& out) {
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m[i * n + i]));
    const double floor = std::max(1e-13 * max_diag, 1e-300);

    for (int attempt = 0; attempt < 4; ++attempt) {
        chol = m;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = chol[i * n + j];
                for (int k = 0; k < j; ++k) sum -= chol[i * n + k] * chol[j * n + k];
                if (i == j) {
                    if (sum <= floor) {
                        ok = false;
                        break;
                    }
                    chol[i * n + i] = std::sqrt(sum);
                } else {
                    chol[i * n + j] = sum / chol[j * n + j];
                }
            }
        }
        if (ok) {
            y.assign(n, 0.0);
            for (int i = 0; i < n; ++i) {
                double sum = rhs[i];
                for (int k = 0; k < i; ++k) sum -= chol[i * n + k] * y[k];
                y[i] = sum / chol[i * n + i];
            }
            out.assign(n, 0.0);
            for (int i = n - 1; i >= 0; --i) {
                double sum = y[i];
                for (int k = i + 1; k < n; ++k) sum -= chol[k * n + i] * out[k];
                out[i] = sum / chol[i * n + i];
            }
            return true;
        }
        const double ridge = std::max(1e-10 * max_diag, 1e-12) * std::pow(10.0, attempt);
        for (int i = 0; i < n; ++i) m[i * n + i] += ridge;
    }
    return false;
}

}  // namespace

const QpResult& solve_qp(const QpProblem& qp, QpWorkspace& ws) {
    const int nv = qp.num_vars;
    const int nr = qp.num_rows;
    if (nv <= 0 || qp.h_diag.size() != static_cast<std::size_t>(nv) ||
        qp.grad.size() != static_cast<std::size_t>(nv) ||
        qp.a.size() != static_cast<std::size_t>(nr) * static_cast<std::size_t>(nv) ||
        qp.rhs.size() != static_cast<std::size_t>(nr))
        throw std::invalid_argument("solve_qp: inconsistent problem sizes");

    QpResult& result = ws.result;
    result.converged = false;
    result.iterations = 0;
    result.u.assign(nv, 0.0);
    result.duals.assign(nr, 0.0);
    if (nr == 0) {
        for (int i = 0; i < nv; ++i) result.u[i] = -qp.grad[i] / qp.h_diag[i];
        result.converged = true;
        return result;
    }

    std::vector<double>& u = result.u;
    ws.s.assign(nr, 0.0);
    ws.w.assign(nr, 1.0);
    for (int i = 0; i < nr; ++i) ws.s[i] = std::max(std::abs(qp.rhs[i]), 1.0);
    ws.r_d.assign(nv, 0.0);
    ws.r_p.assign(nr, 0.0);
    ws.comp.assign(nr, 0.0);

    const auto row = [&](int r) { return qp.a.data() + static_cast<std::size_t>(r) * nv; };
    const auto row_dot = [&](int r, const std::vector<double>& v) {
        const double* ar = row(r);
        double sum = 0.0;
        for (int j = 0; j < nv; ++j) sum += ar[j] * v[j];
        return sum;
    };

    const int max_iterations = 40;
    for (int iter = 0; iter < max_iterations; ++iter) {
        result.iterations = iter + 1;

        for (int j = 0; j < nv; ++j) ws.r_d[j] = qp.h_diag[j] * u[j] + qp.grad[j];
        for (int i = 0; i < nr; ++i) {
            const double* ar = row(i);
            for (int j = 0; j < nv; ++j) ws.r_d[j] += ar[j] * ws.w[i];
        }
        double mu = 0.0;
        bool primal_ok = true, dual_ok = true;
        for (int i = 0; i < nr; ++i) {
            ws.r_p[i] = row_dot(i, u) + ws.s[i] - qp.rhs[i];
            if (std::abs(ws.r_p[i]) > 1e-9 * (1.0 + std::abs(qp.rhs[i]))) primal_ok = false;
            mu += ws.s[i] * ws.w[i];
        }
        mu /= nr;
        for (int j = 0; j < nv; ++j)
            if (std::abs(ws.r_d[j]) > 1e-8 * (1.0 + std::abs(qp.grad[j]))) dual_ok = false;

        if (primal_ok && dual_ok && mu < 1e-10) {
            result.converged = true;
            break;
        }
        if (iter == max_iterations - 1 && std::getenv("FGWP_IPM_STATS")) {
            double rp = 0, rd = 0;
            for (int i = 0; i < nr; ++i) rp = std::max(rp, std::abs(ws.r_p[i]) / (1.0 + std::abs(qp.rhs[i])));
            for (int j = 0; j < nv; ++j) rd = std::max(rd, std::abs(ws.r_d[j]) / (1.0 + std::abs(qp.grad[j])));
            std::fprintf(stderr, "ipm cap: mu=%.2e rp=%.2e rd=%.2e\n", mu, rp, rd);
        }

        // Normal matrix M = H + A' diag(w/s) A.
        ws.m.assign(static_cast<std::size_t>(nv) * nv, 0.0);
        for (int j = 0; j < nv; ++j) ws.m[j * nv + j] = qp.h_diag[j];
        for (int i = 0; i < nr; ++i) {
            const double scale = ws.w[i] / ws.s[i];
            const double* ar = row(i);
            for (int a = 0; a < nv; ++a) {
                const double va = ar[a] * scale;
                if (va == 0.0) continue;
                for (int c = a; c < nv; ++c) ws.m[a * nv + c] += va * ar[c];
            }
        }
        for (int a = 0; a < nv; ++a)
            for (int c = 0; c < a; ++c) ws.m[a * nv + c] = ws.m[c * nv + a];

        const auto solve_direction = [&](std::vector<double>& du_out,
                                         std::vector<double>& ds_out,
                                         std::vector<double>& dw_out) {
            ws.rhs_vec.assign(nv, 0.0);
            for (int j = 0; j < nv; ++j) ws.rhs_vec[j] = -ws.r_d[j];
            for (int i = 0; i < nr; ++i) {
                const double coeff = (ws.w[i] * ws.r_p[i] - ws.comp[i]) / ws.s[i];
                const double* ar = row(i);
                for (int j = 0; j < nv; ++j) ws.rhs_vec[j] -= ar[j] * coeff;
            }
            std::vector<double> m_copy = ws.m;
            if (!cholesky_solve(m_copy, ws.rhs_vec, nv, ws.chol, ws.y, du_out)) return false;
            ds_out.assign(nr, 0.0);
            dw_out.assign(nr, 0.0);
            for (int i = 0; i < nr; ++i) {
                ds_out[i] = -ws.r_p[i] - row_dot(i, du_out);
                dw_out[i] = (-ws.comp[i] - ws.w[i] * ds_out[i]) / ws.s[i];
            }
            return true;
        };

        const auto max_step = [&](const std::vector<double>& v, const std::vector<double>& dv) {
            double alpha = 1.0;
            for (int i = 0; i < nr; ++i)
                if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
            return alpha;
        };

        // Predictor.
        for (int i = 0; i < nr; ++i) ws.comp[i] = ws.s[i] * ws.w[i];
        if (!solve_direction(ws.du_aff, ws.ds_aff, ws.dw_aff)) break;
        const double alpha_aff =
            std::min(max_step(ws.s, ws.ds_aff), max_step(ws.w, ws.dw_aff));
        double mu_aff = 0.0;
        for (int i = 0; i < nr; ++i)
            mu_aff += (ws.s[i] + alpha_aff * ws.ds_aff[i]) * (ws.w[i] + alpha_aff * ws.dw_aff[i]);
        mu_aff /= nr;
        double sigma = mu > 0.0 ? std::pow(mu_aff / mu, 3.0) : 0.0;
        sigma = std::clamp(sigma, 1e-8, 1.0);

        // Corrector.
        for (int i = 0; i < nr; ++i)
            ws.comp[i] = ws.s[i] * ws.w[i] + ws.ds_aff[i] * ws.dw_aff[i] - sigma * mu;
        if (!solve_direction(ws.du, ws.ds, ws.dw)) break;

        const double alpha =
            std::min(1.0, 0.995 * std::min(max_step(ws.s, ws.ds), max_step(ws.w, ws.dw)));
        for (int j = 0; j < nv; ++j) u[j] += alpha * ws.du[j];
        for (int i = 0; i < nr; ++i) {
            ws.s[i] = std::max(ws.s[i] + alpha * ws.ds[i], 1e-300);
            ws.w[i] = std::max(ws.w[i] + alpha * ws.dw[i], 1e-300);
        }
    }

    g_ipm_stats.iters += result.iterations; g_ipm_stats.solves += 1;
    result.duals = ws.w;
    return result;
}

}  // namespace fgwp::detail
