#pragma once

// Orchestration layer behind the CLI subcommands: runs the engine or the
// Fock-basis reference on a RunConfig and emits CSV time series.  Time-series
// CSVs always carry the header t,mean_Q,mean_Q2,norm,method with values in
// scientific notation at 16 significant digits, so repeated runs of the same
// config are byte-identical.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "acspi/errors.hpp"
#include "acspi/fock_oracle.hpp"
#include "acspi/ladder_algebra.hpp"
#include "acspi/propagator.hpp"
#include "acspi/quadrature.hpp"
#include "acspi/run_config.hpp"
#include "acspi/symbols.hpp"

namespace acspi {

struct TrajectoryRow {
    double t = 0.0;
    double q = 0.0;
    double q2 = 0.0;
    double norm = 0.0;
};

namespace detail {

inline void csv_header(std::ostream& out) { out << "t,mean_Q,mean_Q2,norm,method\n"; }

inline void csv_row(std::ostream& out, const TrajectoryRow& r, const char* method) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.15e,%.15e,%.15e,%.15e,%s\n", r.t, r.q, r.q2, r.norm,
                  method);
    out << buf;
}

// Rows are recorded at step 0, at every stride-th step, and at the final step.
inline bool sampled(long step, long stride, long n_steps) {
    return step % stride == 0 || step == n_steps;
}

}  // namespace detail

inline std::vector<TrajectoryRow> propagate_trajectory(const RunConfig& cfg,
                                                       std::ostream* diag = nullptr) {
    const PhysicalParams params = cfg.physical();
    const PotentialSpec spec = make_potential(cfg);
    auto grid = make_run_grid(cfg);
    CSState state = project_initial(grid, cfg.alpha0, diag);

    std::vector<TrajectoryRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.n_steps / cfg.stride + 2));
    auto record = [&rows, &params](const CSState& s) {
        const Moments m = moments(s, params);
        rows.push_back({s.time, m.q, m.q2, m.norm});
    };
    record(state);

    long step_index = 0;
    auto observer = [&](double, const CSState& s) {
        ++step_index;
        if (detail::sampled(step_index, cfg.stride, cfg.n_steps)) record(s);
    };
    propagate(state, spec, cfg.t_total, cfg.n_steps, SymbolTruncation(cfg.K), params, observer,
              cfg.norm_floor, cfg.norm_check_every, diag);
    return rows;
}

inline std::vector<TrajectoryRow> oracle_trajectory(const RunConfig& cfg,
                                                    std::ostream* diag = nullptr) {
    const PhysicalParams params = cfg.physical();
    const PotentialSpec spec = make_potential(cfg);
    FockState state = coherent_in_fock(cfg.alpha0, cfg.oracle_dim, diag);

    std::vector<TrajectoryRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.n_steps / cfg.stride + 2));
    auto record = [&rows, &params](double t, const FockState& s) {
        rows.push_back({t, fock_expectation_Q(s, params), fock_expectation_Q2(s, params),
                        s.norm2()});
    };
    record(0.0, state);

    long step_index = 0;
    auto observer = [&](double t, const FockState& s) {
        ++step_index;
        if (detail::sampled(step_index, cfg.stride, cfg.n_steps)) record(t, s);
    };
    evolve_oracle(state, spec, cfg.t_total, cfg.n_steps, params, observer);
    return rows;
}

inline void write_time_series(std::ostream& out, const std::vector<TrajectoryRow>& rows,
                              const char* method, bool with_header = true) {
    if (with_header) detail::csv_header(out);
    for (const auto& r : rows) detail::csv_row(out, r, method);
}

inline void run_propagate(const RunConfig& cfg, std::ostream& out,
                          std::ostream* diag = nullptr) {
    write_time_series(out, propagate_trajectory(cfg, diag), "acspi");
}

inline void run_oracle(const RunConfig& cfg, std::ostream& out, std::ostream* diag = nullptr) {
    write_time_series(out, oracle_trajectory(cfg, diag), "fock");
}

struct CompareSummary {
    double max_dev = 0.0;
    double mean_dev = 0.0;
    double runtime_acspi_s = 0.0;
    double runtime_fock_s = 0.0;
};

// Both methods run on the identical step and sample schedule; the CSV holds
// the two stacked time series and the summary goes to a separate text stream
// (runtimes are not reproducible, so they never enter the CSV).
inline CompareSummary run_compare(const RunConfig& cfg, std::ostream& out,
                                  std::ostream& summary_out, bool dev_lines = true,
                                  std::ostream* diag = nullptr) {
    using clock = std::chrono::steady_clock;

    const auto t0 = clock::now();
    const std::vector<TrajectoryRow> engine = propagate_trajectory(cfg, diag);
    const auto t1 = clock::now();
    const std::vector<TrajectoryRow> oracle = oracle_trajectory(cfg, diag);
    const auto t2 = clock::now();

    write_time_series(out, engine, "acspi");
    write_time_series(out, oracle, "fock", false);

    if (engine.size() != oracle.size())
        throw std::logic_error("run_compare: sample schedules disagree");

    CompareSummary s;
    s.runtime_acspi_s = std::chrono::duration<double>(t1 - t0).count();
    s.runtime_fock_s = std::chrono::duration<double>(t2 - t1).count();
    double sum = 0.0;
    char buf[192];
    for (std::size_t i = 0; i < engine.size(); ++i) {
        const double dev = std::abs(engine[i].q - oracle[i].q);
        if (dev > s.max_dev) s.max_dev = dev;
        sum += dev;
        if (dev_lines) {
            std::snprintf(buf, sizeof buf, "dev t=%.15e abs_dQ=%.15e\n", engine[i].t, dev);
            summary_out << buf;
        }
    }
    s.mean_dev = sum / static_cast<double>(engine.size());
    std::snprintf(buf, sizeof buf,
                  "summary max_dev=%.15e mean_dev=%.15e runtime_acspi_s=%.6f runtime_fock_s=%.6f\n",
                  s.max_dev, s.mean_dev, s.runtime_acspi_s, s.runtime_fock_s);
    summary_out << buf;
    return s;
}

namespace detail {

inline double max_abs_dq(const std::vector<TrajectoryRow>& a,
                         const std::vector<TrajectoryRow>& b) {
    if (a.size() != b.size())
        throw std::logic_error("trajectory comparison: sample schedules disagree");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i].q - b[i].q));
    return dev;
}

// Probe disc of radius 1.5 around the grid center: the region a well-resolved
// grid must reproduce the overlap identity on.
inline std::vector<Complex> probe_disc(Complex center) {
    std::vector<Complex> probes{center};
    for (double r : {0.5, 1.0, 1.5})
        for (int k = 0; k < 8; ++k) {
            const double th = 2.0 * M_PI * k / 8.0;
            probes.push_back(center + Complex(r * std::cos(th), r * std::sin(th)));
        }
    return probes;
}

}  // namespace detail

// Worst per-element deviation between quadrature reconstruction of the number
// basis matrix of Q^k (from its antinormal symbol) and the exact elements,
// relative to max(1, |exact|), over k <= max_k and n, n' <= n_max.
inline double symbol_reconstruction_residual(const QuadratureGrid& grid,
                                             const PhysicalParams& params, int max_k,
                                             int n_max) {
    if (max_k < 1 || n_max < 0) throw std::invalid_argument("symbol_reconstruction_residual");
    const int n_nodes = static_cast<int>(grid.size());
    const int rows = n_max + 1;

    // phi(n, j) = <n|alpha_j>, by the coherent-state recurrence.
    Eigen::MatrixXcd phi(rows, n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        const Complex a = grid.nodes[j];
        phi(0, j) = std::exp(Complex(-0.5 * std::norm(a), 0.0));
        for (int n = 1; n < rows; ++n) phi(n, j) = phi(n - 1, j) * a / std::sqrt(double(n));
    }

    const std::vector<SymbolPolynomial> symbols = q_power_symbols(max_k, params);
    double worst = 0.0;
    Eigen::VectorXcd weighted(n_nodes);
    for (int k = 1; k <= max_k; ++k) {
        for (int j = 0; j < n_nodes; ++j)
            weighted(j) = grid.weights[j] * symbols[static_cast<std::size_t>(k)](grid.nodes[j]);
        const Eigen::MatrixXcd recon = phi * weighted.asDiagonal() * phi.adjoint();
        const Eigen::MatrixXcd exact = fock_matrix(
            position_to_antinormal(PositionPolynomial::monomial(k), params), rows);
        for (int n = 0; n < rows; ++n)
            for (int m = 0; m < rows; ++m) {
                const double scale = std::max(1.0, std::abs(exact(n, m)));
                worst = std::max(worst, std::abs(recon(n, m) - exact(n, m)) / scale);
            }
    }
    return worst;
}

// Worst per-element relative deviation (guarded by 1 for small elements)
// between the antinormal-ordered number-basis matrix of a random polynomial
// potential and direct Horner evaluation at the truncated position matrix,
// over the leading block the truncation leaves exact.
inline double ordering_fock_residual(const PhysicalParams& params, int n_polys, int max_deg,
                                     int dim, int block, unsigned seed = 12345u) {
    if (block > dim) throw std::invalid_argument("ordering_fock_residual: block > dim");
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> deg(0, max_deg);

    Eigen::MatrixXcd qmat = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        const double s = params.lambda * std::sqrt(double(n + 1));
        qmat(n, n + 1) = s;
        qmat(n + 1, n) = s;
    }

    double worst = 0.0;
    for (int trial = 0; trial < n_polys; ++trial) {
        const int d = deg(gen);
        PositionPolynomial poly = PositionPolynomial::zero();
        for (int k = 0; k <= d; ++k) poly += PositionPolynomial::monomial(k, coeff(gen));

        Eigen::MatrixXcd direct = Eigen::MatrixXcd::Zero(dim, dim);
        for (int k = poly.degree(); k >= 0; --k) {
            direct = direct * qmat;
            direct.diagonal().array() += poly.coeff(k);
        }
        const Eigen::MatrixXcd ordered = fock_matrix(position_to_antinormal(poly, params), dim);
        for (int i = 0; i < block; ++i)
            for (int j = 0; j < block; ++j) {
                const double scale = std::max(1.0, std::abs(ordered(i, j)));
                worst = std::max(worst, std::abs(ordered(i, j) - direct(i, j)) / scale);
            }
    }
    return worst;
}

// axis "n_steps": rerun both methods per value, halving dt down the list.
// axis "K": rerun the engine per value against one fixed-step reference.
// axis "grid": overlap-identity residual of an n x n grid per value.
// Emits axis,value,error,est_order rows; est_order is log2 of the error drop
// from the previous value (0 for the first row or degenerate errors).
inline void run_convergence(const RunConfig& cfg, const std::string& axis,
                            std::vector<int> values, std::ostream& out,
                            std::ostream* diag = nullptr) {
    if (axis != "n_steps" && axis != "K" && axis != "grid")
        throw config_error("convergence axis must be one of n_steps, K, grid");
    if (values.empty()) {
        if (axis == "n_steps")
            values = {cfg.n_steps, 2 * cfg.n_steps, 4 * cfg.n_steps};
        else if (axis == "K")
            values = {4, 6, 8};
        else
            values = {12, 16, 24, 32};
    }
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] < values[i + 1]))
            throw config_error("convergence values must be strictly increasing");
    if (axis == "n_steps" || axis == "grid") {
        for (int v : values)
            if (v < 1 || v > (axis == "grid" ? 256 : (1 << 28)))
                throw config_error("convergence value out of range for axis " + axis);
    } else {
        for (int v : values)
            if (v < 1 || v > 16) throw config_error("convergence K value out of range");
    }

    std::vector<double> errors;
    errors.reserve(values.size());
    if (axis == "n_steps") {
        for (int v : values) {
            RunConfig run = cfg;
            run.n_steps = v;
            run.stride = std::max(1, v / 100);
            errors.push_back(
                detail::max_abs_dq(propagate_trajectory(run, diag), oracle_trajectory(run, diag)));
        }
    } else if (axis == "K") {
        RunConfig base = cfg;
        base.stride = std::max(1, cfg.n_steps / 100);
        const std::vector<TrajectoryRow> reference = oracle_trajectory(base, diag);
        for (int v : values) {
            RunConfig run = base;
            run.K = v;
            errors.push_back(detail::max_abs_dq(propagate_trajectory(run, diag), reference));
        }
    } else {
        const std::vector<Complex> probes = detail::probe_disc(cfg.grid_center);
        for (int v : values) {
            const QuadratureGrid grid =
                product_grid(v, v, cfg.s_re, cfg.s_im, cfg.grid_center);
            errors.push_back(identity_residual(grid, probes));
        }
    }

    out << "axis,value,error,est_order\n";
    char buf[128];
    for (std::size_t i = 0; i < values.size(); ++i) {
        double order = 0.0;
        if (i > 0 && errors[i - 1] > 0.0 && errors[i] > 0.0)
            order = std::log2(errors[i - 1] / errors[i]);
        std::snprintf(buf, sizeof buf, "%s,%d,%.15e,%.15e\n", axis.c_str(), values[i],
                      errors[i], order);
        out << buf;
    }
}

// Static self-checks: symbol reconstruction and the overlap identity on the
// configured grid, plus the ordering route against direct matrix evaluation.
// Returns false (and marks the failing line) if any check misses its bound.
inline bool run_diagnostics(const RunConfig& cfg, std::ostream& out) {
    const PhysicalParams params = cfg.physical();
    const QuadratureGrid grid = product_grid(cfg.n_re, cfg.n_im, cfg.s_re, cfg.s_im,
                                             cfg.grid_center);

    struct Check {
        const char* name;
        double residual;
        double threshold;
    };
    const Check checks[] = {
        {"symbol_reconstruction", symbol_reconstruction_residual(grid, params, 8, 12), 1e-6},
        {"identity_residual",
         identity_residual(grid, detail::probe_disc(cfg.grid_center)), 1e-6},
        {"ordering_vs_fock", ordering_fock_residual(params, 50, 8, 40, 28), 1e-10},
    };

    bool all_pass = true;
    char buf[128];
    for (const Check& c : checks) {
        const bool pass = c.residual <= c.threshold;
        all_pass = all_pass && pass;
        std::snprintf(buf, sizeof buf, "diag %s: residual=%.15e threshold=%.1e %s\n", c.name,
                      c.residual, c.threshold, pass ? "PASS" : "FAIL");
        out << buf;
    }
    return all_pass;
}

}  // namespace acspi
