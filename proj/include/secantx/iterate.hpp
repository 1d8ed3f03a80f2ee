#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secantx/divdiff.hpp"
#include "secantx/real.hpp"

namespace secantx {

struct DerivativeBreakdown : std::runtime_error {
    DerivativeBreakdown() : std::runtime_error("interpolant derivative is zero") {}
};

/// One generalized-secant update x_{n+1} = x_n - f(x_n) / p'_{n,k}(x_n).
inline Real generalized_secant_step(const DiagonalState& state, const Real& f_newest) {
    Real deriv = state.derivative_at_newest();
    if (deriv.is_zero()) throw DerivativeBreakdown();
    return state.newest() - f_newest / deriv;
}

struct ProblemSpec {
    std::function<Real(const Real&)> f;
    std::function<Real(const Real&)> fprime;  // optional; needed by newton_solve
    std::map<int, Real> derivatives_at_root;  // order -> f^(order)(alpha), optional
    std::optional<Real> known_root;
    std::string name;
};

struct SolverConfig {
    int k = 2;
    std::vector<Real> initial_points;  // oldest first: x_0, x_1, ...
    mpfr_prec_t precision = kDefaultPrecision;
    std::optional<Real> tol_residual;  // default 0: stop only on exact residual
    std::optional<Real> tol_step;      // default 2^-(precision-10), scaled by 1+|x|
    int max_iterations = 100;
    double step_cap_factor = 1e10;     // reject |dx| > cap * (1 + |x_n|)

    Real residual_tolerance() const {
        return tol_residual ? *tol_residual : Real(0, precision);
    }
    Real step_tolerance() const {
        return tol_step ? *tol_step : Real::pow2(-(static_cast<long>(precision) - 10), precision);
    }
};

enum class Termination {
    Converged,
    ResidualZero,
    MaxIterations,
    DerivativeBreakdown,
    DuplicateNode,
    NaNEncountered,
};

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::Converged: return "Converged";
        case Termination::ResidualZero: return "ResidualZero";
        case Termination::MaxIterations: return "MaxIterations";
        case Termination::DerivativeBreakdown: return "DerivativeBreakdown";
        case Termination::DuplicateNode: return "DuplicateNode";
        case Termination::NaNEncountered: return "NaNEncountered";
    }
    return "Unknown";
}

struct IterationRecord {
    int n = 0;
    Real x;
    Real f;
    std::optional<Real> deriv_estimate;  // p' (or f') used to produce this iterate
    std::optional<Real> error;           // x - alpha, when the root is known
    int k_used = 0;                      // interpolation degree used (0 for start points)
};

struct SolveReport {
    std::vector<IterationRecord> records;
    Termination termination = Termination::MaxIterations;
    Real final_x;
    long evaluations = 0;  // function (and derivative) calls charged to the run
};

/// Errors of all records; requires known_root runs.
inline std::vector<Real> recorded_errors(const SolveReport& report) {
    std::vector<Real> errs;
    errs.reserve(report.records.size());
    for (const auto& r : report.records) {
        if (!r.error) throw std::logic_error("recorded_errors: run had no known root");
        errs.push_back(*r.error);
    }
    return errs;
}

namespace detail {

struct Evaluator {
    const std::function<Real(const Real&)>& fn;
    long& counter;

    Real operator()(const Real& x) const {
        ++counter;
        try {
            return fn(x);
        } catch (const DomainError&) {
        } catch (const DivisionByZero&) {
        } catch (const RangeError&) {
        }
        return Real::nan(x.precision());
    }
};

inline void validate(const ProblemSpec& problem, const SolverConfig& config) {
    if (!problem.f) throw std::invalid_argument("solve: problem has no function");
    if (config.k < 1) throw std::invalid_argument("solve: k must be >= 1");
    if (config.max_iterations < 1) throw std::invalid_argument("solve: max_iterations must be >= 1");
    const auto n = config.initial_points.size();
    if (n < 2 || n > static_cast<std::size_t>(config.k) + 1)
        throw std::invalid_argument("solve: need between 2 and k+1 initial points");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (config.initial_points[i].with_precision(config.precision) ==
                config.initial_points[j].with_precision(config.precision))
                throw std::invalid_argument("solve: initial points must be pairwise distinct");
}

}  // namespace detail

/// Generalized secant driver. Starts from the supplied points, growing the
/// interpolation degree by one per step (secant step first) until k+1 iterates
/// exist, then slides the (k+1)-node window, evaluating f exactly once per
/// iteration. Runtime failures terminate the report; nothing is thrown past it.
inline SolveReport solve(const ProblemSpec& problem, const SolverConfig& config) {
    detail::validate(problem, config);
    const mpfr_prec_t prec = config.precision;
    const Real tol_res = config.residual_tolerance().with_precision(prec);
    const Real tol_step = config.step_tolerance().with_precision(prec);
    const Real one(1, prec);

    SolveReport report;
    detail::Evaluator feval{problem.f, report.evaluations};
    const std::optional<Real> alpha =
        problem.known_root ? std::optional<Real>(problem.known_root->with_precision(prec))
                           : std::nullopt;

    auto record = [&](const Real& x, const Real& fx, std::optional<Real> deriv, int k_used) {
        IterationRecord r;
        r.n = static_cast<int>(report.records.size());
        r.x = x;
        r.f = fx;
        r.deriv_estimate = std::move(deriv);
        if (alpha) r.error = x - *alpha;
        r.k_used = k_used;
        report.records.push_back(std::move(r));
    };
    auto finish = [&](Termination t) {
        report.termination = t;
        report.final_x = report.records.back().x;
        return report;
    };

    // Start-up: evaluate the provided points (oldest first).
    std::vector<Sample> window;  // newest first
    for (const auto& p0 : config.initial_points) {
        Real x = p0.with_precision(prec);
        Real fx = feval(x);
        record(x, fx, std::nullopt, 0);
        if (!fx.is_finite()) return finish(Termination::NaNEncountered);
        window.insert(window.begin(), {x, fx});
        if (abs(fx) <= tol_res)
            return finish(fx.is_zero() ? Termination::ResidualZero : Termination::Converged);
    }

    DiagonalState state = DiagonalState::from_points(window);
    for (int produced = 0; produced < config.max_iterations; ++produced) {
        Real deriv = state.derivative_at_newest();
        if (deriv.is_zero() || !deriv.is_finite()) return finish(Termination::DerivativeBreakdown);

        Real x_prev = state.newest();
        Real step = state.f_newest() / deriv;
        Real x_next = x_prev - step;
        if (!x_next.is_finite()) {
            record(x_next, Real::nan(prec), deriv, state.order());
            return finish(Termination::NaNEncountered);
        }
        if (abs(step) > Real(config.step_cap_factor, prec) * (one + abs(x_prev)))
            return finish(Termination::MaxIterations);  // divergent runaway; step rejected

        // The update underflowed the spacing at x_prev: converged to machine
        // resolution, nothing new to record.
        if (x_next == x_prev) return finish(Termination::Converged);

        if (abs(x_next - x_prev) <= tol_step * (one + abs(x_next))) {
            Real fx = feval(x_next);
            record(x_next, fx, deriv, state.order());
            if (!fx.is_finite()) return finish(Termination::NaNEncountered);
            if (abs(fx) <= tol_res)
                return finish(fx.is_zero() ? Termination::ResidualZero : Termination::Converged);
            return finish(Termination::Converged);
        }

        // Re-visiting an older stored node: its value is already known, and
        // the difference table cannot accept a repeat.
        for (const auto& [wx, wf] : window) {
            if (x_next == wx) {
                record(x_next, wf, deriv, state.order());
                if (abs(wf) <= tol_res)
                    return finish(wf.is_zero() ? Termination::ResidualZero
                                               : Termination::Converged);
                return finish(Termination::DuplicateNode);
            }
        }

        Real fx = feval(x_next);
        record(x_next, fx, deriv, state.order());
        if (!fx.is_finite()) return finish(Termination::NaNEncountered);
        if (abs(fx) <= tol_res)
            return finish(fx.is_zero() ? Termination::ResidualZero : Termination::Converged);

        window.insert(window.begin(), {x_next, fx});
        if (window.size() <= static_cast<std::size_t>(config.k) + 1) {
            state = state.grown(x_next, fx);
        } else {
            state = state.push_node(x_next, fx);
            window.pop_back();
        }
    }
    return finish(Termination::MaxIterations);
}

/// Reference Newton-Raphson driver with the same stopping logic; charges two
/// evaluations per iteration (f and f').
inline SolveReport newton_solve(const ProblemSpec& problem, const Real& x0,
                                const SolverConfig& config) {
    if (!problem.f) throw std::invalid_argument("newton_solve: problem has no function");
    if (!problem.fprime)
        throw std::invalid_argument("newton_solve: problem has no derivative");
    const mpfr_prec_t prec = config.precision;
    const Real tol_res = config.residual_tolerance().with_precision(prec);
    const Real tol_step = config.step_tolerance().with_precision(prec);
    const Real one(1, prec);

    SolveReport report;
    detail::Evaluator feval{problem.f, report.evaluations};
    detail::Evaluator fpeval{problem.fprime, report.evaluations};
    const std::optional<Real> alpha =
        problem.known_root ? std::optional<Real>(problem.known_root->with_precision(prec))
                           : std::nullopt;

    auto record = [&](const Real& x, const Real& fx, std::optional<Real> deriv) {
        IterationRecord r;
        r.n = static_cast<int>(report.records.size());
        r.x = x;
        r.f = fx;
        r.deriv_estimate = std::move(deriv);
        if (alpha) r.error = x - *alpha;
        report.records.push_back(std::move(r));
    };
    auto finish = [&](Termination t) {
        report.termination = t;
        report.final_x = report.records.back().x;
        return report;
    };

    Real x = x0.with_precision(prec);
    Real fx = feval(x);
    record(x, fx, std::nullopt);
    if (!fx.is_finite()) return finish(Termination::NaNEncountered);
    if (abs(fx) <= tol_res)
        return finish(fx.is_zero() ? Termination::ResidualZero : Termination::Converged);

    for (int produced = 0; produced < config.max_iterations; ++produced) {
        Real dfx = fpeval(x);
        if (dfx.is_zero() || !dfx.is_finite()) return finish(Termination::DerivativeBreakdown);
        Real step = fx / dfx;
        Real x_next = x - step;
        if (!x_next.is_finite()) {
            record(x_next, Real::nan(prec), dfx);
            return finish(Termination::NaNEncountered);
        }
        if (abs(step) > Real(config.step_cap_factor, prec) * (one + abs(x)))
            return finish(Termination::MaxIterations);

        Real fx_next = feval(x_next);
        record(x_next, fx_next, dfx);
        if (!fx_next.is_finite()) return finish(Termination::NaNEncountered);
        if (abs(fx_next) <= tol_res)
            return finish(fx_next.is_zero() ? Termination::ResidualZero : Termination::Converged);
        if (abs(x_next - x) <= tol_step * (one + abs(x_next)))
            return finish(Termination::Converged);
        x = x_next;
        fx = fx_next;
    }
    return finish(Termination::MaxIterations);
}

}  // namespace secantx
