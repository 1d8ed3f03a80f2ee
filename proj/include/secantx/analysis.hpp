#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "secantx/iterate.hpp"
#include "secantx/real.hpp"

namespace secantx {

/// Order of convergence s_k: the only positive root of s^{k+1} = sum_{i=0}^k s^i,
/// located by bisection on [1,2] (g(1) = -k < 0, g(2) = 1 > 0, single sign change).
inline Real order_of_convergence(int k, const Real& tol) {
    if (k < 1) throw std::invalid_argument("order_of_convergence: k must be >= 1");
    if (!(tol > Real(0, tol.precision())))
        throw std::invalid_argument("order_of_convergence: tol must be positive");
    const mpfr_prec_t prec = tol.precision();
    auto g = [&](const Real& s) {
        Real sum(0, prec);
        Real power(1, prec);
        for (int i = 0; i <= k; ++i) {
            sum = sum + power;
            power = power * s;
        }
        return power - sum;  // power == s^{k+1} after the loop
    };
    Real lo(1, prec), hi(2, prec);
    while (hi - lo > tol) {
        Real mid = (lo + hi) / 2;
        if (g(mid) > Real(0, prec))
            hi = mid;
        else
            lo = mid;
    }
    return (lo + hi) / 2;
}

inline Real order_of_convergence(int k, mpfr_prec_t precision = kDefaultPrecision) {
    return order_of_convergence(k, Real::parse("1e-30", precision));
}

/// (2 - 2^{-k-1} e, 2 - 2^{-k-1}), valid for k >= 2.
inline std::pair<Real, Real> order_bounds(int k, mpfr_prec_t precision = kDefaultPrecision) {
    if (k < 2) throw std::out_of_range("order_bounds: stated only for k >= 2");
    const Real two(2, precision);
    const Real scale = Real::pow2(-(k + 1), precision);
    const Real e = exp(Real(1, precision));
    return {two - scale * e, two - scale};
}

/// Asymptotic error constant L = (-1)^{k+1} / (k+1)! * f^{(k+1)}(alpha) / f'(alpha).
inline Real asymptotic_constant(const Real& fprime_at_root, const Real& f_k1_at_root, int k) {
    if (fprime_at_root.is_zero())
        throw DomainError("asymptotic_constant: f'(alpha) must be nonzero");
    Real l = f_k1_at_root / fprime_at_root /
             factorial(static_cast<unsigned long>(k) + 1, fprime_at_root.precision());
    return (k % 2 == 0) ? -l : l;  // (-1)^{k+1}
}

/// lim |eps_{n+1}| / |eps_n|^{s_k} = |L|^{(s_k-1)/k}; 0 by convention when L = 0.
inline Real error_ratio_limit(const Real& L, int k, const Real& s_k) {
    if (L.is_zero()) return Real(0, L.precision());
    return pow(abs(L), (s_k - 1) / k);
}

/// sigma_n = eps_{n+1} / prod_{i=0}^{k} eps_{n-i}; entries whose window touches
/// a zero error (or the ends of the record) are absent.
inline std::vector<std::optional<Real>> sigma_sequence(const std::vector<Real>& errors, int k) {
    std::vector<std::optional<Real>> out(errors.size());
    if (k < 1) return out;
    for (std::size_t n = static_cast<std::size_t>(k); n + 1 < errors.size(); ++n) {
        bool defined = !errors[n + 1].is_zero();
        Real prod(1, errors[n].precision());
        for (int i = 0; i <= k && defined; ++i) {
            const Real& e = errors[n - static_cast<std::size_t>(i)];
            if (e.is_zero()) {
                defined = false;
            } else {
                prod = prod * e;
            }
        }
        if (defined) out[n] = errors[n + 1] / prod;
    }
    return out;
}

/// log|eps_{n+1}/eps_n| / log|eps_n/eps_{n-1}|, the observable order estimate.
inline std::vector<std::optional<Real>> empirical_order(const std::vector<Real>& errors) {
    std::vector<std::optional<Real>> out(errors.size());
    for (std::size_t n = 1; n + 1 < errors.size(); ++n) {
        if (errors[n - 1].is_zero() || errors[n].is_zero() || errors[n + 1].is_zero()) continue;
        Real denom_ratio = abs(errors[n] / errors[n - 1]);
        if (denom_ratio == Real(1, denom_ratio.precision())) continue;  // log ratio undefined
        out[n] = log(abs(errors[n + 1] / errors[n])) / log(denom_ratio);
    }
    return out;
}

/// Efficiency index EI = s^{1/p} for a method of order s costing p evaluations
/// per iteration; p = 1 returns the order unchanged.
inline Real efficiency_index(const Real& order, int evals_per_iteration) {
    if (evals_per_iteration < 1)
        throw std::invalid_argument("efficiency_index: evaluations per iteration must be >= 1");
    if (!(order > Real(1, order.precision())))
        throw DomainError("efficiency_index: order must exceed 1");
    if (evals_per_iteration == 1) return order;
    return pow(order, Real(1, order.precision()) / evals_per_iteration);
}

struct OrderProfile {
    int k = 0;
    Real s_k;
    std::optional<Real> lower_bound;  // absent for k = 1
    std::optional<Real> upper_bound;
    std::optional<Real> L;
    std::optional<Real> error_ratio_limit;
    Real efficiency_index;  // = s_k: one evaluation per iteration
};

inline OrderProfile make_order_profile(int k, std::optional<Real> L = std::nullopt,
                                       mpfr_prec_t precision = kDefaultPrecision) {
    OrderProfile p;
    p.k = k;
    p.s_k = order_of_convergence(k, precision);
    if (k >= 2) {
        auto [lo, hi] = order_bounds(k, precision);
        p.lower_bound = lo;
        p.upper_bound = hi;
    }
    if (L) {
        p.L = *L;
        p.error_ratio_limit = secantx::error_ratio_limit(*L, k, p.s_k);
    }
    p.efficiency_index = efficiency_index(p.s_k, 1);
    return p;
}

/// One row of an equal-cost comparison: after q*m1*m2 function evaluations,
/// method 1 has reached iterate q*m2 and method 2 iterate q*m1.
struct CompareRow {
    int q = 0;
    int n1 = 0;
    int n2 = 0;
    Real x1;
    Real x2;
    std::optional<Real> err1;
    std::optional<Real> err2;
};

inline std::vector<CompareRow> equal_cost_compare(const SolveReport& report1, int m1,
                                                  const SolveReport& report2, int m2) {
    if (m1 < 1 || m2 < 1)
        throw std::invalid_argument("equal_cost_compare: evaluation counts must be >= 1");
    std::vector<CompareRow> rows;
    for (int q = 1;; ++q) {
        const std::size_t i1 = static_cast<std::size_t>(q) * static_cast<std::size_t>(m2);
        const std::size_t i2 = static_cast<std::size_t>(q) * static_cast<std::size_t>(m1);
        if (i1 >= report1.records.size() || i2 >= report2.records.size()) break;
        CompareRow row;
        row.q = q;
        row.n1 = static_cast<int>(i1);
        row.n2 = static_cast<int>(i2);
        row.x1 = report1.records[i1].x;
        row.x2 = report2.records[i2].x;
        row.err1 = report1.records[i1].error;
        row.err2 = report2.records[i2].error;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace secantx
