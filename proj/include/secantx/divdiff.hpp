#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "secantx/real.hpp"

namespace secantx {

struct DuplicateNode : std::runtime_error {
    DuplicateNode() : std::runtime_error("duplicate interpolation node") {}
};

using Sample = std::pair<Real, Real>;  // (x, f(x))

namespace detail {
inline void require_distinct(const std::vector<Sample>& points) {
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first) throw DuplicateNode();
}
}  // namespace detail

/// Highest-order divided difference f[x_0,...,x_m] over all samples, via the
/// recursion f[x_i,...,x_m] = (f[x_i,...,x_{m-1}] - f[x_{i+1},...,x_m]) / (x_i - x_m).
inline Real divided_difference(const std::vector<Sample>& points) {
    if (points.empty()) throw std::invalid_argument("divided_difference: no points");
    detail::require_distinct(points);
    std::vector<Real> d;
    d.reserve(points.size());
    for (const auto& p : points) d.push_back(p.second);
    const std::size_t m = points.size();
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = 0; i + level < m; ++i)
            d[i] = (d[i] - d[i + 1]) / (points[i].first - points[i + level].first);
    return d[0];
}

/// Working memory of the generalized secant iteration: the k+1 most recent
/// nodes (newest first) plus the bottom diagonal of their divided-difference
/// table, diagonal[i] = f[x_{n-i},...,x_n]. Only this diagonal is ever stored;
/// advancing the window by one node costs k divisions.
class DiagonalState {
  public:
    /// Builds the diagonal from scratch over samples given newest-first.
    static DiagonalState from_points(const std::vector<Sample>& newest_first) {
        if (newest_first.empty())
            throw std::invalid_argument("DiagonalState: no points");
        detail::require_distinct(newest_first);
        std::vector<Real> nodes;
        std::vector<Real> row;
        nodes.reserve(newest_first.size());
        row.reserve(newest_first.size());
        for (const auto& p : newest_first) {
            nodes.push_back(p.first);
            row.push_back(p.second);
        }
        std::vector<Real> diag;
        diag.reserve(nodes.size());
        diag.push_back(row[0]);
        const std::size_t m = nodes.size();
        for (std::size_t level = 1; level < m; ++level) {
            for (std::size_t i = 0; i + level < m; ++i)
                row[i] = (row[i] - row[i + 1]) / (nodes[i] - nodes[i + level]);
            diag.push_back(row[0]);
        }
        return DiagonalState(std::move(nodes), std::move(diag));
    }

    std::size_t size() const { return nodes_.size(); }
    /// Interpolation degree k (= node count - 1).
    int order() const { return static_cast<int>(nodes_.size()) - 1; }
    const std::vector<Real>& nodes() const { return nodes_; }
    const std::vector<Real>& diagonal() const { return diagonal_; }
    const Real& newest() const { return nodes_.front(); }
    const Real& f_newest() const { return diagonal_.front(); }

    bool contains_node(const Real& x) const {
        for (const auto& n : nodes_)
            if (n == x) return true;
        return false;
    }

    /// Window advanced by one node: the new bottom diagonal is obtained from
    /// the stored one with k operations (the f_78, f_678, f_5678 chain) and the
    /// oldest node is dropped.
    DiagonalState push_node(const Real& x_new, const Real& f_new) const {
        auto [nodes, diag] = advanced(x_new, f_new, nodes_.size());
        nodes.pop_back();  // diagonal already has window size; only the node list grew
        return DiagonalState(std::move(nodes), std::move(diag));
    }

    /// Window extended by one node (no drop); used while the start-up list is
    /// still being completed.
    DiagonalState grown(const Real& x_new, const Real& f_new) const {
        auto [nodes, diag] = advanced(x_new, f_new, nodes_.size() + 1);
        return DiagonalState(std::move(nodes), std::move(diag));
    }

    /// p'_{n,k}(x_n) = f[x_n,x_{n-1}] + sum_{i>=2} f[x_n,...,x_{n-i}] *
    /// prod_{j=1}^{i-1} (x_n - x_{n-j}).
    Real derivative_at_newest() const {
        if (size() < 2)
            throw std::logic_error("derivative_at_newest: needs at least 2 nodes");
        Real deriv = diagonal_[1];
        Real prod(1, newest().precision());
        for (std::size_t i = 2; i < size(); ++i) {
            prod = prod * (nodes_[0] - nodes_[i - 1]);
            deriv = deriv + diagonal_[i] * prod;
        }
        return deriv;
    }

    /// Newton-form interpolant p_{n,k}(x) evaluated at x.
    Real newton_form_eval(const Real& x) const {
        Real value = diagonal_[0];
        Real prod(1, x.precision());
        for (std::size_t i = 1; i < size(); ++i) {
            prod = prod * (x - nodes_[i - 1]);
            value = value + diagonal_[i] * prod;
        }
        return value;
    }

  private:
    DiagonalState(std::vector<Real> nodes, std::vector<Real> diag)
        : nodes_(std::move(nodes)), diagonal_(std::move(diag)) {}

    // Shared advance step: new diagonal entry j comes from old entry j-1, in
    // order, exactly as in the bottom-diagonal overwrite scheme.
    std::pair<std::vector<Real>, std::vector<Real>> advanced(const Real& x_new,
                                                             const Real& f_new,
                                                             std::size_t new_size) const {
        if (contains_node(x_new)) throw DuplicateNode();
        std::vector<Real> diag;
        diag.reserve(new_size);
        diag.push_back(f_new);
        for (std::size_t j = 1; j < new_size; ++j)
            diag.push_back((diagonal_[j - 1] - diag[j - 1]) / (nodes_[j - 1] - x_new));
        std::vector<Real> nodes;
        nodes.reserve(new_size);
        nodes.push_back(x_new);
        for (const auto& n : nodes_) nodes.push_back(n);
        return {std::move(nodes), std::move(diag)};
    }

    std::vector<Real> nodes_;     // newest first
    std::vector<Real> diagonal_;  // diagonal_[i] = f[nodes_[i], ..., nodes_[0]]
};

/// Convenience wrappers matching the driver's vocabulary.
inline DiagonalState init_diagonal(const std::vector<Sample>& newest_first) {
    return DiagonalState::from_points(newest_first);
}
inline DiagonalState push_node(const DiagonalState& s, const Real& x, const Real& fx) {
    return s.push_node(x, fx);
}
inline Real derivative_at_newest(const DiagonalState& s) { return s.derivative_at_newest(); }
inline Real newton_form_eval(const DiagonalState& s, const Real& x) {
    return s.newton_form_eval(x);
}

}  // namespace secantx
