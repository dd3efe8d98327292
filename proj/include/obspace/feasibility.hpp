#pragma once

#include <obspace/affine.hpp>
#include <obspace/grounding.hpp>

#include <optional>
#include <vector>

namespace obspace {

template <class F>
struct Interval {
    bool empty = false;
    bool lo_bounded = false, hi_bounded = false;
    F lo{}, hi{};
};

// Parameter range keeping every coordinate of a one-dimensional family
// nonnegative. Works over any of the fields, including float.
template <class F>
std::optional<Interval<F>> feasible_interval(const AffineSolutionSet<F>& s) {
    if (s.dim() != 1) return std::nullopt;
    Interval<F> iv;
    const std::vector<F>& u = s.basis[0];
    for (std::size_t i = 0; i < s.vars(); ++i) {
        int su = sgn(u[i]);
        if (su == 0) {
            if (sgn(s.particular[i]) < 0) iv.empty = true;
            continue;
        }
        F bound = -s.particular[i] / u[i];
        if (su > 0) {
            if (!iv.lo_bounded || bound > iv.lo) iv.lo = bound;
            iv.lo_bounded = true;
        } else {
            if (!iv.hi_bounded || bound < iv.hi) iv.hi = bound;
            iv.hi_bounded = true;
        }
    }
    if (iv.lo_bounded && iv.hi_bounded && iv.lo > iv.hi) iv.empty = true;
    return iv;
}

template <class F>
struct FeasibilityResult {
    bool feasible = false;
    std::vector<F> witness;      // nonnegative solution, when feasible
    std::vector<F> certificate;  // y with y^T A >= 0 componentwise and y^T b < 0, otherwise
    std::optional<Interval<F>> interval;  // present when the set is one-dimensional
};

namespace detail {

// Phase-1 simplex with Bland's rule; exact fields only, so cycling is the
// only hazard and Bland's rule removes it.
template <class F>
struct Phase1 {
    std::size_t m, n;             // rows, structural columns
    std::vector<F> tab;           // m x (n + m + 1), artificial block then rhs
    std::vector<std::size_t> basis;
    std::vector<int> flip;        // row sign applied to make rhs nonnegative

    F& at(std::size_t r, std::size_t c) { return tab[r * (n + m + 1) + c]; }
    std::size_t rhs_col() const { return n + m; }

    explicit Phase1(const LinearSystem<F>& sys) : m(sys.rows), n(sys.cols) {
        tab.assign(m * (n + m + 1), F(0));
        flip.assign(m, 1);
        basis.resize(m);
        for (std::size_t r = 0; r < m; ++r) {
            int s = sgn(sys.rhs[r]) < 0 ? -1 : 1;
            flip[r] = s;
            F fs = F(s);
            for (std::size_t c = 0; c < n; ++c) at(r, c) = fs * sys.at(r, c);
            at(r, n + r) = F(1);
            at(r, rhs_col()) = fs * sys.rhs[r];
            basis[r] = n + r;
        }
        run();
    }

    F reduced_cost(std::size_t j) {
        F rc = j >= n ? F(1) : F(0);
        for (std::size_t r = 0; r < m; ++r)
            if (basis[r] >= n) rc -= at(r, j);
        return rc;
    }

    void pivot(std::size_t pr, std::size_t pc) {
        F inv = F(1) / at(pr, pc);
        for (std::size_t c = 0; c <= rhs_col(); ++c) at(pr, c) *= inv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == pr) continue;
            F f = at(r, pc);
            if (sgn(f) == 0) continue;
            for (std::size_t c = 0; c <= rhs_col(); ++c) at(r, c) -= f * at(pr, c);
        }
        basis[pr] = pc;
    }

    void run() {
        for (;;) {
            std::size_t enter = n + m;
            for (std::size_t j = 0; j < n + m; ++j)
                if (sgn(reduced_cost(j)) < 0) {
                    enter = j;  // Bland: smallest eligible index
                    break;
                }
            if (enter == n + m) return;
            std::size_t leave = m;
            for (std::size_t r = 0; r < m; ++r) {
                if (sgn(at(r, enter)) <= 0) continue;
                if (leave == m) {
                    leave = r;
                    continue;
                }
                F cur = at(r, rhs_col()) / at(r, enter);
                F best = at(leave, rhs_col()) / at(leave, enter);
                int c = sgn(cur - best);
                if (c < 0 || (c == 0 && basis[r] < basis[leave])) leave = r;
            }
            if (leave == m) throw SolveError("phase-1 objective unbounded");
            pivot(leave, enter);
        }
    }

    F objective() {
        F v = F(0);
        for (std::size_t r = 0; r < m; ++r)
            if (basis[r] >= n) v += at(r, rhs_col());
        return v;
    }

    std::vector<F> structural_solution() {
        std::vector<F> v(n, F(0));
        for (std::size_t r = 0; r < m; ++r)
            if (basis[r] < n) v[basis[r]] = at(r, rhs_col());
        return v;
    }

    // Dual values against the sign-flipped rows: y'_r = cost of the r-th
    // artificial column at optimum.
    std::vector<F> duals() {
        std::vector<F> y(m, F(0));
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t r = 0; r < m; ++r)
                if (basis[r] >= n) y[j] += at(r, n + j);
        return y;
    }
};

}  // namespace detail

// Decides whether the system admits a nonnegative solution. Feasible: returns
// a witness. Infeasible: returns row multipliers y with y^T A >= 0 and
// y^T b < 0, which refute any nonnegative solution. One-dimensional sets also
// carry the feasible parameter interval.
template <class F>
FeasibilityResult<F> nonneg_feasibility(const LinearSystem<F>& sys,
                                        const AffineSolutionSet<F>& s) {
    static_assert(field_traits<F>::exact,
                  "nonnegative feasibility requires an exact field; float intervals are "
                  "available through feasible_interval");
    if (sys.cols != s.vars()) throw SolveError("system and solution set disagree on variables");
    FeasibilityResult<F> out;
    out.interval = s.dim() == 1 ? feasible_interval(s) : std::nullopt;
    detail::Phase1<F> lp(sys);
    if (sgn(lp.objective()) == 0) {
        out.feasible = true;
        out.witness = lp.structural_solution();
        return out;
    }
    out.feasible = false;
    std::vector<F> y = lp.duals();
    // y' certifies against sign-flipped rows: y'^T A' <= 0, y'^T b' > 0.
    // Undo the flips and negate to land on y^T A >= 0, y^T b < 0.
    out.certificate.assign(sys.rows, F(0));
    for (std::size_t r = 0; r < sys.rows; ++r) out.certificate[r] = F(-lp.flip[r]) * y[r];
    return out;
}

// All vertices of {v in set : v >= 0}: points where some choice of dim()
// coordinates is pinned to zero with a unique solution. Exact fields only.
template <class F>
std::vector<SignedGrounding<F>> vertex_enumerate(const AffineSolutionSet<F>& s,
                                                 std::size_t max_dim = 6) {
    static_assert(field_traits<F>::exact, "vertex enumeration requires an exact field");
    if (s.dim() > max_dim)
        throw SolveError("null dimension " + std::to_string(s.dim()) +
                         " exceeds the vertex enumeration cap " + std::to_string(max_dim));
    std::size_t n = s.vars(), d = s.dim();
    std::vector<std::vector<F>> found;

    std::vector<std::size_t> pick(d);
    auto try_subset = [&]() {
        LinearSystem<F> sq{std::vector<std::string>(d)};
        for (std::size_t i : pick) {
            std::vector<F> row(d, F(0));
            for (std::size_t k = 0; k < d; ++k) row[k] = s.basis[k][i];
            sq.add_row(std::move(row), -s.particular[i]);
        }
        SolveOutcome<F> r = solve_affine(sq);
        if (!r.solved() || r.set().dim() != 0) return;
        std::vector<F> v = s.point(r.set().particular);
        for (const F& x : v)
            if (sgn(x) < 0) return;
        found.push_back(std::move(v));
    };

    // All subsets of d coordinates, lexicographic.
    std::vector<std::size_t> idx(d);
    auto rec = [&](auto&& self, std::size_t k, std::size_t start) -> void {
        if (k == d) {
            pick = idx;
            try_subset();
            return;
        }
        for (std::size_t i = start; i + (d - k) <= n; ++i) {
            idx[k] = i;
            self(self, k + 1, i + 1);
        }
    };
    if (d <= n) rec(rec, 0, 0);

    auto vec_less = [](const std::vector<F>& a, const std::vector<F>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            int c = sgn(a[i] - b[i]);
            if (c != 0) return c < 0;
        }
        return false;
    };
    std::sort(found.begin(), found.end(), vec_less);
    found.erase(std::unique(found.begin(), found.end(),
                            [](const std::vector<F>& a, const std::vector<F>& b) {
                                for (std::size_t i = 0; i < a.size(); ++i)
                                    if (sgn(a[i] - b[i]) != 0) return false;
                                return true;
                            }),
                found.end());

    std::vector<SignedGrounding<F>> out;
    out.reserve(found.size());
    for (auto& v : found) out.push_back({std::move(v), s.labels});
    return out;
}

}  // namespace obspace
