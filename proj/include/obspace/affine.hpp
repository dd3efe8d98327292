#pragma once

#include <obspace/linear_system.hpp>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace obspace {

// Solution set {particular + sum_k t_k basis[k]} of a linear system.
template <class F>
struct AffineSolutionSet {
    std::vector<F> particular;
    std::vector<std::vector<F>> basis;
    std::vector<std::string> labels;

    std::size_t dim() const { return basis.size(); }
    std::size_t vars() const { return particular.size(); }

    std::vector<F> point(const std::vector<F>& params) const {
        if (params.size() != basis.size()) throw SolveError("parameter count mismatch");
        std::vector<F> v = particular;
        for (std::size_t k = 0; k < basis.size(); ++k)
            for (std::size_t i = 0; i < v.size(); ++i) v[i] += params[k] * basis[k][i];
        return v;
    }
};

template <class F>
struct SolveOutcome {
    std::optional<AffineSolutionSet<F>> solution;
    // On failure: row multipliers y with y^T A = 0 and y^T b != 0.
    std::vector<F> certificate;

    bool solved() const { return solution.has_value(); }
    const AffineSolutionSet<F>& set() const { return *solution; }
};

namespace detail {

// Reduced row echelon form, in place, tracking the row operations in an
// augmented identity so inconsistency certificates fall out for free.
// Exact fields pivot on the first nonzero entry scanning columns left to
// right; the float field picks the largest remaining magnitude.
template <class F>
struct Echelon {
    std::size_t rows, cols;
    std::vector<F> a;  // rows x cols
    std::vector<F> b;
    std::vector<F> t;  // rows x rows, row-op tracker
    std::vector<std::size_t> pivot_cols;

    F& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    F& tat(std::size_t r, std::size_t c) { return t[r * rows + c]; }

    explicit Echelon(const LinearSystem<F>& sys)
        : rows(sys.rows), cols(sys.cols), a(sys.coeffs), b(sys.rhs), t(rows * rows, F(0)) {
        for (std::size_t i = 0; i < rows; ++i) tat(i, i) = F(1);
        reduce();
    }

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols; ++c) std::swap(at(i, c), at(j, c));
        for (std::size_t c = 0; c < rows; ++c) std::swap(tat(i, c), tat(j, c));
        std::swap(b[i], b[j]);
    }

    void scale_row(std::size_t i, const F& f) {
        for (std::size_t c = 0; c < cols; ++c) at(i, c) *= f;
        for (std::size_t c = 0; c < rows; ++c) tat(i, c) *= f;
        b[i] *= f;
    }

    // row i -= f * row j
    void axpy_row(std::size_t i, const F& f, std::size_t j) {
        for (std::size_t c = 0; c < cols; ++c) at(i, c) -= f * at(j, c);
        for (std::size_t c = 0; c < rows; ++c) tat(i, c) -= f * tat(j, c);
        b[i] -= f * b[j];
    }

    bool find_pivot(std::size_t r, std::size_t& pr, std::size_t& pc) {
        std::vector<bool> used(cols, false);
        for (std::size_t c : pivot_cols) used[c] = true;
        if constexpr (field_traits<F>::exact) {
            for (std::size_t c = 0; c < cols; ++c) {
                if (used[c]) continue;
                for (std::size_t i = r; i < rows; ++i)
                    if (sgn(at(i, c)) != 0) {
                        pr = i;
                        pc = c;
                        return true;
                    }
            }
            return false;
        } else {
            bool found = false;
            F best = F(0);
            for (std::size_t c = 0; c < cols; ++c) {
                if (used[c]) continue;
                for (std::size_t i = r; i < rows; ++i) {
                    F mag = abs(at(i, c));
                    if (sgn(mag) != 0 && (!found || approx(mag) > approx(best))) {
                        best = mag;
                        pr = i;
                        pc = c;
                        found = true;
                    }
                }
            }
            return found;
        }
    }

    void reduce() {
        for (std::size_t r = 0; r < rows; ++r) {
            std::size_t pr, pc;
            if (!find_pivot(r, pr, pc)) break;
            swap_rows(r, pr);
            pivot_cols.push_back(pc);
            scale_row(r, F(1) / at(r, pc));
            for (std::size_t i = 0; i < rows; ++i) {
                if (i == r) continue;
                F f = at(i, pc);
                if (sgn(f) != 0) axpy_row(i, f, r);
            }
        }
    }

    std::size_t rank() const { return pivot_cols.size(); }
};

}  // namespace detail

template <class F>
SolveOutcome<F> solve_affine(const LinearSystem<F>& sys) {
    detail::Echelon<F> e(sys);
    for (std::size_t i = e.rank(); i < e.rows; ++i)
        if (sgn(e.b[i]) != 0) {
            SolveOutcome<F> out;
            out.certificate.assign(e.rows, F(0));
            for (std::size_t c = 0; c < e.rows; ++c) out.certificate[c] = e.tat(i, c);
            return out;
        }

    AffineSolutionSet<F> s;
    s.labels = sys.col_labels;
    s.particular.assign(e.cols, F(0));
    for (std::size_t r = 0; r < e.rank(); ++r) s.particular[e.pivot_cols[r]] = e.b[r];

    std::vector<bool> is_pivot(e.cols, false);
    for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
    for (std::size_t c = 0; c < e.cols; ++c) {
        if (is_pivot[c]) continue;
        std::vector<F> dir(e.cols, F(0));
        dir[c] = F(1);
        for (std::size_t r = 0; r < e.rank(); ++r) dir[e.pivot_cols[r]] = -e.at(r, c);
        s.basis.push_back(std::move(dir));
    }

    SolveOutcome<F> out;
    out.solution = std::move(s);
    return out;
}

// True iff v lies in the span of the given directions.
template <class F>
bool in_span(const std::vector<std::vector<F>>& dirs, const std::vector<F>& v) {
    std::size_t n = v.size();
    LinearSystem<F> sys{std::vector<std::string>(dirs.size())};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<F> row(dirs.size(), F(0));
        for (std::size_t k = 0; k < dirs.size(); ++k) row[k] = dirs[k].at(i);
        sys.add_row(std::move(row), v[i]);
    }
    return solve_affine(sys).solved();
}

template <class F>
bool contains(const AffineSolutionSet<F>& s, const std::vector<F>& v) {
    if (v.size() != s.vars()) throw SolveError("vector width mismatch");
    std::vector<F> diff(v);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= s.particular[i];
    return in_span(s.basis, diff);
}

template <class F>
std::size_t span_rank(const std::vector<std::vector<F>>& dirs) {
    if (dirs.empty()) return 0;
    LinearSystem<F> sys{std::vector<std::string>(dirs.size())};
    for (std::size_t i = 0; i < dirs[0].size(); ++i) {
        std::vector<F> row(dirs.size(), F(0));
        for (std::size_t k = 0; k < dirs.size(); ++k) row[k] = dirs[k].at(i);
        sys.add_row(std::move(row), F(0));
    }
    return detail::Echelon<F>(sys).rank();
}

template <class F>
bool same_solution_set(const AffineSolutionSet<F>& s1, const AffineSolutionSet<F>& s2) {
    if (s1.vars() != s2.vars() || s1.dim() != s2.dim()) return false;
    if (!contains(s2, s1.particular) || !contains(s1, s2.particular)) return false;
    for (const auto& d : s1.basis)
        if (!in_span(s2.basis, d)) return false;
    return true;
}

// Re-express a solution set with a chosen anchor point and direction basis;
// both are validated to describe the same set.
template <class F>
AffineSolutionSet<F> reparametrize(const AffineSolutionSet<F>& s, std::vector<F> anchor,
                                   std::vector<std::vector<F>> directions) {
    if (directions.size() != s.dim())
        throw SolveError("reparametrization must preserve the dimension");
    if (!contains(s, anchor)) throw SolveError("anchor is not in the solution set");
    for (const auto& d : directions) {
        if (d.size() != s.vars()) throw SolveError("direction width mismatch");
        if (!in_span(s.basis, d)) throw SolveError("direction leaves the solution set");
    }
    if (span_rank(directions) != directions.size())
        throw SolveError("directions are linearly dependent");
    return AffineSolutionSet<F>{std::move(anchor), std::move(directions), s.labels};
}

// Intersect the set with equality constraints v[i] == v[j].
template <class F>
SolveOutcome<F> apply_constraints(const AffineSolutionSet<F>& s,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& equalities) {
    LinearSystem<F> sys{std::vector<std::string>(s.dim())};
    for (auto [i, j] : equalities) {
        if (i >= s.vars() || j >= s.vars()) throw SolveError("constraint index out of range");
        std::vector<F> row(s.dim(), F(0));
        for (std::size_t k = 0; k < s.dim(); ++k) row[k] = s.basis[k][i] - s.basis[k][j];
        sys.add_row(std::move(row), s.particular[j] - s.particular[i]);
    }
    SolveOutcome<F> inner = solve_affine(sys);
    if (!inner.solved()) return inner;

    SolveOutcome<F> out;
    AffineSolutionSet<F> r;
    r.labels = s.labels;
    r.particular = s.point(inner.set().particular);
    for (const auto& pdir : inner.set().basis) {
        std::vector<F> dir(s.vars(), F(0));
        for (std::size_t k = 0; k < s.dim(); ++k)
            for (std::size_t i = 0; i < s.vars(); ++i) dir[i] += pdir[k] * s.basis[k][i];
        r.basis.push_back(std::move(dir));
    }
    out.solution = std::move(r);
    return out;
}

// Averager v -> (v + v.pi)/2 for a permutation pi of the variables that is a
// symmetry of the system: permuting each row's coefficients must map the
// multiset of (row, rhs) pairs onto itself.
template <class F>
class SymmetricAverager {
  public:
    SymmetricAverager(const LinearSystem<F>& sys, std::vector<std::size_t> perm)
        : perm_(std::move(perm)) {
        if (perm_.size() != sys.cols) throw SolveError("permutation size mismatch");
        std::vector<std::size_t> inverse(perm_.size(), perm_.size());
        for (std::size_t i = 0; i < perm_.size(); ++i) {
            if (perm_[i] >= perm_.size() || inverse[perm_[i]] != perm_.size())
                throw SolveError("not a permutation");
            inverse[perm_[i]] = i;
        }
        using Row = std::pair<std::vector<F>, F>;
        auto row_less = [](const Row& x, const Row& y) {
            for (std::size_t c = 0; c < x.first.size(); ++c) {
                int s = sgn(x.first[c] - y.first[c]);
                if (s != 0) return s < 0;
            }
            return sgn(x.second - y.second) < 0;
        };
        std::vector<Row> original, permuted;
        for (std::size_t r = 0; r < sys.rows; ++r) {
            std::vector<F> row(sys.cols), prow(sys.cols);
            for (std::size_t c = 0; c < sys.cols; ++c) row[c] = sys.at(r, c);
            for (std::size_t c = 0; c < sys.cols; ++c) prow[c] = row[inverse[c]];
            original.emplace_back(std::move(row), sys.rhs[r]);
            permuted.emplace_back(std::move(prow), sys.rhs[r]);
        }
        std::sort(original.begin(), original.end(), row_less);
        std::sort(permuted.begin(), permuted.end(), row_less);
        for (std::size_t r = 0; r < original.size(); ++r) {
            bool eq = sgn(original[r].second - permuted[r].second) == 0;
            for (std::size_t c = 0; eq && c < sys.cols; ++c)
                eq = sgn(original[r].first[c] - permuted[r].first[c]) == 0;
            if (!eq) throw SolveError("permutation is not a symmetry of the system");
        }
    }

    std::vector<F> operator()(const std::vector<F>& v) const {
        if (v.size() != perm_.size()) throw SolveError("vector width mismatch");
        std::vector<F> out(v.size(), F(0));
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = (v[i] + v[perm_[i]]) / F(2);
        return out;
    }

    const std::vector<std::size_t>& permutation() const { return perm_; }

  private:
    std::vector<std::size_t> perm_;
};

template <class F>
SymmetricAverager<F> symmetrize(const LinearSystem<F>& sys, std::vector<std::size_t> perm) {
    return SymmetricAverager<F>(sys, std::move(perm));
}

}  // namespace obspace
