#pragma once

#include <obspace/space.hpp>

#include <string>
#include <vector>

namespace obspace {

struct SolveError : Error {
    using Error::Error;
};

template <class F>
struct LinearSystem {
    std::size_t rows = 0, cols = 0;
    std::vector<F> coeffs;  // row-major, rows x cols
    std::vector<F> rhs;
    std::vector<std::string> col_labels;
    std::vector<std::string> row_labels;

    explicit LinearSystem(std::vector<std::string> col_labels_ = {})
        : cols(col_labels_.size()), col_labels(std::move(col_labels_)) {}

    F& at(std::size_t r, std::size_t c) { return coeffs[r * cols + c]; }
    const F& at(std::size_t r, std::size_t c) const { return coeffs[r * cols + c]; }

    void add_row(std::vector<F> row, F b, std::string label = "") {
        if (row.size() != cols) throw SolveError("row width mismatch");
        coeffs.insert(coeffs.end(), row.begin(), row.end());
        rhs.push_back(std::move(b));
        row_labels.push_back(std::move(label));
        ++rows;
    }

    std::vector<F> residual(const std::vector<F>& v) const {
        if (v.size() != cols) throw SolveError("vector width mismatch");
        std::vector<F> out(rows, F(0));
        for (std::size_t r = 0; r < rows; ++r) {
            F acc = F(0);
            for (std::size_t c = 0; c < cols; ++c) acc += at(r, c) * v[c];
            out[r] = acc - rhs[r];
        }
        return out;
    }

    bool satisfied_by(const std::vector<F>& v) const {
        for (const F& r : residual(v))
            if (sgn(r) != 0) return false;
        return true;
    }
};

// Restriction equations of the grounding problem: one unknown per atom of
// the common refinement, one equation per test atom. Rejects inconsistent
// spaces, which cannot have any grounding.
template <class F>
LinearSystem<F> assemble_system(const ObservationSpace<F>& o) {
    if (o.tests.empty()) throw SolveError("observation space has no tests");
    auto report = check_consistency(o);
    if (!report.consistent()) {
        const auto& v = report.violations.front();
        throw SolveError("inconsistent observation space: tests '" + o.tests[v.test_i].name +
                         "' and '" + o.tests[v.test_j].name + "' disagree on " +
                         event_label(o.points, v.atom));
    }
    Partition vars = common_refinement(o);
    std::vector<std::string> labels;
    labels.reserve(vars.size());
    for (const Event& a : vars.atoms()) labels.push_back(event_label(o.points, a));
    LinearSystem<F> sys(std::move(labels));
    for (const auto& test : o.tests)
        for (std::size_t k = 0; k < test.partition.size(); ++k) {
            const Event& atom = test.partition.atom(k);
            std::vector<F> row(vars.size(), F(0));
            for (std::size_t c = 0; c < vars.size(); ++c)
                if (vars.atom(c).subset_of(atom)) row[c] = F(1);
            sys.add_row(std::move(row), test.probs[k],
                        test.name + "[" + event_label(o.points, atom) + "]");
        }
    return sys;
}

}  // namespace obspace
