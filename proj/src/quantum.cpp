#include <obspace/quantum.hpp>

#include <obspace/fixtures.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace obspace {

namespace {

constexpr double kNumTol = 1e-9;

bool is_hermitian(const CMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void check_projector_family(const std::vector<CMat>& ps) {
    const auto n = ps[0].rows();
    CMat sum = CMat::Zero(n, n);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const CMat& p = ps[i];
        if (p.rows() != n || p.cols() != n)
            throw QuantumError("projectors must share one dimension");
        if (!is_hermitian(p, kNumTol)) throw QuantumError("projector is not Hermitian");
        if ((p * p - p).cwiseAbs().maxCoeff() > kNumTol)
            throw QuantumError("projector is not idempotent");
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            if ((p * ps[j]).cwiseAbs().maxCoeff() > kNumTol)
                throw QuantumError("projectors are not mutually orthogonal");
        sum += p;
    }
    if ((sum - CMat::Identity(n, n)).cwiseAbs().maxCoeff() > kNumTol)
        throw QuantumError("projectors do not sum to the identity");
}

std::string format_eigenvalue(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%+g", v);
    return buf;
}

}  // namespace

QState::QState(CVec amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() != 2 && amp_.size() != 4)
        throw QuantumError("state dimension must be 2 or 4");
    if (std::abs(amp_.norm() - 1.0) > 1e-12) throw QuantumError("state is not normalized");
}

QState QState::normalized(CVec amplitudes) {
    double n = amplitudes.norm();
    if (n < 1e-12) throw QuantumError("cannot normalize the zero vector");
    return QState(amplitudes / n);
}

ProjectiveTest::ProjectiveTest(std::string name_, std::vector<std::string> labels_,
                               std::vector<CMat> projectors_)
    : name(std::move(name_)), labels(std::move(labels_)), projectors(std::move(projectors_)) {
    if (name.empty()) throw QuantumError("test name must be nonempty");
    if (projectors.empty()) throw QuantumError("test needs at least one outcome");
    if (labels.size() != projectors.size())
        throw QuantumError("one label per projector required");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw QuantumError("outcome labels must be nonempty");
        if (!seen.insert(l).second) throw QuantumError("outcome labels must be distinct");
    }
    check_projector_family(projectors);
}

CMat pauli_x() {
    CMat m(2, 2);
    m << cd(0), cd(1), cd(1), cd(0);
    return m;
}

CMat pauli_y() {
    CMat m(2, 2);
    m << cd(0), cd(0, -1), cd(0, 1), cd(0);
    return m;
}

CMat pauli_z() {
    CMat m(2, 2);
    m << cd(1), cd(0), cd(0), cd(-1);
    return m;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Observable make_observable(const CMat& hermitian) {
    if (!is_hermitian(hermitian, kNumTol)) throw QuantumError("observable is not Hermitian");
    const auto n = hermitian.rows();
    Observable obs{hermitian, {}};
    if (n == 2) {
        double a = hermitian(0, 0).real();
        double c = hermitian(1, 1).real();
        cd b = hermitian(0, 1);
        double mid = (a + c) / 2;
        double radius = std::hypot((a - c) / 2, std::abs(b));
        if (radius < kNumTol) {
            obs.eigensystem.emplace_back(mid, CMat::Identity(2, 2));
        } else {
            CMat plus = (hermitian - (mid - radius) * CMat::Identity(2, 2)) / (2 * radius);
            obs.eigensystem.emplace_back(mid + radius, plus);
            obs.eigensystem.emplace_back(mid - radius, CMat::Identity(2, 2) - plus);
        }
        return obs;
    }
    Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian);
    if (solver.info() != Eigen::Success) throw QuantumError("eigendecomposition failed");
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    // Eigen returns ascending eigenvalues; group nearly equal ones into a
    // single eigenspace and emit the groups in descending order.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> groups;
    for (Eigen::Index i = 0; i < n;) {
        Eigen::Index j = i + 1;
        while (j < n && vals(j) - vals(j - 1) < kNumTol) ++j;
        groups.emplace_back(i, j);
        i = j;
    }
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        auto [lo, hi] = *it;
        CMat block = vecs.middleCols(lo, hi - lo);
        Eigen::HouseholderQR<CMat> qr(block);
        CMat q = qr.householderQ() * CMat::Identity(n, hi - lo);
        double value = vals.segment(lo, hi - lo).mean();
        obs.eigensystem.emplace_back(value, q * q.adjoint());
    }
    return obs;
}

ProjectiveTest test_from_observable(const std::string& name, const Observable& obs) {
    std::vector<std::string> labels;
    std::vector<CMat> projectors;
    for (const auto& [value, projector] : obs.eigensystem) {
        labels.push_back(format_eigenvalue(value));
        projectors.push_back(projector);
    }
    return ProjectiveTest(name, std::move(labels), std::move(projectors));
}

ProjectiveTest polarizer_test(const std::string& name, double angle) {
    CVec pass(2), absorb(2);
    pass << cd(std::cos(angle)), cd(std::sin(angle));
    absorb << cd(-std::sin(angle)), cd(std::cos(angle));
    return ProjectiveTest(name, {"+", "-"},
                          {pass * pass.adjoint(), absorb * absorb.adjoint()});
}

std::vector<ProjectiveTest> pauli_tests() {
    std::vector<ProjectiveTest> tests;
    const char* names[3] = {"X", "Y", "Z"};
    const CMat mats[3] = {pauli_x(), pauli_y(), pauli_z()};
    for (int i = 0; i < 3; ++i) {
        Observable obs = make_observable(mats[i]);
        tests.emplace_back(names[i], std::vector<std::string>{"+", "-"},
                           std::vector<CMat>{obs.eigensystem[0].second,
                                             obs.eigensystem[1].second});
    }
    return tests;
}

std::vector<double> born_probabilities(const QState& state, const ProjectiveTest& test) {
    if (test.dim() != state.dim())
        throw QuantumError("test dimension does not match the state");
    std::vector<double> probs;
    probs.reserve(test.projectors.size());
    for (const CMat& p : test.projectors)
        probs.push_back((state.amplitudes().adjoint() * p * state.amplitudes())(0).real());
    return probs;
}

std::vector<std::pair<double, double>> born_probabilities(const QState& state,
                                                          const Observable& obs) {
    if (static_cast<std::size_t>(obs.matrix.rows()) != state.dim())
        throw QuantumError("observable dimension does not match the state");
    std::vector<std::pair<double, double>> out;
    for (const auto& [value, projector] : obs.eigensystem)
        out.emplace_back(
            value, (state.amplitudes().adjoint() * projector * state.amplitudes())(0).real());
    return out;
}

MultiTestExperiment::MultiTestExperiment(QState state_, std::vector<ProjectiveTest> tests_)
    : state(std::move(state_)), tests(std::move(tests_)) {
    if (tests.empty()) throw QuantumError("experiment needs at least one test");
    std::set<std::string> names;
    for (const auto& t : tests) {
        if (t.dim() != state.dim())
            throw QuantumError("every test must match the state dimension");
        if (!names.insert(t.name).second) throw QuantumError("test names must be distinct");
    }
}

ObservationSpace<Fl> build_observation_space(const MultiTestExperiment& exp) {
    const std::size_t n = exp.tests.size();
    std::size_t total = 1;
    for (const auto& t : exp.tests) {
        total *= t.projectors.size();
        if (total > 64) throw QuantumError("joint outcome space exceeds 64 points");
    }
    // Joint outcomes are mixed-radix words, first test most significant.
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t i = n; i-- > 1;)
        stride[i - 1] = stride[i] * exp.tests[i].projectors.size();
    bool single_chars = true;
    for (const auto& t : exp.tests)
        for (const auto& l : t.labels) single_chars = single_chars && l.size() == 1;
    const std::string sep = single_chars ? "" : ",";
    if (!single_chars)
        for (const auto& t : exp.tests)
            for (const auto& l : t.labels)
                if (l.find(',') != std::string::npos)
                    throw QuantumError("outcome labels may not contain commas");
    std::vector<std::string> labels(total);
    for (std::size_t w = 0; w < total; ++w) {
        std::string l;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t digit = (w / stride[i]) % exp.tests[i].projectors.size();
            if (i > 0) l += sep;
            l += exp.tests[i].labels[digit];
        }
        labels[w] = l;
    }
    SampleSpace space(std::move(labels));
    std::vector<PartialDistribution<Fl>> dists;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& t = exp.tests[i];
        std::vector<double> probs = born_probabilities(exp.state, t);
        std::vector<Event> atoms;
        for (std::size_t r = 0; r < t.projectors.size(); ++r) {
            std::vector<std::size_t> members;
            for (std::size_t w = 0; w < total; ++w)
                if ((w / stride[i]) % t.projectors.size() == r) members.push_back(w);
            atoms.push_back(Event::of(total, members));
        }
        std::vector<Fl> vals(probs.begin(), probs.end());
        dists.emplace_back(t.name, Partition(std::move(atoms)), std::move(vals));
    }
    return ObservationSpace<Fl>(std::move(space), std::move(dists));
}

SignedGrounding<Fl> product_grounding(const ObservationSpace<Fl>& os) {
    const std::size_t points = os.points.size();
    const std::size_t n = os.tests.size();
    std::size_t total = 1;
    std::vector<std::size_t> sizes(n);
    for (std::size_t i = 0; i < n; ++i) {
        sizes[i] = os.tests[i].partition.size();
        total *= sizes[i];
    }
    if (total != points)
        throw QuantumError("space is not a product of its test outcome sets");
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * sizes[i];
    // Each partition must consist of the digit cylinders for its position.
    std::vector<std::vector<Fl>> digit_prob(n);
    for (std::size_t i = 0; i < n; ++i) {
        digit_prob[i].assign(sizes[i], Fl(0));
        std::vector<bool> seen(sizes[i], false);
        const auto& part = os.tests[i].partition;
        for (std::size_t k = 0; k < part.size(); ++k) {
            const Event& atom = part.atom(k);
            std::size_t digit = (atom.indices()[0] / stride[i]) % sizes[i];
            std::vector<std::size_t> members;
            for (std::size_t w = 0; w < points; ++w)
                if ((w / stride[i]) % sizes[i] == digit) members.push_back(w);
            if (!(atom == Event::of(points, members)) || seen[digit])
                throw QuantumError("space is not a product of its test outcome sets");
            seen[digit] = true;
            digit_prob[i][digit] = os.tests[i].probs[k];
        }
    }
    SignedGrounding<Fl> g;
    g.values.assign(points, Fl(1));
    for (std::size_t w = 0; w < points; ++w) {
        for (std::size_t i = 0; i < n; ++i)
            g.values[w] = g.values[w] * digit_prob[i][(w / stride[i]) % sizes[i]];
        g.labels.push_back(os.points.label(w));
    }
    return g;
}

SignedGrounding<Fl> feynman3_canonical(double x, double y, double z) {
    const double e[3] = {x, y, z};
    for (double v : e)
        if (std::abs(v) > 1.0) throw QuantumError("expectations must lie in [-1, 1]");
    SignedGrounding<Fl> g;
    g.labels = sign_tuple_labels(3);
    for (std::size_t i = 0; i < 8; ++i) {
        double f = 1.0;
        for (std::size_t axis = 0; axis < 3; ++axis) {
            double sign = ((i >> (2 - axis)) & 1) ? 1.0 : -1.0;
            f *= (1.0 + sign * e[axis]) / 2.0;
        }
        g.values.push_back(Fl(f));
    }
    return g;
}

}  // namespace obspace
