#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <obspace/fixtures.hpp>
#include <obspace/quantum.hpp>

#include <cmath>
#include <random>

using namespace obspace;

namespace {

QState ket0() {
    CVec v(2);
    v << cd(1), cd(0);
    return QState(v);
}

QState qubit(cd a, cd b) {
    CVec v(2);
    v << a, b;
    return QState::normalized(v);
}

QState hardy_state() {
    CVec v(4);
    v << cd(-1), cd(1), cd(1), cd(0);
    return QState::normalized(v);
}

QState bell_state() {
    CVec v(4);
    v << cd(1), cd(0), cd(0), cd(1);
    return QState::normalized(v);
}

CMat random_hermitian(std::mt19937& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
    return CMat((m + m.adjoint()) / 2);
}

QState random_state(std::mt19937& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = cd(g(rng), g(rng));
    return QState::normalized(v);
}

void check_projector_family_numerics(const std::vector<CMat>& ps, double tol) {
    const auto n = ps[0].rows();
    CMat sum = CMat::Zero(n, n);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        CHECK((ps[i] - ps[i].adjoint()).cwiseAbs().maxCoeff() < tol);
        CHECK((ps[i] * ps[i] - ps[i]).cwiseAbs().maxCoeff() < tol);
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            CHECK((ps[i] * ps[j]).cwiseAbs().maxCoeff() < tol);
        sum += ps[i];
    }
    CHECK((sum - CMat::Identity(n, n)).cwiseAbs().maxCoeff() < tol);
}

// Four-outcome joint test from per-arm two-outcome tests, atoms ordered by
// (first arm, second arm) with the arm's outcome 0 last, matching the
// fixtures' (-,-), (-,+), (+,-), (+,+) convention when outcome 0 is "+".
ProjectiveTest joint_pair_test(const std::string& name, const ProjectiveTest& a,
                               const ProjectiveTest& b,
                               const std::vector<std::string>& labels) {
    std::vector<CMat> ps;
    for (std::size_t i : {std::size_t(1), std::size_t(0)})
        for (std::size_t j : {std::size_t(1), std::size_t(0)})
            ps.push_back(kron(a.projectors[i], b.projectors[j]));
    return ProjectiveTest(name, labels, ps);
}

}  // namespace

TEST_CASE("state validation") {
    CVec good(2);
    good << cd(1), cd(0);
    CHECK_NOTHROW(QState{good});
    CVec unnormalized(2);
    unnormalized << cd(1), cd(1);
    CHECK_THROWS_AS(QState{unnormalized}, QuantumError);
    CHECK(QState::normalized(unnormalized).amplitudes()(0).real() ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
    CVec odd(3);
    odd << cd(1), cd(0), cd(0);
    CHECK_THROWS_AS(QState{odd}, QuantumError);
    CVec zero(2);
    zero << cd(0), cd(0);
    CHECK_THROWS_AS(QState::normalized(zero), QuantumError);
}

TEST_CASE("projective test validation") {
    CMat p0(2, 2), p1(2, 2);
    p0 << cd(1), cd(0), cd(0), cd(0);
    p1 << cd(0), cd(0), cd(0), cd(1);
    CHECK_NOTHROW(ProjectiveTest("Z", {"+", "-"}, {p0, p1}));
    CHECK_THROWS_AS(ProjectiveTest("Z", {"+"}, {p0, p1}), QuantumError);
    CHECK_THROWS_AS(ProjectiveTest("Z", {"+", "+"}, {p0, p1}), QuantumError);
    CHECK_THROWS_AS(ProjectiveTest("", {"+", "-"}, {p0, p1}), QuantumError);
    CHECK_THROWS_AS(ProjectiveTest("Z", {"+", "-"}, {p0, p0}), QuantumError);
    CHECK_THROWS_AS(ProjectiveTest("Z", {"+"}, {p0}), QuantumError);
    CMat skew(2, 2);
    skew << cd(0), cd(1), cd(-1), cd(0);
    CHECK_THROWS_AS(ProjectiveTest("S", {"a", "b"}, {skew, CMat::Identity(2, 2) - skew}),
                    QuantumError);
    CMat half = CMat::Identity(2, 2) * cd(0.5);
    CHECK_THROWS_AS(ProjectiveTest("H", {"a", "b"}, {half, half}), QuantumError);
}

TEST_CASE("pauli matrices and kron") {
    CHECK((pauli_x() * pauli_x() - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((pauli_y() * pauli_y() - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((pauli_z() * pauli_z() - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CMat xy = pauli_x() * pauli_y();
    CHECK(xy(0, 0) == cd(0, 1));
    CHECK(xy(1, 1) == cd(0, -1));
    CMat zz = kron(pauli_z(), pauli_z());
    CHECK(zz.rows() == 4);
    CHECK(zz(0, 0) == cd(1));
    CHECK(zz(1, 1) == cd(-1));
    CHECK(zz(2, 2) == cd(-1));
    CHECK(zz(3, 3) == cd(1));
}

TEST_CASE("eigensystem of the Pauli observables") {
    for (const CMat& m : {pauli_x(), pauli_y(), pauli_z()}) {
        Observable obs = make_observable(m);
        REQUIRE(obs.eigensystem.size() == 2);
        CHECK(obs.eigensystem[0].first == doctest::Approx(1.0));
        CHECK(obs.eigensystem[1].first == doctest::Approx(-1.0));
        std::vector<CMat> ps{obs.eigensystem[0].second, obs.eigensystem[1].second};
        check_projector_family_numerics(ps, 1e-12);
        CMat rebuilt = ps[0] - ps[1];
        CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("eigensystem merges degenerate eigenvalues") {
    Observable id2 = make_observable(CMat::Identity(2, 2));
    REQUIRE(id2.eigensystem.size() == 1);
    CHECK(id2.eigensystem[0].first == doctest::Approx(1.0));
    CHECK((id2.eigensystem[0].second - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

    Observable zi = make_observable(kron(pauli_z(), CMat::Identity(2, 2)));
    REQUIRE(zi.eigensystem.size() == 2);
    CHECK(zi.eigensystem[0].first == doctest::Approx(1.0));
    CHECK(zi.eigensystem[1].first == doctest::Approx(-1.0));
    CHECK(zi.eigensystem[0].second.trace().real() == doctest::Approx(2.0));
    std::vector<CMat> ps{zi.eigensystem[0].second, zi.eigensystem[1].second};
    check_projector_family_numerics(ps, 1e-9);
}

TEST_CASE("eigensystem of random Hermitian matrices") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 40; ++trial) {
        int n = (trial % 2 == 0) ? 2 : 4;
        CMat m = random_hermitian(rng, n);
        Observable obs = make_observable(m);
        std::vector<CMat> ps;
        CMat rebuilt = CMat::Zero(n, n);
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& [value, projector] : obs.eigensystem) {
            CHECK(value < prev + 1e-12);
            prev = value;
            ps.push_back(projector);
            rebuilt += value * projector;
        }
        check_projector_family_numerics(ps, 1e-9);
        CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-8);
    }
    CHECK_THROWS_AS(make_observable(pauli_x() + cd(0, 1) * CMat::Identity(2, 2)),
                    QuantumError);
}

TEST_CASE("born probabilities on eigenstates and superpositions") {
    Observable z = make_observable(pauli_z());
    auto pz = born_probabilities(ket0(), z);
    REQUIRE(pz.size() == 2);
    CHECK(pz[0].first == doctest::Approx(1.0));
    CHECK(pz[0].second == doctest::Approx(1.0));
    CHECK(pz[1].second == doctest::Approx(0.0));

    Observable x = make_observable(pauli_x());
    auto px = born_probabilities(ket0(), x);
    CHECK(px[0].second == doctest::Approx(0.5));
    CHECK(px[1].second == doctest::Approx(0.5));

    auto tests = pauli_tests();
    REQUIRE(tests.size() == 3);
    CHECK(tests[0].name == "X");
    CHECK(tests[2].name == "Z");
    auto probs = born_probabilities(ket0(), tests[2]);
    CHECK(probs[0] == doctest::Approx(1.0));
    CHECK(probs[1] == doctest::Approx(0.0));

    CHECK_THROWS_AS(born_probabilities(hardy_state(), tests[0]), QuantumError);
}

TEST_CASE("born probabilities sum to one on random states") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        int n = (trial % 2 == 0) ? 2 : 4;
        QState psi = random_state(rng, n);
        ProjectiveTest t = test_from_observable("M", make_observable(random_hermitian(rng, n)));
        double total = 0.0;
        for (double p : born_probabilities(psi, t)) {
            CHECK(p >= -1e-12);
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("hardy joint outcome probabilities") {
    Observable zz = make_observable(kron(pauli_z(), pauli_z()));
    ProjectiveTest t = test_from_observable("ZZ", zz);
    // Eigenvalue +1 spans {00, 11}, eigenvalue -1 spans {01, 10}.
    auto probs = born_probabilities(hardy_state(), t);
    REQUIRE(probs.size() == 2);
    CHECK(probs[0] == doctest::Approx(1.0 / 3.0));
    CHECK(probs[1] == doctest::Approx(2.0 / 3.0));

    CMat z0(2, 2), z1(2, 2);
    z0 << cd(1), cd(0), cd(0), cd(0);
    z1 << cd(0), cd(0), cd(0), cd(1);
    ProjectiveTest fine("ZZ", {"00", "01", "10", "11"},
                        {kron(z0, z0), kron(z0, z1), kron(z1, z0), kron(z1, z1)});
    auto atom_probs = born_probabilities(hardy_state(), fine);
    CHECK(atom_probs[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(atom_probs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(atom_probs[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(atom_probs[3] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("polarizer tests") {
    ProjectiveTest at0 = polarizer_test("A", 0.0);
    CHECK(at0.labels[0] == "+");
    CHECK(at0.projectors[0](0, 0) == cd(1));
    CHECK(at0.projectors[1](1, 1) == cd(1));
    ProjectiveTest tilted = polarizer_test("B", 0.7);
    check_projector_family_numerics(tilted.projectors, 1e-12);
    CHECK(tilted.projectors[0].trace().real() == doctest::Approx(1.0));
}

TEST_CASE("observation space of a two-test qubit experiment") {
    auto tests = pauli_tests();
    MultiTestExperiment exp(qubit(cd(1), cd(0, 1)),
                            {tests[2], tests[0]});  // Z then X
    ObservationSpace<Fl> os = build_observation_space(exp);
    REQUIRE(os.points.size() == 4);
    CHECK(os.points.label(0) == "++");
    CHECK(os.points.label(1) == "+-");
    CHECK(os.points.label(2) == "-+");
    CHECK(os.points.label(3) == "--");
    REQUIRE(os.tests.size() == 2);
    CHECK(os.tests[0].partition.size() == 2);
    CHECK(os.tests[1].partition.size() == 2);
    // <Z> = <X> = 0 for the +1 eigenstate of Y.
    for (const auto& t : os.tests)
        for (const Fl& p : t.probs) CHECK(p.value() == doctest::Approx(0.5));
    CHECK(check_consistency(os).consistent());

    SignedGrounding<Fl> g = product_grounding(os);
    REQUIRE(g.values.size() == 4);
    for (const Fl& v : g.values) CHECK(v.value() == doctest::Approx(0.25));
}

TEST_CASE("observation space of a single test is the outcome set") {
    QState psi = qubit(cd(0.6), cd(0.8));
    ProjectiveTest t = polarizer_test("P", 0.3);
    MultiTestExperiment exp(psi, {t});
    ObservationSpace<Fl> os = build_observation_space(exp);
    REQUIRE(os.points.size() == 2);
    CHECK(os.points.label(0) == "+");
    CHECK(os.points.label(1) == "-");
    REQUIRE(os.tests.size() == 1);
    CHECK(os.tests[0].partition.atom(0).count() == 1);
    CHECK(os.tests[0].partition.atom(1).count() == 1);
    auto direct = born_probabilities(psi, t);
    SignedGrounding<Fl> g = product_grounding(os);
    CHECK(g.values[0].value() == doctest::Approx(direct[0]));
    CHECK(g.values[1].value() == doctest::Approx(direct[1]));
}

TEST_CASE("observation space of the three-axis qubit experiment") {
    std::mt19937 rng(5150);
    QState psi = random_state(rng, 2);
    MultiTestExperiment exp(psi, pauli_tests());
    ObservationSpace<Fl> os = build_observation_space(exp);
    REQUIRE(os.points.size() == 8);
    std::set<std::string> labels;
    for (std::size_t i = 0; i < 8; ++i) labels.insert(os.points.label(i));
    std::set<std::string> expected;
    for (const std::string& l : sign_tuple_labels(3)) expected.insert(l);
    CHECK(labels == expected);
    REQUIRE(os.tests.size() == 3);
    for (const auto& t : os.tests) {
        CHECK(t.partition.size() == 2);
        CHECK(t.partition.atom(0).count() == 4);
    }
    CHECK(check_consistency(os).consistent());
}

TEST_CASE("long label joining uses commas") {
    Observable z = make_observable(pauli_z());
    ProjectiveTest coarse("M1", {"up", "down"},
                          {z.eigensystem[0].second, z.eigensystem[1].second});
    ProjectiveTest fine("M2", {"left", "right"},
                        {make_observable(pauli_x()).eigensystem[0].second,
                         make_observable(pauli_x()).eigensystem[1].second});
    MultiTestExperiment exp(ket0(), {coarse, fine});
    ObservationSpace<Fl> os = build_observation_space(exp);
    CHECK(os.points.label(0) == "up,left");
    CHECK(os.points.label(3) == "down,right");

    ProjectiveTest bad("M3", {"a,b", "c"},
                       {z.eigensystem[0].second, z.eigensystem[1].second});
    MultiTestExperiment exp2(ket0(), {coarse, bad});
    CHECK_THROWS_AS(build_observation_space(exp2), QuantumError);
}

TEST_CASE("experiment validation and size limits") {
    auto tests = pauli_tests();
    CHECK_THROWS_AS(MultiTestExperiment(ket0(), {}), QuantumError);
    CHECK_THROWS_AS(MultiTestExperiment(ket0(), {tests[0], tests[0]}), QuantumError);
    CHECK_THROWS_AS(MultiTestExperiment(hardy_state(), {tests[0]}), QuantumError);

    // Seven two-outcome tests on one qubit: 128 joint outcomes is too many.
    std::vector<ProjectiveTest> many;
    for (int i = 0; i < 7; ++i)
        many.push_back(polarizer_test("P" + std::to_string(i), 0.1 * i));
    MultiTestExperiment exp(ket0(), many);
    CHECK_THROWS_AS(build_observation_space(exp), QuantumError);
}

TEST_CASE("product construction is always consistent") {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 25; ++trial) {
        QState psi = random_state(rng, 2);
        std::vector<ProjectiveTest> tests;
        int k = 2 + (trial % 2);
        for (int i = 0; i < k; ++i)
            tests.push_back(test_from_observable("M" + std::to_string(i),
                                                 make_observable(random_hermitian(rng, 2))));
        ObservationSpace<Fl> os = build_observation_space(MultiTestExperiment(psi, tests));
        CHECK(check_consistency(os).consistent());
    }
    for (int trial = 0; trial < 10; ++trial) {
        QState psi = random_state(rng, 4);
        std::vector<ProjectiveTest> tests;
        for (int i = 0; i < 2; ++i)
            tests.push_back(test_from_observable("M" + std::to_string(i),
                                                 make_observable(random_hermitian(rng, 4))));
        ObservationSpace<Fl> os = build_observation_space(MultiTestExperiment(psi, tests));
        CHECK(check_consistency(os).consistent());
    }
}

TEST_CASE("product grounding restricts to every test") {
    std::mt19937 rng(90210);
    for (int trial = 0; trial < 20; ++trial) {
        QState psi = random_state(rng, (trial % 2 == 0) ? 2 : 4);
        std::vector<ProjectiveTest> tests;
        for (int i = 0; i < 2; ++i)
            tests.push_back(test_from_observable(
                "M" + std::to_string(i),
                make_observable(random_hermitian(rng, static_cast<int>(psi.dim())))));
        ObservationSpace<Fl> os = build_observation_space(MultiTestExperiment(psi, tests));
        SignedGrounding<Fl> g = product_grounding(os);
        for (const Fl& v : g.values) CHECK(v.value() >= -1e-15);
        for (const auto& t : os.tests)
            for (std::size_t k = 0; k < t.partition.size(); ++k) {
                double mass = 0.0;
                for (std::size_t w : t.partition.atom(k).indices())
                    mass += g.values[w].value();
                CHECK(mass == doctest::Approx(t.probs[k].value()).epsilon(1e-10));
            }
    }
}

TEST_CASE("product grounding of independent uniform tests is uniform") {
    std::vector<Event> za, xa, ya;
    std::vector<std::string> labels = sign_tuple_labels(3);
    SampleSpace s(labels);
    auto cylinder = [&](std::size_t pos, char c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < 8; ++i)
            if (labels[i][pos] == c) idx.push_back(i);
        return Event::of(8, idx);
    };
    std::vector<PartialDistribution<Fl>> tests;
    for (std::size_t pos = 0; pos < 3; ++pos)
        tests.emplace_back(std::string(1, "XYZ"[pos]),
                           Partition({cylinder(pos, '-'), cylinder(pos, '+')}),
                           std::vector<Fl>{Fl(0.5), Fl(0.5)});
    ObservationSpace<Fl> os(std::move(s), std::move(tests));
    SignedGrounding<Fl> g = product_grounding(os);
    REQUIRE(g.values.size() == 8);
    for (const Fl& v : g.values) CHECK(v.value() == doctest::Approx(0.125));
}

TEST_CASE("product grounding rejects non-product spaces") {
    // Three binary tests on four points: outcome counts do not multiply out.
    ObservationSpace<Fl> wrong_count = [] {
        SampleSpace s({"00", "01", "10", "11"});
        auto ev = [](std::initializer_list<std::size_t> idx) { return Event::of(4, idx); };
        std::vector<PartialDistribution<Fl>> tests;
        tests.emplace_back("left", Partition({ev({0, 1}), ev({2, 3})}),
                           std::vector<Fl>{Fl(0.5), Fl(0.5)});
        tests.emplace_back("right", Partition({ev({0, 2}), ev({1, 3})}),
                           std::vector<Fl>{Fl(0.5), Fl(0.5)});
        tests.emplace_back("equal", Partition({ev({0, 3}), ev({1, 2})}),
                           std::vector<Fl>{Fl(0.5), Fl(0.5)});
        return ObservationSpace<Fl>(std::move(s), std::move(tests));
    }();
    CHECK_THROWS_AS(product_grounding(wrong_count), QuantumError);

    // Right counts, but the second partition is not a coordinate cylinder.
    ObservationSpace<Fl> skewed = [] {
        SampleSpace s({"00", "01", "10", "11"});
        auto ev = [](std::initializer_list<std::size_t> idx) { return Event::of(4, idx); };
        std::vector<PartialDistribution<Fl>> tests;
        tests.emplace_back("left", Partition({ev({0, 1}), ev({2, 3})}),
                           std::vector<Fl>{Fl(0.5), Fl(0.5)});
        tests.emplace_back("equal", Partition({ev({0, 3}), ev({1, 2})}),
                           std::vector<Fl>{Fl(0.5), Fl(0.5)});
        return ObservationSpace<Fl>(std::move(s), std::move(tests));
    }();
    CHECK_THROWS_AS(product_grounding(skewed), QuantumError);
}

TEST_CASE("three-axis canonical grounding") {
    SignedGrounding<Fl> g = feynman3_canonical(0.0, 0.0, 1.0);
    REQUIRE(g.labels == sign_tuple_labels(3));
    for (std::size_t i = 0; i < 8; ++i) {
        double expected = (g.labels[i][2] == '+') ? 0.25 : 0.0;
        CHECK(g.values[i].value() == doctest::Approx(expected));
    }
    SignedGrounding<Fl> uniform = feynman3_canonical(0.0, 0.0, 0.0);
    for (const Fl& v : uniform.values) CHECK(v.value() == doctest::Approx(0.125));
    SignedGrounding<Fl> corner = feynman3_canonical(1.0, 1.0, 1.0);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(corner.values[i].value() == doctest::Approx(i == 7 ? 1.0 : 0.0));
    CHECK_THROWS_AS(feynman3_canonical(1.5, 0.0, 0.0), QuantumError);
    CHECK_THROWS_AS(feynman3_canonical(0.0, -1.01, 0.0), QuantumError);
}

TEST_CASE("canonical grounding satisfies the marginal equations") {
    std::mt19937 rng(31337);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        double x = gauss(rng), y = gauss(rng), z = gauss(rng);
        double n = std::sqrt(x * x + y * y + z * z);
        if (n < 1e-6) continue;
        x /= n, y /= n, z /= n;
        SignedGrounding<Fl> g = feynman3_canonical(x, y, z);
        const double e[3] = {x, y, z};
        for (std::size_t axis = 0; axis < 3; ++axis) {
            double plus = 0.0, minus = 0.0;
            for (std::size_t i = 0; i < 8; ++i) {
                CHECK(g.values[i].value() >= 0.0);
                (g.labels[i][axis] == '+' ? plus : minus) += g.values[i].value();
            }
            CHECK(std::abs(plus - (1.0 + e[axis]) / 2.0) < 1e-12);
            CHECK(std::abs(minus - (1.0 - e[axis]) / 2.0) < 1e-12);
        }
    }
}

TEST_CASE("two-test fixture matches the quantum computation") {
    // a|0> + b|1> with rational components and exact unit norm.
    const double a_re = 1.0 / 3.0, a_im = 2.0 / 3.0, b_re = 2.0 / 3.0, b_im = 0.0;
    QState psi = qubit(cd(a_re, a_im), cd(b_re, b_im));
    QubitExpectations e =
        qubit_expectations(Rat(1, 3), Rat(2, 3), Rat(2, 3), Rat(0));
    ObservationSpace<Rat> fix = feynman2_space(e.z, e.x);
    auto tests = pauli_tests();
    auto pz = born_probabilities(psi, tests[2]);
    auto px = born_probabilities(psi, tests[0]);
    // Fixture atom order is (+,-) for both of its tests.
    CHECK(std::abs(approx(fix.tests[0].probs[0]) - pz[0]) < 1e-10);
    CHECK(std::abs(approx(fix.tests[0].probs[1]) - pz[1]) < 1e-10);
    CHECK(std::abs(approx(fix.tests[1].probs[0]) - px[0]) < 1e-10);
    CHECK(std::abs(approx(fix.tests[1].probs[1]) - px[1]) < 1e-10);
}

TEST_CASE("three-axis fixture matches the quantum computation") {
    const struct {
        Rat a_re, a_im, b_re, b_im;
    } states[] = {
        {Rat(3, 5), Rat(0), Rat(4, 5), Rat(0)},
        {Rat(3, 5), Rat(0), Rat(0), Rat(4, 5)},
        {Rat(1, 3), Rat(2, 3), Rat(2, 3), Rat(0)},
        {Rat(0), Rat(1), Rat(0), Rat(0)},
    };
    for (const auto& st : states) {
        QState psi = qubit(cd(approx(st.a_re), approx(st.a_im)),
                           cd(approx(st.b_re), approx(st.b_im)));
        QubitExpectations e = qubit_expectations(st.a_re, st.a_im, st.b_re, st.b_im);
        ObservationSpace<Rat> fix = feynman3_space(e.x, e.y, e.z);
        auto tests = pauli_tests();
        for (std::size_t axis = 0; axis < 3; ++axis) {
            auto probs = born_probabilities(psi, tests[axis]);
            // Fixture atoms are (-,+); quantum outcomes are (+,-).
            CHECK(std::abs(approx(fix.tests[axis].probs[0]) - probs[1]) < 1e-10);
            CHECK(std::abs(approx(fix.tests[axis].probs[1]) - probs[0]) < 1e-10);
        }
        // The canonical product grounding agrees with the built product space.
        MultiTestExperiment exp(psi, tests);
        ObservationSpace<Fl> os = build_observation_space(exp);
        SignedGrounding<Fl> built = product_grounding(os);
        SignedGrounding<Fl> canon =
            feynman3_canonical(approx(e.x), approx(e.y), approx(e.z));
        for (std::size_t i = 0; i < 8; ++i) {
            std::size_t j = 0;
            while (canon.labels[j] != built.labels[i]) ++j;
            CHECK(built.values[i].value() ==
                  doctest::Approx(canon.values[j].value()).epsilon(1e-10));
        }
    }
}

TEST_CASE("polarization fixture matches the quantum computation") {
    QState bell = bell_state();
    const double angle_a = 0.0, angle_b = M_PI / 4.0, angle_c = 3.0 * M_PI / 8.0;
    ProjectiveTest pa = polarizer_test("A", angle_a);
    ProjectiveTest pb = polarizer_test("B", angle_b);
    ProjectiveTest pc = polarizer_test("C", angle_c);
    std::vector<std::string> pair_labels{"--", "-+", "+-", "++"};
    ProjectiveTest ab = joint_pair_test("AB", pa, pb, pair_labels);
    ProjectiveTest bc = joint_pair_test("BC", pb, pc, pair_labels);
    ProjectiveTest ac = joint_pair_test("AC", pa, pc, pair_labels);

    ObservationSpace<Quad> fix = schneider_space();
    const ProjectiveTest* quantum[3] = {&ab, &bc, &ac};
    for (std::size_t t = 0; t < 3; ++t) {
        auto probs = born_probabilities(bell, *quantum[t]);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(std::abs(approx(fix.tests[t].probs[k]) - probs[k]) < 1e-10);
    }

    // All three pair tests together stay within the 64-point product bound.
    MultiTestExperiment exp(bell, {ab, bc, ac});
    ObservationSpace<Fl> os = build_observation_space(exp);
    CHECK(os.points.size() == 64);
    CHECK(check_consistency(os).consistent());
}

TEST_CASE("two-qubit fixture matches the quantum computation") {
    QState psi = hardy_state();
    CMat z0(2, 2), z1(2, 2), x0(2, 2), x1(2, 2);
    z0 << cd(1), cd(0), cd(0), cd(0);
    z1 << cd(0), cd(0), cd(0), cd(1);
    x0 << cd(0.5), cd(0.5), cd(0.5), cd(0.5);
    x1 << cd(0.5), cd(-0.5), cd(-0.5), cd(0.5);
    std::vector<std::string> labels{"00", "01", "10", "11"};
    auto pair = [&](const std::string& name, const CMat& a0, const CMat& a1, const CMat& b0,
                    const CMat& b1) {
        return ProjectiveTest(name, labels,
                              {kron(a0, b0), kron(a0, b1), kron(a1, b0), kron(a1, b1)});
    };
    ProjectiveTest zz = pair("ZZ", z0, z1, z0, z1);
    ProjectiveTest zx = pair("ZX", z0, z1, x0, x1);
    ProjectiveTest xz = pair("XZ", x0, x1, z0, z1);
    ProjectiveTest xx = pair("XX", x0, x1, x0, x1);
    ObservationSpace<Rat> fix = hardy_space();
    const ProjectiveTest* quantum[4] = {&zz, &zx, &xz, &xx};
    for (std::size_t t = 0; t < 4; ++t) {
        REQUIRE(fix.tests[t].name == quantum[t]->name);
        auto probs = born_probabilities(psi, *quantum[t]);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(std::abs(approx(fix.tests[t].probs[k]) - probs[k]) < 1e-10);
    }
}
