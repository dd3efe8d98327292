#pragma once

#include <obspace/grounding.hpp>
#include <obspace/space.hpp>

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace obspace {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct QuantumError : Error {
    using Error::Error;
};

class QState {
  public:
    explicit QState(CVec amplitudes);
    static QState normalized(CVec amplitudes);

    const CVec& amplitudes() const { return amp_; }
    std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }

  private:
    CVec amp_;
};

// Named measurement with outcome-labelled orthogonal projectors summing to
// the identity.
struct ProjectiveTest {
    std::string name;
    std::vector<std::string> labels;
    std::vector<CMat> projectors;

    ProjectiveTest(std::string name_, std::vector<std::string> labels_,
                   std::vector<CMat> projectors_);
    std::size_t dim() const { return static_cast<std::size_t>(projectors[0].rows()); }
};

struct Observable {
    CMat matrix;
    // Descending eigenvalues with their eigenprojectors.
    std::vector<std::pair<double, CMat>> eigensystem;
};

CMat pauli_x();
CMat pauli_y();
CMat pauli_z();
CMat kron(const CMat& a, const CMat& b);

// Eigendecomposition of a Hermitian matrix: closed form in dimension 2,
// an iterative Hermitian solver above, with eigenvalues closer than 1e-9
// merged into one projector.
Observable make_observable(const CMat& hermitian);

ProjectiveTest test_from_observable(const std::string& name, const Observable& obs);

// Two-outcome polarizer test at the given analyzer angle, outcomes "+"
// (pass) and "-" (absorb), acting on one photon.
ProjectiveTest polarizer_test(const std::string& name, double angle);

// The three single-qubit spin tests named X, Y, Z with outcomes "+" and "-".
std::vector<ProjectiveTest> pauli_tests();

std::vector<double> born_probabilities(const QState& state, const ProjectiveTest& test);
std::vector<std::pair<double, double>> born_probabilities(const QState& state,
                                                          const Observable& obs);

struct MultiTestExperiment {
    QState state;
    std::vector<ProjectiveTest> tests;

    MultiTestExperiment(QState state_, std::vector<ProjectiveTest> tests_);
};

// Product construction: one point per joint outcome assignment, cylinder
// atoms per test, probabilities from the Born rule.
ObservationSpace<Fl> build_observation_space(const MultiTestExperiment& exp);

// Product measure on a space produced by build_observation_space; always a
// nonnegative grounding.
SignedGrounding<Fl> product_grounding(const ObservationSpace<Fl>& os);

// The explicit nonnegative grounding of the three-axis qubit space at
// expectations (x, y, z): products of (1 ± expectation)/2.
SignedGrounding<Fl> feynman3_canonical(double x, double y, double z);

}  // namespace obspace
