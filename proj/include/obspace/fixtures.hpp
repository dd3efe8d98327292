#pragma once

#include <obspace/space.hpp>

#include <utility>
#include <vector>

namespace obspace {

// Built-in observation spaces, exact over their natural fields.

// Two-bit register read through three two-outcome tests (left digit,
// right digit, equality), each deterministic; admits only a signed
// grounding.
ObservationSpace<Rat> piponi_space();

// One qubit measured in Z and in X: four sign pairs (Z sign then X sign),
// marginals fixed by the expectations z = <Z>, x = <X>.
ObservationSpace<Rat> feynman2_space(const Rat& z, const Rat& x);

// One qubit measured in X, Y and Z: eight sign triples in lexicographic
// order (X sign, Y sign, Z sign) with '-' before '+'.
ObservationSpace<Rat> feynman3_space(const Rat& x, const Rat& y, const Rat& z);

// Two-photon polarization correlations at pair angles (pi/4, pi/8, 3pi/8):
// eight sign triples, three pair tests, probabilities in Q(sqrt 2).
ObservationSpace<Quad> schneider_space();

// Two qubits, tests ZZ, ZX, XZ, XX on the state (|01> + |10> - |00>)/sqrt(3);
// sixteen points labelled by bits (Z_A, X_A, Z_B, X_B), 0 meaning +1.
ObservationSpace<Rat> hardy_space();

// Point permutation swapping the roles of the two qubits in hardy_space:
// (Z_A, X_A, Z_B, X_B) -> (Z_B, X_B, Z_A, X_A).
std::vector<std::size_t> hardy_swap_permutation();

// Expectations (z, x, y) of a qubit state a|0> + b|1> with exact rational
// amplitude components (a_re, a_im, b_re, b_im); requires exact unit norm.
struct QubitExpectations {
    Rat z, x, y;
};
QubitExpectations qubit_expectations(const Rat& a_re, const Rat& a_im, const Rat& b_re,
                                     const Rat& b_im);

// "---", "--+", ... "+++": all sign tuples of the given width in
// lexicographic order with '-' before '+'.
std::vector<std::string> sign_tuple_labels(std::size_t bits);

}  // namespace obspace
