#pragma once

#include <obspace/scalar.hpp>

#include <string>
#include <vector>

namespace obspace {

// Signed assignment of mass to the atoms of a refinement; restricting it to
// each test reproduces the observed probabilities, but individual values may
// be negative.
template <class F>
struct SignedGrounding {
    std::vector<F> values;
    std::vector<std::string> labels;
};

template <class F>
struct SignedMoments {
    F mean;
    F variance;  // may be negative under a signed grounding
};

// Mean and variance of a random variable given by its value on each atom.
template <class F>
SignedMoments<F> signed_moments(const SignedGrounding<F>& g, const std::vector<F>& rv) {
    if (rv.size() != g.values.size())
        throw Error("random variable must assign a value to every atom");
    F mean = F(0), second = F(0);
    for (std::size_t i = 0; i < rv.size(); ++i) {
        mean += g.values[i] * rv[i];
        second += g.values[i] * rv[i] * rv[i];
    }
    return {mean, second - mean * mean};
}

}  // namespace obspace
