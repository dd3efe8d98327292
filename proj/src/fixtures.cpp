#include <obspace/fixtures.hpp>

namespace obspace {

namespace {

// Atoms grouping points whose label has the given characters at two
// positions, ordered (00, 01, 10, 11) by those characters.
std::vector<Event> atoms_by_chars(const SampleSpace& s, std::size_t pos1, std::size_t pos2,
                                  const char* alphabet) {
    std::vector<Event> atoms;
    for (char u : {alphabet[0], alphabet[1]})
        for (char v : {alphabet[0], alphabet[1]}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (s.label(i)[pos1] == u && s.label(i)[pos2] == v) idx.push_back(i);
            atoms.push_back(Event::of(s.size(), idx));
        }
    return atoms;
}

std::vector<Event> atoms_by_char(const SampleSpace& s, std::size_t pos, const char* alphabet) {
    std::vector<Event> atoms;
    for (char u : {alphabet[0], alphabet[1]}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.label(i)[pos] == u) idx.push_back(i);
        atoms.push_back(Event::of(s.size(), idx));
    }
    return atoms;
}

}  // namespace

std::vector<std::string> sign_tuple_labels(std::size_t bits) {
    std::vector<std::string> labels(std::size_t(1) << bits);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::string l(bits, '-');
        for (std::size_t b = 0; b < bits; ++b)
            if ((i >> (bits - 1 - b)) & 1) l[b] = '+';
        labels[i] = l;
    }
    return labels;
}

ObservationSpace<Rat> piponi_space() {
    SampleSpace s({"00", "01", "10", "11"});
    auto ev = [&](std::initializer_list<std::size_t> idx) { return Event::of(4, idx); };
    std::vector<PartialDistribution<Rat>> tests;
    tests.emplace_back("left", Partition({ev({0, 1}), ev({2, 3})}),
                       std::vector<Rat>{Rat(0), Rat(1)});
    tests.emplace_back("right", Partition({ev({0, 2}), ev({1, 3})}),
                       std::vector<Rat>{Rat(0), Rat(1)});
    tests.emplace_back("equal", Partition({ev({0, 3}), ev({1, 2})}),
                       std::vector<Rat>{Rat(0), Rat(1)});
    return ObservationSpace<Rat>(std::move(s), std::move(tests));
}

ObservationSpace<Rat> feynman2_space(const Rat& z, const Rat& x) {
    SampleSpace s({"++", "+-", "-+", "--"});
    Rat half(1, 2);
    std::vector<PartialDistribution<Rat>> tests;
    tests.emplace_back("Z", Partition(atoms_by_char(s, 0, "+-")),
                       std::vector<Rat>{half * (Rat(1) + z), half * (Rat(1) - z)});
    tests.emplace_back("X", Partition(atoms_by_char(s, 1, "+-")),
                       std::vector<Rat>{half * (Rat(1) + x), half * (Rat(1) - x)});
    return ObservationSpace<Rat>(std::move(s), std::move(tests));
}

ObservationSpace<Rat> feynman3_space(const Rat& x, const Rat& y, const Rat& z) {
    SampleSpace s(sign_tuple_labels(3));
    Rat half(1, 2);
    std::vector<PartialDistribution<Rat>> tests;
    const Rat* exps[3] = {&x, &y, &z};
    const char* names[3] = {"X", "Y", "Z"};
    for (std::size_t axis = 0; axis < 3; ++axis)
        tests.emplace_back(
            names[axis], Partition(atoms_by_char(s, axis, "-+")),
            std::vector<Rat>{half * (Rat(1) - *exps[axis]), half * (Rat(1) + *exps[axis])});
    return ObservationSpace<Rat>(std::move(s), std::move(tests));
}

ObservationSpace<Quad> schneider_space() {
    SampleSpace s(sign_tuple_labels(3));
    Quad quarter(Rat(1, 4));
    Quad eighth_r2(Rat(0), Rat(1, 8), 2);  // sqrt(2)/8
    Quad lo = quarter - eighth_r2, hi = quarter + eighth_r2;
    std::vector<PartialDistribution<Quad>> tests;
    tests.emplace_back("AB", Partition(atoms_by_chars(s, 0, 1, "-+")),
                       std::vector<Quad>{quarter, quarter, quarter, quarter});
    tests.emplace_back("BC", Partition(atoms_by_chars(s, 1, 2, "-+")),
                       std::vector<Quad>{hi, lo, lo, hi});
    tests.emplace_back("AC", Partition(atoms_by_chars(s, 0, 2, "-+")),
                       std::vector<Quad>{lo, hi, hi, lo});
    return ObservationSpace<Quad>(std::move(s), std::move(tests));
}

ObservationSpace<Rat> hardy_space() {
    std::vector<std::string> labels(16);
    for (std::size_t i = 0; i < 16; ++i) {
        std::string l(4, '0');
        for (std::size_t b = 0; b < 4; ++b)
            if ((i >> (3 - b)) & 1) l[b] = '1';
        labels[i] = l;
    }
    SampleSpace s(std::move(labels));
    auto probs = [](long a, long b, long c, long d) {
        return std::vector<Rat>{Rat(a, 12), Rat(b, 12), Rat(c, 12), Rat(d, 12)};
    };
    std::vector<PartialDistribution<Rat>> tests;
    tests.emplace_back("ZZ", Partition(atoms_by_chars(s, 0, 2, "01")), probs(4, 4, 4, 0));
    tests.emplace_back("ZX", Partition(atoms_by_chars(s, 0, 3, "01")), probs(0, 8, 2, 2));
    tests.emplace_back("XZ", Partition(atoms_by_chars(s, 1, 2, "01")), probs(0, 2, 8, 2));
    tests.emplace_back("XX", Partition(atoms_by_chars(s, 1, 3, "01")), probs(1, 1, 1, 9));
    return ObservationSpace<Rat>(std::move(s), std::move(tests));
}

std::vector<std::size_t> hardy_swap_permutation() {
    std::vector<std::size_t> perm(16);
    for (std::size_t i = 0; i < 16; ++i) perm[i] = ((i >> 2) & 3) | ((i & 3) << 2);
    return perm;
}

QubitExpectations qubit_expectations(const Rat& a_re, const Rat& a_im, const Rat& b_re,
                                     const Rat& b_im) {
    Rat norm = a_re * a_re + a_im * a_im + b_re * b_re + b_im * b_im;
    if (norm != Rat(1))
        throw SpaceError("qubit amplitudes must have exact unit norm, got |psi|^2 = " +
                         to_string(norm));
    QubitExpectations e;
    e.z = a_re * a_re + a_im * a_im - b_re * b_re - b_im * b_im;
    e.x = Rat(2) * (a_re * b_re + a_im * b_im);
    e.y = Rat(2) * (a_re * b_im - a_im * b_re);
    return e;
}

}  // namespace obspace
