#pragma once

#include <obspace/scalar.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace obspace {

struct FrameError : Error {
    using Error::Error;
};

// Incidence structure of a finite set of measurement bases: which vector
// ids make up which basis. Coordinates are deliberately absent; only the
// sharing pattern between bases matters here.
struct MeasurementFrame {
    std::vector<std::string> vector_ids;
    std::vector<std::vector<std::string>> bases;

    explicit MeasurementFrame(std::vector<std::vector<std::string>> bases_);
    std::size_t dimension() const { return bases[0].size(); }
};

// One chosen vector per basis such that a shared vector is either chosen
// in all bases containing it or in none.
struct Selection {
    std::vector<std::string> chosen;  // indexed like frame.bases
};

// Depth-first search with unit propagation over per-basis choices;
// returns the first consistent selection or nothing after exhausting the
// space. Bases are explored most-shared first.
std::optional<Selection> rigid_selection_search(const MeasurementFrame& frame);

// Counting argument: a consistent selection picks each chosen vector once
// per basis containing it, so if every vector sits in exactly two bases,
// the number of bases is twice the number of chosen vectors.
struct ParityWitness {
    std::size_t basis_count;       // odd
    std::size_t bases_per_vector;  // uniformly 2
    std::size_t vector_count;
};

std::optional<ParityWitness> parity_obstruction(const MeasurementFrame& frame);

// The 18-vector, 9-basis frame in C^4; ids name the vectors by their
// 0/1/-1 coordinates.
MeasurementFrame cabello_frame();

// Frame from a JSON document of the form {"bases": [["v1","v2",...], ...]}.
MeasurementFrame frame_from_json(const std::string& text);

}  // namespace obspace
