#pragma once

#include <obspace/space.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace obspace {

struct IoError : Error {
    using Error::Error;
};

// Names the scalar field a document is written over: "rational", "float",
// or "quadratic:<d>" with a square-free radicand d >= 2.
struct FieldTag {
    enum class Kind { rational, quadratic, floating };

    Kind kind = Kind::rational;
    long radicand = 0;

    friend bool operator==(const FieldTag&, const FieldTag&) = default;
};

FieldTag parse_field_tag(const std::string& text);
std::string to_string(const FieldTag& tag);

// Scalar literals: "n" or "n/d" for rationals; "q", "q+s r" or "q-s r" for
// quadratic values, with r standing for sqrt(d) and q, s rational; plain
// decimal literals for floats. to_string on a scalar is the canonical form
// and parses back to an equal value.
Quad parse_quadratic(std::string_view text, long radicand);
Fl parse_float(std::string_view text);

struct TestDocument {
    std::string name;
    std::vector<std::vector<std::string>> atoms;
    std::vector<std::string> probs;
};

struct SpaceDocument {
    std::vector<std::string> points;
    FieldTag field;
    std::vector<TestDocument> tests;
};

// JSON exchange format for observation spaces:
//
//   {
//     "points": ["00", "01", ...],
//     "field": "rational",
//     "tests": [{"name": "left", "atoms": [["00","01"], ...], "probs": [...]}]
//   }
//
// Probabilities are scalar literal strings over exact fields and JSON
// numbers over the float field. Writing is canonical: fixed key order,
// two-space indentation, scalars in lowest terms, so equal documents
// serialize to identical bytes.
SpaceDocument parse_space_document(const std::string& text);
std::string write_space_document(const SpaceDocument& doc);

// Rewrites the document's scalars over another field. Rationals embed into
// any quadratic extension and evaluate to floats; quadratic values with a
// radical part keep their radicand and refuse to narrow; floating values
// never promote to an exact field.
SpaceDocument convert_document(const SpaceDocument& doc, const FieldTag& target);

template <class F>
ObservationSpace<F> space_from_document(const SpaceDocument& doc);

template <class F>
SpaceDocument document_from_space(const ObservationSpace<F>& space);

}  // namespace obspace
