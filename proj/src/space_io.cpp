#include <obspace/space_io.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <string>
#include <utility>

namespace obspace {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw IoError(msg); }

std::string strip_exception_tag(const char* what) {
    std::string msg(what);
    std::size_t pos = msg.find("] ");
    return pos == std::string::npos ? msg : msg.substr(pos + 2);
}

}  // namespace

FieldTag parse_field_tag(const std::string& text) {
    if (text == "rational") return {FieldTag::Kind::rational, 0};
    if (text == "float") return {FieldTag::Kind::floating, 0};
    if (text.rfind("quadratic:", 0) == 0) {
        std::string digits = text.substr(10);
        if (digits.empty() || digits.size() > 9 ||
            digits.find_first_not_of("0123456789") != std::string::npos)
            fail("malformed field tag '" + text + "'");
        long d = std::strtol(digits.c_str(), nullptr, 10);
        try {
            Quad::check_radicand(d);
        } catch (const FieldError& e) {
            fail("field tag '" + text + "': " + e.what());
        }
        return {FieldTag::Kind::quadratic, d};
    }
    fail("unknown field tag '" + text + "'; expected rational, float or quadratic:<d>");
}

std::string to_string(const FieldTag& tag) {
    switch (tag.kind) {
        case FieldTag::Kind::rational: return "rational";
        case FieldTag::Kind::floating: return "float";
        case FieldTag::Kind::quadratic: return "quadratic:" + std::to_string(tag.radicand);
    }
    return {};
}

Quad parse_quadratic(std::string_view text, long radicand) {
    std::string_view body = text;
    bool radical = false;
    if (body.size() >= 2 && body.substr(body.size() - 2) == " r") {
        radical = true;
        body.remove_suffix(2);
    }
    try {
        if (!radical) return Quad(Rat::parse(body));
        std::size_t sep = body.find_last_of("+-");
        if (sep == std::string_view::npos || sep == 0)
            throw FieldError("missing sign before the radical coefficient");
        Rat q = Rat::parse(body.substr(0, sep));
        Rat s = Rat::parse(body.substr(sep + 1));
        if (body[sep] == '-') s = -s;
        return Quad(q, s, radicand);
    } catch (const FieldError&) {
        fail("malformed quadratic '" + std::string(text) + "'");
    }
}

Fl parse_float(std::string_view text) {
    std::string buf(text);
    if (!buf.empty() && buf.find_first_not_of("0123456789+-.eE") == std::string::npos) {
        char* end = nullptr;
        double v = std::strtod(buf.c_str(), &end);
        if (end == buf.c_str() + buf.size() && std::isfinite(v)) return Fl(v);
    }
    fail("malformed float '" + buf + "'");
}

namespace {

void check_scalar_text(const std::string& text, const FieldTag& field) {
    switch (field.kind) {
        case FieldTag::Kind::rational: Rat::parse(text); break;
        case FieldTag::Kind::quadratic: parse_quadratic(text, field.radicand); break;
        case FieldTag::Kind::floating: parse_float(text); break;
    }
}

const ojson& member(const ojson& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing key '" + key + "'");
    return *it;
}

void expect_keys(const ojson& obj, std::initializer_list<const char*> keys,
                 const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : keys) known = known || item.key() == k;
        if (!known) fail(where + ": unexpected key '" + item.key() + "'");
    }
}

std::vector<std::string> string_list(const ojson& arr, const std::string& where) {
    if (!arr.is_array()) fail(where + ": expected an array of strings");
    std::vector<std::string> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_string()) fail(where + ": expected an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

SpaceDocument parse_space_document(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(strip_exception_tag(e.what()));
    }
    if (!j.is_object()) fail("space document: expected a JSON object");
    expect_keys(j, {"points", "field", "tests"}, "space document");

    SpaceDocument doc;
    doc.points = string_list(member(j, "points", "space document"), "'points'");

    const ojson& jf = member(j, "field", "space document");
    if (!jf.is_string()) fail("'field': expected a string tag");
    doc.field = parse_field_tag(jf.get<std::string>());

    const ojson& jt = member(j, "tests", "space document");
    if (!jt.is_array()) fail("'tests': expected an array");
    for (std::size_t i = 0; i < jt.size(); ++i) {
        std::string where = "tests[" + std::to_string(i) + "]";
        const ojson& t = jt[i];
        if (!t.is_object()) fail(where + ": expected an object");
        expect_keys(t, {"name", "atoms", "probs"}, where);

        TestDocument td;
        const ojson& name = member(t, "name", where);
        if (!name.is_string()) fail(where + ".name: expected a string");
        td.name = name.get<std::string>();

        const ojson& atoms = member(t, "atoms", where);
        if (!atoms.is_array()) fail(where + ".atoms: expected an array of point-name lists");
        for (std::size_t k = 0; k < atoms.size(); ++k)
            td.atoms.push_back(
                string_list(atoms[k], where + ".atoms[" + std::to_string(k) + "]"));

        const ojson& probs = member(t, "probs", where);
        if (!probs.is_array()) fail(where + ".probs: expected an array");
        for (std::size_t k = 0; k < probs.size(); ++k) {
            const ojson& p = probs[k];
            std::string pw = where + ".probs[" + std::to_string(k) + "]";
            std::string prob;
            if (p.is_string()) {
                prob = p.get<std::string>();
            } else if (p.is_number() && doc.field.kind == FieldTag::Kind::floating) {
                prob = p.dump();
            } else if (p.is_number()) {
                fail(pw + ": exact probabilities must be scalar strings, not JSON numbers");
            } else {
                fail(pw + ": expected a scalar");
            }
            try {
                check_scalar_text(prob, doc.field);
            } catch (const Error& e) {
                fail(pw + ": " + e.what());
            }
            td.probs.push_back(std::move(prob));
        }
        doc.tests.push_back(std::move(td));
    }
    return doc;
}

std::string write_space_document(const SpaceDocument& doc) {
    ojson j;
    j["points"] = doc.points;
    j["field"] = to_string(doc.field);
    ojson tests = ojson::array();
    for (const TestDocument& t : doc.tests) {
        ojson jt;
        jt["name"] = t.name;
        jt["atoms"] = t.atoms;
        if (doc.field.kind == FieldTag::Kind::floating) {
            ojson probs = ojson::array();
            for (const std::string& p : t.probs) probs.push_back(parse_float(p).value());
            jt["probs"] = std::move(probs);
        } else {
            jt["probs"] = t.probs;
        }
        tests.push_back(std::move(jt));
    }
    j["tests"] = std::move(tests);
    return j.dump(2) + "\n";
}

namespace {

std::string convert_scalar(const std::string& text, const FieldTag& source,
                           const FieldTag& target) {
    using Kind = FieldTag::Kind;
    if (source.kind == Kind::floating && target.kind != Kind::floating)
        fail("floating-point values do not promote to an exact field");
    switch (target.kind) {
        case Kind::rational: {
            if (source.kind == Kind::rational) return to_string(Rat::parse(text));
            Quad v = parse_quadratic(text, source.radicand);
            if (sgn(v.radical_part()) != 0)
                fail("'" + text + "' has a radical part and no rational value");
            return to_string(v.rational_part());
        }
        case Kind::quadratic: {
            if (source.kind == Kind::rational) return to_string(Quad(Rat::parse(text)));
            Quad v = parse_quadratic(text, source.radicand);
            if (sgn(v.radical_part()) != 0 && source.radicand != target.radicand)
                fail("'" + text + "' lives in quadratic:" + std::to_string(source.radicand) +
                     ", not quadratic:" + std::to_string(target.radicand));
            return to_string(v);
        }
        case Kind::floating: {
            double v = source.kind == Kind::rational
                           ? Rat::parse(text).approx()
                           : source.kind == Kind::quadratic
                                 ? parse_quadratic(text, source.radicand).approx()
                                 : parse_float(text).value();
            return to_string(Fl(v));
        }
    }
    return text;
}

}  // namespace

SpaceDocument convert_document(const SpaceDocument& doc, const FieldTag& target) {
    SpaceDocument out = doc;
    out.field = target;
    for (std::size_t i = 0; i < out.tests.size(); ++i)
        for (std::size_t k = 0; k < out.tests[i].probs.size(); ++k) {
            try {
                out.tests[i].probs[k] =
                    convert_scalar(doc.tests[i].probs[k], doc.field, target);
            } catch (const Error& e) {
                throw IoError("tests[" + std::to_string(i) + "].probs[" +
                              std::to_string(k) + "]: " + e.what());
            }
        }
    return out;
}

namespace {

template <class F>
struct scalar_io;

template <>
struct scalar_io<Rat> {
    static constexpr FieldTag::Kind kind = FieldTag::Kind::rational;
    static Rat parse(const std::string& text, const FieldTag&) { return Rat::parse(text); }
};

template <>
struct scalar_io<Quad> {
    static constexpr FieldTag::Kind kind = FieldTag::Kind::quadratic;
    static Quad parse(const std::string& text, const FieldTag& tag) {
        return parse_quadratic(text, tag.radicand);
    }
};

template <>
struct scalar_io<Fl> {
    static constexpr FieldTag::Kind kind = FieldTag::Kind::floating;
    static Fl parse(const std::string& text, const FieldTag&) { return parse_float(text); }
};

FieldTag space_tag(const ObservationSpace<Rat>&) { return {FieldTag::Kind::rational, 0}; }

FieldTag space_tag(const ObservationSpace<Fl>&) { return {FieldTag::Kind::floating, 0}; }

FieldTag space_tag(const ObservationSpace<Quad>& space) {
    for (const auto& t : space.tests)
        for (const Quad& p : t.probs)
            if (p.radicand() != 0) return {FieldTag::Kind::quadratic, p.radicand()};
    fail("quadratic space carries no radical values; serialize it over the rationals");
}

}  // namespace

template <class F>
ObservationSpace<F> space_from_document(const SpaceDocument& doc) {
    if (doc.field.kind != scalar_io<F>::kind)
        fail("document field '" + to_string(doc.field) +
             "' does not match the requested scalar type '" + field_traits<F>::name() + "'");
    SampleSpace points(doc.points);
    std::vector<PartialDistribution<F>> tests;
    tests.reserve(doc.tests.size());
    for (const TestDocument& t : doc.tests) {
        std::vector<Event> atoms;
        atoms.reserve(t.atoms.size());
        try {
            for (const auto& names : t.atoms) {
                std::vector<std::size_t> idx;
                idx.reserve(names.size());
                for (const std::string& name : names) idx.push_back(points.index_of(name));
                atoms.push_back(Event::of(points.size(), idx));
            }
        } catch (const SpaceError& e) {
            fail("test '" + t.name + "': " + e.what());
        }
        std::vector<F> probs;
        probs.reserve(t.probs.size());
        for (std::size_t k = 0; k < t.probs.size(); ++k) {
            try {
                probs.push_back(scalar_io<F>::parse(t.probs[k], doc.field));
            } catch (const Error& e) {
                fail("test '" + t.name + "' probs[" + std::to_string(k) + "]: " + e.what());
            }
        }
        Partition partition = [&]() -> Partition {
            try {
                return Partition(std::move(atoms));
            } catch (const SpaceError& e) {
                fail("test '" + t.name + "': " + e.what());
            }
        }();
        tests.emplace_back(t.name, std::move(partition), std::move(probs));
    }
    return ObservationSpace<F>(std::move(points), std::move(tests));
}

template <class F>
SpaceDocument document_from_space(const ObservationSpace<F>& space) {
    SpaceDocument doc;
    doc.points = space.points.labels();
    doc.field = space_tag(space);
    for (const auto& t : space.tests) {
        TestDocument td;
        td.name = t.name;
        for (const Event& atom : t.partition.atoms()) {
            std::vector<std::string> names;
            for (std::size_t i : atom.indices()) names.push_back(space.points.label(i));
            td.atoms.push_back(std::move(names));
        }
        for (const F& p : t.probs) td.probs.push_back(to_string(p));
        doc.tests.push_back(std::move(td));
    }
    return doc;
}

template ObservationSpace<Rat> space_from_document<Rat>(const SpaceDocument&);
template ObservationSpace<Quad> space_from_document<Quad>(const SpaceDocument&);
template ObservationSpace<Fl> space_from_document<Fl>(const SpaceDocument&);
template SpaceDocument document_from_space<Rat>(const ObservationSpace<Rat>&);
template SpaceDocument document_from_space<Quad>(const ObservationSpace<Quad>&);
template SpaceDocument document_from_space<Fl>(const ObservationSpace<Fl>&);

}  // namespace obspace
