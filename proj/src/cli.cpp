#include <obspace/cli.hpp>

#include <obspace/feasibility.hpp>
#include <obspace/fixtures.hpp>
#include <obspace/ks.hpp>
#include <obspace/space_io.hpp>
#include <obspace/wigner.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace obspace {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string slurp(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string read_text_file(const std::string& path, std::istream& stdin_stream) {
    if (path == "-") return slurp(stdin_stream);
    std::ifstream file(path);
    if (!file) throw IoError("cannot open '" + path + "'");
    return slurp(file);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    out.push_back(current);
    return out;
}

SpaceDocument load_document(const std::string& path, const std::string& field_override,
                            std::istream& in) {
    SpaceDocument doc = parse_space_document(read_text_file(path, in));
    if (!field_override.empty()) doc = convert_document(doc, parse_field_tag(field_override));
    return doc;
}

template <class Fn>
int dispatch_field(const SpaceDocument& doc, Fn&& fn) {
    switch (doc.field.kind) {
        case FieldTag::Kind::rational: return fn(space_from_document<Rat>(doc));
        case FieldTag::Kind::quadratic: return fn(space_from_document<Quad>(doc));
        case FieldTag::Kind::floating: return fn(space_from_document<Fl>(doc));
    }
    return 2;
}

template <class F>
ojson scalar_json(const F& x) {
    if constexpr (std::is_same_v<F, Fl>)
        return x.value();
    else
        return to_string(x);
}

template <class F>
ojson tuple_json(const std::vector<F>& v) {
    ojson arr = ojson::array();
    for (const F& x : v) arr.push_back(scalar_json(x));
    return arr;
}

template <class F>
std::string tuple_text(const std::vector<F>& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v[i]);
    }
    return out + ")";
}

template <class F>
std::string interval_text(const Interval<F>& iv) {
    if (iv.empty) return "empty";
    std::string lo = iv.lo_bounded ? "[" + to_string(iv.lo) : "(-inf";
    std::string hi = iv.hi_bounded ? to_string(iv.hi) + "]" : "+inf)";
    return lo + ", " + hi;
}

template <class F>
ojson interval_json(const Interval<F>& iv) {
    ojson j;
    j["empty"] = iv.empty;
    j["lo"] = iv.lo_bounded ? scalar_json(iv.lo) : ojson();
    j["hi"] = iv.hi_bounded ? scalar_json(iv.hi) : ojson();
    return j;
}

template <class F>
ojson violations_json(const ObservationSpace<F>& space, const ConsistencyReport<F>& report) {
    ojson arr = ojson::array();
    for (const auto& v : report.violations) {
        ojson jv;
        jv["test_a"] = space.tests[v.test_i].name;
        jv["test_b"] = space.tests[v.test_j].name;
        jv["event"] = event_label(space.points, v.atom);
        jv["value_a"] = scalar_json(v.value_i);
        jv["value_b"] = scalar_json(v.value_j);
        arr.push_back(std::move(jv));
    }
    return arr;
}

template <class F>
void print_violations(const ObservationSpace<F>& space, const ConsistencyReport<F>& report,
                      std::ostream& out) {
    for (const auto& v : report.violations)
        out << "violation: '" << space.tests[v.test_i].name << "' vs '"
            << space.tests[v.test_j].name << "' on " << event_label(space.points, v.atom)
            << ": " << to_string(v.value_i) << " vs " << to_string(v.value_j) << "\n";
}

template <class F>
int run_check(const FieldTag& tag, const ObservationSpace<F>& space, bool json,
              std::ostream& out) {
    ConsistencyReport<F> report = check_consistency(space);
    if (json) {
        ojson j;
        j["command"] = "check";
        j["field"] = to_string(tag);
        j["points"] = space.points.size();
        j["tests"] = space.tests.size();
        j["consistent"] = report.consistent();
        j["violations"] = violations_json(space, report);
        out << j.dump(2) << "\n";
    } else {
        print_violations(space, report, out);
        if (report.consistent())
            out << "consistent: " << space.tests.size() << " test(s) over "
                << space.points.size() << " point(s)\n";
        else
            out << "inconsistent: " << report.violations.size() << " violation(s)\n";
    }
    return report.consistent() ? 0 : 1;
}

std::vector<std::size_t> read_point_permutation(const std::string& text,
                                                const SampleSpace& points) {
    std::vector<std::size_t> perm;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string token;
        while (words >> token) perm.push_back(points.index_of(token));
    }
    if (perm.size() != points.size())
        throw IoError("permutation file must list an image for each of the " +
                      std::to_string(points.size()) + " points; found " +
                      std::to_string(perm.size()));
    std::set<std::size_t> seen(perm.begin(), perm.end());
    if (seen.size() != perm.size()) throw IoError("permutation file repeats a point");
    return perm;
}

std::vector<std::size_t> induce_variable_permutation(const Partition& vars,
                                                     const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> out(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) {
        std::uint64_t image = 0;
        for (std::size_t i : vars.atom(k).indices()) image |= std::uint64_t(1) << perm[i];
        std::size_t target = vars.size();
        for (std::size_t m = 0; m < vars.size(); ++m)
            if (vars.atom(m).bits() == image) {
                target = m;
                break;
            }
        if (target == vars.size())
            throw SolveError(
                "the point permutation does not map the grounding variables onto "
                "themselves");
        out[k] = target;
    }
    return out;
}

struct GroundOptions {
    bool nonneg = false;
    bool vertices = false;
};

template <class F>
int run_ground(const FieldTag& tag, const ObservationSpace<F>& space, const GroundOptions& opt,
               bool json, const std::string& perm_text, std::ostream& out) {
    ConsistencyReport<F> report = check_consistency(space);
    if (!report.consistent()) {
        if (json) {
            ojson j;
            j["command"] = "ground";
            j["field"] = to_string(tag);
            j["consistent"] = false;
            j["violations"] = violations_json(space, report);
            out << j.dump(2) << "\n";
        } else {
            print_violations(space, report, out);
            out << "inconsistent: " << report.violations.size() << " violation(s)\n";
        }
        return 1;
    }

    LinearSystem<F> sys = assemble_system(space);
    SolveOutcome<F> solved = solve_affine(sys);
    ojson j;
    j["command"] = "ground";
    j["field"] = to_string(tag);
    j["consistent"] = true;
    if (!solved.solved()) {
        if (json) {
            j["solvable"] = false;
            j["certificate"] = tuple_json(solved.certificate);
            out << j.dump(2) << "\n";
        } else {
            out << "no grounding: the restriction equations are unsolvable\n";
            out << "certificate: " << tuple_text(solved.certificate) << "\n";
        }
        return 1;
    }

    const AffineSolutionSet<F>& base = solved.set();
    j["solvable"] = true;
    j["variables"] = base.labels;
    j["particular"] = tuple_json(base.particular);
    j["null_dimension"] = base.dim();
    {
        ojson jb = ojson::array();
        for (const auto& dir : base.basis) jb.push_back(tuple_json(dir));
        j["basis"] = std::move(jb);
    }
    if (!json) {
        out << "variables (" << base.vars() << "): ";
        for (std::size_t i = 0; i < base.labels.size(); ++i)
            out << (i ? ", " : "") << base.labels[i];
        out << "\n";
        out << "particular: " << tuple_text(base.particular) << "\n";
        out << "null dimension: " << base.dim() << "\n";
        for (std::size_t k = 0; k < base.basis.size(); ++k)
            out << "basis[" << k << "]: " << tuple_text(base.basis[k]) << "\n";
    }

    LinearSystem<F> worksys = sys;
    std::optional<AffineSolutionSet<F>> symmetric;
    const AffineSolutionSet<F>* work = &base;

    if (!perm_text.empty()) {
        std::vector<std::size_t> point_perm = read_point_permutation(perm_text, space.points);
        std::vector<std::size_t> var_perm =
            induce_variable_permutation(common_refinement(space), point_perm);
        symmetrize(sys, var_perm);
        std::set<std::pair<std::size_t, std::size_t>> dedup;
        for (std::size_t i = 0; i < var_perm.size(); ++i)
            if (var_perm[i] != i)
                dedup.insert({std::min(i, var_perm[i]), std::max(i, var_perm[i])});
        std::vector<std::pair<std::size_t, std::size_t>> equalities(dedup.begin(),
                                                                    dedup.end());
        SolveOutcome<F> cut = apply_constraints(base, equalities);
        if (!cut.solved()) {
            if (json) {
                j["symmetric"] = ojson{{"solvable", false}};
                out << j.dump(2) << "\n";
            } else {
                out << "no symmetric grounding\n";
            }
            return 1;
        }
        symmetric = cut.set();
        work = &*symmetric;
        for (const auto& eq : equalities) {
            std::vector<F> row(worksys.cols, F(0));
            row[eq.first] = F(1);
            row[eq.second] = F(-1);
            worksys.add_row(std::move(row), F(0),
                            "sym[" + base.labels[eq.first] + "=" + base.labels[eq.second] +
                                "]");
        }
        ojson js;
        js["solvable"] = true;
        js["equalities"] = equalities.size();
        js["particular"] = tuple_json(symmetric->particular);
        js["null_dimension"] = symmetric->dim();
        ojson jb = ojson::array();
        for (const auto& dir : symmetric->basis) jb.push_back(tuple_json(dir));
        js["basis"] = std::move(jb);
        j["symmetric"] = std::move(js);
        if (!json) {
            out << "symmetric particular: " << tuple_text(symmetric->particular) << "\n";
            out << "symmetric null dimension: " << symmetric->dim() << "\n";
            for (std::size_t k = 0; k < symmetric->basis.size(); ++k)
                out << "symmetric basis[" << k << "]: " << tuple_text(symmetric->basis[k])
                    << "\n";
        }
    }

    int rc = 0;
    if (opt.nonneg) {
        if constexpr (field_traits<F>::exact) {
            FeasibilityResult<F> res = nonneg_feasibility(worksys, *work);
            ojson jn;
            jn["feasible"] = res.feasible;
            if (res.feasible)
                jn["witness"] = tuple_json(res.witness);
            else
                jn["certificate"] = tuple_json(res.certificate);
            if (res.interval) jn["interval"] = interval_json(*res.interval);
            j["nonneg"] = std::move(jn);
            if (!json) {
                out << "nonnegative: " << (res.feasible ? "Feasible" : "Infeasible") << "\n";
                if (res.feasible)
                    out << "witness: " << tuple_text(res.witness) << "\n";
                else
                    out << "certificate: " << tuple_text(res.certificate) << "\n";
                if (res.interval) out << "interval: " << interval_text(*res.interval) << "\n";
            }
            if (!res.feasible) rc = 1;
        } else {
            if (work->dim() != 1)
                throw SolveError(
                    "nonnegative feasibility over the float field is limited to "
                    "one-dimensional families; use an exact field");
            Interval<F> iv = *feasible_interval(*work);
            bool feasible = !iv.empty;
            std::vector<F> witness;
            if (feasible) {
                F t0 = iv.lo_bounded ? iv.lo : (iv.hi_bounded ? iv.hi : F(0));
                witness = work->point({t0});
            }
            ojson jn;
            jn["feasible"] = feasible;
            if (feasible) jn["witness"] = tuple_json(witness);
            jn["interval"] = interval_json(iv);
            j["nonneg"] = std::move(jn);
            if (!json) {
                out << "nonnegative: " << (feasible ? "Feasible" : "Infeasible") << "\n";
                if (feasible) out << "witness: " << tuple_text(witness) << "\n";
                out << "interval: " << interval_text(iv) << "\n";
            }
            if (!feasible) rc = 1;
        }
    }

    if (opt.vertices) {
        if constexpr (field_traits<F>::exact) {
            std::vector<SignedGrounding<F>> verts = vertex_enumerate(*work);
            ojson jv = ojson::array();
            for (const auto& v : verts) jv.push_back(tuple_json(v.values));
            j["vertices"] = std::move(jv);
            if (!json) {
                out << "vertices: " << verts.size() << "\n";
                for (std::size_t k = 0; k < verts.size(); ++k)
                    out << "vertex[" << k << "]: " << tuple_text(verts[k].values) << "\n";
            }
        } else {
            throw SolveError("vertex enumeration requires an exact field");
        }
    }

    if (json) out << j.dump(2) << "\n";
    return rc;
}

int run_example(const std::string& name, const std::string& state_text, bool state_given,
                const std::string& field_override, std::ostream& out) {
    bool feynman = name == "feynman2" || name == "feynman3";
    if (state_given && !feynman) throw IoError("--state applies to the feynman examples only");
    SpaceDocument doc;
    if (name == "piponi") {
        doc = document_from_space(piponi_space());
    } else if (name == "schneider") {
        doc = document_from_space(schneider_space());
    } else if (name == "hardy") {
        doc = document_from_space(hardy_space());
    } else {
        std::vector<std::string> parts = split(state_text, ',');
        if (parts.size() != 4)
            throw IoError(
                "--state takes four rational amplitude components a_re,a_im,b_re,b_im");
        QubitExpectations e = qubit_expectations(Rat::parse(parts[0]), Rat::parse(parts[1]),
                                                 Rat::parse(parts[2]), Rat::parse(parts[3]));
        doc = name == "feynman2" ? document_from_space(feynman2_space(e.z, e.x))
                                 : document_from_space(feynman3_space(e.x, e.y, e.z));
    }
    if (!field_override.empty()) doc = convert_document(doc, parse_field_tag(field_override));
    out << write_space_document(doc);
    return 0;
}

int run_ks(const std::string& frame_file, bool json, std::istream& in, std::ostream& out) {
    MeasurementFrame frame = frame_file.empty()
                                 ? cabello_frame()
                                 : frame_from_json(read_text_file(frame_file, in));
    std::optional<Selection> selection = rigid_selection_search(frame);
    std::optional<ParityWitness> parity = parity_obstruction(frame);
    if (json) {
        ojson j;
        j["command"] = "ks";
        j["frame"] = frame_file.empty() ? "cabello" : frame_file;
        j["bases"] = frame.bases.size();
        j["vectors"] = frame.vector_ids.size();
        j["dimension"] = frame.dimension();
        j["outcome"] = selection ? "Selection" : "NoneFound";
        if (selection) j["selection"] = selection->chosen;
        if (parity)
            j["parity"] = ojson{{"basis_count", parity->basis_count},
                                {"bases_per_vector", parity->bases_per_vector},
                                {"vector_count", parity->vector_count}};
        out << j.dump(2) << "\n";
    } else {
        out << "frame: " << frame.bases.size() << " bases, " << frame.vector_ids.size()
            << " vectors, dimension " << frame.dimension() << "\n";
        if (selection) {
            out << "Selection: ";
            for (std::size_t i = 0; i < selection->chosen.size(); ++i)
                out << (i ? ", " : "") << selection->chosen[i];
            out << "\n";
        } else if (parity) {
            out << "NoneFound; parity obstruction: " << parity->basis_count
                << " bases, each vector in exactly two bases\n";
        } else {
            out << "NoneFound\n";
        }
    }
    return selection ? 0 : 1;
}

struct WignerOptions {
    std::string state = "gaussian";
    double hbar = 1.0;
    std::string grid = "default";
    std::string out_file = "wigner_field.txt";
    std::vector<std::string> marginals;
    bool verify = false;
    std::size_t rays = 0;
    bool reconstruct = false;
    bool json = false;
};

std::size_t parse_count(const std::string& text) {
    if (text.empty() || text.size() > 6 ||
        text.find_first_not_of("0123456789") != std::string::npos)
        throw IoError("malformed grid size '" + text + "'");
    return std::size_t(std::strtoull(text.c_str(), nullptr, 10));
}

PhaseSpaceGrid parse_grid(const std::string& text) {
    if (text == "default") return {-6.0, 6.0, 513, -6.0, 6.0, 513};
    std::vector<std::string> parts = split(text, ',');
    if (parts.size() != 6) throw IoError("--grid takes x_lo,x_hi,n_x,p_lo,p_hi,n_p or 'default'");
    return {parse_float(parts[0]).value(), parse_float(parts[1]).value(),
            parse_count(parts[2]),         parse_float(parts[3]).value(),
            parse_float(parts[4]).value(), parse_count(parts[5])};
}

std::pair<double, double> parse_direction(const std::string& text) {
    std::vector<std::string> parts = split(text, ',');
    if (parts.size() != 2) throw IoError("a direction is two coefficients 'a,b'");
    double a = parse_float(parts[0]).value();
    double b = parse_float(parts[1]).value();
    if (a == 0.0 && b == 0.0) throw IoError("the direction (0, 0) has no density");
    return {a, b};
}

std::string stem_of(const std::string& path) {
    std::size_t dot = path.rfind('.');
    std::size_t slash = path.find_last_of('/');
    bool has_ext = dot != std::string::npos && dot != 0 &&
                   (slash == std::string::npos || dot > slash + 1);
    return has_ext ? path.substr(0, dot) : path;
}

// z samples on the image of the dominant-axis lattice, where
// marginal_density lands on grid nodes along the integration rows.
LineGrid aligned_line_grid(const PhaseSpaceGrid& grid, double a, double b) {
    double dx = (grid.x_hi - grid.x_lo) / double(grid.n_x - 1);
    double dp = (grid.p_hi - grid.p_lo) / double(grid.n_p - 1);
    double step, anchor;
    if (std::fabs(b) >= std::fabs(a)) {
        step = std::fabs(b) * dp;
        anchor = b * grid.p_lo;
    } else {
        step = std::fabs(a) * dx;
        anchor = a * grid.x_lo;
    }
    bool first = true;
    double z_min = 0.0, z_max = 0.0;
    for (double xc : {grid.x_lo, grid.x_hi})
        for (double pc : {grid.p_lo, grid.p_hi}) {
            double z = a * xc + b * pc;
            z_min = first ? z : std::min(z_min, z);
            z_max = first ? z : std::max(z_max, z);
            first = false;
        }
    long m_lo = long(std::floor((z_min - anchor) / step));
    long m_hi = long(std::ceil((z_max - anchor) / step));
    return {anchor + double(m_lo) * step, anchor + double(m_hi) * step,
            std::size_t(m_hi - m_lo) + 1};
}

void write_density_file(const std::string& path, const LineDensity& g) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot write '" + path + "'");
    file << fmt("%.17g", g.a) << " " << fmt("%.17g", g.b) << " " << fmt("%.17g", g.grid.lo)
         << " " << fmt("%.17g", g.grid.hi) << " " << g.grid.n << "\n";
    for (std::size_t i = 0; i < g.grid.n; ++i)
        file << fmt("%.17g", g.grid.z(i)) << " " << fmt("%.17g", g.values[i]) << "\n";
}

int run_wigner(const WignerOptions& opt, std::ostream& out) {
    if (!(opt.hbar > 0.0)) throw WignerError("hbar must be positive");
    WaveFunction psi = state_from_spec(opt.state, opt.hbar);
    PhaseSpaceGrid grid = parse_grid(opt.grid);
    if (grid.n_x != 0 && grid.n_p != 0 &&
        grid.n_x > (std::size_t(1) << 26) / grid.n_p)
        throw WignerError("grid is too large; the cell cap is 2^26");
    PhaseSpaceField field = wigner_density(psi, grid);
    {
        std::ofstream file(opt.out_file);
        if (!file) throw IoError("cannot write '" + opt.out_file + "'");
        write_field(file, field);
    }
    double residual = std::fabs(field.integral() - 1.0);
    std::size_t imin = 0;
    for (std::size_t k = 1; k < field.values.size(); ++k)
        if (field.values[k] < field.values[imin]) imin = k;
    double min_x = field.x(imin / grid.n_p);
    double min_p = field.p(imin % grid.n_p);

    ojson j;
    j["command"] = "wigner";
    j["state"] = psi.family;
    j["hbar"] = psi.hbar;
    j["grid"] = ojson{{"x_lo", grid.x_lo}, {"x_hi", grid.x_hi}, {"n_x", grid.n_x},
                      {"p_lo", grid.p_lo}, {"p_hi", grid.p_hi}, {"n_p", grid.n_p}};
    j["field_file"] = opt.out_file;
    j["integral_residual"] = residual;
    j["imag_residue"] = field.imag_residue;
    j["min_value"] = field.values[imin];
    j["min_at"] = ojson{{"x", min_x}, {"p", min_p}};

    if (!opt.json) {
        out << "state: " << psi.family << " (hbar = " << fmt("%g", psi.hbar) << ")\n";
        out << "grid: x in [" << fmt("%g", grid.x_lo) << ", " << fmt("%g", grid.x_hi)
            << "] x " << grid.n_x << ", p in [" << fmt("%g", grid.p_lo) << ", "
            << fmt("%g", grid.p_hi) << "] x " << grid.n_p << "\n";
        out << "field file: " << opt.out_file << "\n";
        out << "integral residual: " << fmt("%.3g", residual) << "\n";
        out << "realness residue: " << fmt("%.3g", field.imag_residue) << "\n";
        out << "min value: " << fmt("%.9g", field.values[imin]) << " at x = "
            << fmt("%g", min_x) << ", p = " << fmt("%g", min_p) << "\n";
    }

    std::string stem = stem_of(opt.out_file);
    if (!opt.marginals.empty()) {
        ojson jm = ojson::array();
        for (std::size_t k = 0; k < opt.marginals.size(); ++k) {
            auto [a, b] = parse_direction(opt.marginals[k]);
            LineGrid zg = aligned_line_grid(grid, a, b);
            LineDensity g = marginal_density(field, a, b, zg);
            LineDensity q = qm_line_density(psi, a, b, zg);
            double deviation = 0.0;
            for (std::size_t i = 0; i < zg.n; ++i)
                deviation = std::max(deviation, std::fabs(g.values[i] - q.values[i]));
            double line_residual = std::fabs(g.integral() - 1.0);
            std::string path = stem + ".marginal" + std::to_string(k) + ".txt";
            write_density_file(path, g);
            ojson e;
            e["a"] = a;
            e["b"] = b;
            e["file"] = path;
            e["integral_residual"] = line_residual;
            e["qm_deviation"] = deviation;
            jm.push_back(std::move(e));
            if (!opt.json)
                out << "marginal[" << k << "] (a = " << fmt("%g", a) << ", b = "
                    << fmt("%g", b) << ") -> " << path << ": integral residual "
                    << fmt("%.3g", line_residual) << ", deviation from the quantum density "
                    << fmt("%.3g", deviation) << "\n";
        }
        j["marginals"] = std::move(jm);
    }

    if (opt.verify) {
        double max_deviation = 0.0;
        double max_line_residual = 0.0;
        for (int k = 0; k < 16; ++k) {
            double theta = kPi * double(k) / 16.0;
            double a = std::cos(theta);
            double b = std::sin(theta);
            LineGrid zg = aligned_line_grid(grid, a, b);
            LineDensity g = marginal_density(field, a, b, zg);
            LineDensity q = qm_line_density(psi, a, b, zg);
            for (std::size_t i = 0; i < zg.n; ++i)
                max_deviation = std::max(max_deviation, std::fabs(g.values[i] - q.values[i]));
            max_line_residual = std::max({max_line_residual, std::fabs(g.integral() - 1.0),
                                          std::fabs(q.integral() - 1.0)});
        }
        j["verify"] = ojson{{"directions", 16},
                            {"max_marginal_deviation", max_deviation},
                            {"max_line_residual", max_line_residual}};
        if (!opt.json)
            out << "verify (16 directions): max marginal deviation "
                << fmt("%.3g", max_deviation) << ", max line integral residual "
                << fmt("%.3g", max_line_residual) << "\n";
    }

    if (opt.reconstruct) {
        PhaseSpaceField recon = reconstruct_from_marginals(psi, opt.rays, grid);
        double deviation = 0.0;
        for (std::size_t k = 0; k < field.values.size(); ++k)
            deviation = std::max(deviation, std::fabs(recon.values[k] - field.values[k]));
        std::string path = stem + ".reconstructed.txt";
        {
            std::ofstream file(path);
            if (!file) throw IoError("cannot write '" + path + "'");
            write_field(file, recon);
        }
        j["reconstruction"] = ojson{{"rays", opt.rays}, {"file", path},
                                    {"max_deviation", deviation}};
        if (!opt.json)
            out << "reconstruction (" << opt.rays << " rays) -> " << path
                << ": max deviation from the field " << fmt("%.3g", deviation) << "\n";
    }

    if (opt.json) out << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"exact groundings for finite observation spaces"};
    app.require_subcommand(1);

    bool json = false;
    std::string field_override;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--json", json, "emit a JSON report instead of text");
        cmd->add_option("--field", field_override,
                        "reinterpret document scalars over this field: rational, float or "
                        "quadratic:<d>");
    };
    add_common(&app);

    std::string check_file;
    CLI::App* check = app.add_subcommand("check", "test a space document for consistency");
    check->add_option("document", check_file, "space document path, or - for stdin")
        ->required();
    add_common(check);

    std::string ground_file;
    std::string perm_file;
    GroundOptions gopt;
    CLI::App* ground =
        app.add_subcommand("ground", "solve a space document for its signed groundings");
    ground->add_option("document", ground_file, "space document path, or - for stdin")
        ->required();
    ground->add_flag("--nonneg", gopt.nonneg,
                     "decide whether a nonnegative grounding exists");
    ground->add_flag("--vertices", gopt.vertices,
                     "enumerate the vertices of the nonnegative groundings");
    ground->add_option("--symmetric", perm_file,
                       "restrict to groundings fixed by the point permutation listed in "
                       "this file");
    add_common(ground);

    std::string example_name;
    std::string state_text = "1,0,0,0";
    CLI::App* example = app.add_subcommand("example", "write a named example space document");
    example->add_option("name", example_name, "piponi, feynman2, feynman3, schneider or hardy")
        ->required()
        ->check(CLI::IsMember({"piponi", "feynman2", "feynman3", "schneider", "hardy"}));
    CLI::Option* state_opt = example->add_option(
        "--state", state_text,
        "qubit amplitudes a_re,a_im,b_re,b_im for the feynman examples");
    add_common(example);

    std::string frame_file;
    CLI::App* ks = app.add_subcommand("ks", "search a measurement frame for a rigid selection");
    ks->add_option("--frame", frame_file,
                   "frame JSON path, or - for stdin; defaults to the 18-vector frame in "
                   "dimension 4");
    add_common(ks);

    WignerOptions w;
    CLI::App* wigner = app.add_subcommand("wigner", "tabulate the Wigner grounding of a state");
    wigner->add_option("--state", w.state, "gaussian, hermite:<n> or sampled:<file>")
        ->capture_default_str();
    wigner->add_option("--hbar", w.hbar, "value of hbar")->capture_default_str();
    wigner
        ->add_option("--grid", w.grid,
                     "x_lo,x_hi,n_x,p_lo,p_hi,n_p, or 'default' for [-6,6]^2 at 513x513")
        ->capture_default_str();
    wigner->add_option("--out", w.out_file, "field output path")->capture_default_str();
    wigner->add_option("--marginal", w.marginals,
                       "direction a,b: tabulate the density of aX + bP against the quantum "
                       "density (repeatable)");
    wigner->add_flag("--verify", w.verify,
                     "compare marginals with the quantum densities on 16 directions");
    CLI::Option* rec_opt = wigner->add_option(
        "--reconstruct", w.rays, "reconstruct the field from this many tomographic rays");
    add_common(wigner);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*check) {
            SpaceDocument doc = load_document(check_file, field_override, in);
            return dispatch_field(doc, [&](const auto& space) {
                return run_check(doc.field, space, json, out);
            });
        }
        if (*ground) {
            SpaceDocument doc = load_document(ground_file, field_override, in);
            std::string perm_text =
                perm_file.empty() ? std::string() : read_text_file(perm_file, in);
            return dispatch_field(doc, [&](const auto& space) {
                return run_ground(doc.field, space, gopt, json, perm_text, out);
            });
        }
        if (*example)
            return run_example(example_name, state_text, state_opt->count() > 0,
                               field_override, out);
        if (*ks) return run_ks(frame_file, json, in, out);
        if (*wigner) {
            w.reconstruct = rec_opt->count() > 0;
            w.json = json;
            return run_wigner(w, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    out << app.help();
    return 2;
}

}  // namespace obspace
