#pragma once

#include <obspace/scalar.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

namespace obspace {

struct SpaceError : Error {
    using Error::Error;
};

// Finite sample space of at most 64 labelled points; events are bitmasks.
class SampleSpace {
  public:
    explicit SampleSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.empty() || labels_.size() > 64)
            throw SpaceError("sample space must have between 1 and 64 points");
        std::set<std::string> seen(labels_.begin(), labels_.end());
        if (seen.size() != labels_.size())
            throw SpaceError("sample space labels must be distinct");
    }

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        throw SpaceError("unknown point label '" + label + "'");
    }

  private:
    std::vector<std::string> labels_;
};

class Event {
  public:
    Event() : bits_(0), n_(0) {}
    Event(std::uint64_t bits, std::size_t n) : bits_(bits), n_(n) {
        if (n == 0 || n > 64) throw SpaceError("event over an invalid space size");
        if (n < 64 && (bits >> n) != 0) throw SpaceError("event has bits outside the space");
    }

    static Event none(std::size_t n) { return Event(0, n); }
    static Event all(std::size_t n) {
        return Event(n == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << n) - 1, n);
    }
    static Event of(std::size_t n, std::initializer_list<std::size_t> indices) {
        std::uint64_t b = 0;
        for (std::size_t i : indices) {
            if (i >= n) throw SpaceError("event index out of range");
            b |= std::uint64_t(1) << i;
        }
        return Event(b, n);
    }
    static Event of(std::size_t n, const std::vector<std::size_t>& indices) {
        std::uint64_t b = 0;
        for (std::size_t i : indices) {
            if (i >= n) throw SpaceError("event index out of range");
            b |= std::uint64_t(1) << i;
        }
        return Event(b, n);
    }

    std::uint64_t bits() const { return bits_; }
    std::size_t space_size() const { return n_; }
    std::size_t count() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }
    bool contains(std::size_t i) const { return (bits_ >> i) & 1; }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n_; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    friend Event operator&(const Event& a, const Event& b) {
        return Event(a.bits_ & b.bits_, check_same(a, b));
    }
    friend Event operator|(const Event& a, const Event& b) {
        return Event(a.bits_ | b.bits_, check_same(a, b));
    }
    Event complement() const { return Event(~bits_ & all(n_).bits(), n_); }
    bool subset_of(const Event& o) const { return (bits_ & ~o.bits_) == 0 && n_ == o.n_; }

    friend bool operator==(const Event& a, const Event& b) {
        return a.bits_ == b.bits_ && a.n_ == b.n_;
    }
    friend bool operator!=(const Event& a, const Event& b) { return !(a == b); }
    friend bool operator<(const Event& a, const Event& b) { return a.bits_ < b.bits_; }

  private:
    static std::size_t check_same(const Event& a, const Event& b) {
        if (a.n_ != b.n_) throw SpaceError("events over different sample spaces");
        return a.n_;
    }

    std::uint64_t bits_;
    std::size_t n_;
};

inline std::string event_label(const SampleSpace& space, const Event& e) {
    if (e.count() == 1) return space.label(e.indices()[0]);
    std::string out = "{";
    bool first = true;
    for (std::size_t i : e.indices()) {
        if (!first) out += ",";
        out += space.label(i);
        first = false;
    }
    return out + "}";
}

// Partition of the sample space into nonempty, pairwise disjoint atoms
// covering every point. Atom order is preserved as given.
class Partition {
  public:
    explicit Partition(std::vector<Event> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw SpaceError("partition must have at least one atom");
        std::size_t n = atoms_[0].space_size();
        std::uint64_t seen = 0;
        for (const Event& a : atoms_) {
            if (a.space_size() != n) throw SpaceError("partition atoms over different spaces");
            if (a.empty()) throw SpaceError("partition atom is empty");
            if (seen & a.bits()) throw SpaceError("partition atoms overlap");
            seen |= a.bits();
        }
        if (seen != Event::all(n).bits()) throw SpaceError("partition does not cover the space");
    }

    std::size_t size() const { return atoms_.size(); }
    std::size_t space_size() const { return atoms_[0].space_size(); }
    const std::vector<Event>& atoms() const { return atoms_; }
    const Event& atom(std::size_t k) const { return atoms_.at(k); }

    // Index of the atom containing point i.
    std::size_t atom_of(std::size_t i) const {
        for (std::size_t k = 0; k < atoms_.size(); ++k)
            if (atoms_[k].contains(i)) return k;
        throw SpaceError("point not covered by partition");
    }

    friend bool operator==(const Partition& a, const Partition& b) {
        auto sa = a.sorted_bits(), sb = b.sorted_bits();
        return sa == sb;
    }

  private:
    std::vector<std::uint64_t> sorted_bits() const {
        std::vector<std::uint64_t> v;
        for (const Event& a : atoms_) v.push_back(a.bits());
        std::sort(v.begin(), v.end());
        return v;
    }

    std::vector<Event> atoms_;
};

// True iff e is a union of atoms of p.
inline bool event_in_algebra(const Partition& p, const Event& e) {
    if (e.space_size() != p.space_size()) throw SpaceError("event over a different space");
    for (const Event& a : p.atoms()) {
        Event cut = a & e;
        if (!cut.empty() && cut != a) return false;
    }
    return true;
}

// Atoms of the largest algebra contained in both partitions' algebras:
// connected components of the graph linking points that share an atom
// in either partition.
inline Partition intersection_algebra(const Partition& p, const Partition& q) {
    if (p.space_size() != q.space_size()) throw SpaceError("partitions over different spaces");
    std::size_t n = p.space_size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
    for (const Partition* part : {&p, &q})
        for (const Event& a : part->atoms()) {
            auto idx = a.indices();
            for (std::size_t i = 1; i < idx.size(); ++i) unite(idx[0], idx[i]);
        }
    std::vector<std::uint64_t> comp(n, 0);
    for (std::size_t i = 0; i < n; ++i) comp[find(i)] |= std::uint64_t(1) << i;
    std::vector<Event> atoms;
    for (std::size_t i = 0; i < n; ++i)
        if (comp[i]) atoms.emplace_back(comp[i], n);
    return Partition(std::move(atoms));
}

template <class F>
struct PartialDistribution {
    std::string name;
    Partition partition;
    std::vector<F> probs;

    PartialDistribution(std::string name_, Partition partition_, std::vector<F> probs_)
        : name(std::move(name_)), partition(std::move(partition_)), probs(std::move(probs_)) {
        if (probs.size() != partition.size())
            throw SpaceError("test '" + name + "': one probability per atom required");
        F total = F(0);
        for (const F& p : probs) {
            if (sgn(p) < 0) throw SpaceError("test '" + name + "': negative probability");
            total += p;
        }
        if (total != F(1)) throw SpaceError("test '" + name + "': probabilities must sum to 1");
    }

    // Probability of an event in the test's algebra.
    F prob_of(const Event& e) const {
        F total = F(0);
        bool covered = true;
        Event acc = Event::none(partition.space_size());
        for (std::size_t k = 0; k < partition.size(); ++k) {
            Event cut = partition.atom(k) & e;
            if (cut == partition.atom(k)) {
                total += probs[k];
                acc = acc | cut;
            } else if (!cut.empty()) {
                covered = false;
            }
        }
        if (!covered || acc != e)
            throw SpaceError("test '" + name + "': event outside the test's algebra");
        return total;
    }
};

template <class F>
struct ObservationSpace {
    SampleSpace points;
    std::vector<PartialDistribution<F>> tests;

    ObservationSpace(SampleSpace points_, std::vector<PartialDistribution<F>> tests_)
        : points(std::move(points_)), tests(std::move(tests_)) {
        std::set<std::string> names;
        for (const auto& t : tests) {
            if (t.partition.space_size() != points.size())
                throw SpaceError("test '" + t.name + "' lives on a different space");
            if (!names.insert(t.name).second)
                throw SpaceError("duplicate test name '" + t.name + "'");
        }
    }
};

template <class F>
struct ConsistencyViolation {
    std::size_t test_i, test_j;
    Event atom;
    F value_i, value_j;
};

template <class F>
struct ConsistencyReport {
    std::vector<ConsistencyViolation<F>> violations;
    bool consistent() const { return violations.empty(); }
};

// Pairwise check on the atoms of each intersection algebra; additivity
// extends agreement from the atoms to every event the algebras share.
template <class F>
ConsistencyReport<F> check_consistency(const ObservationSpace<F>& o) {
    ConsistencyReport<F> report;
    for (std::size_t i = 0; i < o.tests.size(); ++i)
        for (std::size_t j = i + 1; j < o.tests.size(); ++j) {
            Partition common =
                intersection_algebra(o.tests[i].partition, o.tests[j].partition);
            for (const Event& atom : common.atoms()) {
                F vi = o.tests[i].prob_of(atom);
                F vj = o.tests[j].prob_of(atom);
                if (vi != vj) report.violations.push_back({i, j, atom, vi, vj});
            }
        }
    return report;
}

inline Partition common_refinement_of(const std::vector<Partition>& parts, std::size_t n) {
    std::vector<Event> atoms{Event::all(n)};
    for (const Partition& p : parts) {
        std::vector<Event> finer;
        for (const Event& a : atoms)
            for (const Event& b : p.atoms()) {
                Event cut = a & b;
                if (!cut.empty()) finer.push_back(cut);
            }
        atoms = std::move(finer);
    }
    // Canonical order: by smallest contained point index.
    std::sort(atoms.begin(), atoms.end(), [](const Event& a, const Event& b) {
        return (a.bits() & -a.bits()) < (b.bits() & -b.bits());
    });
    return Partition(std::move(atoms));
}

template <class F>
Partition common_refinement(const ObservationSpace<F>& o) {
    std::vector<Partition> parts;
    parts.reserve(o.tests.size());
    for (const auto& t : o.tests) parts.push_back(t.partition);
    return common_refinement_of(parts, o.points.size());
}

}  // namespace obspace
