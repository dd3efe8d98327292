#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <obspace/fixtures.hpp>
#include <obspace/space.hpp>

#include <map>
#include <random>
#include <set>

using namespace obspace;

namespace {

Partition random_partition(std::mt19937& rng, std::size_t n, std::size_t max_blocks) {
    std::uniform_int_distribution<std::size_t> block(0, max_blocks - 1);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[block(rng)].push_back(i);
    std::vector<Event> atoms;
    for (auto& [_, idx] : groups) atoms.push_back(Event::of(n, idx));
    return Partition(std::move(atoms));
}

// Every event expressible as a union of atoms.
std::set<std::uint64_t> algebra_of(const Partition& p) {
    std::set<std::uint64_t> out;
    std::size_t k = p.size();
    for (std::uint64_t pick = 0; pick < (std::uint64_t(1) << k); ++pick) {
        std::uint64_t bits = 0;
        for (std::size_t a = 0; a < k; ++a)
            if ((pick >> a) & 1) bits |= p.atom(a).bits();
        out.insert(bits);
    }
    return out;
}

}  // namespace

TEST_CASE("sample space validation") {
    CHECK_THROWS_AS(SampleSpace({}), SpaceError);
    CHECK_THROWS_AS(SampleSpace({"a", "a"}), SpaceError);
    CHECK_THROWS_AS(SampleSpace(std::vector<std::string>(65, "x")), SpaceError);
    SampleSpace s({"a", "b", "c"});
    CHECK(s.size() == 3);
    CHECK(s.index_of("b") == 1);
    CHECK_THROWS_AS(s.index_of("z"), SpaceError);
}

TEST_CASE("event operations") {
    Event e = Event::of(4, {0, 1});
    Event f = Event::of(4, {1, 2});
    CHECK((e & f) == Event::of(4, {1}));
    CHECK((e | f) == Event::of(4, {0, 1, 2}));
    CHECK(e.complement() == Event::of(4, {2, 3}));
    CHECK(Event::all(4).count() == 4);
    CHECK(Event::none(4).empty());
    CHECK(Event::of(4, {1}).subset_of(f));
    CHECK_FALSE(e.subset_of(f));
    CHECK_THROWS_AS(Event::of(4, {4}), SpaceError);
    CHECK_THROWS_AS(e & Event::of(5, {0}), SpaceError);
    CHECK(Event::all(64).count() == 64);
    SampleSpace s({"a", "b", "c", "d"});
    CHECK(event_label(s, Event::of(4, {2})) == "c");
    CHECK(event_label(s, Event::of(4, {0, 3})) == "{a,d}");
}

TEST_CASE("partition validation") {
    CHECK_THROWS_AS(Partition({}), SpaceError);
    CHECK_THROWS_AS(Partition({Event::of(4, {0, 1}), Event::of(4, {1, 2, 3})}), SpaceError);
    CHECK_THROWS_AS(Partition({Event::of(4, {0, 1}), Event::of(4, {2})}), SpaceError);
    CHECK_THROWS_AS(Partition({Event::of(4, {0, 1, 2, 3}), Event::none(4)}), SpaceError);
    Partition p({Event::of(4, {0, 1}), Event::of(4, {2, 3})});
    CHECK(p.size() == 2);
    CHECK(p.atom_of(2) == 1);
}

TEST_CASE("event_in_algebra on the two-bit register partitions") {
    Partition left({Event::of(4, {0, 1}), Event::of(4, {2, 3})});
    CHECK(event_in_algebra(left, Event::of(4, {0, 1})));
    CHECK(event_in_algebra(left, Event::all(4)));
    CHECK(event_in_algebra(left, Event::none(4)));
    CHECK_FALSE(event_in_algebra(left, Event::of(4, {0})));
    CHECK_FALSE(event_in_algebra(left, Event::of(4, {0, 2})));
    CHECK_FALSE(event_in_algebra(left, Event::of(4, {0, 1, 2})));
}

TEST_CASE("event_in_algebra matches the union-of-atoms oracle") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 1 + trial % 10;
        Partition p = random_partition(rng, n, 4);
        auto algebra = algebra_of(p);
        for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << n); ++bits)
            CHECK(event_in_algebra(p, Event(bits, n)) == (algebra.count(bits) > 0));
    }
}

TEST_CASE("intersection algebra of the polarization pair tests") {
    auto sp = schneider_space();
    const Partition& ab = sp.tests[0].partition;
    const Partition& bc = sp.tests[1].partition;
    const Partition& ac = sp.tests[2].partition;
    // AB and AC share only the first photon's sign.
    Partition a_alg({Event::of(8, {0, 1, 2, 3}), Event::of(8, {4, 5, 6, 7})});
    CHECK(intersection_algebra(ab, ac) == a_alg);
    Partition b_alg({Event::of(8, {0, 1, 4, 5}), Event::of(8, {2, 3, 6, 7})});
    CHECK(intersection_algebra(ab, bc) == b_alg);
    Partition c_alg({Event::of(8, {0, 2, 4, 6}), Event::of(8, {1, 3, 5, 7})});
    CHECK(intersection_algebra(bc, ac) == c_alg);
    CHECK(intersection_algebra(ab, ab) == ab);
}

TEST_CASE("intersection algebra of unrelated tests is trivial") {
    auto h = hardy_space();
    Partition trivial({Event::all(16)});
    CHECK(intersection_algebra(h.tests[0].partition, h.tests[3].partition) == trivial);
    CHECK(intersection_algebra(h.tests[1].partition, h.tests[2].partition) == trivial);
    // ZZ and ZX share Z_A.
    CHECK(intersection_algebra(h.tests[0].partition, h.tests[1].partition).size() == 2);
}

TEST_CASE("intersection algebra matches the set-intersection oracle") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 80; ++trial) {
        std::size_t n = 2 + trial % 15;
        Partition p = random_partition(rng, n, 5);
        Partition q = random_partition(rng, n, 5);
        Partition got = intersection_algebra(p, q);

        // Oracle: events lying in both algebras, then their minimal
        // nonempty members through each point.
        auto a1 = algebra_of(p), a2 = algebra_of(q);
        std::set<std::uint64_t> both;
        for (std::uint64_t e : a1)
            if (a2.count(e)) both.insert(e);
        std::vector<Event> atoms;
        std::uint64_t done = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((done >> i) & 1) continue;
            std::uint64_t m = Event::all(n).bits();
            for (std::uint64_t e : both)
                if ((e >> i) & 1) m &= e;
            atoms.emplace_back(m, n);
            done |= m;
        }
        CHECK(got == Partition(atoms));

        // Every output atom lies in both algebras.
        for (const Event& atom : got.atoms()) {
            CHECK(event_in_algebra(p, atom));
            CHECK(event_in_algebra(q, atom));
        }
    }
}

TEST_CASE("partial distribution validation") {
    Partition p({Event::of(2, {0}), Event::of(2, {1})});
    CHECK_THROWS_AS(PartialDistribution<Rat>("t", p, {Rat(1)}), SpaceError);
    CHECK_THROWS_AS(PartialDistribution<Rat>("t", p, {Rat(-1, 2), Rat(3, 2)}), SpaceError);
    CHECK_THROWS_AS(PartialDistribution<Rat>("t", p, {Rat(1, 2), Rat(1, 3)}), SpaceError);
    PartialDistribution<Rat> d("t", p, {Rat(1, 3), Rat(2, 3)});
    CHECK(d.prob_of(Event::of(2, {0})) == Rat(1, 3));
    CHECK(d.prob_of(Event::all(2)) == Rat(1));
    CHECK(d.prob_of(Event::none(2)) == Rat(0));
    CHECK(d.prob_of(Event::of(2, {})) == Rat(0));
    CHECK_THROWS_AS(d.prob_of(Event::of(3, {0})), SpaceError);  // wrong-size event
}

TEST_CASE("partial distribution over the float field tolerates rounding") {
    Partition p({Event::of(2, {0}), Event::of(2, {1})});
    PartialDistribution<Fl> d("t", p, {Fl(0.3), Fl(0.7 + 1e-12)});
    CHECK(d.prob_of(Event::of(2, {1})) == Fl(0.7));
    CHECK_THROWS_AS(PartialDistribution<Fl>("t", p, {Fl(0.3), Fl(0.6)}), SpaceError);
}

TEST_CASE("observation space validation") {
    SampleSpace s({"a", "b"});
    Partition p({Event::of(2, {0}), Event::of(2, {1})});
    PartialDistribution<Rat> d("t", p, {Rat(1, 2), Rat(1, 2)});
    CHECK_THROWS_AS(ObservationSpace<Rat>(s, {d, d}), SpaceError);  // duplicate name
    Partition wrong({Event::of(3, {0}), Event::of(3, {1, 2})});
    PartialDistribution<Rat> dw("u", wrong, {Rat(1, 2), Rat(1, 2)});
    CHECK_THROWS_AS(ObservationSpace<Rat>(s, {dw}), SpaceError);
}

TEST_CASE("built-in spaces are consistent") {
    CHECK(check_consistency(piponi_space()).consistent());
    CHECK(check_consistency(feynman2_space(Rat(1), Rat(0))).consistent());
    CHECK(check_consistency(feynman2_space(Rat(3, 5), Rat(4, 5))).consistent());
    CHECK(check_consistency(feynman3_space(Rat(1, 3), Rat(2, 3), Rat(2, 3))).consistent());
    CHECK(check_consistency(schneider_space()).consistent());
    CHECK(check_consistency(hardy_space()).consistent());
}

TEST_CASE("perturbing one pair test breaks consistency where the tests overlap") {
    auto sp = schneider_space();
    Quad quarter(Rat(1, 4));
    Quad eighth_r2(Rat(0), Rat(1, 8), 2);
    // Shift sqrt(2)/8 of mass between the two first-photon-minus atoms of AC;
    // AB vs AC still agree on the first photon, AC vs BC no longer agree on
    // the second.
    std::vector<Quad> probs{quarter, quarter, quarter + eighth_r2, quarter - eighth_r2};
    PartialDistribution<Quad> ac("AC", sp.tests[2].partition, probs);
    ObservationSpace<Quad> bad(sp.points, {sp.tests[0], sp.tests[1], ac});
    auto report = check_consistency(bad);
    REQUIRE(report.violations.size() == 2);
    for (const auto& v : report.violations) {
        CHECK(v.test_i == 1);  // BC
        CHECK(v.test_j == 2);  // AC
        CHECK(abs(v.value_i - v.value_j) == eighth_r2);
    }
    CHECK(report.violations[0].atom == Event::of(8, {0, 2, 4, 6}));
    CHECK(report.violations[0].value_i == Quad(Rat(1, 2)));
    CHECK(report.violations[0].value_j == Quad(Rat(1, 2)) + eighth_r2);
}

TEST_CASE("common refinement of the built-in spaces") {
    auto pip = piponi_space();
    Partition r = common_refinement(pip);
    REQUIRE(r.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(r.atom(i) == Event::of(4, {i}));

    CHECK(common_refinement(hardy_space()).size() == 16);
    CHECK(common_refinement(schneider_space()).size() == 8);

    // A single test refines to itself.
    SampleSpace s({"a", "b", "c"});
    Partition p({Event::of(3, {0, 2}), Event::of(3, {1})});
    ObservationSpace<Rat> one(s, {PartialDistribution<Rat>("t", p, {Rat(1, 2), Rat(1, 2)})});
    CHECK(common_refinement(one) == p);
}

TEST_CASE("common refinement is order-invariant and canonical") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + trial % 12;
        std::vector<Partition> parts;
        for (int k = 0; k < 3; ++k) parts.push_back(random_partition(rng, n, 3));
        Partition a = common_refinement_of(parts, n);
        std::reverse(parts.begin(), parts.end());
        Partition b = common_refinement_of(parts, n);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.atom(k) == b.atom(k));
        // Each refinement atom sits inside one atom of every partition.
        for (const Partition& p : parts)
            for (const Event& atom : a.atoms())
                CHECK(atom.subset_of(p.atom(p.atom_of(atom.indices()[0]))));
    }
}

TEST_CASE("qubit expectations from exact amplitudes") {
    auto e = qubit_expectations(Rat(1), Rat(0), Rat(0), Rat(0));
    CHECK(e.z == Rat(1));
    CHECK(e.x == Rat(0));
    CHECK(e.y == Rat(0));
    e = qubit_expectations(Rat(3, 5), Rat(0), Rat(4, 5), Rat(0));
    CHECK(e.z == Rat(-7, 25));
    CHECK(e.x == Rat(24, 25));
    CHECK(e.y == Rat(0));
    e = qubit_expectations(Rat(3, 5), Rat(0), Rat(0), Rat(4, 5));
    CHECK(e.y == Rat(24, 25));
    CHECK(e.x == Rat(0));
    CHECK_THROWS_AS(qubit_expectations(Rat(1), Rat(0), Rat(1), Rat(0)), SpaceError);
}

TEST_CASE("hardy swap permutation is an involution exchanging the qubits") {
    auto perm = hardy_swap_permutation();
    for (std::size_t i = 0; i < 16; ++i) CHECK(perm[perm[i]] == i);
    CHECK(perm[0b0001] == 0b0100);
    CHECK(perm[0b0011] == 0b1100);
    CHECK(perm[0b0110] == 0b1001);
    CHECK(perm[0b1011] == 0b1110);
}
