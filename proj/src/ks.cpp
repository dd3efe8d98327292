#include <obspace/ks.hpp>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace obspace {

MeasurementFrame::MeasurementFrame(std::vector<std::vector<std::string>> bases_)
    : bases(std::move(bases_)) {
    if (bases.empty()) throw FrameError("frame needs at least one basis");
    const std::size_t dim = bases[0].size();
    if (dim == 0) throw FrameError("bases must be nonempty");
    std::map<std::string, std::size_t> seen;
    for (const auto& basis : bases) {
        if (basis.size() != dim) throw FrameError("all bases must have the same size");
        std::map<std::string, bool> local;
        for (const auto& id : basis) {
            if (id.empty()) throw FrameError("vector ids must be nonempty");
            if (local.count(id)) throw FrameError("basis repeats vector id '" + id + "'");
            local[id] = true;
            if (!seen.count(id)) {
                seen[id] = vector_ids.size();
                vector_ids.push_back(id);
            }
        }
    }
}

namespace {

enum class Mark { unknown, in, out };

struct Search {
    const std::vector<std::vector<std::size_t>>& basis_members;
    const std::vector<std::vector<std::size_t>>& bases_of;
    std::vector<Mark> state;
    std::vector<std::size_t> chosen;  // basis -> vector, npos when open
    std::vector<std::size_t> candidates;
    std::vector<std::size_t> mark_trail;
    std::vector<std::size_t> choose_trail;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Search(const std::vector<std::vector<std::size_t>>& members,
           const std::vector<std::vector<std::size_t>>& incidences, std::size_t vectors)
        : basis_members(members), bases_of(incidences), state(vectors, Mark::unknown),
          chosen(members.size(), npos) {
        for (const auto& b : basis_members) candidates.push_back(b.size());
    }

    bool set_in(std::size_t v) {
        if (state[v] == Mark::out) return false;
        if (state[v] == Mark::in) return true;
        state[v] = Mark::in;
        mark_trail.push_back(v);
        for (std::size_t b : bases_of[v]) {
            if (chosen[b] == v) continue;
            if (chosen[b] != npos) return false;
            chosen[b] = v;
            choose_trail.push_back(b);
            for (std::size_t u : basis_members[b])
                if (u != v && !set_out(u)) return false;
        }
        return true;
    }

    bool set_out(std::size_t v) {
        if (state[v] == Mark::in) return false;
        if (state[v] == Mark::out) return true;
        state[v] = Mark::out;
        mark_trail.push_back(v);
        for (std::size_t b : bases_of[v]) {
            --candidates[b];
            if (chosen[b] != npos) continue;
            if (candidates[b] == 0) return false;
            if (candidates[b] == 1) {
                // The counter may lag behind markings mid-cascade, so the
                // scan over the members is what decides.
                std::size_t unit = npos;
                for (std::size_t u : basis_members[b])
                    if (state[u] != Mark::out) unit = u;
                if (unit == npos || !set_in(unit)) return false;
            }
        }
        return true;
    }

    struct Checkpoint {
        std::size_t marks, choices;
    };
    Checkpoint checkpoint() const { return {mark_trail.size(), choose_trail.size()}; }

    void rewind(Checkpoint cp) {
        while (mark_trail.size() > cp.marks) {
            std::size_t v = mark_trail.back();
            mark_trail.pop_back();
            if (state[v] == Mark::out)
                for (std::size_t b : bases_of[v]) ++candidates[b];
            state[v] = Mark::unknown;
        }
        while (choose_trail.size() > cp.choices) {
            chosen[choose_trail.back()] = npos;
            choose_trail.pop_back();
        }
    }

    bool run(const std::vector<std::size_t>& order, std::size_t k) {
        if (k == order.size()) return true;
        std::size_t b = order[k];
        if (chosen[b] != npos) return run(order, k + 1);
        for (std::size_t v : basis_members[b]) {
            if (state[v] == Mark::out) continue;
            Checkpoint cp = checkpoint();
            if (set_in(v) && run(order, k + 1)) return true;
            rewind(cp);
        }
        return false;
    }
};

}  // namespace

std::optional<Selection> rigid_selection_search(const MeasurementFrame& frame) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < frame.vector_ids.size(); ++i) index[frame.vector_ids[i]] = i;
    std::vector<std::vector<std::size_t>> members(frame.bases.size());
    std::vector<std::vector<std::size_t>> bases_of(frame.vector_ids.size());
    for (std::size_t b = 0; b < frame.bases.size(); ++b)
        for (const auto& id : frame.bases[b]) {
            std::size_t v = index.at(id);
            members[b].push_back(v);
            bases_of[v].push_back(b);
        }
    // Explore the most entangled bases first: high total sharing narrows
    // the remaining choices fastest.
    std::vector<std::size_t> order(frame.bases.size());
    std::iota(order.begin(), order.end(), 0);
    auto degree = [&](std::size_t b) {
        std::size_t d = 0;
        for (std::size_t v : members[b]) d += bases_of[v].size() - 1;
        return d;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return degree(a) > degree(b); });

    Search search(members, bases_of, frame.vector_ids.size());
    if (!search.run(order, 0)) return std::nullopt;
    Selection sel;
    for (std::size_t b = 0; b < frame.bases.size(); ++b)
        sel.chosen.push_back(frame.vector_ids[search.chosen[b]]);
    return sel;
}

std::optional<ParityWitness> parity_obstruction(const MeasurementFrame& frame) {
    std::map<std::string, std::size_t> count;
    for (const auto& basis : frame.bases)
        for (const auto& id : basis) ++count[id];
    for (const auto& [id, c] : count)
        if (c != 2) return std::nullopt;
    if (frame.bases.size() % 2 == 0) return std::nullopt;
    return ParityWitness{frame.bases.size(), 2, frame.vector_ids.size()};
}

MeasurementFrame cabello_frame() {
    return MeasurementFrame({
        {"0001", "0010", "1100", "1-100"},
        {"0001", "0100", "1010", "10-10"},
        {"1-11-1", "1-1-11", "1100", "0011"},
        {"1-11-1", "1111", "10-10", "010-1"},
        {"0010", "0100", "1001", "100-1"},
        {"1-1-11", "1111", "100-1", "01-10"},
        {"11-11", "111-1", "1-100", "0011"},
        {"11-11", "-1111", "1010", "010-1"},
        {"111-1", "-1111", "1001", "01-10"},
    });
}

MeasurementFrame frame_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FrameError(std::string("invalid frame JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("bases") || !doc["bases"].is_array())
        throw FrameError("frame JSON must be an object with a \"bases\" array");
    std::vector<std::vector<std::string>> bases;
    for (const auto& basis : doc["bases"]) {
        if (!basis.is_array()) throw FrameError("each basis must be an array of ids");
        std::vector<std::string> ids;
        for (const auto& id : basis) {
            if (!id.is_string()) throw FrameError("vector ids must be strings");
            ids.push_back(id.get<std::string>());
        }
        bases.push_back(std::move(ids));
    }
    return MeasurementFrame(std::move(bases));
}

}  // namespace obspace
