// Shadow-link presentations: c building blocks with six component slots each,
// per-component framings p_i and mutation sums iota_i, plus the optional
// change-of-pair data (partition I, new framings q_i, signature sigma).
// JSON schema (ids 1-based, unknown keys rejected):
//   { "name": str, "c": int, "blocks": [[id x 6], ...],
//     "components": [{"id": int, "p": int, "iota": int}, ...],
//     "cop": {"I": [ids], "q": {"id": int}, "sigma": int}? }
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtopo/qcore.hpp"

namespace qtopo {

struct component_info {
    int id = 0;
    long p = 0;     // framing
    long iota = 0;  // mutation sum
};

struct change_of_pair {
    std::vector<int> I;          // 1-based component ids, sorted
    std::map<int, long> q;       // framing on each new component, keys = I
    long sigma = 0;              // user-supplied linking signature
};

struct fsl_presentation {
    std::string name;
    int c = 0;
    std::vector<std::array<int, 6>> blocks;  // component id per slot
    std::vector<component_info> components;  // indexed by position; ids 1..n
    std::optional<change_of_pair> cop;

    int n_components() const { return int(components.size()); }

    const component_info& component(int id) const {
        for (const auto& ci : components)
            if (ci.id == id) return ci;
        throw bad_input("unknown component id " + std::to_string(id));
    }

    void validate() const {
        if (c < 1 || int(blocks.size()) != c)
            throw bad_input("presentation: c must be >= 1 and match the number of blocks");
        if (components.empty())
            throw bad_input("presentation: at least one component required");
        std::set<int> ids;
        for (const auto& ci : components) {
            if (ci.id < 1) throw bad_input("presentation: component ids are 1-based");
            if (!ids.insert(ci.id).second)
                throw bad_input("presentation: duplicate component id " + std::to_string(ci.id));
        }
        std::set<int> used;
        for (const auto& b : blocks)
            for (int id : b) {
                if (!ids.count(id))
                    throw bad_input("presentation: slot refers to unknown component " + std::to_string(id));
                used.insert(id);
            }
        for (int id : ids)
            if (!used.count(id))
                throw bad_input("presentation: component " + std::to_string(id) + " appears in no slot");
        if (cop) {
            for (int id : cop->I)
                if (!ids.count(id))
                    throw bad_input("cop: unknown component id in I");
            std::set<int> iset(cop->I.begin(), cop->I.end());
            if (iset.size() != cop->I.size()) throw bad_input("cop: duplicate ids in I");
            for (const auto& [id, _] : cop->q)
                if (!iset.count(id)) throw bad_input("cop: q framing given for id not in I");
            for (int id : cop->I)
                if (!cop->q.count(id)) throw bad_input("cop: missing q framing for id in I");
        }
    }

    // Components whose slot multiset looks geometrically unrealizable
    // (odd number of slot occurrences).
    std::vector<int> lint_odd_slot_counts() const {
        std::map<int, int> cnt;
        for (const auto& b : blocks)
            for (int id : b) ++cnt[id];
        std::vector<int> odd;
        for (auto& [id, k] : cnt)
            if (k % 2) odd.push_back(id);
        return odd;
    }
};

// Per-block six-tuples induced by a coloring (one color per component).
template <class ColorMap>
std::vector<six_colors> expand_coloring(const fsl_presentation& pres, const ColorMap& color_of) {
    std::vector<six_colors> out;
    out.reserve(pres.blocks.size());
    for (const auto& b : pres.blocks) {
        six_colors sc;
        for (int s = 0; s < 6; ++s) sc[size_t(s)] = color_of(b[size_t(s)]);
        out.push_back(sc);
    }
    return out;
}

inline std::vector<six_colors> expand_coloring(const fsl_presentation& pres,
                                               const std::vector<long>& colors) {
    if (int(colors.size()) != pres.n_components())
        throw bad_input("expand_coloring: one color per component required");
    std::map<int, long> by_id;
    for (size_t i = 0; i < pres.components.size(); ++i)
        by_id[pres.components[i].id] = colors[i];
    return expand_coloring(pres, [&](int id) { return by_id.at(id); });
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw bad_input("unknown key \"" + it.key() + "\" in " + where);
    }
}

} // namespace detail

inline fsl_presentation parse_presentation(const nlohmann::json& j) {
    detail::reject_unknown_keys(j, {"name", "c", "blocks", "components", "cop"}, "presentation");
    fsl_presentation p;
    p.name = j.at("name").get<std::string>();
    p.c = j.at("c").get<int>();
    for (const auto& b : j.at("blocks")) {
        if (!b.is_array() || b.size() != 6)
            throw bad_input("presentation: each block needs exactly 6 slots");
        std::array<int, 6> slots;
        for (int s = 0; s < 6; ++s) slots[size_t(s)] = b.at(size_t(s)).get<int>();
        p.blocks.push_back(slots);
    }
    for (const auto& cj : j.at("components")) {
        detail::reject_unknown_keys(cj, {"id", "p", "iota"}, "components[]");
        component_info ci;
        ci.id = cj.at("id").get<int>();
        ci.p = cj.at("p").get<long>();
        ci.iota = cj.at("iota").get<long>();
        p.components.push_back(ci);
    }
    if (j.contains("cop")) {
        const auto& cj = j.at("cop");
        detail::reject_unknown_keys(cj, {"I", "q", "sigma"}, "cop");
        change_of_pair cop;
        for (const auto& id : cj.at("I")) cop.I.push_back(id.get<int>());
        std::sort(cop.I.begin(), cop.I.end());
        for (auto it = cj.at("q").begin(); it != cj.at("q").end(); ++it)
            cop.q[std::stoi(it.key())] = it.value().get<long>();
        cop.sigma = cj.value("sigma", 0L);
        p.cop = std::move(cop);
    }
    p.validate();
    return p;
}

inline fsl_presentation parse_presentation_text(const std::string& text) {
    return parse_presentation(nlohmann::json::parse(text));
}

inline nlohmann::json presentation_to_json(const fsl_presentation& p) {
    nlohmann::json j;
    j["name"] = p.name;
    j["c"] = p.c;
    for (const auto& b : p.blocks) j["blocks"].push_back(b);
    for (const auto& ci : p.components)
        j["components"].push_back({{"id", ci.id}, {"p", ci.p}, {"iota", ci.iota}});
    if (p.cop) {
        nlohmann::json cj;
        cj["I"] = p.cop->I;
        for (auto& [id, q] : p.cop->q) cj["q"][std::to_string(id)] = q;
        cj["sigma"] = p.cop->sigma;
        j["cop"] = cj;
    }
    return j;
}

// The abstract one-block test presentation (slots 1,2,3,1,2,3).
inline fsl_presentation test_presentation() {
    fsl_presentation p;
    p.name = "tetra1";
    p.c = 1;
    p.blocks.push_back({1, 2, 3, 1, 2, 3});
    p.components = {{1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
    change_of_pair cop;
    cop.I = {1};
    cop.q[1] = 0;
    cop.sigma = 0;
    p.cop = cop;
    return p;
}

} // namespace qtopo
