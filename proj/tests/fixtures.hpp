#pragma once

// Shared builders for the test suite: the three-row logistics model used
// throughout, its workload, small random models for property tests, and a
// canonical structural dump for equality checks.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "denorm/denorm.hpp"

namespace denorm_test {

inline denorm::Row make_row(const std::string& name, int order,
                            const std::vector<std::pair<std::string, double>>& keys) {
    denorm::Row row;
    row.origin = name;
    row.origin_order = order;
    row.primary_key = keys.front().first;
    int pos = 0;
    for (const auto& [key_name, bytes] : keys) {
        denorm::KeyValue k;
        k.name = key_name;
        k.size_bytes = bytes;
        if (key_name != row.primary_key) k.origin_pos = ++pos;
        row.keys.push_back(std::move(k));
    }
    row.origin_key_count = pos;
    return row;
}

// W(w_ID,w_name,w_city), C(c_ID,balance,c_last,w_c_ID), O(o_ID,c_o_ID,o_carrier_id)
// with O->C (x2) and C->W (x30000). Mirrors data/tpcc.json.
inline denorm::DataModel tpcc_root() {
    denorm::DataModel m;
    m.name = "M0";
    m.concepts.push_back(
        {"Warehouse", {make_row("W", 1, {{"w_ID", 8}, {"w_name", 32}, {"w_city", 24}})}});
    m.concepts.push_back(
        {"Customer",
         {make_row("C", 2, {{"c_ID", 8}, {"balance", 8}, {"c_last", 32}, {"w_c_ID", 8}})}});
    m.concepts.push_back(
        {"Order", {make_row("O", 3, {{"o_ID", 8}, {"c_o_ID", 8}, {"o_carrier_id", 8}})}});
    m.references.push_back({"O", "c_o_ID", "C", "c_ID", 2});
    m.references.push_back({"C", "w_c_ID", "W", "w_ID", 30000});
    return m;
}

inline denorm::Statistics tpcc_stats() {
    denorm::Statistics s;
    const denorm::DataModel root = tpcc_root();
    for (const denorm::Row* row : root.top_level_rows())
        for (const auto& k : row->keys) s.profile.key_size[k.name] = k.size_bytes;
    s.profile.row_count_per_scale = {{"W", 1}, {"C", 30000}, {"O", 60000}};
    s.selectivity = {{"balance", 1e-4},
                     {"c_last", 1e-4},
                     {"w_city", 1e-2},
                     {"o_ID", 1.6666666666666667e-5}};
    s.indexed_keys = {"o_ID", "c_ID", "w_ID", "balance", "c_o_ID", "w_c_ID"};
    return s;
}

inline denorm::Query make_query(std::string id, std::vector<std::string> filter,
                                std::vector<std::string> projection,
                                std::vector<std::string> join, std::vector<std::string> sharding,
                                double occurrences, double latency) {
    denorm::Query q;
    q.id = std::move(id);
    q.filter_keys = std::move(filter);
    q.projection_keys = std::move(projection);
    q.join_keys = std::move(join);
    q.sharded_keys = std::move(sharding);
    q.occurrences = occurrences;
    q.latency_bound = latency;
    q.message_bytes = 2048;
    return q;
}

inline std::vector<denorm::Query> tpcc_queries() {
    return {
        make_query("Q1", {"balance"}, {"c_last"}, {}, {}, 500, 1e-1),
        make_query("Q2", {"o_ID"}, {"o_carrier_id"}, {}, {}, 1000, 1e1),
        make_query("Q3", {"w_city"}, {"w_name"}, {}, {"w_city"}, 100, 1e0),
        make_query("Q4", {"c_last"}, {"c_last", "o_carrier_id"}, {"c_ID", "c_o_ID"}, {"c_last"},
                   50, 1e-1),
        make_query("Q5", {"c_last", "w_city"}, {"balance", "w_name", "o_carrier_id"},
                   {"c_ID", "c_o_ID", "w_ID", "w_c_ID"}, {"w_city", "c_last"}, 10, 1e1),
    };
}

// ---------------------------------------------------------------------------
// Canonical structural dump: name-independent equality for round-trip tests.

inline void dump_row(const denorm::Row& row, std::ostringstream& out) {
    out << row.origin << '/' << row.split_index << "(pk=" << row.primary_key;
    std::vector<std::string> atomics;
    std::vector<const denorm::KeyValue*> complexes;
    for (const auto& k : row.keys) {
        if (k.is_complex())
            complexes.push_back(&k);
        else if (k.name != row.primary_key) {
            std::ostringstream a;
            a << k.name << ':' << k.size_bytes << ':' << k.origin_pos;
            atomics.push_back(a.str());
        }
    }
    std::sort(atomics.begin(), atomics.end());
    for (const auto& a : atomics) out << ',' << a;
    std::sort(complexes.begin(), complexes.end(),
              [](const denorm::KeyValue* a, const denorm::KeyValue* b) { return a->name < b->name; });
    for (const auto* c : complexes) {
        out << ",[" << (c->multiplicity == denorm::Multiplicity::OneToMany ? "many:" : "one:")
            << c->avg_count << ' ';
        dump_row(*c->nested, out);
        out << ']';
    }
    out << ')';
}

inline std::string structural_dump(const denorm::DataModel& model) {
    std::vector<const denorm::Row*> rows = model.top_level_rows();
    std::sort(rows.begin(), rows.end(), [](const denorm::Row* a, const denorm::Row* b) {
        if (a->origin != b->origin) return a->origin < b->origin;
        return a->split_index < b->split_index;
    });
    std::ostringstream out;
    for (const denorm::Row* r : rows) {
        dump_row(*r, out);
        out << ';';
    }
    std::vector<std::string> refs;
    for (const auto& ref : model.references) {
        std::ostringstream r;
        r << ref.source_row << '.' << ref.source_key << "->" << ref.target_row << '.'
          << ref.target_key << 'x' << ref.cardinality;
        refs.push_back(r.str());
    }
    std::sort(refs.begin(), refs.end());
    for (const auto& r : refs) out << r << ';';
    return out.str();
}

// ---------------------------------------------------------------------------
// Random small models for property tests.

struct RandomModel {
    denorm::DataModel model;
    denorm::Statistics stats;
};

inline RandomModel random_root(std::mt19937& rng) {
    std::uniform_int_distribution<int> n_concepts(2, 4);
    std::uniform_int_distribution<int> n_keys(1, 4);
    std::uniform_int_distribution<int> key_bytes(4, 64);

    RandomModel out;
    const int concepts = n_concepts(rng);
    for (int c = 0; c < concepts; ++c) {
        std::string base = "R" + std::to_string(c);
        std::vector<std::pair<std::string, double>> keys{{base + "_id", 8.0}};
        const int attrs = n_keys(rng);
        for (int k = 0; k < attrs; ++k)
            keys.emplace_back(base + "_k" + std::to_string(k), static_cast<double>(key_bytes(rng)));
        out.model.concepts.push_back({"Concept" + std::to_string(c), {make_row(base, c + 1, keys)}});
        out.stats.profile.row_count_per_scale[base] = 100.0 * (c + 1);
    }
    // A few references: an attribute of one row pointing at another row's pk.
    std::uniform_int_distribution<int> n_refs(0, concepts - 1);
    std::uniform_int_distribution<int> pick(0, concepts - 1);
    const int refs = n_refs(rng);
    for (int i = 0; i < refs; ++i) {
        int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        const denorm::Row& src = out.model.concepts[static_cast<std::size_t>(a)].rows[0];
        auto attrs = src.attribute_keys();
        if (attrs.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick_key(0, attrs.size() - 1);
        const std::string skey = attrs[pick_key(rng)]->name;
        const denorm::Row& tgt = out.model.concepts[static_cast<std::size_t>(b)].rows[0];
        bool dup = false;
        for (const auto& r : out.model.references)
            if (r.source_row == src.name() && r.source_key == skey) dup = true;
        if (!dup)
            out.model.references.push_back({src.name(), skey, tgt.name(), tgt.primary_key, 2.0});
    }
    for (const denorm::Row* row : out.model.top_level_rows())
        for (const auto& k : row->keys) out.stats.profile.key_size[k.name] = k.size_bytes;
    return out;
}

} // namespace denorm_test
