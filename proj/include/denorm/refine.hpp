#pragma once

/*
 * Merge and split refinements, with their inverses.
 *
 * merge(m, ref, dir) turns a reference between two top-level rows into a
 * nesting: one row becomes a complex value of the other, the reference and
 * its referencing key disappear. Nesting the reference source under the
 * target yields a OneToMany value (one target owns `cardinality` sources);
 * nesting the target under the source yields a OneToOne value duplicated per
 * source instance. Both are undone by merge_inverse.
 *
 * split(m, row, key) divides a row into a remainder and a (pk, key) fragment
 * sharing the primary key. Fragments of one origin row are numbered densely
 * by the lowest attribute position they carry, which keeps Table-style names
 * (C1, C2, ...) stable and canonical. References follow the fragment that
 * holds their key; references anchored on the shared primary key stay with
 * the remainder fragment.
 */

#include <climits>
#include <string>
#include <vector>

#include "denorm/model.hpp"
#include "denorm/signature.hpp"

namespace denorm {

enum class MergeDirection { NestSourceIntoTarget, NestTargetIntoSource };

namespace detail {

struct RowLocation {
    std::size_t concept_idx = 0;
    std::size_t row_idx = 0;
    bool found = false;
};

inline RowLocation locate_top_level(const DataModel& model, const std::string& row_name) {
    for (std::size_t c = 0; c < model.concepts.size(); ++c)
        for (std::size_t r = 0; r < model.concepts[c].rows.size(); ++r)
            if (model.concepts[c].rows[r].name() == row_name) return {c, r, true};
    return {};
}

inline bool contains_row_named(const Row& row, const std::string& row_name) {
    if (row.name() == row_name) return true;
    for (const auto& k : row.keys)
        if (k.is_complex() && contains_row_named(*k.nested, row_name)) return true;
    return false;
}

inline Row remove_key(const Row& row, const std::string& key_name) {
    Row out = row;
    out.keys.clear();
    for (const auto& k : row.keys)
        if (k.name != key_name) out.keys.push_back(k);
    return out;
}

// Insert an atomic key at its declaration position among the row's atomic
// attributes (primary key first, complex values last).
inline Row insert_attribute(const Row& row, const KeyValue& key) {
    Row out = row;
    out.keys.clear();
    bool placed = false;
    for (const auto& k : row.keys) {
        bool after = k.is_complex() ||
                     (k.name != row.primary_key && k.origin_pos > key.origin_pos);
        if (!placed && after) {
            out.keys.push_back(key);
            placed = true;
        }
        out.keys.push_back(k);
    }
    if (!placed) out.keys.push_back(key);
    return out;
}

inline void drop_row(DataModel& model, const std::string& row_name) {
    for (auto c = model.concepts.begin(); c != model.concepts.end(); ++c) {
        for (auto r = c->rows.begin(); r != c->rows.end(); ++r) {
            if (r->name() == row_name) {
                c->rows.erase(r);
                if (c->rows.empty()) model.concepts.erase(c);
                return;
            }
        }
    }
}

inline int min_origin_position(const Row& row) {
    std::set<int> positions = origin_positions(row);
    return positions.empty() ? INT_MAX : *positions.begin();
}

// Renumber the top-level fragments of one origin densely by lowest carried
// attribute position. Returns old-name -> new-name for every renamed row and
// rewrites references accordingly.
inline void renumber_fragments(DataModel& model, const std::string& origin) {
    std::vector<Row*> fragments;
    for (auto& c : model.concepts)
        for (auto& r : c.rows)
            if (r.origin == origin) fragments.push_back(&r);
    if (fragments.empty()) return;

    std::map<std::string, std::string> rename;
    if (fragments.size() == 1 &&
        static_cast<int>(origin_positions(*fragments[0]).size()) == fragments[0]->origin_key_count) {
        std::string before = fragments[0]->name();
        fragments[0]->split_index = 0;
        if (before != fragments[0]->name()) rename[before] = fragments[0]->name();
    } else {
        std::sort(fragments.begin(), fragments.end(), [](const Row* a, const Row* b) {
            return min_origin_position(*a) < min_origin_position(*b);
        });
        int index = 1;
        for (Row* f : fragments) {
            std::string before = f->name();
            f->split_index = index++;
            if (before != f->name()) rename[before] = f->name();
        }
    }
    for (auto& ref : model.references) {
        auto s = rename.find(ref.source_row);
        if (s != rename.end()) ref.source_row = s->second;
        auto t = rename.find(ref.target_row);
        if (t != rename.end()) ref.target_row = t->second;
    }
}

} // namespace detail

// ---------------------------------------------------------------------------

inline DataModel merge(const DataModel& model, const Reference& ref, MergeDirection direction) {
    std::size_t ref_idx = model.references.size();
    for (std::size_t i = 0; i < model.references.size(); ++i)
        if (model.references[i].same_endpoints(ref)) { ref_idx = i; break; }
    if (ref_idx == model.references.size())
        throw ModelError("merge: reference " + ref.source_row + "->" + ref.target_row +
                         " is not part of the model");
    const Reference live = model.references[ref_idx];

    auto src_loc = detail::locate_top_level(model, live.source_row);
    auto tgt_loc = detail::locate_top_level(model, live.target_row);
    if (!src_loc.found)
        throw ModelError("merge: source row '" + live.source_row + "' is not a top-level row");
    if (!tgt_loc.found)
        throw ModelError("merge: target row '" + live.target_row + "' is not a top-level row");

    const Row& source = model.concepts[src_loc.concept_idx].rows[src_loc.row_idx];
    const Row& target = model.concepts[tgt_loc.concept_idx].rows[tgt_loc.row_idx];
    const KeyValue* ref_key = source.find_key(live.source_key);
    if (!ref_key || ref_key->is_complex())
        throw ModelError("merge: referencing key '" + live.source_key + "' missing on source row");

    MergeRecord record;
    record.source_row = source.name();
    record.target_row = target.name();
    record.source_key = live.source_key;
    record.source_key_bytes = ref_key->size_bytes;
    record.source_key_pos = ref_key->origin_pos;
    record.target_key = live.target_key;
    record.cardinality = live.cardinality;
    record.target_nested = direction == MergeDirection::NestTargetIntoSource;

    Row host;
    Row nested;
    if (direction == MergeDirection::NestSourceIntoTarget) {
        host = target;
        nested = detail::remove_key(source, live.source_key);
        record.nested_concept = model.concepts[src_loc.concept_idx].name;
    } else {
        host = detail::remove_key(source, live.source_key);
        nested = target;
        record.nested_concept = model.concepts[tgt_loc.concept_idx].name;
    }
    if (detail::contains_row_named(nested, host.name()))
        throw ModelError("merge: nesting '" + nested.name() + "' under '" + host.name() +
                         "' would create cyclic nesting");
    if (host.find_key(nested.name()))
        throw ModelError("merge: host row already has a key named '" + nested.name() + "'");

    KeyValue complex_key;
    complex_key.name = nested.name();
    complex_key.nested = std::make_shared<const Row>(nested);
    complex_key.multiplicity = direction == MergeDirection::NestSourceIntoTarget
                                   ? Multiplicity::OneToMany
                                   : Multiplicity::OneToOne;
    complex_key.avg_count = direction == MergeDirection::NestSourceIntoTarget ? live.cardinality : 1.0;
    complex_key.merge = record;
    host.keys.push_back(complex_key);

    DataModel out = model;
    out.references.erase(out.references.begin() + static_cast<std::ptrdiff_t>(ref_idx));
    const std::string nested_name = nested.name();
    const std::string host_name = host.name();
    detail::drop_row(out, nested_name);
    auto host_loc = detail::locate_top_level(out, host_name);
    out.concepts[host_loc.concept_idx].rows[host_loc.row_idx] = host;
    return out;
}

inline DataModel merge_inverse(const DataModel& model, const std::string& host_row,
                               const std::string& nested_key) {
    auto host_loc = detail::locate_top_level(model, host_row);
    if (!host_loc.found)
        throw ModelError("merge_inverse: row '" + host_row + "' is not a top-level row");
    const Row& host = model.concepts[host_loc.concept_idx].rows[host_loc.row_idx];
    const KeyValue* key = host.find_key(nested_key);
    if (!key)
        throw ModelError("merge_inverse: key '" + nested_key + "' missing on '" + host_row + "'");
    if (!key->is_complex() || !key->merge)
        throw ModelError("merge_inverse: key '" + nested_key + "' is not a merge product");

    const MergeRecord rec = *key->merge;
    KeyValue restored;
    restored.name = rec.source_key;
    restored.size_bytes = rec.source_key_bytes;
    restored.origin_pos = rec.source_key_pos;

    Row stripped = detail::remove_key(host, nested_key);
    Row lifted = *key->nested;
    if (rec.target_nested)
        stripped = detail::insert_attribute(stripped, restored);  // host was the source
    else
        lifted = detail::insert_attribute(lifted, restored);      // lifted row is the source

    DataModel out = model;
    out.concepts[host_loc.concept_idx].rows[host_loc.row_idx] = stripped;
    bool placed = false;
    for (auto& c : out.concepts)
        if (c.name == rec.nested_concept) {
            c.rows.push_back(lifted);
            placed = true;
            break;
        }
    if (!placed) out.concepts.push_back({rec.nested_concept, {lifted}});

    Reference ref;
    ref.source_row = rec.source_row;
    ref.source_key = rec.source_key;
    ref.target_row = rec.target_row;
    ref.target_key = rec.target_key;
    ref.cardinality = rec.cardinality;
    out.references.push_back(ref);
    return out;
}

// ---------------------------------------------------------------------------

inline DataModel split(const DataModel& model, const std::string& row_name,
                       const std::string& key_name) {
    auto loc = detail::locate_top_level(model, row_name);
    if (!loc.found)
        throw ModelError("split: row '" + row_name + "' is not a top-level row");
    const Row& row = model.concepts[loc.concept_idx].rows[loc.row_idx];
    const KeyValue* key = row.find_key(key_name);
    if (!key)
        throw ModelError("split: key '" + key_name + "' missing on '" + row_name + "'");
    if (key_name == row.primary_key)
        throw ModelError("split: key '" + key_name + "' is the primary key");
    if (key->is_complex())
        throw ModelError("split: key '" + key_name + "' is a complex value");

    const KeyValue* pk = row.find_key(row.primary_key);

    Row remainder = detail::remove_key(row, key_name);
    Row carved;
    carved.origin = row.origin;
    carved.origin_order = row.origin_order;
    carved.origin_key_count = row.origin_key_count;
    carved.primary_key = row.primary_key;
    carved.keys = {*pk, *key};

    // Anchor rule: references on the carved key follow the carved fragment;
    // everything else, the shared primary key included, stays with the
    // remainder.
    DataModel out = model;
    out.concepts[loc.concept_idx].rows[loc.row_idx] = remainder;
    out.concepts[loc.concept_idx].rows.insert(
        out.concepts[loc.concept_idx].rows.begin() + static_cast<std::ptrdiff_t>(loc.row_idx) + 1,
        carved);

    // Temporary distinct names so the rename pass can tell the two apart.
    Row& rem_ref = out.concepts[loc.concept_idx].rows[loc.row_idx];
    Row& carved_ref = out.concepts[loc.concept_idx].rows[loc.row_idx + 1];
    rem_ref.split_index = 1000000;
    carved_ref.split_index = 1000001;
    const std::string rem_tmp = rem_ref.name();
    const std::string carved_tmp = carved_ref.name();

    for (auto& ref : out.references) {
        if (ref.source_row == row_name)
            ref.source_row = ref.source_key == key_name ? carved_tmp : rem_tmp;
        if (ref.target_row == row_name)
            ref.target_row = ref.target_key == key_name ? carved_tmp : rem_tmp;
    }
    detail::renumber_fragments(out, row.origin);
    return out;
}

inline DataModel split_inverse(const DataModel& model, const std::string& row_a,
                               const std::string& row_b) {
    auto loc_a = detail::locate_top_level(model, row_a);
    auto loc_b = detail::locate_top_level(model, row_b);
    if (!loc_a.found || !loc_b.found)
        throw ModelError("split_inverse: both rows must be top-level");
    const Row& a = model.concepts[loc_a.concept_idx].rows[loc_a.row_idx];
    const Row& b = model.concepts[loc_b.concept_idx].rows[loc_b.row_idx];
    if (a.origin != b.origin || a.primary_key != b.primary_key)
        throw ModelError("split_inverse: rows '" + row_a + "' and '" + row_b +
                         "' do not share lineage");
    if (&a == &b) throw ModelError("split_inverse: rows coincide");

    Row merged = a;
    for (const auto& k : b.keys) {
        if (k.name == b.primary_key) continue;
        if (merged.find_key(k.name))
            throw ModelError("split_inverse: fragments overlap on key '" + k.name + "'");
        if (k.is_complex())
            merged.keys.push_back(k);
        else
            merged = detail::insert_attribute(merged, k);
    }

    DataModel out = model;
    detail::drop_row(out, row_b);
    auto loc = detail::locate_top_level(out, row_a);
    out.concepts[loc.concept_idx].rows[loc.row_idx] = merged;
    Row& merged_ref = out.concepts[loc.concept_idx].rows[loc.row_idx];
    merged_ref.split_index = 1000000;
    const std::string tmp = merged_ref.name();

    for (auto& ref : out.references) {
        if (ref.source_row == row_a || ref.source_row == row_b) ref.source_row = tmp;
        if (ref.target_row == row_a || ref.target_row == row_b) ref.target_row = tmp;
    }
    detail::renumber_fragments(out, merged_ref.origin);
    return out;
}

} // namespace denorm
