#pragma once

/*
 * Logical data model shared by the five storage families: concepts hold rows,
 * rows hold key values (atomic or complex), references link rows across
 * concepts. Models are immutable after construction; refinements build new
 * models. Nested rows are held through shared_ptr<const Row>, so copies are
 * cheap and concurrent reads need no synchronization.
 */

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace denorm {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Multiplicity { OneToOne, OneToMany };

struct Row;
using RowPtr = std::shared_ptr<const Row>;

// What a merge removed and replaced, kept on the complex key so the merge can
// be undone and so coverage checks can treat the materialized join key as
// satisfied by the host row.
struct MergeRecord {
    std::string source_row;        // display name of the referencing row at merge time
    std::string target_row;        // display name of the referenced row
    std::string source_key;        // referencing key removed by the merge
    double source_key_bytes = 0;
    int source_key_pos = 0;        // declaration position of the removed key in its origin row
    std::string target_key;
    double cardinality = 1.0;      // source instances per target instance
    bool target_nested = false;    // true: target row became the complex value of the source
    std::string nested_concept;    // concept the nested row lived in before the merge
};

struct KeyValue {
    std::string name;
    double size_bytes = 0;                 // atomic keys only
    int origin_pos = 0;                    // 1-based among the origin row's non-pk atomic keys; 0 for pk
    RowPtr nested;                         // set iff complex
    Multiplicity multiplicity = Multiplicity::OneToOne;
    double avg_count = 1.0;                // elements per parent for OneToMany
    std::optional<MergeRecord> merge;      // provenance, set iff complex

    bool is_complex() const { return nested != nullptr; }
};

struct Row {
    std::string origin;       // root row this one descends from
    int origin_order = 0;     // declaration position of the origin row in the root model
    int split_index = 0;      // 0 = carries the whole origin row; 1.. = fragment number
    int origin_key_count = 0; // non-pk atomic keys the origin row declared
    std::string primary_key;
    std::vector<KeyValue> keys;   // includes the primary key

    std::string name() const {
        return split_index == 0 ? origin : origin + std::to_string(split_index);
    }

    const KeyValue* find_key(const std::string& key_name) const {
        for (const auto& k : keys)
            if (k.name == key_name) return &k;
        return nullptr;
    }

    bool has_complex_keys() const {
        return std::any_of(keys.begin(), keys.end(),
                           [](const KeyValue& k) { return k.is_complex(); });
    }

    // Non-pk atomic keys, in declaration order.
    std::vector<const KeyValue*> attribute_keys() const {
        std::vector<const KeyValue*> out;
        for (const auto& k : keys)
            if (!k.is_complex() && k.name != primary_key) out.push_back(&k);
        return out;
    }
};

struct Concept {
    std::string name;
    std::vector<Row> rows;
};

struct Reference {
    std::string source_row;
    std::string source_key;
    std::string target_row;
    std::string target_key;
    double cardinality = 1.0;  // source instances per target instance

    bool same_endpoints(const Reference& o) const {
        return source_row == o.source_row && source_key == o.source_key &&
               target_row == o.target_row && target_key == o.target_key;
    }
};

// Carried for the graph family; never produced by the refinements here.
struct Edge {
    std::string source_concept;
    std::string target_concept;
};

struct DataModel {
    std::string name;
    std::vector<Concept> concepts;
    std::vector<Reference> references;
    std::vector<Edge> edges;

    std::vector<const Row*> top_level_rows() const {
        std::vector<const Row*> out;
        for (const auto& c : concepts)
            for (const auto& r : c.rows) out.push_back(&r);
        return out;
    }

    const Row* find_row(const std::string& row_name) const {
        for (const auto& c : concepts)
            for (const auto& r : c.rows)
                if (r.name() == row_name) return &r;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Key closure

namespace detail {

inline void collect_atomic_names(const Row& row, std::set<std::string>& out) {
    for (const auto& k : row.keys) {
        if (k.is_complex())
            collect_atomic_names(*k.nested, out);
        else
            out.insert(k.name);
    }
}

inline void collect_covered_names(const Row& row, std::set<std::string>& out) {
    for (const auto& k : row.keys) {
        if (k.is_complex()) {
            // The removed referencing key is materialized by the nesting.
            if (k.merge) out.insert(k.merge->source_key);
            collect_covered_names(*k.nested, out);
        } else {
            out.insert(k.name);
        }
    }
}

} // namespace detail

// Atomic key names physically present in the row, nested rows included.
inline std::set<std::string> atomic_closure(const Row& row) {
    std::set<std::string> out;
    detail::collect_atomic_names(row, out);
    return out;
}

// Key names the row can serve: physical keys plus join keys a merge removed.
inline std::set<std::string> covered_keys(const Row& row) {
    std::set<std::string> out;
    detail::collect_covered_names(row, out);
    return out;
}

// Declaration positions the row accounts for within its origin row: its own
// atomic attributes plus attributes a merge removed from it. Complete set ==
// the row carries the whole origin.
inline std::set<int> origin_positions(const Row& row) {
    std::set<int> out;
    for (const auto& k : row.keys) {
        if (k.is_complex()) {
            if (k.merge && k.merge->target_nested) out.insert(k.merge->source_key_pos);
        } else if (k.name != row.primary_key) {
            out.insert(k.origin_pos);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    std::string element;
    std::string message;
};

namespace detail {

inline void validate_row(const Row& row, std::vector<std::string> nesting_path,
                         std::vector<Violation>& out) {
    const std::string name = row.name();
    for (const auto& seen : nesting_path)
        if (seen == name) {
            out.push_back({name, "cyclic nesting: row is nested inside itself"});
            return;
        }
    nesting_path.push_back(name);

    std::set<std::string> key_names;
    for (const auto& k : row.keys) {
        if (!key_names.insert(k.name).second)
            out.push_back({name, "duplicate key name '" + k.name + "'"});
        if (k.is_complex()) {
            if (k.avg_count <= 0)
                out.push_back({name, "complex key '" + k.name + "' has non-positive multiplicity"});
            validate_row(*k.nested, nesting_path, out);
        } else if (k.size_bytes <= 0) {
            out.push_back({name, "atomic key '" + k.name + "' has non-positive size"});
        }
    }
    if (row.primary_key.empty()) {
        out.push_back({name, "no primary key designated"});
    } else {
        const KeyValue* pk = row.find_key(row.primary_key);
        if (!pk)
            out.push_back({name, "primary key '" + row.primary_key + "' not among keys"});
        else if (pk->is_complex())
            out.push_back({name, "primary key '" + row.primary_key + "' is not atomic"});
    }
}

inline void collect_row_names(const Row& row, std::vector<std::string>& out) {
    out.push_back(row.name());
    for (const auto& k : row.keys)
        if (k.is_complex()) collect_row_names(*k.nested, out);
}

// Locate a row anywhere in the model (top level or nested).
inline const Row* find_row_deep(const Row& row, const std::string& row_name) {
    if (row.name() == row_name) return &row;
    for (const auto& k : row.keys)
        if (k.is_complex())
            if (const Row* r = find_row_deep(*k.nested, row_name)) return r;
    return nullptr;
}

inline const Row* find_row_deep(const DataModel& model, const std::string& row_name) {
    for (const auto& c : model.concepts)
        for (const auto& r : c.rows)
            if (const Row* found = find_row_deep(r, row_name)) return found;
    return nullptr;
}

} // namespace detail

// Report-style validation: empty result means the model satisfies every
// structural invariant; each violation names the offending element.
inline std::vector<Violation> validate(const DataModel& model) {
    std::vector<Violation> out;

    std::vector<std::string> all_names;
    for (const auto& c : model.concepts) {
        if (c.rows.empty())
            out.push_back({c.name, "concept has no rows"});
        std::set<std::string> in_concept;
        for (const auto& r : c.rows) {
            if (!in_concept.insert(r.name()).second)
                out.push_back({c.name, "duplicate row name '" + r.name() + "' in concept"});
            detail::validate_row(r, {}, out);
            detail::collect_row_names(r, all_names);
        }
    }
    std::set<std::string> unique_names;
    for (const auto& n : all_names)
        if (!unique_names.insert(n).second)
            out.push_back({n, "row name '" + n + "' is not unique in the model"});

    for (const auto& ref : model.references) {
        const Row* src = detail::find_row_deep(model, ref.source_row);
        const Row* tgt = detail::find_row_deep(model, ref.target_row);
        if (!src)
            out.push_back({ref.source_row, "dangling reference: source row missing"});
        else if (!src->find_key(ref.source_key))
            out.push_back({ref.source_row, "dangling reference: key '" + ref.source_key + "' missing"});
        if (!tgt)
            out.push_back({ref.target_row, "dangling reference: target row missing"});
        else if (!tgt->find_key(ref.target_key))
            out.push_back({ref.target_row, "dangling reference: key '" + ref.target_key + "' missing"});
        if (ref.source_row == ref.target_row && ref.source_key == ref.target_key)
            out.push_back({ref.source_row, "reference endpoints coincide"});
        if (ref.cardinality <= 0)
            out.push_back({ref.source_row, "reference has non-positive cardinality"});
    }
    return out;
}

inline bool is_valid(const DataModel& model) { return validate(model).empty(); }

} // namespace denorm
