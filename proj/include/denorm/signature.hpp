#pragma once

// Canonical text signature of a model: top-level rows sorted by (origin
// declaration order, fragment number) and comma-separated; nested rows render
// inside braces, sorted the same way. "W,C,O", "W,C{O}", "O{C{W}}",
// "W,C1,C2,C3,O1,O2". Structurally equal models yield equal signatures.

#include <string>
#include <vector>

#include "denorm/model.hpp"

namespace denorm {

namespace detail {

inline bool collation_less(const Row& a, const Row& b) {
    if (a.origin_order != b.origin_order) return a.origin_order < b.origin_order;
    return a.split_index < b.split_index;
}

inline std::string row_signature(const Row& row) {
    std::vector<const Row*> nested;
    for (const auto& k : row.keys)
        if (k.is_complex()) nested.push_back(k.nested.get());
    std::sort(nested.begin(), nested.end(),
              [](const Row* a, const Row* b) { return collation_less(*a, *b); });

    std::string out = row.name();
    if (!nested.empty()) {
        out += '{';
        for (std::size_t i = 0; i < nested.size(); ++i) {
            if (i) out += ',';
            out += row_signature(*nested[i]);
        }
        out += '}';
    }
    return out;
}

} // namespace detail

inline std::string signature(const DataModel& model) {
    std::vector<const Row*> rows = model.top_level_rows();
    std::sort(rows.begin(), rows.end(),
              [](const Row* a, const Row* b) { return detail::collation_less(*a, *b); });
    std::string out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ',';
        out += detail::row_signature(*rows[i]);
    }
    return out;
}

} // namespace denorm
