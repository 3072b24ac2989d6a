#pragma once

// Document sizing and storage volume. Sizes come from the shared SizeProfile
// so what-if runs can reprice a model without rebuilding it; instance counts
// scale linearly with the data-volume setting.

#include <string>

#include "denorm/model.hpp"
#include "denorm/workload.hpp"

namespace denorm {

struct SizingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bytes of one document of the row: atomic key sizes plus, per complex key,
// the average element count times the nested document size.
inline double document_size(const Row& row, const SizeProfile& profile) {
    double total = 0;
    for (const auto& k : row.keys) {
        if (k.is_complex()) {
            double per_parent = k.multiplicity == Multiplicity::OneToMany ? k.avg_count : 1.0;
            total += per_parent * document_size(*k.nested, profile);
        } else {
            auto it = profile.key_size.find(k.name);
            if (it == profile.key_size.end())
                throw SizingError("no size configured for key '" + k.name + "'");
            total += it->second;
        }
    }
    return total;
}

// Instance count of a top-level row at a setting. Fragments keep the count of
// the row they were split from; a merged row keeps the count of its outermost
// host, so the count always follows the row's origin lineage.
inline double document_count(const Row& row, const Settings& settings,
                             const SizeProfile& profile) {
    auto it = profile.row_count_per_scale.find(row.origin);
    if (it == profile.row_count_per_scale.end())
        throw SizingError("unknown row lineage '" + row.origin + "'");
    return it->second * settings.scale;
}

inline double storage_volume(const DataModel& model, const Settings& settings,
                             const SizeProfile& profile) {
    double total = 0;
    for (const Row* row : model.top_level_rows())
        total += document_count(*row, settings, profile) * document_size(*row, profile);
    return total;
}

} // namespace denorm
