#pragma once

// Queries, statistics and sweep settings. Everything here is plain immutable
// data loaded from the use-case configuration.

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace denorm {

struct WorkloadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class QueryMode { Read, Update };

struct Query {
    std::string id;
    QueryMode mode = QueryMode::Read;
    std::vector<std::string> filter_keys;
    std::vector<std::string> projection_keys;
    std::vector<std::string> join_keys;
    std::vector<std::string> sharded_keys;  // subset of filter_keys
    double occurrences = 0;                 // per day
    double latency_bound = 0;               // seconds
    double message_bytes = 512;             // dispatch size |q|

    bool is_sharding_key(const std::string& key) const {
        for (const auto& k : sharded_keys)
            if (k == key) return true;
        return false;
    }
};

// Sweep point: data volume scale (warehouse count) and cluster size.
struct Settings {
    double scale = 1;
    double servers = 1;
};

struct SizeProfile {
    std::map<std::string, double> key_size;             // key name -> bytes
    std::map<std::string, double> row_count_per_scale;  // origin row -> instances per scale unit

    double key_bytes(const std::string& key) const {
        auto it = key_size.find(key);
        if (it == key_size.end())
            throw WorkloadError("no size configured for key '" + key + "'");
        return it->second;
    }
};

struct Statistics {
    std::map<std::string, double> selectivity;    // filter key -> fraction in (0,1]
    SizeProfile profile;
    std::set<std::string> indexed_keys;           // keys carrying a local index
    std::map<std::string, double> index_size_override;  // key -> probe bytes
    double shard_lookup_bytes = 1024;
    double index_entry_overhead_bytes = 8;

    bool has_selectivity(const std::string& key) const {
        return selectivity.count(key) != 0;
    }
    double selectivity_of(const std::string& key) const {
        auto it = selectivity.find(key);
        if (it == selectivity.end())
            throw WorkloadError("no selectivity configured for key '" + key + "'");
        return it->second;
    }
};

// Product of the individual key selectivities (independence assumption),
// clamped to (0,1]. Empty key list selects everything.
inline double effective_selectivity(const std::vector<std::string>& keys,
                                    const Statistics& stats) {
    double sel = 1.0;
    for (const auto& k : keys) sel *= stats.selectivity_of(k);
    if (sel > 1.0) return 1.0;
    if (sel <= 0.0) return std::numeric_limits<double>::min();
    return sel;
}

} // namespace denorm
