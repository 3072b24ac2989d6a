#pragma once

/*
 * Multidimensional cost primitives. All volumes are bytes; constants are
 * quoted per decimal gigabyte (1 GB = 1e9 bytes). A cost is the (time,
 * carbon, money) triple: time follows the slowest server, carbon follows the
 * summed volume over all servers, money follows externally transferred bytes
 * plus the per-server daily fee.
 */

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "denorm/workload.hpp"

namespace denorm {

constexpr double kBytesPerGB = 1e9;

struct CostError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CostConstants {
    double ram_speed = 1.25;              // GB/s
    double ssd_speed = 0.325;             // GB/s
    double com_speed = 1.0;               // GB/s
    double ram_carbon = 0.0280;           // kg CO2e/GB
    double ssd_carbon = 0.0031;           // kg CO2e/GB
    double com_carbon = 0.0110;           // kg CO2e/GB
    double ext_transfer_fee = 0.019;      // currency/GB, external transfers only
    double server_carbon_per_day = 0.87671;  // kg CO2e per server per day
    double server_fee_per_day = 0.8543;      // currency per server per day

    void check() const {
        const double values[] = {ram_speed,  ssd_speed,  com_speed,
                                 ram_carbon, ssd_carbon, com_carbon,
                                 ext_transfer_fee, server_carbon_per_day, server_fee_per_day};
        for (double v : values)
            if (!(v > 0)) throw CostError("cost constants must be strictly positive");
    }
};

struct CostVector {
    double time = 0;    // seconds
    double carbon = 0;  // kg CO2e
    double money = 0;   // currency units

    CostVector& operator+=(const CostVector& o) {
        time += o.time;
        carbon += o.carbon;
        money += o.money;
        return *this;
    }
    friend CostVector operator+(CostVector a, const CostVector& b) { return a += b; }
    friend CostVector operator*(double w, const CostVector& c) {
        return {w * c.time, w * c.carbon, w * c.money};
    }
};

// Per-server volume picture of one operation.
struct VolumeBreakdown {
    std::vector<double> per_server_ram;  // bytes read in memory, one entry per server
    std::vector<double> per_server_com;  // bytes on the wire, one entry per server
    double ssd = 0;                      // bytes touching storage
    double external_com = 0;             // client-bound share of the wire bytes
    double internal_com = 0;             // dispatch and shuffle share
};

struct AggregateVolumes {
    double com = 0;     // total wire bytes
    double ram_time = 0;  // slowest single server
    double ram_energy = 0;  // summed over servers
};

inline AggregateVolumes aggregate(const VolumeBreakdown& v) {
    AggregateVolumes out;
    for (double b : v.per_server_com) out.com += b;
    for (double b : v.per_server_ram) {
        out.ram_energy += b;
        if (b > out.ram_time) out.ram_time = b;
    }
    return out;
}

// Servers that can hold an answer: one when the placement key routes the
// query, otherwise as many as the matched documents may spread over.
inline double servers_hit(double doc_count, double sel, double servers, bool sharded) {
    if (sharded) return 1;
    return std::min(std::ceil(doc_count * sel), servers);
}

enum class AccessStrategy { Sharded, Indexed, Scan };

// Scalar inputs for one row access; derived from the model by the planner.
struct RowAccess {
    double doc_count = 0;        // documents of the row at the current setting
    double doc_bytes = 0;        // one document
    double selectivity = 1.0;    // fraction of the row's documents matched
    double projected_bytes = 0;  // result bytes shipped per matched document
    double index_bytes = 0;      // probe cost of the local index, Indexed only
};

inline VolumeBreakdown filter_volumes(const RowAccess& row, AccessStrategy strategy,
                                      const Settings& settings, const Statistics& stats,
                                      const Query& query) {
    const std::size_t n = static_cast<std::size_t>(settings.servers);
    VolumeBreakdown out;
    out.per_server_ram.assign(n, 0.0);
    out.per_server_com.assign(n, 0.0);

    const double matched = row.doc_count * row.selectivity;
    switch (strategy) {
        case AccessStrategy::Sharded: {
            out.per_server_ram[0] = stats.shard_lookup_bytes + row.doc_bytes * matched;
            out.per_server_com[0] = query.message_bytes + row.projected_bytes * matched;
            out.internal_com = query.message_bytes;
            out.external_com = row.projected_bytes * matched;
            break;
        }
        case AccessStrategy::Indexed:
        case AccessStrategy::Scan: {
            const double hit = servers_hit(row.doc_count, row.selectivity, settings.servers, false);
            const double per_hit = hit > 0 ? std::ceil(matched / hit) : 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool hit_server = static_cast<double>(i) < hit;
                if (strategy == AccessStrategy::Indexed)
                    out.per_server_ram[i] =
                        row.index_bytes + (hit_server ? row.doc_bytes * per_hit : 0.0);
                else
                    out.per_server_ram[i] = row.doc_bytes * row.doc_count / settings.servers;
                out.per_server_com[i] =
                    query.message_bytes + (hit_server ? row.projected_bytes * per_hit : 0.0);
            }
            out.internal_com = query.message_bytes * settings.servers;
            out.external_com = row.projected_bytes * per_hit * hit;
            break;
        }
    }
    if (query.mode == QueryMode::Update)
        for (double b : out.per_server_ram) out.ssd += b;  // warm reads cost no storage
    return out;
}

// Query-dependent cost of one volume picture.
inline CostVector dimension_costs(const VolumeBreakdown& volumes, const CostConstants& c) {
    const AggregateVolumes agg = aggregate(volumes);
    CostVector out;
    out.time = agg.ram_time / (c.ram_speed * kBytesPerGB) +
               volumes.ssd / (c.ssd_speed * kBytesPerGB) +
               agg.com / (c.com_speed * kBytesPerGB);
    out.carbon = agg.ram_energy * c.ram_carbon / kBytesPerGB +
                 volumes.ssd * c.ssd_carbon / kBytesPerGB +
                 agg.com * c.com_carbon / kBytesPerGB;
    out.money = volumes.external_com * c.ext_transfer_fee / kBytesPerGB;
    return out;
}

// Query-independent cost of running the cluster for a day.
inline CostVector static_cost(const Settings& settings, const CostConstants& c) {
    return {0.0, settings.servers * c.server_carbon_per_day, settings.servers * c.server_fee_per_day};
}

} // namespace denorm
