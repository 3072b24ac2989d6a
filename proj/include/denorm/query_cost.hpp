#pragma once

/*
 * Per-query costing. A query is planned as an ordered list of covered rows:
 * the smallest set of rows that serves the query's filter, projection and
 * join keys (a key a merge removed counts as served by the row holding the
 * nesting). The first row applies the query's filters; every further row is
 * probed once per tuple of the running output, nested-loop style, and the
 * running output grows by the row's expected match count. Access paths rank
 * Sharded over Indexed over Scan and apply to top-level keys of the probed
 * row only: a key buried in a nested value can be neither a placement key
 * nor locally indexed.
 */

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "denorm/costs.hpp"
#include "denorm/model.hpp"
#include "denorm/signature.hpp"
#include "denorm/sizing.hpp"
#include "denorm/workload.hpp"

namespace denorm {

struct CoveredRow {
    const Row* row = nullptr;
    std::string name;
    std::vector<std::string> served_keys;        // query keys this row serves
    std::vector<std::string> local_filter_keys;  // query filters applied on this row
    std::string access_key;       // key driving the probe; empty = unfiltered scan
    double matches_per_probe = 1; // expected matches per outer tuple; first row: per filter pass
    double estimated_output = 0;  // running-output contribution (Algorithm line "nb")
};

namespace detail {

inline bool is_top_level_atomic(const Row& row, const std::string& key) {
    const KeyValue* k = row.find_key(key);
    return k != nullptr && !k->is_complex();
}

inline std::set<std::string> query_key_set(const Query& q) {
    std::set<std::string> keys;
    keys.insert(q.filter_keys.begin(), q.filter_keys.end());
    keys.insert(q.projection_keys.begin(), q.projection_keys.end());
    keys.insert(q.join_keys.begin(), q.join_keys.end());
    return keys;
}

struct Candidate {
    const Row* row;
    std::set<std::string> covered;   // includes merge-materialized keys
    std::set<std::string> atomic;    // physically present keys
    std::set<std::string> serves;    // covered ∩ query keys
    std::vector<std::string> local_filters;
    double local_sel = 1.0;
    double doc_count = 0;
    double local_result = 0;         // docs surviving local filters
};

inline bool candidate_collation(const Candidate& a, const Candidate& b) {
    return collation_less(*a.row, *b.row);
}

// Smallest subset of candidates covering `wanted`; exhaustive up to four
// candidates, greedy beyond that. Deterministic under ties.
inline std::vector<std::size_t> min_cover(const std::vector<Candidate>& cands,
                                          const std::set<std::string>& wanted) {
    const std::size_t n = cands.size();
    if (n <= 4) {
        std::vector<std::size_t> best;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::set<std::string> got;
            std::vector<std::size_t> pick;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) {
                    pick.push_back(i);
                    got.insert(cands[i].serves.begin(), cands[i].serves.end());
                }
            bool all = std::includes(got.begin(), got.end(), wanted.begin(), wanted.end());
            if (all && (best.empty() || pick.size() < best.size())) best = pick;
        }
        return best;
    }
    std::set<std::string> missing = wanted;
    std::vector<std::size_t> pick;
    std::vector<bool> used(n, false);
    while (!missing.empty()) {
        std::size_t best = n;
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            std::size_t gain = 0;
            for (const auto& k : cands[i].serves)
                if (missing.count(k)) ++gain;
            if (gain > best_gain ||
                (gain == best_gain && gain > 0 && best < n &&
                 candidate_collation(cands[i], cands[best]))) {
                best = i;
                best_gain = gain;
            }
        }
        if (best == n || best_gain == 0) break;  // cannot progress; caller already checked totals
        used[best] = true;
        pick.push_back(best);
        for (const auto& k : cands[best].serves) missing.erase(k);
    }
    std::sort(pick.begin(), pick.end());
    return pick;
}

struct Link {
    bool found = false;
    std::string access_key;
    double matches = 1.0;
};

// How a row is probed from the rows already planned: through the shared
// primary key of sibling fragments, or through a reference whose other
// endpoint the prefix serves. The most selective linkage wins.
inline Link link_row(const Candidate& cand, const std::set<std::string>& prefix_keys,
                     const DataModel& model, const Statistics& stats) {
    Link best;
    auto consider = [&](const std::string& key, double matches) {
        if (!best.found || matches < best.matches ||
            (matches == best.matches && key < best.access_key)) {
            best.found = true;
            best.access_key = key;
            best.matches = matches;
        }
    };
    for (const auto& key : cand.atomic) {
        if (!prefix_keys.count(key)) continue;
        if (key == cand.row->primary_key)
            consider(key, 1.0);
        else if (stats.has_selectivity(key))
            consider(key, stats.selectivity_of(key) * cand.doc_count);
        else
            consider(key, 1.0);
    }
    for (const auto& ref : model.references) {
        if (cand.atomic.count(ref.source_key) && prefix_keys.count(ref.target_key))
            consider(ref.source_key, ref.cardinality);
        if (cand.atomic.count(ref.target_key) && prefix_keys.count(ref.source_key))
            consider(ref.target_key, 1.0);
    }
    return best;
}

} // namespace detail

// Ordered minimal row set serving the query on this model. The returned Row
// pointers refer into `model`.
inline std::vector<CoveredRow> covered_rows(const DataModel& model, const Query& query,
                                            const Statistics& stats, const Settings& settings) {
    const std::set<std::string> wanted = detail::query_key_set(query);

    std::vector<detail::Candidate> cands;
    std::set<std::string> reachable;
    for (const Row* row : model.top_level_rows()) {
        detail::Candidate c;
        c.row = row;
        c.covered = covered_keys(*row);
        c.atomic = atomic_closure(*row);
        for (const auto& k : wanted)
            if (c.covered.count(k)) c.serves.insert(k);
        if (c.serves.empty()) continue;
        for (const auto& k : query.filter_keys)
            if (c.covered.count(k)) c.local_filters.push_back(k);
        c.local_sel = effective_selectivity(c.local_filters, stats);
        c.doc_count = document_count(*row, settings, stats.profile);
        c.local_result = c.local_filters.empty() ? c.doc_count : c.local_sel * c.doc_count;
        reachable.insert(c.serves.begin(), c.serves.end());
        cands.push_back(std::move(c));
    }
    for (const auto& k : wanted)
        if (!reachable.count(k))
            throw CostError("query '" + query.id + "': key '" + k +
                            "' is not available in model " + signature(model));

    std::vector<std::size_t> chosen = detail::min_cover(cands, wanted);

    // Order: start at the most selective locally-filtered row, then expand
    // through join linkage, preferring small expected results; collation
    // breaks ties.
    std::vector<const detail::Candidate*> remaining;
    for (std::size_t i : chosen) remaining.push_back(&cands[i]);
    auto better_first = [](const detail::Candidate* a, const detail::Candidate* b) {
        bool fa = !a->local_filters.empty();
        bool fb = !b->local_filters.empty();
        if (fa != fb) return fa;
        if (a->local_result != b->local_result) return a->local_result < b->local_result;
        return detail::candidate_collation(*a, *b);
    };
    std::sort(remaining.begin(), remaining.end(), better_first);

    std::vector<CoveredRow> plan;
    std::set<std::string> prefix_keys;
    bool first = true;
    while (!remaining.empty()) {
        std::size_t pick = 0;
        detail::Link link;
        if (!first) {
            bool found_connected = false;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                detail::Link l = detail::link_row(*remaining[i], prefix_keys, model, stats);
                if (l.found) {
                    pick = i;
                    link = l;
                    found_connected = true;
                    break;  // `remaining` is already sorted by preference
                }
            }
            if (!found_connected) pick = 0;  // disconnected cross probe
        }
        const detail::Candidate& c = *remaining[pick];

        CoveredRow out;
        out.row = c.row;
        out.name = c.row->name();
        out.served_keys.assign(c.serves.begin(), c.serves.end());
        out.local_filter_keys = c.local_filters;
        if (first) {
            out.access_key = c.local_filters.empty() ? "" : c.local_filters.front();
            out.matches_per_probe = c.local_result;
            out.estimated_output = c.local_result;
        } else {
            out.access_key = link.found ? link.access_key : "";
            out.matches_per_probe = link.matches * c.local_sel;
            out.estimated_output = out.matches_per_probe;
        }
        prefix_keys.insert(c.covered.begin(), c.covered.end());
        plan.push_back(std::move(out));
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        first = false;
    }
    return plan;
}

namespace detail {

inline double index_probe_bytes(const std::string& key, double doc_count,
                                const Settings& settings, const Statistics& stats) {
    auto it = stats.index_size_override.find(key);
    if (it != stats.index_size_override.end()) return it->second;
    double local_docs = std::max(2.0, doc_count / settings.servers);
    return std::ceil(std::log2(local_docs)) *
           (stats.profile.key_bytes(key) + stats.index_entry_overhead_bytes);
}

struct ElectedAccess {
    AccessStrategy strategy = AccessStrategy::Scan;
    std::string strategy_key;
};

// Sharded beats Indexed beats Scan; only top-level keys of the row qualify.
inline ElectedAccess elect_access(const Row& row, const std::vector<std::string>& access_keys,
                                  const Query& query, const Statistics& stats) {
    for (const auto& k : access_keys)
        if (query.is_sharding_key(k) && is_top_level_atomic(row, k))
            return {AccessStrategy::Sharded, k};
    for (const auto& k : access_keys)
        if (stats.indexed_keys.count(k) && is_top_level_atomic(row, k))
            return {AccessStrategy::Indexed, k};
    return {};
}

inline double projected_bytes(const Row& row, const Query& query, const SizeProfile& profile) {
    std::set<std::string> atomic = atomic_closure(row);
    std::set<std::string> shipped;
    for (const auto& k : query.projection_keys)
        if (atomic.count(k)) shipped.insert(k);
    for (const auto& k : query.join_keys)
        if (atomic.count(k)) shipped.insert(k);
    double bytes = 0;
    for (const auto& k : shipped) bytes += profile.key_bytes(k);
    return bytes;
}

} // namespace detail

// Nested-loop combination of the covered rows' access costs. The first row
// contributes once and seeds the running output; each further row is charged
// per output tuple and multiplies the output by its match count.
inline CostVector query_cost(const DataModel& model, const Query& query, const Settings& settings,
                             const Statistics& stats, const CostConstants& constants) {
    const std::vector<CoveredRow> plan = covered_rows(model, query, stats, settings);

    CostVector total;
    double output = 0;
    bool first = true;
    for (const CoveredRow& step : plan) {
        RowAccess access;
        access.doc_count = document_count(*step.row, settings, stats.profile);
        access.doc_bytes = document_size(*step.row, stats.profile);
        access.projected_bytes = detail::projected_bytes(*step.row, query, stats.profile);
        access.selectivity =
            access.doc_count > 0 ? std::min(1.0, step.matches_per_probe / access.doc_count) : 1.0;

        // The probe routes on the row's access key: the filter keys for the
        // first row, the join key for every later row.
        std::vector<std::string> access_keys;
        if (first)
            access_keys = step.local_filter_keys;
        else if (!step.access_key.empty())
            access_keys = {step.access_key};
        else
            access_keys = step.local_filter_keys;
        detail::ElectedAccess elected = detail::elect_access(*step.row, access_keys, query, stats);
        if (elected.strategy == AccessStrategy::Indexed)
            access.index_bytes =
                detail::index_probe_bytes(elected.strategy_key, access.doc_count, settings, stats);

        VolumeBreakdown volumes = filter_volumes(access, elected.strategy, settings, stats, query);
        CostVector cost = dimension_costs(volumes, constants);
        if (first) {
            total = cost;
            output = step.estimated_output;
            first = false;
        } else {
            total += output * cost;
            output *= step.matches_per_probe;
        }
    }
    return total;
}

// Daily model cost: cluster cost plus the occurrence-weighted query costs.
inline CostVector total_cost(const DataModel& model, const std::vector<Query>& queries,
                             const Settings& settings, const Statistics& stats,
                             const CostConstants& constants) {
    CostVector total = static_cost(settings, constants);
    for (const auto& q : queries) {
        try {
            total += q.occurrences * query_cost(model, q, settings, stats, constants);
        } catch (const std::exception& e) {
            throw CostError("query '" + q.id + "' on model " + signature(model) + ": " + e.what());
        }
    }
    return total;
}

} // namespace denorm
