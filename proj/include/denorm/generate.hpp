#pragma once

/*
 * Bounded enumeration of denormalized candidate models.
 *
 * Breadth-first closure of the root under split and merge with:
 *  - global deduplication by canonical signature;
 *  - phase ordering: once a path applies a merge, it applies no further
 *    splits (different orderings of independent steps would otherwise reach
 *    the same model along several paths);
 *  - canonical splits: the generator only carves a row's leading attribute,
 *    recursing on the remainder, so an n-attribute row has exactly its n-1
 *    canonical fragmentations and the dense fragment numbering stays
 *    injective over reachable models;
 *  - retention: a model is kept only when some query's whole key set is
 *    served by a single one of its rows (the root is always kept).
 *
 * Inverse rules are never applied, so no step can undo its parent and the
 * step tree is cycle-free by construction.
 */

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "denorm/model.hpp"
#include "denorm/refine.hpp"
#include "denorm/signature.hpp"
#include "denorm/workload.hpp"

namespace denorm {

struct RefinementStep {
    enum class Kind { Root, Merge, Split };
    Kind kind = Kind::Root;
    std::string detail;      // "merge O->C nest-source-into-target", "split C:w_c_ID"
    std::string parent;      // parent signature; "-" for the root
    std::string child;       // child signature
};

struct GenerationResult {
    std::map<std::string, DataModel> models;  // retained, keyed (and ordered) by signature
    std::vector<RefinementStep> tree;         // every first discovery, in BFS order
    std::size_t discovered_count = 0;
    std::size_t pruned_count = 0;
    std::string root_signature;
};

// True when one row of the model serves the query's entire key set, counting
// join keys a merge materialized away.
inline bool query_served_by_single_row(const DataModel& model, const Query& query) {
    std::set<std::string> wanted;
    wanted.insert(query.filter_keys.begin(), query.filter_keys.end());
    wanted.insert(query.projection_keys.begin(), query.projection_keys.end());
    wanted.insert(query.join_keys.begin(), query.join_keys.end());
    for (const Row* row : model.top_level_rows()) {
        std::set<std::string> served = covered_keys(*row);
        bool all = true;
        for (const auto& k : wanted)
            if (!served.count(k)) { all = false; break; }
        if (all) return true;
    }
    return false;
}

namespace detail {

inline bool is_normalized_root(const DataModel& model) {
    for (const Row* row : model.top_level_rows())
        if (row->split_index != 0 || row->has_complex_keys() || row->origin != row->name())
            return false;
    return true;
}

struct Frontier {
    DataModel model;
    bool can_split = true;
};

} // namespace detail

inline GenerationResult generate(const DataModel& root, const std::vector<Query>& queries) {
    if (!is_valid(root))
        throw ModelError("generate: root model is invalid");
    if (!detail::is_normalized_root(root))
        throw ModelError("generate: root model must be fully normalized");

    GenerationResult result;
    result.root_signature = signature(root);

    std::set<std::string> seen{result.root_signature};
    std::deque<detail::Frontier> frontier;
    frontier.push_back({root, true});
    result.tree.push_back({RefinementStep::Kind::Root, "root", "-", result.root_signature});

    std::vector<std::pair<std::string, DataModel>> discovered;
    discovered.emplace_back(result.root_signature, root);

    while (!frontier.empty()) {
        detail::Frontier node = std::move(frontier.front());
        frontier.pop_front();
        const std::string parent_sig = signature(node.model);

        auto admit = [&](DataModel&& child, RefinementStep::Kind kind, std::string step_detail,
                         bool can_split) {
            std::string sig = signature(child);
            if (!seen.insert(sig).second) return;
            result.tree.push_back({kind, std::move(step_detail), parent_sig, sig});
            discovered.emplace_back(sig, child);
            frontier.push_back({std::move(child), can_split});
        };

        if (node.can_split) {
            // Collation order over rows, carving the leading attribute only.
            std::vector<const Row*> rows = node.model.top_level_rows();
            std::sort(rows.begin(), rows.end(), [](const Row* a, const Row* b) {
                return detail::collation_less(*a, *b);
            });
            for (const Row* row : rows) {
                if (row->has_complex_keys()) continue;
                auto attrs = row->attribute_keys();
                if (attrs.size() < 2) continue;
                const KeyValue* lead = attrs.front();
                admit(split(node.model, row->name(), lead->name), RefinementStep::Kind::Split,
                      "split " + row->name() + ":" + lead->name, true);
            }
        }
        for (const Reference& ref : node.model.references) {
            if (!node.model.find_row(ref.source_row) || !node.model.find_row(ref.target_row))
                continue;  // an endpoint is already nested somewhere
            admit(merge(node.model, ref, MergeDirection::NestSourceIntoTarget),
                  RefinementStep::Kind::Merge,
                  "merge " + ref.source_row + "->" + ref.target_row + " nest-source-into-target",
                  false);
            admit(merge(node.model, ref, MergeDirection::NestTargetIntoSource),
                  RefinementStep::Kind::Merge,
                  "merge " + ref.source_row + "->" + ref.target_row + " nest-target-into-source",
                  false);
        }
    }

    result.discovered_count = discovered.size();
    std::size_t model_number = 0;
    for (auto& [sig, model] : discovered) {
        bool keep = sig == result.root_signature;
        for (const auto& q : queries)
            if (keep) break;
            else keep = query_served_by_single_row(model, q);
        if (keep) {
            model.name = "M" + std::to_string(model_number);
            result.models.emplace(sig, std::move(model));
        }
        ++model_number;
    }
    result.pruned_count = result.discovered_count - result.models.size();
    return result;
}

// ---------------------------------------------------------------------------
// Signatures manifest: one retained model per line, with its first-discovery
// lineage. Tab-separated "signature<TAB>parent-signature<TAB>step".

inline std::string to_manifest(const GenerationResult& result) {
    std::map<std::string, const RefinementStep*> step_of;
    for (const auto& s : result.tree) step_of[s.child] = &s;
    std::string out;
    for (const auto& [sig, model] : result.models) {
        const RefinementStep* step = step_of.at(sig);
        out += sig;
        out += '\t';
        out += step->parent;
        out += '\t';
        out += step->detail;
        out += '\n';
    }
    return out;
}

struct ManifestEntry {
    std::string signature;
    std::string parent;
    std::string step;
};

inline std::vector<ManifestEntry> parse_manifest(const std::string& text) {
    std::vector<ManifestEntry> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw ModelError("manifest: malformed line '" + line + "'");
        out.push_back({line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)});
    }
    return out;
}

} // namespace denorm
