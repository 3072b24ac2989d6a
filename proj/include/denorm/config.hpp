#pragma once

/*
 * Use-case configuration: the normalized root model, workload statistics,
 * queries, sweep grid and cost-constant overrides, in one JSON document.
 * load_use_case validates everything and resolves cross-references; failures
 * name the offending path. save_use_case is its inverse for round-tripping.
 */

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "denorm/costs.hpp"
#include "denorm/model.hpp"
#include "denorm/workload.hpp"

namespace denorm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UseCase {
    DataModel model;
    std::vector<Query> queries;
    Statistics stats;
    std::vector<double> sweep_scales{1};
    std::vector<double> sweep_servers{1};
    CostConstants constants;
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const char* field, const std::string& path) {
    auto it = j.find(field);
    if (it == j.end())
        throw ConfigError(path + ": missing required field '" + field + "'");
    return *it;
}

inline std::vector<std::string> string_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of key names");
    std::vector<std::string> out;
    for (const auto& v : j) out.push_back(v.get<std::string>());
    return out;
}

inline DataModel load_model(const json& j, const std::string& path) {
    DataModel model;
    model.name = j.value("name", "root");
    int order = 0;
    for (std::size_t ci = 0; ci < require(j, "concepts", path).size(); ++ci) {
        const json& jc = j["concepts"][ci];
        const std::string cpath = path + ".concepts[" + std::to_string(ci) + "]";
        Concept group;
        group.name = require(jc, "name", cpath).get<std::string>();
        for (std::size_t ri = 0; ri < require(jc, "rows", cpath).size(); ++ri) {
            const json& jr = jc["rows"][ri];
            const std::string rpath = cpath + ".rows[" + std::to_string(ri) + "]";
            Row row;
            row.origin = require(jr, "name", rpath).get<std::string>();
            row.origin_order = ++order;
            row.primary_key = require(jr, "primary_key", rpath).get<std::string>();
            int pos = 0;
            for (const json& jk : require(jr, "keys", rpath)) {
                KeyValue key;
                key.name = require(jk, "name", rpath + ".keys").get<std::string>();
                key.size_bytes = require(jk, "bytes", rpath + ".keys").get<double>();
                if (key.name != row.primary_key) key.origin_pos = ++pos;
                row.keys.push_back(std::move(key));
            }
            row.origin_key_count = pos;
            group.rows.push_back(std::move(row));
        }
        model.concepts.push_back(std::move(group));
    }
    if (j.contains("references")) {
        for (std::size_t i = 0; i < j["references"].size(); ++i) {
            const json& jr = j["references"][i];
            const std::string rpath = path + ".references[" + std::to_string(i) + "]";
            Reference ref;
            ref.source_row = require(require(jr, "source", rpath), "row", rpath).get<std::string>();
            ref.source_key = require(jr["source"], "key", rpath).get<std::string>();
            ref.target_row = require(require(jr, "target", rpath), "row", rpath).get<std::string>();
            ref.target_key = require(jr["target"], "key", rpath).get<std::string>();
            ref.cardinality = require(jr, "cardinality", rpath).get<double>();
            model.references.push_back(std::move(ref));
        }
    }
    return model;
}

inline Query load_query(const json& jq, const std::string& path) {
    Query q;
    q.id = require(jq, "id", path).get<std::string>();
    const std::string mode = jq.value("mode", "read");
    if (mode == "read")
        q.mode = QueryMode::Read;
    else if (mode == "update")
        q.mode = QueryMode::Update;
    else
        throw ConfigError(path + ": unknown mode '" + mode + "'");
    q.filter_keys = string_list(require(jq, "filter", path), path + ".filter");
    q.projection_keys = string_list(require(jq, "projection", path), path + ".projection");
    if (jq.contains("join")) q.join_keys = string_list(jq["join"], path + ".join");
    if (jq.contains("sharding")) q.sharded_keys = string_list(jq["sharding"], path + ".sharding");
    q.occurrences = require(jq, "occurrences", path).get<double>();
    q.latency_bound = require(jq, "latency_bound_s", path).get<double>();
    q.message_bytes = jq.value("message_bytes", 512.0);

    if (q.projection_keys.empty()) throw ConfigError(path + ": projection must be non-empty");
    if (q.occurrences < 0) throw ConfigError(path + ": occurrences must be >= 0");
    if (!(q.latency_bound > 0)) throw ConfigError(path + ": latency bound must be > 0");
    for (const auto& k : q.sharded_keys)
        if (std::find(q.filter_keys.begin(), q.filter_keys.end(), k) == q.filter_keys.end())
            throw ConfigError(path + ": sharding key '" + k + "' is not a filter key");
    return q;
}

inline CostConstants load_constants(const json& j) {
    CostConstants c;
    if (j.is_null()) return c;
    c.ram_speed = j.value("ram_gb_per_s", c.ram_speed);
    c.ssd_speed = j.value("ssd_gb_per_s", c.ssd_speed);
    c.com_speed = j.value("com_gb_per_s", c.com_speed);
    c.ram_carbon = j.value("ram_kgco2e_per_gb", c.ram_carbon);
    c.ssd_carbon = j.value("ssd_kgco2e_per_gb", c.ssd_carbon);
    c.com_carbon = j.value("com_kgco2e_per_gb", c.com_carbon);
    c.ext_transfer_fee = j.value("external_transfer_fee_per_gb", c.ext_transfer_fee);
    c.server_carbon_per_day = j.value("server_kgco2e_per_day", c.server_carbon_per_day);
    c.server_fee_per_day = j.value("server_fee_per_day", c.server_fee_per_day);
    c.check();
    return c;
}

} // namespace detail

inline UseCase load_use_case(const nlohmann::json& doc) {
    using detail::require;
    UseCase uc;
    uc.model = detail::load_model(require(doc, "model", "$"), "model");

    std::vector<Violation> violations = validate(uc.model);
    if (!violations.empty())
        throw ConfigError("model: " + violations.front().element + ": " +
                          violations.front().message);

    std::set<std::string> model_keys;
    for (const Row* row : uc.model.top_level_rows())
        for (const auto& k : row->keys) model_keys.insert(k.name);

    const nlohmann::json& js = require(doc, "statistics", "$");
    for (const Row* row : uc.model.top_level_rows())
        for (const auto& k : row->keys) uc.stats.profile.key_size[k.name] = k.size_bytes;
    for (const auto& [row_name, count] :
         require(js, "row_counts", "statistics").items()) {
        if (!uc.model.find_row(row_name))
            throw ConfigError("statistics.row_counts: unknown row '" + row_name + "'");
        uc.stats.profile.row_count_per_scale[row_name] = count.get<double>();
    }
    for (const Row* row : uc.model.top_level_rows())
        if (!uc.stats.profile.row_count_per_scale.count(row->origin))
            throw ConfigError("statistics.row_counts: no count for row '" + row->origin + "'");
    if (js.contains("selectivity"))
        for (const auto& [key, sel] : js["selectivity"].items()) {
            if (!model_keys.count(key))
                throw ConfigError("statistics.selectivity: unknown key '" + key + "'");
            double s = sel.get<double>();
            if (!(s > 0) || s > 1)
                throw ConfigError("statistics.selectivity: '" + key + "' must be in (0,1]");
            uc.stats.selectivity[key] = s;
        }
    if (js.contains("indexes"))
        for (const auto& k : detail::string_list(js["indexes"], "statistics.indexes")) {
            if (!model_keys.count(k))
                throw ConfigError("statistics.indexes: unknown key '" + k + "'");
            uc.stats.indexed_keys.insert(k);
        }
    if (js.contains("index_size_override"))
        for (const auto& [key, bytes] : js["index_size_override"].items())
            uc.stats.index_size_override[key] = bytes.get<double>();
    uc.stats.shard_lookup_bytes = js.value("shard_lookup_bytes", uc.stats.shard_lookup_bytes);
    uc.stats.index_entry_overhead_bytes =
        js.value("index_entry_overhead_bytes", uc.stats.index_entry_overhead_bytes);

    if (doc.contains("queries")) {
        std::set<std::string> ids;
        for (std::size_t i = 0; i < doc["queries"].size(); ++i) {
            const std::string qpath = "queries[" + std::to_string(i) + "]";
            Query q = detail::load_query(doc["queries"][i], qpath);
            if (!ids.insert(q.id).second)
                throw ConfigError(qpath + ": duplicate query id '" + q.id + "'");
            for (const auto& k : q.filter_keys) {
                if (!model_keys.count(k))
                    throw ConfigError(qpath + ": filter key '" + k + "' not in the model");
                if (!uc.stats.has_selectivity(k))
                    throw ConfigError(qpath + ": filter key '" + k + "' has no selectivity");
            }
            for (const auto& k : q.projection_keys)
                if (!model_keys.count(k))
                    throw ConfigError(qpath + ": projection key '" + k + "' not in the model");
            for (const auto& k : q.join_keys)
                if (!model_keys.count(k))
                    throw ConfigError(qpath + ": join key '" + k + "' not in the model");
            uc.queries.push_back(std::move(q));
        }
    }

    if (doc.contains("sweep")) {
        const nlohmann::json& jw = doc["sweep"];
        if (jw.contains("scales")) {
            uc.sweep_scales.clear();
            for (const auto& v : jw["scales"]) uc.sweep_scales.push_back(v.get<double>());
        }
        if (jw.contains("servers")) {
            uc.sweep_servers.clear();
            for (const auto& v : jw["servers"]) uc.sweep_servers.push_back(v.get<double>());
        }
    }
    for (double s : uc.sweep_scales)
        if (!(s >= 1)) throw ConfigError("sweep.scales: scale must be >= 1");
    for (double s : uc.sweep_servers)
        if (!(s >= 1)) throw ConfigError("sweep.servers: servers must be >= 1");

    uc.constants = detail::load_constants(doc.value("constants", nlohmann::json()));
    return uc;
}

inline UseCase load_use_case_file(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw ConfigError("cannot open config file '" + file_path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("config '" + file_path + "' is not valid JSON: " + e.what());
    }
    return load_use_case(doc);
}

inline nlohmann::json save_use_case(const UseCase& uc) {
    using nlohmann::json;
    json jm;
    jm["name"] = uc.model.name;
    jm["concepts"] = json::array();
    for (const auto& c : uc.model.concepts) {
        json jc{{"name", c.name}, {"rows", json::array()}};
        for (const auto& r : c.rows) {
            if (r.has_complex_keys())
                throw ConfigError("save_use_case: only normalized models are serializable");
            json jr{{"name", r.name()}, {"primary_key", r.primary_key}, {"keys", json::array()}};
            for (const auto& k : r.keys)
                jr["keys"].push_back({{"name", k.name}, {"bytes", k.size_bytes}});
            jc["rows"].push_back(std::move(jr));
        }
        jm["concepts"].push_back(std::move(jc));
    }
    jm["references"] = json::array();
    for (const auto& ref : uc.model.references)
        jm["references"].push_back({{"source", {{"row", ref.source_row}, {"key", ref.source_key}}},
                                    {"target", {{"row", ref.target_row}, {"key", ref.target_key}}},
                                    {"cardinality", ref.cardinality}});

    json js;
    js["row_counts"] = uc.stats.profile.row_count_per_scale;
    js["selectivity"] = uc.stats.selectivity;
    js["indexes"] = std::vector<std::string>(uc.stats.indexed_keys.begin(),
                                             uc.stats.indexed_keys.end());
    if (!uc.stats.index_size_override.empty())
        js["index_size_override"] = uc.stats.index_size_override;
    js["shard_lookup_bytes"] = uc.stats.shard_lookup_bytes;
    js["index_entry_overhead_bytes"] = uc.stats.index_entry_overhead_bytes;

    json jq = json::array();
    for (const auto& q : uc.queries)
        jq.push_back({{"id", q.id},
                      {"mode", q.mode == QueryMode::Read ? "read" : "update"},
                      {"filter", q.filter_keys},
                      {"projection", q.projection_keys},
                      {"join", q.join_keys},
                      {"sharding", q.sharded_keys},
                      {"occurrences", q.occurrences},
                      {"latency_bound_s", q.latency_bound},
                      {"message_bytes", q.message_bytes}});

    json doc;
    doc["model"] = std::move(jm);
    doc["statistics"] = std::move(js);
    doc["queries"] = std::move(jq);
    doc["sweep"] = {{"scales", uc.sweep_scales}, {"servers", uc.sweep_servers}};
    doc["constants"] = {{"ram_gb_per_s", uc.constants.ram_speed},
                        {"ssd_gb_per_s", uc.constants.ssd_speed},
                        {"com_gb_per_s", uc.constants.com_speed},
                        {"ram_kgco2e_per_gb", uc.constants.ram_carbon},
                        {"ssd_kgco2e_per_gb", uc.constants.ssd_carbon},
                        {"com_kgco2e_per_gb", uc.constants.com_carbon},
                        {"external_transfer_fee_per_gb", uc.constants.ext_transfer_fee},
                        {"server_kgco2e_per_day", uc.constants.server_carbon_per_day},
                        {"server_fee_per_day", uc.constants.server_fee_per_day}};
    return doc;
}

} // namespace denorm
