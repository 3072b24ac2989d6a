#pragma once

/*
 * Setting sweeps over generated models: per-query and total daily costs on
 * the cartesian product of scales and cluster sizes, latency qualification,
 * single-dimension ranking and log-normalized plot scores. Output rows are
 * canonically ordered (signature, scale, servers) and the emitted tables are
 * byte-stable for identical inputs.
 */

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "denorm/costs.hpp"
#include "denorm/model.hpp"
#include "denorm/query_cost.hpp"
#include "denorm/workload.hpp"

namespace denorm {

enum class Dimension { Time, Carbon, Money };

inline const char* dimension_name(Dimension d) {
    switch (d) {
        case Dimension::Time: return "time";
        case Dimension::Carbon: return "carbon";
        case Dimension::Money: return "money";
    }
    return "?";
}

inline Dimension parse_dimension(const std::string& name) {
    if (name == "time") return Dimension::Time;
    if (name == "carbon") return Dimension::Carbon;
    if (name == "money") return Dimension::Money;
    throw CostError("unknown dimension '" + name + "' (expected time|carbon|money)");
}

inline double component(const CostVector& c, Dimension d) {
    switch (d) {
        case Dimension::Time: return c.time;
        case Dimension::Carbon: return c.carbon;
        case Dimension::Money: return c.money;
    }
    return 0;
}

struct SweepRow {
    std::string signature;
    Settings settings;
    std::vector<CostVector> per_query;  // aligned with SweepResult::query_ids
    CostVector total;
    bool qualified = false;
    std::vector<std::string> violations;
    bool failed = false;
    std::string error;
};

struct SweepResult {
    std::vector<std::string> query_ids;
    std::vector<SweepRow> rows;
};

namespace detail {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

inline SweepResult sweep(const std::map<std::string, DataModel>& models,
                         const std::vector<Query>& queries, const std::vector<double>& scales,
                         const std::vector<double>& servers, const Statistics& stats,
                         const CostConstants& constants) {
    if (models.empty() || scales.empty() || servers.empty())
        throw CostError("sweep: models, scales and servers must be non-empty");
    SweepResult result;
    for (const auto& q : queries) result.query_ids.push_back(q.id);

    for (const auto& [sig, model] : models) {
        for (double scale : scales) {
            for (double srv : servers) {
                SweepRow row;
                row.signature = sig;
                row.settings = {scale, srv};
                try {
                    row.total = static_cost(row.settings, constants);
                    for (const auto& q : queries) {
                        CostVector qc = query_cost(model, q, row.settings, stats, constants);
                        row.per_query.push_back(qc);
                        row.total += q.occurrences * qc;
                        if (qc.time > q.latency_bound)
                            row.violations.push_back(q.id + ": T=" + detail::fmt_num(qc.time) +
                                                     " > tau=" + detail::fmt_num(q.latency_bound));
                    }
                    row.qualified = row.violations.empty();
                } catch (const std::exception& e) {
                    row.failed = true;
                    row.error = e.what();
                }
                result.rows.push_back(std::move(row));
            }
        }
    }
    return result;
}

// Rows whose every per-query time respects its latency bound.
inline SweepResult qualify(const SweepResult& result) {
    SweepResult out;
    out.query_ids = result.query_ids;
    for (const auto& row : result.rows)
        if (!row.failed && row.qualified) out.rows.push_back(row);
    return out;
}

// Qualified rows ascending by one total-cost component; ties by signature.
inline std::vector<SweepRow> rank(const SweepResult& result, Dimension dimension) {
    std::vector<SweepRow> rows;
    for (const auto& row : result.rows)
        if (!row.failed && row.qualified) rows.push_back(row);
    std::stable_sort(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
        double ca = component(a.total, dimension);
        double cb = component(b.total, dimension);
        if (ca != cb) return ca < cb;
        return a.signature < b.signature;
    });
    return rows;
}

struct PlotScore {
    std::string signature;
    Settings settings;
    double score[3] = {0, 0, 0};  // time, carbon, money in [0,1]
};

// log(1+c) min-max normalization per dimension across the whole sweep;
// order-preserving, presentation only.
inline std::vector<PlotScore> normalize_for_plot(const SweepResult& result) {
    constexpr Dimension dims[] = {Dimension::Time, Dimension::Carbon, Dimension::Money};
    double lo[3], hi[3];
    bool any = false;
    for (const auto& row : result.rows) {
        if (row.failed) continue;
        for (int d = 0; d < 3; ++d) {
            double v = component(row.total, dims[d]);
            if (!any) lo[d] = hi[d] = v;
            else {
                lo[d] = std::min(lo[d], v);
                hi[d] = std::max(hi[d], v);
            }
        }
        any = true;
    }
    std::vector<PlotScore> out;
    if (!any) return out;
    for (const auto& row : result.rows) {
        if (row.failed) continue;
        PlotScore s;
        s.signature = row.signature;
        s.settings = row.settings;
        for (int d = 0; d < 3; ++d) {
            double span = std::log1p(hi[d]) - std::log1p(lo[d]);
            s.score[d] = span > 0
                             ? (std::log1p(component(row.total, dims[d])) - std::log1p(lo[d])) / span
                             : 0.0;
        }
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Emission

inline std::string to_csv(const SweepResult& result) {
    std::string out = "signature,scale,servers";
    for (const auto& q : result.query_ids)
        out += "," + q + "_T," + q + "_E," + q + "_F";
    out += ",total_T,total_E,total_F,qualified,violations\n";
    for (const auto& row : result.rows) {
        out += row.signature;
        out += ',' + detail::fmt_num(row.settings.scale);
        out += ',' + detail::fmt_num(row.settings.servers);
        if (row.failed) {
            for (std::size_t i = 0; i < result.query_ids.size(); ++i) out += ",,,";
            out += ",,,,error,\"" + row.error + "\"\n";
            continue;
        }
        for (const auto& qc : row.per_query)
            out += ',' + detail::fmt_num(qc.time) + ',' + detail::fmt_num(qc.carbon) + ',' +
                   detail::fmt_num(qc.money);
        out += ',' + detail::fmt_num(row.total.time) + ',' + detail::fmt_num(row.total.carbon) +
               ',' + detail::fmt_num(row.total.money);
        out += row.qualified ? ",yes" : ",no";
        std::string joined;
        for (const auto& v : row.violations) {
            if (!joined.empty()) joined += "; ";
            joined += v;
        }
        out += ",\"" + joined + "\"\n";
    }
    return out;
}

inline nlohmann::json to_json(const SweepResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : result.rows) {
        nlohmann::json j;
        j["signature"] = row.signature;
        j["scale"] = row.settings.scale;
        j["servers"] = row.settings.servers;
        if (row.failed) {
            j["error"] = row.error;
        } else {
            nlohmann::json per_query = nlohmann::json::object();
            for (std::size_t i = 0; i < result.query_ids.size(); ++i)
                per_query[result.query_ids[i]] = {{"time", row.per_query[i].time},
                                                  {"carbon", row.per_query[i].carbon},
                                                  {"money", row.per_query[i].money}};
            j["queries"] = per_query;
            j["total"] = {{"time", row.total.time},
                          {"carbon", row.total.carbon},
                          {"money", row.total.money}};
            j["qualified"] = row.qualified;
            j["violations"] = row.violations;
        }
        rows.push_back(std::move(j));
    }
    return nlohmann::json{{"queries", result.query_ids}, {"rows", rows}};
}

// Two normalized score columns per model, points ordered by setting; blocks
// ordered by signature. Gnuplot-style comment headers.
inline std::string emit_plot_data(const SweepResult& result, Dimension x, Dimension y) {
    std::vector<PlotScore> scores = normalize_for_plot(result);
    std::map<std::string, std::vector<const PlotScore*>> by_model;
    for (const auto& s : scores) by_model[s.signature].push_back(&s);
    std::string out;
    for (const auto& [sig, points] : by_model) {
        out += "# ";
        out += sig;
        out += '\n';
        for (const PlotScore* p : points) {
            out += detail::fmt_num(p->score[static_cast<int>(x)]);
            out += '\t';
            out += detail::fmt_num(p->score[static_cast<int>(y)]);
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

} // namespace denorm
