// Command-line front end: loads a use-case configuration, generates the
// candidate models, prices them, runs setting sweeps and emits reports.
//
// Exit codes: 0 success, 2 bad configuration, 3 unknown model/dimension,
// 4 I/O failure, 1 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "denorm/denorm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitIo = 4;

struct Options {
    std::string config;
    std::string out;
    std::string model;
    std::string dimension = "time";
    std::string format = "csv";
    std::string dimensions = "time,carbon";
    double scale = 0;    // 0 = take the sweep grid from the config
    double servers = 0;
};

std::string default_config() {
    const char* env = std::getenv("DENORM_CONFIG");
    return env ? env : "";
}

void write_output(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opt.out, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open output file '" + opt.out + "'");
    out << text;
    if (!out) throw std::ios_base::failure("cannot write output file '" + opt.out + "'");
}

denorm::UseCase load(const Options& opt) {
    if (opt.config.empty())
        throw denorm::ConfigError("no configuration given (use --config or DENORM_CONFIG)");
    return denorm::load_use_case_file(opt.config);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

denorm::Dimension dimension_or_fail(const std::string& name) {
    try {
        return denorm::parse_dimension(name);
    } catch (const std::exception& e) {
        throw std::out_of_range(e.what());
    }
}

denorm::Settings one_setting(const Options& opt, const denorm::UseCase& uc) {
    denorm::Settings s;
    s.scale = opt.scale > 0 ? opt.scale : uc.sweep_scales.front();
    s.servers = opt.servers > 0 ? opt.servers : uc.sweep_servers.front();
    return s;
}

const denorm::DataModel& model_by_signature(const denorm::GenerationResult& gen,
                                            const std::string& sig) {
    auto it = gen.models.find(sig);
    if (it == gen.models.end())
        throw std::out_of_range("no generated model has signature '" + sig + "'");
    return it->second;
}

int run_generate(const Options& opt) {
    denorm::UseCase uc = load(opt);
    denorm::GenerationResult gen = denorm::generate(uc.model, uc.queries);
    write_output(opt, denorm::to_manifest(gen));
    std::cerr << "retained " << gen.models.size() << " models (discovered "
              << gen.discovered_count << ", pruned " << gen.pruned_count << ")\n";
    return kExitOk;
}

int run_cost(const Options& opt) {
    denorm::UseCase uc = load(opt);
    denorm::GenerationResult gen = denorm::generate(uc.model, uc.queries);
    const denorm::DataModel& model = model_by_signature(gen, opt.model);
    denorm::Settings s = one_setting(opt, uc);

    std::string out = "model " + opt.model + " at scale " + fmt(s.scale) + ", servers " +
                      fmt(s.servers) + "\n";
    out += "query\tT_s\tE_kgCO2e\tF\n";
    for (const auto& q : uc.queries) {
        denorm::CostVector c = denorm::query_cost(model, q, s, uc.stats, uc.constants);
        out += q.id + "\t" + fmt(c.time) + "\t" + fmt(c.carbon) + "\t" + fmt(c.money) + "\n";
    }
    denorm::CostVector st = denorm::static_cost(s, uc.constants);
    out += "static\t" + fmt(st.time) + "\t" + fmt(st.carbon) + "\t" + fmt(st.money) + "\n";
    denorm::CostVector total = denorm::total_cost(model, uc.queries, s, uc.stats, uc.constants);
    out += "total\t" + fmt(total.time) + "\t" + fmt(total.carbon) + "\t" + fmt(total.money) + "\n";
    write_output(opt, out);
    return kExitOk;
}

denorm::SweepResult run_sweep_impl(const Options& opt, const denorm::UseCase& uc) {
    denorm::GenerationResult gen = denorm::generate(uc.model, uc.queries);
    std::vector<double> scales = opt.scale > 0 ? std::vector<double>{opt.scale} : uc.sweep_scales;
    std::vector<double> servers =
        opt.servers > 0 ? std::vector<double>{opt.servers} : uc.sweep_servers;
    return denorm::sweep(gen.models, uc.queries, scales, servers, uc.stats, uc.constants);
}

int run_sweep(const Options& opt) {
    denorm::UseCase uc = load(opt);
    denorm::SweepResult result = run_sweep_impl(opt, uc);
    if (opt.format == "csv")
        write_output(opt, denorm::to_csv(result));
    else if (opt.format == "json")
        write_output(opt, denorm::to_json(result).dump(2) + "\n");
    else
        throw std::out_of_range("unknown format '" + opt.format + "' (expected csv|json)");
    return kExitOk;
}

int run_rank(const Options& opt) {
    denorm::UseCase uc = load(opt);
    denorm::SweepResult result = run_sweep_impl(opt, uc);
    denorm::Dimension dim = dimension_or_fail(opt.dimension);
    std::string out = "rank\tsignature\tscale\tservers\t" + std::string(denorm::dimension_name(dim)) + "\n";
    int i = 0;
    for (const auto& row : denorm::rank(result, dim))
        out += std::to_string(++i) + "\t" + row.signature + "\t" + fmt(row.settings.scale) + "\t" +
               fmt(row.settings.servers) + "\t" + fmt(denorm::component(row.total, dim)) + "\n";
    write_output(opt, out);
    return kExitOk;
}

void show_row(const denorm::Row& row, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "row " + row.name() + " (pk " + row.primary_key + ")\n";
    for (const auto& k : row.keys) {
        if (k.is_complex()) {
            out.append(static_cast<std::size_t>(depth) * 2 + 2, ' ');
            out += "nested " + k.name +
                   (k.multiplicity == denorm::Multiplicity::OneToMany
                        ? " [x" + fmt(k.avg_count) + "]"
                        : "") +
                   "\n";
            show_row(*k.nested, depth + 2, out);
        } else {
            out.append(static_cast<std::size_t>(depth) * 2 + 2, ' ');
            out += k.name + " (" + fmt(k.size_bytes) + " B)\n";
        }
    }
}

int run_show(const Options& opt) {
    denorm::UseCase uc = load(opt);
    denorm::GenerationResult gen = denorm::generate(uc.model, uc.queries);
    const denorm::DataModel& model = model_by_signature(gen, opt.model);
    std::string out = "signature: " + opt.model + "\n";
    for (const auto& c : model.concepts) {
        out += "concept " + c.name + "\n";
        for (const auto& r : c.rows) show_row(r, 1, out);
    }
    if (!model.references.empty()) {
        out += "references\n";
        for (const auto& ref : model.references)
            out += "  " + ref.source_row + "." + ref.source_key + " -> " + ref.target_row + "." +
                   ref.target_key + " (x" + fmt(ref.cardinality) + ")\n";
    }
    write_output(opt, out);
    return kExitOk;
}

int run_plot(const Options& opt) {
    denorm::UseCase uc = load(opt);
    denorm::SweepResult result = run_sweep_impl(opt, uc);
    auto comma = opt.dimensions.find(',');
    if (comma == std::string::npos)
        throw std::out_of_range("--dimensions expects two names, e.g. time,carbon");
    denorm::Dimension x = dimension_or_fail(opt.dimensions.substr(0, comma));
    denorm::Dimension y = dimension_or_fail(opt.dimensions.substr(comma + 1));
    write_output(opt, denorm::emit_plot_data(result, x, y));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NoSQL data model generation and multidimensional costing"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    Options opt;
    opt.config = default_config();
    app.add_option("--config", opt.config, "use-case configuration file (env DENORM_CONFIG)");
    app.add_option("--out", opt.out, "output file (default: stdout)");
    app.add_option("--scale", opt.scale, "data volume scale override");
    app.add_option("--servers", opt.servers, "cluster size override");

    CLI::App* generate = app.add_subcommand("generate", "write the signatures manifest");
    CLI::App* cost = app.add_subcommand("cost", "per-query costs of one model at one setting");
    cost->add_option("--model", opt.model, "model signature")->required();
    CLI::App* sweep = app.add_subcommand("sweep", "cost every model on the sweep grid");
    sweep->add_option("--format", opt.format, "csv|json");
    CLI::App* rank = app.add_subcommand("rank", "qualified models ordered by one dimension");
    rank->add_option("--dimension", opt.dimension, "time|carbon|money");
    CLI::App* show = app.add_subcommand("show", "pretty-print a model from its signature");
    show->add_option("--model", opt.model, "model signature")->required();
    CLI::App* plot = app.add_subcommand("plot", "normalized score series for two dimensions");
    plot->add_option("--dimensions", opt.dimensions, "pair, e.g. time,carbon");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return run_generate(opt);
        if (cost->parsed()) return run_cost(opt);
        if (sweep->parsed()) return run_sweep(opt);
        if (rank->parsed()) return run_rank(opt);
        if (show->parsed()) return run_show(opt);
        if (plot->parsed()) return run_plot(opt);
    } catch (const denorm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnknown;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
