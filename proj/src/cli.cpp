#include "partialrank/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "partialrank/aggregation.hpp"
#include "partialrank/confidence.hpp"
#include "partialrank/errors.hpp"
#include "partialrank/evaluation.hpp"
#include "partialrank/io.hpp"
#include "partialrank/synthetic.hpp"

namespace partialrank {

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "csv";
};

struct InputOpts {
    std::string input;
    std::string level = "task";
    std::string input_format = "long";
    std::vector<std::string> negate;
};

struct ExperimentOpts {
    InputOpts in;
    std::string synth_config;
    std::vector<std::string> methods;
    std::vector<double> etas;
    std::size_t repeats = 100;
    std::size_t threads = 1;
    std::string scale_task;
    double lambda = 1.0;
    bool id_tie_break = false;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RANK_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ValidationError(std::string("RANK_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 0;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "random seed (default: $RANK_SEED or 0)");
    cmd->add_option("--output", c.output, "write to FILE instead of stdout");
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_input(CLI::App* cmd, InputOpts& in, bool required) {
    auto* opt = cmd->add_option("--input", in.input, "score file, or - for stdin");
    if (required) opt->required();
    cmd->add_option("--level", in.level, "task or instance")->check(CLI::IsMember({"task", "instance"}));
    cmd->add_option("--input-format", in.input_format, "long CSV or wide task matrix")
        ->check(CLI::IsMember({"long", "wide"}));
    cmd->add_option("--negate-metrics", in.negate, "tasks whose metric is lower-is-better")->delimiter(',');
}

/// `-` reads from `stdin_stream`.
LabeledData load(const InputOpts& in, std::istream& stdin_stream) {
    const Level level = parse_level(in.level);
    const bool from_stdin = in.input == "-";
    LabeledData data;
    if (in.input_format == "wide") {
        if (level != Level::task) throw ValidationError("the wide format holds task-level scores only");
        data = from_stdin ? parse_wide_matrix(stdin_stream) : parse_wide_matrix(std::filesystem::path(in.input));
    } else {
        data = from_stdin ? parse_long_csv(stdin_stream, level)
                          : parse_long_csv(std::filesystem::path(in.input), level);
    }
    if (!in.negate.empty()) negate_tasks(data, in.negate);
    return data;
}

/// Where results go: the --output file or the caller's stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ValidationError("cannot open output file '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

void require_csv(const Common& c, const char* what) {
    if (c.format != "csv") throw ValidationError(std::string(what) + " writes long CSV only");
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& n : names) out.push_back(parse_method(n));
    return out;
}

LabeledData experiment_data(const ExperimentOpts& o, const Common& c, std::istream& stdin_stream) {
    if (o.in.input.empty() == o.synth_config.empty()) {
        throw ValidationError("give exactly one of --input or --synth-config");
    }
    if (!o.in.input.empty()) return load(o.in, stdin_stream);

    std::ifstream f(o.synth_config);
    if (!f) throw ValidationError("cannot open synth config '" + o.synth_config + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("synth config: ") + e.what());
    }
    GumbelConfig cfg;
    try {
        cfg.systems = j.value("systems", cfg.systems);
        cfg.tasks = j.value("tasks", cfg.tasks);
        cfg.instances = j.value("instances", cfg.instances);
        cfg.phi = j.value("phi", cfg.phi);
        cfg.beta = j.value("beta", cfg.beta);
        cfg.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("synth config: ") + e.what());
    }
    ScoreTensor tensor = generate_gumbel(cfg);
    if (parse_level(o.in.level) == Level::task) {
        if (cfg.instances != 1) throw ValidationError("--level task with a synth config needs \"instances\": 1");
        ScoreTable table(tensor.systems(), tensor.tasks());
        for (std::size_t t = 0; t < tensor.tasks(); ++t)
            for (std::size_t n = 0; n < tensor.systems(); ++n) table.set(n, t, *tensor.get(n, t, 0));
        return label_synthetic(std::move(table));
    }
    return label_synthetic(std::move(tensor));
}

ExperimentOptions experiment_options(const ExperimentOpts& o, const Common& c, const LabeledData& data) {
    ExperimentOptions opts;
    opts.methods = parse_methods(o.methods);
    opts.etas = o.etas;
    opts.repeats = o.repeats;
    opts.base_seed = c.seed;
    opts.threads = o.threads;
    opts.random_tie_break = !o.id_tie_break;
    if (!o.scale_task.empty()) {
        opts.scale_task = find_task(data, o.scale_task);
        opts.lambda_scale = o.lambda;
    }
    return opts;
}

void add_experiment(CLI::App* cmd, ExperimentOpts& o) {
    add_input(cmd, o.in, false);
    cmd->add_option("--synth-config", o.synth_config, "JSON Gumbel config instead of --input");
    cmd->add_option("--methods", o.methods, "sigma-l, sigma-2l, mean")->delimiter(',')->required();
    cmd->add_option("--etas", o.etas, "removal proportions")->delimiter(',')->required();
    cmd->add_option("--repeats", o.repeats, "repeats per eta")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--scale-task", o.scale_task, "task rescaled before removal");
    cmd->add_option("--lambda", o.lambda, "rescaling factor for --scale-task");
    cmd->add_flag("--id-tie-break", o.id_tie_break, "break ties by id instead of a seeded random order");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rank systems benchmarked with missing evaluations"};
    app.require_subcommand(1);

    Common common;
    try {
        common.seed = default_seed();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    // aggregate
    auto* aggregate_cmd = app.add_subcommand("aggregate", "rank systems");
    InputOpts agg_in;
    std::string agg_method;
    add_common(aggregate_cmd, common);
    add_input(aggregate_cmd, agg_in, true);
    aggregate_cmd->add_option("--method", agg_method, "sigma-l, sigma-2l or mean")->required();

    // confidence
    auto* conf_cmd = app.add_subcommand("confidence", "pairwise Hoeffding confidence report");
    InputOpts conf_in;
    double delta = 0.05;
    bool two_sided = false;
    std::string heatmap_path;
    add_common(conf_cmd, common);
    add_input(conf_cmd, conf_in, true);
    conf_cmd->add_option("--delta", delta, "failure probability in (0, 1]")->required();
    conf_cmd->add_flag("--strict-two-sided", two_sided, "use ln(2/delta) instead of -ln(delta)");
    conf_cmd->add_option("--heatmap", heatmap_path, "also write the signed-margin heatmap CSV");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate Gumbel scores as a long CSV");
    GumbelConfig gcfg;
    add_common(synth_cmd, common);
    synth_cmd->add_option("--systems", gcfg.systems)->required();
    synth_cmd->add_option("--tasks", gcfg.tasks)->required();
    synth_cmd->add_option("--instances", gcfg.instances)->required();
    synth_cmd->add_option("--phi", gcfg.phi)->required();
    synth_cmd->add_option("--beta", gcfg.beta);

    // corrupt
    auto* corrupt_cmd = app.add_subcommand("corrupt", "remove a proportion of (system, task) scores");
    InputOpts corrupt_in;
    double eta = 0.0;
    add_common(corrupt_cmd, common);
    add_input(corrupt_cmd, corrupt_in, true);
    corrupt_cmd->add_option("--eta", eta, "removal proportion")->required();

    // scale
    auto* scale_cmd = app.add_subcommand("scale", "multiply one task's scores by lambda");
    InputOpts scale_in;
    std::string scale_task;
    double lambda = 1.0;
    add_common(scale_cmd, common);
    add_input(scale_cmd, scale_in, true);
    scale_cmd->add_option("--task", scale_task, "task name or index")->required();
    scale_cmd->add_option("--lambda", lambda)->required();

    // robustness / agreement
    auto* robust_cmd = app.add_subcommand("robustness", "Kendall tau against the full-data ranking");
    ExperimentOpts robust;
    add_common(robust_cmd, common);
    add_experiment(robust_cmd, robust);

    auto* agree_cmd = app.add_subcommand("agreement", "pairwise agreement between methods");
    ExperimentOpts agree;
    add_common(agree_cmd, common);
    add_experiment(agree_cmd, agree);

    std::vector<const char*> argv{"partialrank"};
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << '\n';
            return kExitUsage;
        }

        if (aggregate_cmd->parsed()) {
            const auto data = load(agg_in, in);
            const Method method = parse_method(agg_method);
            const auto result = aggregate(method, data.data);
            Sink sink(common.output, out);
            if (common.format == "json") {
                sink.get() << ranking_json(result, method, data);
            } else {
                write_ranking_csv(sink.get(), result, data);
            }
        } else if (conf_cmd->parsed()) {
            const auto data = load(conf_in, in);
            const auto acc = data.level() == Level::task ? accumulate_tasks(data.table())
                                                         : accumulate_instances(data.tensor());
            const auto constant = two_sided ? HoeffdingConstant::two_sided : HoeffdingConstant::log_inv_delta;
            const auto report = confidence_report(acc, delta, constant);
            const auto order = borda_from_matrix(acc);
            Sink sink(common.output, out);
            if (common.format == "json") {
                sink.get() << confidence_json(report, order, data, constant);
            } else {
                write_confidence_csv(sink.get(), report, order, data);
            }
            if (!heatmap_path.empty()) {
                Sink heat(heatmap_path, out);
                write_heatmap_csv(heat.get(), significance_heatmap(report, order), order, data);
            }
        } else if (synth_cmd->parsed()) {
            require_csv(common, "synth");
            gcfg.seed = common.seed;
            const auto data = label_synthetic(generate_gumbel(gcfg));
            Sink sink(common.output, out);
            write_long_csv(sink.get(), data);
        } else if (corrupt_cmd->parsed()) {
            require_csv(common, "corrupt");
            auto data = load(corrupt_in, in);
            CorruptionConfig cfg;
            cfg.eta = eta;
            cfg.seed = common.seed;
            data.data = apply_corruption(data.data, cfg);
            Sink sink(common.output, out);
            write_long_csv(sink.get(), data);
        } else if (scale_cmd->parsed()) {
            require_csv(common, "scale");
            auto data = load(scale_in, in);
            const std::size_t task = find_task(data, scale_task);
            data.data = std::visit([&](const auto& d) -> Dataset { return partialrank::scale_task(d, task, lambda); },
                                   data.data);
            Sink sink(common.output, out);
            write_long_csv(sink.get(), data);
        } else if (robust_cmd->parsed()) {
            const auto data = experiment_data(robust, common, in);
            const auto result = robustness_curve(data.data, experiment_options(robust, common, data));
            Sink sink(common.output, out);
            if (common.format == "json") {
                sink.get() << robustness_json(result);
            } else {
                write_robustness_csv(sink.get(), result);
            }
        } else if (agree_cmd->parsed()) {
            const auto data = experiment_data(agree, common, in);
            const auto result = agreement_analysis(data.data, experiment_options(agree, common, data));
            Sink sink(common.output, out);
            if (common.format == "json") {
                sink.get() << agreement_json(result);
            } else {
                write_agreement_csv(sink.get(), result);
            }
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const GuardError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return run_cli(args, std::cin, out, err);
}

}  // namespace partialrank
