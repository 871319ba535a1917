#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "afm/bench/harness.hpp"
#include "afm/bench/scenario.hpp"
#include "afm/bench/summary.hpp"
#include "afm/error.hpp"
#include "afm/focus_manager.hpp"
#include "afm/importance.hpp"
#include "afm/settings.hpp"

namespace afm::cli {

namespace {

struct BenchArgs {
    std::vector<std::string> scenarios{"allergy"};
    std::string method = "afm";
    std::size_t seeds = 30;
    std::uint64_t first_seed = 0;
    std::size_t budget = 286;
    bool offline = false;
    bool no_compression = false;
    bool no_stubs = false;
    bool no_importance = false;
    std::string out_dir = "out";
    std::string config;
    std::size_t jobs = 1;
    std::optional<double> fail_below;
};

struct ExplainArgs {
    std::string transcript;
    std::size_t budget = 286;
    std::string query;
    std::string preamble;
    bool json = false;
    std::string rules;
    bool no_rules = false;
    std::string config;
};

struct ValidateArgs {
    std::vector<std::string> scenarios;
};

Settings load_settings(const std::string& config_path) {
    Settings settings = config_path.empty() ? Settings{} : load_settings_file(config_path);
    apply_env_overrides(settings);
    return settings;
}

std::vector<Method> methods_for(const std::string& name) {
    if (name == "all") return {Method::Default, Method::Naive, Method::Recency, Method::Afm};
    return {parse_method(name)};
}

bool write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        err << "error: cannot write " << path.string() << "\n";
        return false;
    }
    out << text;
    return static_cast<bool>(out);
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    const Settings settings = load_settings(a.config);
    std::string warning;
    const TokenCounter counter = make_token_counter(settings, &warning);
    if (!warning.empty()) err << "warning: " << warning << "; using whitespace token counts\n";

    const std::vector<Method> methods = methods_for(a.method);
    const std::filesystem::path out_dir(a.out_dir);
    std::filesystem::create_directories(out_dir);

    std::shared_ptr<Gateway> live;
    if (!a.offline) live = std::make_shared<HttpGateway>(settings.gateway);

    std::vector<bench::RunResult> results;
    for (const std::string& name : a.scenarios) {
        bench::Scenario scenario;
        try {
            scenario = bench::resolve_scenario(name);
            bench::validate_scenario(scenario);
        } catch (const SchemaError& e) {
            err << name << ": " << e.what() << "\n";
            return kExitFailure;
        }
        const bench::BenchBackends backends = a.offline
                                                  ? bench::offline_bench_backends(scenario, counter)
                                                  : bench::live_bench_backends(live, settings.gateway, counter);
        for (const Method method : methods) {
            bench::BenchOptions options;
            options.method = method;
            options.seeds = a.seeds;
            options.first_seed = a.first_seed;
            options.budget = a.budget;
            options.ablations = {a.no_compression, a.no_stubs, a.no_importance};
            options.focus = settings.focus;
            options.recency = settings.recency;
            options.chat_model = settings.gateway.chat_model;
            options.jobs = a.jobs;
            options.out_dir = out_dir;
            auto runs = bench::run_benchmark(scenario, options, backends);
            results.insert(results.end(), std::make_move_iterator(runs.begin()),
                           std::make_move_iterator(runs.end()));
        }
    }

    const auto rows = bench::summarize_by_method(results);
    if (!write_file(out_dir / "summary.json", bench::summary_to_json(rows), err)) return kExitUsage;
    if (!write_file(out_dir / "summary.csv", bench::summary_to_csv(rows), err)) return kExitUsage;
    out << bench::summary_table(rows);

    if (a.fail_below) {
        for (const auto& row : rows) {
            if (row.pass_rate < *a.fail_below) {
                err << row.scenario << "/" << row.method << ": pass rate " << row.pass_label() << " below "
                    << *a.fail_below << "%\n";
                return kExitFailure;
            }
        }
    }
    return kExitOk;
}

std::string fixed(double value, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

std::string explain_table(const ContextReport& report) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-5s %-9s %7s %7s %-8s %7s %-11s %-11s %6s\n", "id", "role", "sim",
                  "recency", "label", "score", "intended", "achieved", "tokens");
    os << line;
    for (const DecisionRow& r : report.rows) {
        const std::string achieved = r.achieved ? std::string(to_string(*r.achieved)) : "dropped";
        std::snprintf(line, sizeof line, "%-5llu %-9s %7s %7s %-8s %7s %-11s %-11s %6zu\n",
                      static_cast<unsigned long long>(r.id), std::string(to_string(r.role)).c_str(),
                      fixed(r.similarity, 3).c_str(), fixed(r.recency, 3).c_str(),
                      std::string(to_string(r.label)).c_str(), fixed(r.score, 3).c_str(),
                      std::string(to_string(r.intended)).c_str(), achieved.c_str(), r.tokens_spent);
        os << line;
    }
    const PackStats& s = report.prompt.stats;
    os << "total_tokens=" << s.total_tokens << " full=" << s.full_count << " compressed=" << s.compressed_count
       << " stub=" << s.stub_count << " dropped=" << s.dropped_count;
    if (report.preamble_tokens > 0) {
        os << " preamble=" << (report.preamble_included ? std::to_string(report.preamble_tokens) : "dropped");
    }
    os << "\n";
    return os.str();
}

int cmd_explain(const ExplainArgs& a, std::ostream& out) {
    const Settings settings = load_settings(a.config);
    FocusBackends backends = offline_backends(make_token_counter(settings));
    if (!a.no_rules) {
        if (a.rules.empty()) {
            backends.classifier = std::make_shared<RuleClassifier>(RuleClassifier::bundled());
        } else {
            std::ifstream in(a.rules);
            if (!in) throw AssetLoadError("cannot open rules: " + a.rules);
            std::ostringstream text;
            text << in.rdbuf();
            backends.classifier = std::make_shared<RuleClassifier>(RuleClassifier::from_json(text.str()));
        }
    }

    const auto events = bench::read_transcript(a.transcript);
    std::vector<Message> history = bench::history_from_transcript(events);
    const FocusPacker packer(settings.focus, backends);
    const std::optional<std::string_view> preamble =
        a.preamble.empty() ? std::nullopt : std::optional<std::string_view>(a.preamble);
    const ContextReport report = packer.pack(history, a.query, a.budget, preamble);

    if (a.json) {
        out << explain_to_json(report) << "\n";
    } else {
        out << explain_table(report);
    }
    return kExitOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    int status = kExitOk;
    for (const std::string& name : a.scenarios) {
        try {
            const bench::Scenario scenario = bench::resolve_scenario(name);
            bench::validate_scenario(scenario);
            out << name << ": ok (" << scenario.turns.size() << " turns)\n";
        } catch (const Error& e) {
            err << name << ": " << e.what() << "\n";
            status = kExitFailure;
        }
    }
    return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Budget-aware dialogue context packing and constraint-retention benchmarks", "afm"};
    app.require_subcommand(1);

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Replay scenarios per seed and grade the final reply");
    bench->add_option("--scenario", bench_args.scenarios, "Bundled scenario name or JSON path (repeatable)")
        ->capture_default_str();
    bench->add_option("--method", bench_args.method, "default | naive | recency | afm | all")
        ->capture_default_str()
        ->check(CLI::IsMember({"default", "stateless", "naive", "recency", "afm", "all"}));
    bench->add_option("--seeds", bench_args.seeds, "Runs per method")->capture_default_str()->check(
        CLI::PositiveNumber);
    bench->add_option("--first-seed", bench_args.first_seed, "Seed of the first run")->capture_default_str();
    bench->add_option("--budget", bench_args.budget, "Context token budget")->capture_default_str();
    bench->add_flag("--offline", bench_args.offline, "Use the deterministic stub model; no network");
    bench->add_flag("--no-compression", bench_args.no_compression, "Ablation: never use summaries");
    bench->add_flag("--no-stubs", bench_args.no_stubs, "Ablation: never use placeholders");
    bench->add_flag("--no-importance", bench_args.no_importance, "Ablation: treat every message as trivial");
    bench->add_option("--out", bench_args.out_dir, "Output directory")->capture_default_str();
    bench->add_option("--config", bench_args.config, "Settings JSON file")->check(CLI::ExistingFile);
    bench->add_option("--jobs", bench_args.jobs, "Seeds run in parallel")->capture_default_str()->check(
        CLI::PositiveNumber);
    bench->add_option("--fail-below", bench_args.fail_below, "Exit 1 if any pass rate (percent) is below this")
        ->check(CLI::Range(0.0, 100.0));

    ExplainArgs explain_args;
    auto* explain = app.add_subcommand("explain", "Show per-message packing decisions for a transcript");
    explain->add_option("--transcript", explain_args.transcript, "Transcript JSONL")->required();
    explain->add_option("--budget", explain_args.budget, "Context token budget")->capture_default_str();
    explain->add_option("--query", explain_args.query, "Current query")->required();
    explain->add_option("--preamble", explain_args.preamble, "System preamble packed ahead of the history");
    explain->add_flag("--json", explain_args.json, "Machine-readable output");
    explain->add_option("--rules", explain_args.rules, "Importance rules JSON (bundled rules by default)")
        ->check(CLI::ExistingFile);
    explain->add_flag("--no-rules", explain_args.no_rules, "Classify every message as trivial");
    explain->add_option("--config", explain_args.config, "Settings JSON file")->check(CLI::ExistingFile);

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Check scenario files against the schema");
    validate->add_option("--scenario", validate_args.scenarios, "Bundled scenario name or JSON path")
        ->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << "\n";
        err << "run 'afm --help' for usage\n";
        return kExitUsage;
    }

    try {
        if (bench->parsed()) return cmd_bench(bench_args, out, err);
        if (explain->parsed()) return cmd_explain(explain_args, out);
        return cmd_validate(validate_args, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace afm::cli
