// mailbox: explore, replay, report and stress the 6/4 mailbox algorithm.
//
// Exit codes: 0 every trace passed, 1 a violation was found, 2 usage or input error.

#include "mailbox/explorer.hpp"
#include "mailbox/scenario.hpp"
#include "mailbox/stress.hpp"
#include "mailbox/trace_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace mailbox;

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

const std::vector<std::string> kPredicateNames{"full", "tp-ne-th"};
const std::vector<std::string> kAlgorithmNames{"six-four", "unbounded"};
const std::vector<std::string> kModeNames{"auto", "reference", "sweep"};

CheckMode parse_mode(const std::string& s) {
    if (s == "reference") {
        return CheckMode::Reference;
    }
    return s == "sweep" ? CheckMode::Sweep : CheckMode::Auto;
}

struct ExploreArgs {
    ExploreConfig config;
    std::string predicate = "full";
    std::string algorithm = "six-four";
    std::string mode = "auto";
    std::uint32_t runs = 0;
    std::string emit_dir;
    bool every_schedule = false;
};

int cmd_explore(ExploreArgs& a) {
    auto& c = a.config;
    c.max_actions = default_max_actions();
    c.runs = a.runs;
    c.predicate = *parse_predicate(a.predicate);
    c.algorithm = *parse_algorithm(a.algorithm);
    c.mode = parse_mode(a.mode);
    ExploreSummary summary;
    if (a.runs > 0) {
        summary = random_walk(c).summary;
    } else if (a.every_schedule) {
        summary = explore_reference(c);
    } else {
        summary = explore(c);
    }
    std::cout << "algorithm " << to_string(c.algorithm) << ", predicate " << to_string(c.predicate)
              << ", delivers " << c.max_delivers << ", checks " << c.max_checks;
    if (a.runs > 0) {
        std::cout << ", random runs " << a.runs << ", seed " << c.seed;
    }
    std::cout << '\n' << format_summary(summary);
    if (!a.emit_dir.empty() && !summary.violations.empty()) {
        std::filesystem::create_directories(a.emit_dir);
        for (std::size_t i = 0; i < summary.violations.size(); ++i) {
            const auto path =
                (std::filesystem::path(a.emit_dir) / ("violation-" + std::to_string(i) + ".trace"))
                    .string();
            write_trace_file(path, summary.violations[i].trace);
            std::cout << "wrote " << path << '\n';
        }
    }
    return summary.ok() ? kPass : kViolation;
}

int report(const Trace& trace, CheckMode mode, const std::string& emit) {
    const auto verdict = check_trace(trace, mode);
    if (!verdict.structure_error) {
        std::cout << format_event_table(verdict);
    }
    std::cout << format_verdict(verdict);
    if (!emit.empty()) {
        write_trace_file(emit, trace);
    }
    return verdict.ok() ? kPass : kViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model checker and stress harness for the 6/4 mailbox algorithm"};
    app.require_subcommand(1);

    ExploreArgs ex;
    auto* explore_cmd = app.add_subcommand("explore", "Check every schedule up to the bounds");
    explore_cmd->add_option("--delivers", ex.config.max_delivers, "Deliver operations")
        ->capture_default_str();
    explore_cmd->add_option("--checks", ex.config.max_checks, "Check operations")
        ->capture_default_str();
    explore_cmd->add_option("--predicate", ex.predicate, "full or tp-ne-th")
        ->check(CLI::IsMember(kPredicateNames))
        ->capture_default_str();
    explore_cmd->add_option("--algorithm", ex.algorithm, "six-four or unbounded")
        ->check(CLI::IsMember(kAlgorithmNames))
        ->capture_default_str();
    explore_cmd->add_option("--random", ex.runs, "Random schedules instead of all of them");
    explore_cmd->add_option("--seed", ex.config.seed, "Seed for --random")->capture_default_str();
    explore_cmd->add_option("--emit-traces", ex.emit_dir, "Directory for violating traces");
    explore_cmd->add_option("--examples", ex.config.max_examples, "Violating traces to keep")
        ->capture_default_str();
    explore_cmd->add_option("--mode", ex.mode, "Checker algorithms: auto, reference, sweep")
        ->check(CLI::IsMember(kModeNames))
        ->capture_default_str();
    explore_cmd->add_flag("--every-schedule", ex.every_schedule,
                          "Visit each schedule separately (slow)");

    std::string replay_source;
    std::string replay_pred = "full";
    std::string replay_alg = "six-four";
    std::string replay_emit;
    auto* replay_cmd = app.add_subcommand("replay", "Run a scenario and show its event table");
    replay_cmd->add_option("scenario", replay_source, "Scenario file or bundled scenario name")
        ->required();
    replay_cmd->add_option("--predicate", replay_pred, "full or tp-ne-th")
        ->check(CLI::IsMember(kPredicateNames))
        ->capture_default_str();
    replay_cmd->add_option("--algorithm", replay_alg, "six-four or unbounded")
        ->check(CLI::IsMember(kAlgorithmNames))
        ->capture_default_str();
    replay_cmd->add_option("--emit", replay_emit, "Write the trace to this file");

    std::string report_path;
    std::string report_mode = "auto";
    auto* report_cmd = app.add_subcommand("report", "Check a trace file");
    report_cmd->add_option("trace", report_path, "Trace file")->required();
    report_cmd->add_option("--mode", report_mode, "Checker algorithms: auto, reference, sweep")
        ->check(CLI::IsMember(kModeNames))
        ->capture_default_str();

    StressConfig st;
    std::string stress_pred = "full";
    std::string stress_emit;
    auto* stress_cmd = app.add_subcommand("stress", "Run two threads and check the recording");
    stress_cmd->add_option("--ops", st.ops, "Letters to deliver and remove")
        ->capture_default_str();
    stress_cmd->add_option("--seed", st.seed, "Seed for pauses")->capture_default_str();
    stress_cmd->add_option("--predicate", stress_pred, "full or tp-ne-th")
        ->check(CLI::IsMember(kPredicateNames))
        ->capture_default_str();
    stress_cmd->add_option("--emit", stress_emit, "Write the recorded trace to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*explore_cmd) {
            return cmd_explore(ex);
        }
        if (*replay_cmd) {
            std::optional<Scenario> sc = bundled_scenario(replay_source);
            if (!sc) {
                sc = load_scenario(replay_source);
            }
            const auto alg = *parse_algorithm(replay_alg);
            const auto pred = *parse_predicate(replay_pred);
            std::cout << "scenario " << sc->name << ", algorithm " << to_string(alg)
                      << ", predicate " << to_string(pred) << '\n';
            return report(replay(*sc, alg, pred), CheckMode::Auto, replay_emit);
        }
        if (*report_cmd) {
            return report(read_trace_file(report_path), parse_mode(report_mode), "");
        }
        if (*stress_cmd) {
            if (st.ops == 0) {
                std::cerr << "--ops must be at least 1\n";
                return kUsage;
            }
            st.predicate = *parse_predicate(stress_pred);
            const auto res = run_stress(st);
            const auto verdict = check_trace(res.trace);
            std::cout << "ops " << st.ops << ", seed " << st.seed << ", predicate "
                      << to_string(st.predicate) << '\n'
                      << "actions " << res.trace.actions.size() << '\n'
                      << "checks " << res.checks << " (" << res.short_checks << " short)\n"
                      << "recording attempts " << res.attempts << '\n'
                      << "max actions per operation " << verdict.facts.max_actions_per_op << '\n'
                      << format_verdict(verdict);
            if (!stress_emit.empty()) {
                write_trace_file(stress_emit, res.trace);
            }
            return verdict.ok() ? kPass : kViolation;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IllegalDirective& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const BoundExceeded& e) {
        std::cerr << "error: " << e.what() << " (raise MAILBOX_MAX_ACTIONS)\n";
        return kUsage;
    } catch (const StressTimeout& e) {
        std::cerr << "stress failed: " << e.what() << '\n';
        return kViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
