// Command-line front end: scenario verification, demos, report re-rendering.
//
// Exit codes: 0 all checks passed, 1 any check failed or errored, 2 input
// problem, 3 an enumeration cap was exceeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "rieszprob/builtin_scenarios.hpp"
#include "rieszprob/scenario.hpp"
#include "rieszprob/suite.hpp"

namespace {

using namespace rieszprob;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void print_report(const SuiteReport& report, const std::string& format) {
    if (format == "structured")
        std::cout << report.to_json().dump(2) << "\n";
    else
        std::cout << report.to_text();
}

int run_and_print(const Scenario& scenario, const SuiteOptions& options,
                  const std::string& format) {
    SuiteReport report = run_suite(scenario, options);
    print_report(report, format);
    return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification suite for conditional expectation operators,\n"
                 "independence and Markov processes on finite Riesz spaces"};
    app.require_subcommand(1);

    std::string format = "text";
    bool no_timings = false;
    std::size_t cap_blocks = kIndependenceEnumCap;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Report format")
            ->check(CLI::IsMember({"text", "structured"}));
        cmd->add_flag("--no-timings", no_timings, "Suppress timing fields (deterministic output)");
        cmd->add_option("--cap-blocks", cap_blocks, "Enumeration cap in partition blocks");
    };

    auto* verify = app.add_subcommand("verify", "Run the checks of a scenario file");
    std::string scenario_path;
    verify->add_option("file", scenario_path, "Scenario file (\"-\" for stdin)")->required();
    add_common(verify);

    auto* demo = app.add_subcommand("demo", "Run a built-in scenario");
    auto* demo_two_coin = demo->add_subcommand("two-coin", "Two fair coins, full battery");
    add_common(demo_two_coin);
    auto* demo_walk = demo->add_subcommand("random-walk", "Rademacher walk battery");
    std::size_t steps = 3;
    demo_walk->add_option("--steps", steps, "Number of steps (1..5)");
    add_common(demo_walk);
    demo->require_subcommand(1);

    auto* report_cmd = app.add_subcommand("report", "Re-render a structured report");
    std::string report_path = "-";
    report_cmd->add_option("file", report_path, "Report file (default stdin)");
    add_common(report_cmd);

    CLI11_PARSE(app, argc, argv);

    SuiteOptions options;
    options.timings = !no_timings;
    options.cap_blocks = cap_blocks;

    try {
        if (*verify) {
            Scenario scenario = load_scenario(read_input(scenario_path));
            return run_and_print(scenario, options, format);
        }
        if (*demo_two_coin) return run_and_print(two_coin_scenario(), options, format);
        if (*demo_walk) {
            if (steps < 1 || steps > kWalkCap) {
                std::cerr << "error: --steps must be in 1.." << kWalkCap << "\n";
                return 2;
            }
            return run_and_print(random_walk_scenario(steps), options, format);
        }
        if (*report_cmd) {
            Json j = Json::parse(read_input(report_path));
            SuiteReport report = suite_report_from_json(j);
            if (no_timings) report.timings = false;
            print_report(report, format);
            return report.exit_code();
        }
    } catch (const ScenarioError& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return 2;
    } catch (const Json::exception& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return 2;
    } catch (const CapError& err) {
        std::cerr << "cap exceeded: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
