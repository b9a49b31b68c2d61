#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "steerkit/taskdoc.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_invalid_document = 2;
constexpr int exit_numerical = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw steerkit::ParseError("", "cannot read input file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_and_print(const steerkit::TaskDocument& doc, const steerkit::RunOptions& options) {
    const auto report = steerkit::run_document(doc, options);
    std::cout << steerkit::render_report(report);
    std::cerr << steerkit::summarize_report(report);
    return steerkit::report_has_numerical_failure(report) ? exit_numerical : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropic EPR-steering witnesses on discrete and Gaussian states"};
    app.require_subcommand(1);

    std::string file;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    auto* validate = app.add_subcommand("validate", "parse and validate a task document");
    validate->add_option("file", file, "task document (JSON)")->required();

    auto* run = app.add_subcommand("run", "run every task in a document");
    run->add_option("file", file, "task document (JSON)")->required();
    run->add_option("--seed", seed, "default seed for seeded tasks");
    run->add_option("--threads", threads, "worker thread count")->check(CLI::Range(1u, 256u));

    auto* demo = app.add_subcommand("demo", "built-in demonstrations");
    std::string demo_name;
    demo->add_option("name", demo_name, "demo name (contradiction)")->required();

    auto* search = app.add_subcommand("lhs-search", "randomized search over LHS ensembles");
    Eigen::Index dim = 2;
    std::uint64_t trials = 10000;
    Eigen::Index lambdas = 8;
    std::string family = "both";
    search->add_option("--dim", dim, "Bob's dimension")->check(CLI::Range(2, 64));
    search->add_option("--trials", trials, "number of sampled ensembles")
        ->check(CLI::PositiveNumber);
    search->add_option("--seed", seed, "master seed");
    search->add_option("--lambdas", lambdas, "hidden-variable alphabet size")
        ->check(CLI::Range(1, 64));
    search->add_option("--family", family, "Bob state family: pure|mixed|both")
        ->check(CLI::IsMember({"pure", "mixed", "both"}));
    search->add_option("--threads", threads, "worker thread count")->check(CLI::Range(1u, 256u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (validate->parsed()) {
            const auto doc = steerkit::parse_document(read_file(file));
            std::cerr << "document valid: " << doc.density_states.size() << " density state(s), "
                      << doc.gaussian_states.size() << " gaussian state(s), "
                      << doc.observables.size() << " observable(s), " << doc.tasks.size()
                      << " task(s)\n";
            return exit_ok;
        }
        if (run->parsed()) {
            const auto doc = steerkit::parse_document(read_file(file));
            return run_and_print(doc, {seed, threads});
        }
        if (demo->parsed()) {
            if (demo_name != "contradiction") {
                std::cerr << "unknown demo '" << demo_name << "'\n";
                return exit_usage;
            }
            return run_and_print(steerkit::contradiction_demo_document(), {0, 1});
        }
        if (search->parsed()) {
            nlohmann::json doc_json = {
                {"schema", steerkit::task_schema_version},
                {"tasks",
                 {{{"kind", "lhs-search"},
                   {"dim", dim},
                   {"trials", trials},
                   {"seed", seed},
                   {"lambdas", lambdas},
                   {"family", family}}}}};
            const auto doc = steerkit::parse_document(doc_json.dump());
            return run_and_print(doc, {seed, threads});
        }
    } catch (const steerkit::QuadratureFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const steerkit::EigensolveFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    } catch (const steerkit::Error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_invalid_document;
    } catch (const std::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return exit_invalid_document;
    }
    return exit_usage;
}
