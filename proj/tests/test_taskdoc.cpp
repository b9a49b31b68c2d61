#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "steerkit/taskdoc.hpp"

using namespace steerkit;
using nlohmann::json;

namespace {

json minimal_doc() {
    return json{
        {"schema", "steerkit/1"},
        {"states",
         {{"rho",
           {{"kind", "density"},
            {"dims", {2, 2}},
            {"matrix",
             {{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}},
              {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}, {0.0, 0.0}},
              {{0.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}},
              {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}}}}},
          {"squeezed", {{"kind", "tmsv"}, {"r", 0.5}}}}},
        {"observables",
         {{"sigma_z", {{"builtin", "pauli_z"}}}, {"sigma_x", {{"builtin", "pauli_x"}}}}},
        {"tasks",
         {{{"kind", "steering-conditional"},
           {"state", "rho"},
           {"qA", "sigma_z"},
           {"qB", "sigma_z"},
           {"rA", "sigma_x"},
           {"rB", "sigma_x"}}}}};
}

}  // namespace

TEST_CASE("parse and run the counterexample document") {
    const auto doc = parse_document(minimal_doc().dump());
    CHECK(doc.density_states.count("rho") == 1);
    CHECK(doc.gaussian_states.count("squeezed") == 1);
    CHECK(doc.tasks.size() == 1);

    const auto report = run_document(doc, {});
    const auto& record = report["reports"][0];
    REQUIRE(record.contains("report"));
    CHECK(record["report"]["verdict"] == "saturated");
    CHECK(record["report"]["lhs"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(record["report"]["bound"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("empty task list yields an empty report list") {
    json doc_json = minimal_doc();
    doc_json["tasks"] = json::array();
    const auto doc = parse_document(doc_json.dump());
    const auto report = run_document(doc, {});
    CHECK(report["reports"].empty());
}

TEST_CASE("parse errors carry a path into the document") {
    CHECK_THROWS_AS(parse_document("{not json"), ParseError);

    json bad_schema = minimal_doc();
    bad_schema["schema"] = "steerkit/99";
    CHECK_THROWS_AS(parse_document(bad_schema.dump()), UnknownSchema);

    json missing_ref = minimal_doc();
    missing_ref["tasks"][0]["rB"] = "sigma_w";
    try {
        parse_document(missing_ref.dump());
        FAIL("expected UnresolvedReference");
    } catch (const UnresolvedReference& err) {
        CHECK(err.name() == "sigma_w");
        CHECK(err.path() == "/tasks/0/rB");
    }

    json bad_state = minimal_doc();
    bad_state["states"]["rho"]["matrix"][0][0] = {0.5, 0.0};  // trace 1.5
    try {
        parse_document(bad_state.dump());
        FAIL("expected InvalidState");
    } catch (const InvalidState& err) {
        CHECK(err.path() == "/states/rho");
        REQUIRE(err.defects().size() == 1);
        CHECK(err.defects()[0].kind == StateDefect::non_unit_trace);
        CHECK(err.defects()[0].defect == doctest::Approx(0.5).epsilon(1e-9));
    }

    json bad_matrix = minimal_doc();
    bad_matrix["states"]["rho"]["matrix"][1] = {1.0, 2.0};
    CHECK_THROWS_AS(parse_document(bad_matrix.dump()), ParseError);
}

TEST_CASE("serialized documents reparse to an equal document") {
    const auto doc = parse_document(minimal_doc().dump());
    const auto serialized = document_to_json(doc);
    const auto reparsed = parse_document(serialized.dump());
    CHECK(documents_equal(doc, reparsed));
    CHECK(document_to_json(reparsed) == serialized);
}

TEST_CASE("run output is deterministic") {
    json doc_json = minimal_doc();
    doc_json["tasks"].push_back({{"kind", "lhs-search"},
                                 {"dim", 2},
                                 {"trials", 200},
                                 {"lambdas", 4}});
    doc_json["tasks"].push_back({{"kind", "steering-conditional-cv"}, {"state", "squeezed"}});
    const auto doc = parse_document(doc_json.dump());

    const auto once = render_report(run_document(doc, {42, 1}));
    const auto again = render_report(run_document(doc, {42, 1}));
    const auto threaded = render_report(run_document(doc, {42, 4}));
    CHECK(once == again);
    CHECK(once == threaded);

    const auto reseeded = render_report(run_document(doc, {43, 1}));
    CHECK(once != reseeded);
}

TEST_CASE("task-level errors are recorded in place and the run continues") {
    json doc_json = minimal_doc();
    // dims 2x2 state with 3-dimensional bases: a run-time dimension mismatch
    doc_json["observables"]["comp3"] = {{"builtin", "computational"}, {"dim", 3}};
    doc_json["tasks"].push_back({{"kind", "maassen-uffink"},
                                 {"state", "rho"},
                                 {"q", "comp3"},
                                 {"r", "comp3"}});
    doc_json["tasks"].push_back({{"kind", "steering-symmetric-cv"}, {"state", "squeezed"}});
    const auto doc = parse_document(doc_json.dump());
    const auto report = run_document(doc, {});
    REQUIRE(report["reports"].size() == 3);
    CHECK(report["reports"][0].contains("report"));
    CHECK(report["reports"][1].contains("error"));
    CHECK(report["reports"][1]["error"]["type"] == "DimensionMismatch");
    CHECK(report["reports"][2].contains("report"));
    CHECK_FALSE(report_has_numerical_failure(report));
}

TEST_CASE("cv and search tasks report the derived quantities") {
    json doc_json = minimal_doc();
    doc_json["tasks"] = json::array();
    doc_json["tasks"].push_back({{"kind", "steering-conditional-cv"}, {"state", "squeezed"}});
    doc_json["tasks"].push_back({{"kind", "steering-symmetric-binned"},
                                 {"state", "squeezed"},
                                 {"bins", 32},
                                 {"range_sigmas", 6.0}});
    doc_json["tasks"].push_back(
        {{"kind", "lhs-search"}, {"dim", 2}, {"trials", 300}, {"seed", 42}, {"lambdas", 4}});
    const auto report = run_document(parse_document(doc_json.dump()), {});

    const double margin = report["reports"][0]["report"]["margin"].get<double>();
    CHECK(margin == doctest::Approx(-std::log2(std::cosh(1.0))).epsilon(1e-9));

    const auto& binned = report["reports"][1]["report"];
    CHECK(binned["lhs"].get<double>() <= binned["extras"]["continuous_lhs"].get<double>() + 1e-9);

    const auto& search = report["reports"][2]["report"];
    CHECK(search["min_steering_sum"].get<double>() >= 1.0 - 1e-9);
    CHECK(search["bound_log2_omega"].get<double>() == doctest::Approx(1.0));
    CHECK(search["argmin_ensemble"]["weights"].size() == 4);
}

TEST_CASE("demo document reproduces the contradiction") {
    const auto doc = contradiction_demo_document();
    const auto report = run_document(doc, {});
    REQUIRE(report["reports"].size() == 3);

    const auto& naive = report["reports"][0]["report"];
    CHECK(naive["name"] == "naive-substitution");
    CHECK(naive["lhs"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(naive["bound"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(naive["steering_witness"] == false);
    CHECK(naive["contradiction"] == true);

    const auto& valid = report["reports"][1]["report"];
    CHECK(valid["verdict"] == "saturated");
    CHECK(valid["bound"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

    const std::string summary = summarize_report(report);
    CHECK(summary.find("CONTRADICTION") != std::string::npos);
}

TEST_CASE("report numbers are printed with at most 12 significant digits") {
    json doc_json = minimal_doc();
    doc_json["tasks"] = json::array();
    doc_json["tasks"].push_back({{"kind", "steering-conditional-cv"}, {"state", "squeezed"}});
    const auto text = render_report(run_document(parse_document(doc_json.dump()), {}));
    // lhs = log2(pi e) - log2(cosh 1) = 2.46837771739 at 12 digits
    CHECK(text.find("2.46837771739") != std::string::npos);
    CHECK(text.find("2.4683777173907") == std::string::npos);
}

TEST_CASE("cli binary honors the exit code contract") {
    const char* cli = std::getenv("STEERKIT_CLI");
    if (cli == nullptr) {
        MESSAGE("STEERKIT_CLI not set; skipping binary checks");
        return;
    }
    const std::string base = std::string(cli);
    auto exit_code = [](int status) { return WEXITSTATUS(status); };

    CHECK(exit_code(std::system((base + " demo contradiction > /dev/null 2>&1").c_str())) == 0);
    CHECK(exit_code(std::system((base + " bogus-subcommand > /dev/null 2>&1").c_str())) == 1);
    CHECK(exit_code(std::system((base + " run /nonexistent.json > /dev/null 2>&1").c_str())) ==
          2);

    const std::string doc_path = "/tmp/steerkit_test_doc.json";
    {
        std::ofstream out(doc_path);
        out << minimal_doc().dump();
    }
    CHECK(exit_code(std::system((base + " validate " + doc_path + " > /dev/null 2>&1").c_str())) ==
          0);
    CHECK(exit_code(std::system((base + " run " + doc_path + " > /dev/null 2>&1").c_str())) == 0);

    const std::string bad_path = "/tmp/steerkit_test_bad.json";
    {
        json bad = minimal_doc();
        bad["schema"] = "nope/0";
        std::ofstream out(bad_path);
        out << bad.dump();
    }
    CHECK(exit_code(std::system((base + " validate " + bad_path + " > /dev/null 2>&1").c_str())) ==
          2);
}

TEST_CASE("malformed task parameter types are recorded, not fatal") {
    json doc_json = minimal_doc();
    doc_json["tasks"].push_back(
        {{"kind", "lhs-search"}, {"dim", 2}, {"trials", "many"}, {"lambdas", 4}});
    const auto report = run_document(parse_document(doc_json.dump()), {});
    REQUIRE(report["reports"].size() == 2);
    CHECK(report["reports"][0].contains("report"));
    CHECK(report["reports"][1].contains("error"));
    CHECK(report["reports"][1]["error"]["type"] == "ParseError");
}

TEST_CASE("lhs-search task reference rules") {
    json doc_json = minimal_doc();
    doc_json["tasks"] = json::array();
    doc_json["tasks"].push_back(
        {{"kind", "lhs-search"}, {"qB", "sigma_z"}, {"trials", 10}});
    CHECK_THROWS_AS(parse_document(doc_json.dump()), ParseError);

    doc_json["tasks"][0]["rB"] = "sigma_x";
    const auto report = run_document(parse_document(doc_json.dump()), {});
    CHECK(report["reports"][0]["report"]["bound_log2_omega"].get<double>() ==
          doctest::Approx(1.0));

    doc_json["tasks"][0].erase("qB");
    doc_json["tasks"][0].erase("rB");
    CHECK_THROWS_AS(parse_document(doc_json.dump()), ParseError);
}
