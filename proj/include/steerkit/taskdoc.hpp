#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "steerkit/cvgauss.hpp"
#include "steerkit/lhs.hpp"
#include "steerkit/witness.hpp"

namespace steerkit {

class ParseError : public Error {
public:
    ParseError(std::string path, const std::string& message)
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class UnknownSchema : public ParseError {
public:
    using ParseError::ParseError;
};

class UnresolvedReference : public ParseError {
public:
    UnresolvedReference(std::string path, std::string name)
        : ParseError(std::move(path), "unresolved reference '" + name + "'"),
          name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class InvalidState : public ParseError {
public:
    InvalidState(std::string path, const StateValidationError& cause)
        : ParseError(std::move(path), cause.what()), defects_(cause.defects()) {}

    const std::vector<DefectRecord>& defects() const { return defects_; }

private:
    std::vector<DefectRecord> defects_;
};

struct Task {
    std::string kind;
    nlohmann::json spec;  // the task object as written, echoed into reports
};

// Parsed and fully resolved input document (schema "steerkit/1").
struct TaskDocument {
    std::string schema;
    std::map<std::string, DensityOperator<double>> density_states;
    std::map<std::string, GaussianState<double>> gaussian_states;
    std::map<std::string, ObservableBasis<double>> observables;
    std::vector<Task> tasks;
};

inline constexpr const char* task_schema_version = "steerkit/1";
inline constexpr const char* report_schema_version = "steerkit-report/1";

TaskDocument parse_document(const std::string& text);

// Canonical serialization; reparsing it yields an equal document.
nlohmann::json document_to_json(const TaskDocument& doc);

bool documents_equal(const TaskDocument& a, const TaskDocument& b);

struct RunOptions {
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

// One report record per task, input order, numbers at 12 significant digits.
// Per-task failures are recorded in place and do not stop the run.
nlohmann::json run_document(const TaskDocument& doc, const RunOptions& options = {});

// The built-in counterexample document: the maximally correlated mixed
// two-qubit state measured in sigma_z / sigma_x, evaluated against both the
// valid conditional steering bound and the invalid substituted bound.
TaskDocument contradiction_demo_document();

std::string render_report(const nlohmann::json& report);     // stdout payload
std::string summarize_report(const nlohmann::json& report);  // stderr summary

// True if any task record carries a numerical-failure error (CLI exit 3).
bool report_has_numerical_failure(const nlohmann::json& report);

}  // namespace steerkit
