#include "steerkit/taskdoc.hpp"

#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "steerkit/parallel.hpp"

namespace steerkit {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// parsing helpers, all reporting a JSON-pointer-style path on failure

const json& member(const json& object, const std::string& key, const std::string& path) {
    const auto it = object.find(key);
    if (it == object.end()) {
        throw ParseError(path, "missing required member '" + key + "'");
    }
    return *it;
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path, "expected an object");
}

void expect_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
}

double expect_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path, "expected a number");
    return j.get<double>();
}

std::string expect_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path, "expected a string");
    return j.get<std::string>();
}

std::complex<double> parse_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) {
        throw ParseError(path, "complex entries are [re, im] pairs");
    }
    return {expect_number(j[0], path + "/0"), expect_number(j[1], path + "/1")};
}

Eigen::MatrixXcd parse_complex_matrix(const json& j, const std::string& path) {
    expect_array(j, path);
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) throw ParseError(path, "matrix must be nonempty");
    Eigen::Index cols = -1;
    Eigen::MatrixXcd m;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::string row_path = path + "/" + std::to_string(r);
        const json& row = j[static_cast<std::size_t>(r)];
        expect_array(row, row_path);
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            m.resize(rows, cols);
        }
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError(row_path, "ragged matrix rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                                    row_path + "/" + std::to_string(c));
        }
    }
    return m;
}

// Basis vectors are listed as kets; they become the columns.
Eigen::MatrixXcd parse_basis_vectors(const json& j, const std::string& path) {
    const Eigen::MatrixXcd as_rows = parse_complex_matrix(j, path);
    return as_rows.transpose();
}

DensityOperator<double> parse_density(const json& j, const std::string& path) {
    std::vector<Eigen::Index> dims;
    const json& dims_json = member(j, "dims", path);
    expect_array(dims_json, path + "/dims");
    for (std::size_t i = 0; i < dims_json.size(); ++i) {
        const std::string dim_path = path + "/dims/" + std::to_string(i);
        if (!dims_json[i].is_number_integer()) {
            throw ParseError(dim_path, "expected an integer dimension");
        }
        dims.push_back(dims_json[i].get<Eigen::Index>());
    }
    const Eigen::MatrixXcd matrix = parse_complex_matrix(member(j, "matrix", path), path + "/matrix");
    try {
        return DensityOperator<double>(matrix, std::move(dims));
    } catch (const StateValidationError& err) {
        throw InvalidState(path, err);
    } catch (const Error& err) {
        throw ParseError(path, err.what());
    }
}

GaussianState<double> parse_gaussian(const json& j, const std::string& path) {
    GaussianState<double>::Vector4 mean = GaussianState<double>::Vector4::Zero();
    if (j.contains("mean")) {
        const json& mj = j["mean"];
        expect_array(mj, path + "/mean");
        if (mj.size() != 4) throw ParseError(path + "/mean", "mean must have 4 entries");
        for (std::size_t i = 0; i < 4; ++i) {
            mean(static_cast<Eigen::Index>(i)) =
                expect_number(mj[i], path + "/mean/" + std::to_string(i));
        }
    }
    const json& cj = member(j, "cov", path);
    expect_array(cj, path + "/cov");
    if (cj.size() != 4) throw ParseError(path + "/cov", "covariance must be 4x4");
    GaussianState<double>::Matrix4 cov;
    for (std::size_t r = 0; r < 4; ++r) {
        const std::string row_path = path + "/cov/" + std::to_string(r);
        expect_array(cj[r], row_path);
        if (cj[r].size() != 4) throw ParseError(row_path, "covariance must be 4x4");
        for (std::size_t c = 0; c < 4; ++c) {
            cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                expect_number(cj[r][c], row_path + "/" + std::to_string(c));
        }
    }
    try {
        return GaussianState<double>(mean, cov);
    } catch (const Error& err) {
        throw ParseError(path, err.what());
    }
}

ObservableBasis<double> parse_observable(const std::string& name, const json& j,
                                         const std::string& path) {
    expect_object(j, path);
    try {
        if (j.contains("builtin")) {
            const std::string builtin = expect_string(j["builtin"], path + "/builtin");
            if (builtin == "pauli_z") return ObservableBasis<double>::computational(2, name);
            if (builtin == "pauli_x") {
                return ObservableBasis<double>(ObservableBasis<double>::pauli_x().matrix(), name);
            }
            if (builtin == "pauli_y") {
                return ObservableBasis<double>(ObservableBasis<double>::pauli_y().matrix(), name);
            }
            if (builtin == "computational" || builtin == "fourier") {
                const Eigen::Index dim = static_cast<Eigen::Index>(
                    expect_number(member(j, "dim", path), path + "/dim"));
                return builtin == "computational"
                           ? ObservableBasis<double>::computational(dim, name)
                           : ObservableBasis<double>(
                                 ObservableBasis<double>::fourier(dim).matrix(), name);
            }
            throw ParseError(path + "/builtin", "unknown builtin basis '" + builtin + "'");
        }
        return ObservableBasis<double>(
            parse_basis_vectors(member(j, "vectors", path), path + "/vectors"), name);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& err) {
        throw ParseError(path, err.what());
    }
}

const std::set<std::string>& known_task_kinds() {
    static const std::set<std::string> kinds = {
        "maassen-uffink",        "berta",
        "steering-conditional",  "steering-symmetric",
        "naive-substitution",    "steering-conditional-cv",
        "steering-symmetric-cv", "steering-symmetric-binned",
        "lhs-search"};
    return kinds;
}

bool task_uses_density(const std::string& kind) {
    return kind == "maassen-uffink" || kind == "berta" || kind == "steering-conditional" ||
           kind == "steering-symmetric" || kind == "naive-substitution";
}

bool task_uses_gaussian(const std::string& kind) {
    return kind == "steering-conditional-cv" || kind == "steering-symmetric-cv" ||
           kind == "steering-symmetric-binned";
}

std::vector<std::string> observable_keys(const std::string& kind) {
    if (kind == "maassen-uffink" || kind == "berta") return {"q", "r"};
    if (kind == "steering-conditional" || kind == "steering-symmetric" ||
        kind == "naive-substitution") {
        return {"qA", "qB", "rA", "rB"};
    }
    if (kind == "lhs-search") return {};  // qB/rB optional, handled separately
    return {};
}

void check_task_references(const TaskDocument& doc, const Task& task, const std::string& path) {
    if (task_uses_density(task.kind) || task_uses_gaussian(task.kind)) {
        const std::string name =
            expect_string(member(task.spec, "state", path), path + "/state");
        if (task_uses_density(task.kind)) {
            if (!doc.density_states.count(name)) {
                throw UnresolvedReference(path + "/state", name);
            }
        } else if (!doc.gaussian_states.count(name)) {
            throw UnresolvedReference(path + "/state", name);
        }
    }
    for (const std::string& key : observable_keys(task.kind)) {
        const std::string name = expect_string(member(task.spec, key, path), path + "/" + key);
        if (!doc.observables.count(name)) {
            throw UnresolvedReference(path + "/" + key, name);
        }
    }
    if (task.kind == "lhs-search") {
        if (task.spec.contains("qB") != task.spec.contains("rB")) {
            throw ParseError(path, "lhs-search needs both 'qB' and 'rB' or neither");
        }
        for (const char* key : {"qB", "rB"}) {
            if (task.spec.contains(key)) {
                const std::string name = expect_string(task.spec[key], path + "/" + key);
                if (!doc.observables.count(name)) {
                    throw UnresolvedReference(path + "/" + key, name);
                }
            }
        }
        if (!task.spec.contains("qB") && !task.spec.contains("dim")) {
            throw ParseError(path, "lhs-search needs 'dim' or explicit 'qB'/'rB'");
        }
    }
}

// ---------------------------------------------------------------------------
// report serialization, numbers at 12 significant digits

double round12(double v) {
    char buffer[48];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return std::strtod(buffer, nullptr);
}

json number12(double v) { return json(round12(v)); }

json terms_to_json(const std::map<std::string, double>& terms) {
    json out = json::object();
    for (const auto& [key, value] : terms) out[key] = number12(value);
    return out;
}

json witness_to_json(const WitnessReport<double>& report) {
    json out;
    out["name"] = report.name;
    out["sense"] = report.sense == BoundSense::lower ? "lower" : "upper";
    out["lhs"] = number12(report.lhs);
    out["bound"] = number12(report.bound);
    out["margin"] = number12(report.margin);
    out["verdict"] = to_string(report.verdict);
    out["lhs_terms"] = terms_to_json(report.lhs_terms);
    out["bound_terms"] = terms_to_json(report.bound_terms);
    if (!report.extras.empty()) out["extras"] = terms_to_json(report.extras);
    out["steering_witness"] = report.steering_witness;
    if (!report.steering_witness) out["contradiction"] = report.contradiction;
    return out;
}

json criterion_to_json(const LhsCriterionReport<double>& report) {
    json out;
    out["lhs"] = number12(report.lhs);
    out["conditional_q"] = number12(report.conditional_q);
    out["conditional_r"] = number12(report.conditional_r);
    out["rhs"] = number12(report.rhs);
    out["avg_von_neumann"] = number12(report.avg_von_neumann);
    json per = json::array();
    for (const auto& record : report.per_lambda) {
        per.push_back({{"weight", number12(record.weight)},
                       {"entropy_q", number12(record.entropy_q)},
                       {"entropy_r", number12(record.entropy_r)},
                       {"von_neumann", number12(record.von_neumann)}});
    }
    out["per_lambda"] = per;
    return out;
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m, bool rounded) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const auto z = m(r, c);
            row.push_back({rounded ? round12(z.real()) : z.real(),
                           rounded ? round12(z.imag()) : z.imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json ensemble_to_json(const LhsEnsemble<double>& ensemble) {
    json out;
    json weights = json::array();
    for (Eigen::Index i = 0; i < ensemble.lambda_count(); ++i) {
        weights.push_back(number12(ensemble.weights()(i)));
    }
    out["weights"] = weights;
    json states = json::array();
    for (const auto& state : ensemble.bob_states()) {
        states.push_back(complex_matrix_to_json(state.matrix(), true));
    }
    out["bob_states"] = states;
    json responses = json::object();
    for (const auto& [label, rows] : ensemble.responses()) {
        json table = json::array();
        for (const auto& row : rows) {
            json entries = json::array();
            for (Eigen::Index i = 0; i < row.size(); ++i) entries.push_back(number12(row(i)));
            table.push_back(std::move(entries));
        }
        responses[label] = std::move(table);
    }
    out["responses"] = responses;
    return out;
}

json search_to_json(const LhsSearchReport<double>& report, const LhsSearchOptions& options,
                    std::uint64_t seed) {
    json out;
    out["min_steering_sum"] = number12(report.min_steering_sum);
    out["argmin_steering_trial"] = report.argmin_steering_trial;
    out["min_avg_von_neumann"] = number12(report.min_avg_von_neumann);
    out["argmin_entropy_trial"] = report.argmin_entropy_trial;
    out["bound_log2_omega"] = number12(report.bound);
    out["trials"] = report.trials;
    out["lambda_count"] = options.lambda_count;
    out["family"] = options.family == StateFamily::pure
                        ? "pure"
                        : (options.family == StateFamily::mixed ? "mixed" : "both");
    out["seed"] = seed;
    out["argmin_criterion"] = criterion_to_json(report.argmin_criterion);
    out["argmin_ensemble"] = ensemble_to_json(report.argmin_ensemble);
    return out;
}

// ---------------------------------------------------------------------------
// task execution

BinningSpec<double> binning_from_json(const json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("lower") || !j.contains("width") || !j.contains("count")) {
        throw ParseError("", what + " needs lower, width and count");
    }
    return BinningSpec<double>(j["lower"].get<double>(), j["width"].get<double>(),
                               j["count"].get<Eigen::Index>());
}

StateFamily family_from_string(const std::string& s) {
    if (s == "pure") return StateFamily::pure;
    if (s == "mixed") return StateFamily::mixed;
    if (s == "both") return StateFamily::both;
    throw ParseError("", "unknown state family '" + s + "' (pure|mixed|both)");
}

json run_task(const TaskDocument& doc, const Task& task, const RunOptions& options) {
    const auto density = [&](const char* key = "state") -> const DensityOperator<double>& {
        return doc.density_states.at(task.spec.at(key).get<std::string>());
    };
    const auto gaussian = [&]() -> const GaussianState<double>& {
        return doc.gaussian_states.at(task.spec.at("state").get<std::string>());
    };
    const auto basis = [&](const char* key) -> const ObservableBasis<double>& {
        return doc.observables.at(task.spec.at(key).get<std::string>());
    };

    if (task.kind == "maassen-uffink") {
        return witness_to_json(maassen_uffink_check(density(), basis("q"), basis("r")));
    }
    if (task.kind == "berta") {
        return witness_to_json(berta_check(density(), basis("q"), basis("r")));
    }
    if (task.kind == "steering-conditional") {
        return witness_to_json(steering_conditional_discrete(density(), basis("qA"), basis("qB"),
                                                             basis("rA"), basis("rB")));
    }
    if (task.kind == "steering-symmetric") {
        return witness_to_json(steering_symmetric_discrete(density(), basis("qA"), basis("qB"),
                                                           basis("rA"), basis("rB")));
    }
    if (task.kind == "naive-substitution") {
        const bool separable = task.spec.value("separable", false);
        return witness_to_json(naive_substitution_demo(
            density(), basis("qA"), basis("qB"), basis("rA"), basis("rB"),
            separable ? SeparabilityHint::separable_by_construction
                      : SeparabilityHint::unknown));
    }
    if (task.kind == "steering-conditional-cv") {
        return witness_to_json(steering_conditional_cv(gaussian()));
    }
    if (task.kind == "steering-symmetric-cv") {
        return witness_to_json(steering_symmetric_cv(gaussian()));
    }
    if (task.kind == "steering-symmetric-binned") {
        const auto& state = gaussian();
        BinningSpec<double> spec_x = BinningSpec<double>::centered(1, 2);
        BinningSpec<double> spec_k = spec_x;
        if (task.spec.contains("x_binning") || task.spec.contains("k_binning")) {
            spec_x = binning_from_json(task.spec.at("x_binning"), "x_binning");
            spec_k = binning_from_json(task.spec.at("k_binning"), "k_binning");
        } else {
            const auto bins = task.spec.value<Eigen::Index>("bins", 64);
            const double range = task.spec.value("range_sigmas", 6.0);
            const double sigma_x =
                std::max(state.std_dev(Quadrature::x_a), state.std_dev(Quadrature::x_b));
            const double sigma_k =
                std::max(state.std_dev(Quadrature::k_a), state.std_dev(Quadrature::k_b));
            spec_x = BinningSpec<double>::centered(sigma_x, bins, range);
            spec_k = BinningSpec<double>::centered(sigma_k, bins, range);
        }
        return witness_to_json(steering_symmetric_binned(state, spec_x, spec_k));
    }
    if (task.kind == "lhs-search") {
        LhsSearchOptions search;
        search.lambda_count = task.spec.value<Eigen::Index>("lambdas", 8);
        search.family = family_from_string(task.spec.value("family", "both"));
        search.threads = options.threads;
        const std::uint64_t seed = task.spec.value("seed", options.seed);
        const std::uint64_t trials = task.spec.value<std::uint64_t>("trials", 1000);
        if (task.spec.contains("qB")) {
            const auto& q_b = doc.observables.at(task.spec.at("qB").get<std::string>());
            const auto& r_b = doc.observables.at(task.spec.at("rB").get<std::string>());
            return search_to_json(random_lhs_search(q_b, r_b, trials, seed, search), search,
                                  seed);
        }
        const auto dim = task.spec.at("dim").get<Eigen::Index>();
        const auto q_b = ObservableBasis<double>::computational(dim);
        const auto r_b = ObservableBasis<double>::fourier(dim);
        return search_to_json(random_lhs_search(q_b, r_b, trials, seed, search), search, seed);
    }
    throw ParseError("", "unknown task kind '" + task.kind + "'");
}

const char* error_type_name(const Error& err) {
    if (dynamic_cast<const QuadratureFailure*>(&err)) return "QuadratureFailure";
    if (dynamic_cast<const EigensolveFailure*>(&err)) return "EigensolveFailure";
    if (dynamic_cast<const UnresolvedReference*>(&err)) return "UnresolvedReference";
    if (dynamic_cast<const UnknownSchema*>(&err)) return "UnknownSchema";
    if (dynamic_cast<const InvalidState*>(&err)) return "InvalidState";
    if (dynamic_cast<const ParseError*>(&err)) return "ParseError";
    if (dynamic_cast<const StateValidationError*>(&err)) return "InvalidState";
    if (dynamic_cast<const UnequalDimensions*>(&err)) return "UnequalDimensions";
    if (dynamic_cast<const DimensionMismatch*>(&err)) return "DimensionMismatch";
    if (dynamic_cast<const BadSubsystem*>(&err)) return "BadSubsystem";
    if (dynamic_cast<const MissingResponse*>(&err)) return "MissingResponse";
    if (dynamic_cast<const NonpositiveVariance*>(&err)) return "NonpositiveVariance";
    if (dynamic_cast<const NotPositiveDefinite*>(&err)) return "NotPositiveDefinite";
    return "Error";
}

}  // namespace

TaskDocument parse_document(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ParseError("", std::string("not well-formed JSON: ") + err.what());
    }
    expect_object(root, "");
    const std::string schema = expect_string(member(root, "schema", ""), "/schema");
    if (schema != task_schema_version) {
        throw UnknownSchema("/schema", "unrecognized schema version '" + schema + "'");
    }

    TaskDocument doc;
    doc.schema = schema;

    if (root.contains("states")) {
        expect_object(root["states"], "/states");
        for (const auto& [name, record] : root["states"].items()) {
            const std::string path = "/states/" + name;
            expect_object(record, path);
            const std::string kind = expect_string(member(record, "kind", path), path + "/kind");
            if (kind == "density") {
                doc.density_states.emplace(name, parse_density(record, path));
            } else if (kind == "gaussian") {
                doc.gaussian_states.emplace(name, parse_gaussian(record, path));
            } else if (kind == "tmsv") {
                const double r = expect_number(member(record, "r", path), path + "/r");
                try {
                    doc.gaussian_states.emplace(name, tmsv(r));
                } catch (const Error& err) {
                    throw ParseError(path, err.what());
                }
            } else {
                throw ParseError(path + "/kind", "unknown state kind '" + kind + "'");
            }
        }
    }

    if (root.contains("observables")) {
        expect_object(root["observables"], "/observables");
        for (const auto& [name, record] : root["observables"].items()) {
            doc.observables.emplace(name,
                                    parse_observable(name, record, "/observables/" + name));
        }
    }

    if (root.contains("tasks")) {
        expect_array(root["tasks"], "/tasks");
        for (std::size_t i = 0; i < root["tasks"].size(); ++i) {
            const std::string path = "/tasks/" + std::to_string(i);
            const json& record = root["tasks"][i];
            expect_object(record, path);
            Task task;
            task.kind = expect_string(member(record, "kind", path), path + "/kind");
            if (!known_task_kinds().count(task.kind)) {
                throw ParseError(path + "/kind", "unknown task kind '" + task.kind + "'");
            }
            task.spec = record;
            check_task_references(doc, task, path);
            doc.tasks.push_back(std::move(task));
        }
    }
    return doc;
}

nlohmann::json document_to_json(const TaskDocument& doc) {
    json out;
    out["schema"] = doc.schema;
    json states = json::object();
    for (const auto& [name, state] : doc.density_states) {
        json record;
        record["kind"] = "density";
        json dims = json::array();
        for (Eigen::Index d : state.dims()) dims.push_back(d);
        record["dims"] = dims;
        record["matrix"] = complex_matrix_to_json(state.matrix(), false);
        states[name] = std::move(record);
    }
    for (const auto& [name, state] : doc.gaussian_states) {
        json record;
        record["kind"] = "gaussian";
        json mean = json::array();
        for (Eigen::Index i = 0; i < 4; ++i) mean.push_back(state.mean()(i));
        record["mean"] = mean;
        json cov = json::array();
        for (Eigen::Index r = 0; r < 4; ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < 4; ++c) row.push_back(state.cov()(r, c));
            cov.push_back(std::move(row));
        }
        record["cov"] = cov;
        states[name] = std::move(record);
    }
    out["states"] = states;

    json observables = json::object();
    for (const auto& [name, basis] : doc.observables) {
        json record;
        record["vectors"] = complex_matrix_to_json(basis.matrix().transpose(), false);
        observables[name] = std::move(record);
    }
    out["observables"] = observables;

    json tasks = json::array();
    for (const auto& task : doc.tasks) tasks.push_back(task.spec);
    out["tasks"] = tasks;
    return out;
}

bool documents_equal(const TaskDocument& a, const TaskDocument& b) {
    return document_to_json(a) == document_to_json(b);
}

nlohmann::json run_document(const TaskDocument& doc, const RunOptions& options) {
    std::vector<json> records(doc.tasks.size());
    detail::parallel_for(doc.tasks.size(), options.threads, [&](std::size_t i) {
        const Task& task = doc.tasks[i];
        json record;
        record["index"] = i;
        record["kind"] = task.kind;
        record["task"] = task.spec;
        try {
            record["report"] = run_task(doc, task, options);
        } catch (const Error& err) {
            record["error"] = {{"type", error_type_name(err)}, {"message", err.what()}};
        } catch (const json::exception& err) {
            record["error"] = {{"type", "ParseError"},
                               {"message", std::string("bad task parameter: ") + err.what()}};
        }
        records[i] = std::move(record);
    });

    json out;
    out["schema"] = report_schema_version;
    out["seed"] = options.seed;
    json reports = json::array();
    for (auto& record : records) reports.push_back(std::move(record));
    out["reports"] = reports;
    return out;
}

TaskDocument contradiction_demo_document() {
    const json doc_json = {
        {"schema", task_schema_version},
        {"states",
         {{"correlated_mixed",
           {{"kind", "density"},
            {"dims", {2, 2}},
            {"matrix",
             {{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}},
              {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}, {0.0, 0.0}},
              {{0.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}},
              {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}}}}}}},
        {"observables",
         {{"sigma_z", {{"builtin", "pauli_z"}}}, {"sigma_x", {{"builtin", "pauli_x"}}}}},
        {"tasks",
         {{{"kind", "naive-substitution"},
           {"state", "correlated_mixed"},
           {"qA", "sigma_z"},
           {"qB", "sigma_z"},
           {"rA", "sigma_x"},
           {"rB", "sigma_x"},
           {"separable", true}},
          {{"kind", "steering-conditional"},
           {"state", "correlated_mixed"},
           {"qA", "sigma_z"},
           {"qB", "sigma_z"},
           {"rA", "sigma_x"},
           {"rB", "sigma_x"}},
          {{"kind", "berta"}, {"state", "correlated_mixed_B"}, {"q", "sigma_z"}, {"r", "sigma_x"}}}}};
    json with_marginal = doc_json;
    with_marginal["states"]["correlated_mixed_B"] = {
        {"kind", "density"},
        {"dims", {2}},
        {"matrix", {{{0.5, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.5, 0.0}}}}};
    return parse_document(with_marginal.dump());
}

std::string render_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

std::string summarize_report(const nlohmann::json& report) {
    std::ostringstream os;
    for (const auto& record : report.at("reports")) {
        os << "task " << record.at("index").get<std::size_t>() << " ["
           << record.at("kind").get<std::string>() << "] ";
        if (record.contains("error")) {
            os << "error " << record["error"]["type"].get<std::string>() << ": "
               << record["error"]["message"].get<std::string>() << "\n";
            continue;
        }
        const json& body = record.at("report");
        if (record.at("kind") == "lhs-search") {
            os << "min steering sum " << body["min_steering_sum"].get<double>()
               << " vs bound " << body["bound_log2_omega"].get<double>()
               << ", min avg S " << body["min_avg_von_neumann"].get<double>() << " over "
               << body["trials"].get<std::uint64_t>() << " trials\n";
            continue;
        }
        os << body["verdict"].get<std::string>() << " (lhs " << body["lhs"].get<double>()
           << ", bound " << body["bound"].get<double>() << ", margin "
           << body["margin"].get<double>() << ")";
        if (body.contains("contradiction") && body["contradiction"].get<bool>()) {
            os << " CONTRADICTION: separable state beats the substituted bound;"
                  " that bound is not a steering witness";
        }
        os << "\n";
    }
    return os.str();
}

bool report_has_numerical_failure(const nlohmann::json& report) {
    for (const auto& record : report.at("reports")) {
        if (record.contains("error")) {
            const std::string type = record["error"]["type"].get<std::string>();
            if (type == "QuadratureFailure" || type == "EigensolveFailure") return true;
        }
    }
    return false;
}

}  // namespace steerkit
