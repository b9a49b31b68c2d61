#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace steerkit {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class UnequalDimensions : public DimensionMismatch {
public:
    using DimensionMismatch::DimensionMismatch;
};

class BadSubsystem : public Error {
public:
    using Error::Error;
};

class MissingResponse : public Error {
public:
    using Error::Error;
};

class NonpositiveVariance : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

// Numerical failures (exit code 3 in the CLI).
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class EigensolveFailure : public Error {
public:
    using Error::Error;
};

enum class StateDefect { non_hermitian, non_unit_trace, not_positive };

inline const char* to_string(StateDefect kind) {
    switch (kind) {
        case StateDefect::non_hermitian: return "NonHermitian";
        case StateDefect::non_unit_trace: return "NonUnitTrace";
        case StateDefect::not_positive: return "NotPositive";
    }
    return "?";
}

struct DefectRecord {
    StateDefect kind;
    double defect;  // measured size of the violation
};

// Raised by density-operator validation; lists every violated invariant.
class StateValidationError : public Error {
public:
    explicit StateValidationError(std::vector<DefectRecord> defects)
        : Error(format(defects)), defects_(std::move(defects)) {}

    const std::vector<DefectRecord>& defects() const { return defects_; }

    bool has(StateDefect kind) const {
        for (const auto& d : defects_) {
            if (d.kind == kind) return true;
        }
        return false;
    }

    double defect(StateDefect kind) const {
        for (const auto& d : defects_) {
            if (d.kind == kind) return d.defect;
        }
        return 0.0;
    }

private:
    static std::string format(const std::vector<DefectRecord>& defects) {
        std::ostringstream os;
        os << "density operator validation failed:";
        for (const auto& d : defects) {
            os << " " << to_string(d.kind) << "(defect " << d.defect << ")";
        }
        return os.str();
    }

    std::vector<DefectRecord> defects_;
};

}  // namespace steerkit
