#pragma once

#include <stdexcept>
#include <string>

namespace edgeworth {

// Process exit codes used by the command line tool.
enum class ExitCode : int { ok = 0, check_failed = 1, validation = 2, computation = 3, oracle = 4 };

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ExitCode::validation, "domain error: " + w) {}
};

struct InvalidProfile : Error {
    explicit InvalidProfile(const std::string& w) : Error(ExitCode::validation, "invalid profile: " + w) {}
};

struct QuadratureError : Error {
    explicit QuadratureError(const std::string& w) : Error(ExitCode::computation, "quadrature: " + w) {}
};

struct NotFound : Error {
    explicit NotFound(const std::string& w) : Error(ExitCode::computation, "not found: " + w) {}
};

struct OracleInfeasible : Error {
    explicit OracleInfeasible(const std::string& w) : Error(ExitCode::oracle, "oracle: " + w) {}
};

} // namespace edgeworth
