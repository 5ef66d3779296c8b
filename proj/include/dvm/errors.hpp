#pragma once

#include <stdexcept>
#include <string>

namespace dvm {

// Process exit codes used by the CLI when an error escapes to the top level.
enum class ErrorCode : int {
    CliUsage = 1,
    FileNotFound = 2,
    Domain = 3,
    Parse = 4,
    Internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& m = "division by zero") : Error(ErrorCode::Internal, m) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(ErrorCode::Domain, m) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(ErrorCode::Parse, m) {}
};

struct FileNotFound : Error {
    explicit FileNotFound(const std::string& m) : Error(ErrorCode::FileNotFound, m) {}
};

struct MassMismatch : Error {
    explicit MassMismatch(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

struct NormsDoNotDominate : Error {
    explicit NormsDoNotDominate(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

struct InfeasibleZ : Error {
    explicit InfeasibleZ(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

struct InfeasibleExplicitMatching : Error {
    explicit InfeasibleExplicitMatching(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

// Signals a protocol bug: the weighted uncovered set is provably nonempty
// for lambda in [1/2, 1].
struct EmptyUncoveredSet : Error {
    explicit EmptyUncoveredSet(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

struct MalformedProgram : Error {
    explicit MalformedProgram(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

struct VertexMismatch : Error {
    explicit VertexMismatch(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

struct CertificateMismatch : Error {
    explicit CertificateMismatch(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

struct InconsistentProfile : Error {
    explicit InconsistentProfile(const std::string& m) : Error(ErrorCode::Internal, m) {}
};

}  // namespace dvm
