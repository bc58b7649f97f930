#pragma once

#include <stdexcept>
#include <string>

namespace netdyn {

// Invalid user-supplied configuration (bad generator arguments, unknown
// registry names, inconsistent dimensions, malformed flag values).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or unreadable input file.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation applied outside its mathematical domain (e.g. diameter of a
// disconnected graph).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A mutation proposal that does not match the topology it is applied to.
class IntegrityError : public std::runtime_error {
public:
    explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

// The vector field produced a non-finite value during integration.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, double t)
        : std::runtime_error(msg), time(t) {}
    double time;
};

// The adaptive step size fell below the configured floor.
class StiffnessError : public std::runtime_error {
public:
    StiffnessError(const std::string& msg, double t)
        : std::runtime_error(msg), time(t) {}
    double time;
};

} // namespace netdyn
