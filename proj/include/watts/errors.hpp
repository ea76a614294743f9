#pragma once

#include <stdexcept>
#include <string>

namespace wlab {

class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateError : public std::invalid_argument {
public:
    explicit DegenerateError(const std::string& what) : std::invalid_argument(what) {}
};

class OrderingError : public std::invalid_argument {
public:
    explicit OrderingError(const std::string& what) : std::invalid_argument(what) {}
};

class StepError : public std::runtime_error {
public:
    explicit StepError(const std::string& what) : std::runtime_error(what) {}
};

class SizeError : public std::length_error {
public:
    explicit SizeError(const std::string& what) : std::length_error(what) {}
};

class TimeoutError : public std::runtime_error {
public:
    explicit TimeoutError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& field, const std::string& what, int line = 0)
        : std::invalid_argument(format(field, what, line)), field_(field), line_(line) {}

    const std::string& field() const { return field_; }
    int line() const { return line_; }

private:
    static std::string format(const std::string& field, const std::string& what, int line) {
        std::string s = "config";
        if (line > 0) s += " line " + std::to_string(line);
        if (!field.empty()) s += " field '" + field + "'";
        return s + ": " + what;
    }

    std::string field_;
    int line_;
};

class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wlab
