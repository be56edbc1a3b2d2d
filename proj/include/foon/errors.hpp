#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace foon {

/// Base class for every error this library reports deliberately.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// An input file could not be read or violates its format. File parsing is
/// all-or-nothing: nothing parsed so far is kept when this is thrown.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A line-oriented file has a bad record. Carries the source name and the
/// 1-based line number.
class MalformedLine : public ParseError {
public:
    MalformedLine(std::string source, std::size_t line, std::string reason)
        : ParseError(source + ":" + std::to_string(line) + ": " + reason),
          source_(std::move(source)),
          line_(line),
          reason_(std::move(reason)) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string source_;
    std::size_t line_;
    std::string reason_;
};

/// A structured-object (kitchen) document is not in the expected shape.
class MalformedDocument : public ParseError {
public:
    explicit MalformedDocument(const std::string& reason)
        : ParseError("kitchen document: " + reason) {}
};

/// A motion success rate falls outside [0, 1].
class RateOutOfRange : public ParseError {
public:
    RateOutOfRange(std::string source, std::size_t line, std::string label, double rate)
        : ParseError(source + ":" + std::to_string(line) + ": rate " +
                     std::to_string(rate) + " for motion '" + label +
                     "' is outside [0, 1]"),
          label_(std::move(label)),
          rate_(rate) {}

    const std::string& label() const noexcept { return label_; }
    double rate() const noexcept { return rate_; }

private:
    std::string label_;
    double rate_;
};

/// The same motion label appears twice in a success-rate file.
class DuplicateLabel : public ParseError {
public:
    DuplicateLabel(std::string source, std::size_t line, std::string label)
        : ParseError(source + ":" + std::to_string(line) + ": duplicate motion '" +
                     label + "'"),
          label_(std::move(label)) {}

    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

/// A path could not be opened for reading or writing.
class FileError : public ParseError {
public:
    explicit FileError(const std::string& path)
        : ParseError("cannot open file: " + path) {}
};

/// No functional unit produces the requested goal and it is not available.
class GoalNotFound : public Error {
public:
    explicit GoalNotFound(std::string goal)
        : Error("goal not found: no functional unit produces '" + goal + "'"),
          goal_(std::move(goal)) {}

    const std::string& goal() const noexcept { return goal_; }

private:
    std::string goal_;
};

/// The search committed to a chain that needs an object nobody can produce.
class UnreachableGoal : public Error {
public:
    explicit UnreachableGoal(std::string blocking_key)
        : Error("unreachable goal: '" + blocking_key +
                "' has no producer, no substitute, and is not in the kitchen"),
          blocking_key_(std::move(blocking_key)) {}

    const std::string& blocking_key() const noexcept { return blocking_key_; }

private:
    std::string blocking_key_;
};

/// Iterative deepening exhausted its depth ceiling without a solution.
class NoSolutionWithinDepth : public Error {
public:
    explicit NoSolutionWithinDepth(std::size_t ceiling)
        : Error("no solution within depth ceiling " + std::to_string(ceiling)),
          ceiling_(ceiling) {}

    std::size_t ceiling() const noexcept { return ceiling_; }

private:
    std::size_t ceiling_;
};

/// The retrieved units cannot be ordered so that producers precede consumers.
class CyclicDependency : public Error {
public:
    CyclicDependency() : Error("task tree has cyclically dependent units") {}
};

/// Name-only goal lookup matched more than one object-state variant.
class AmbiguousGoal : public Error {
public:
    AmbiguousGoal(const std::string& name, std::vector<std::string> matches)
        : Error(make_message(name, matches)), matches_(std::move(matches)) {}

    const std::vector<std::string>& matches() const noexcept { return matches_; }

private:
    static std::string make_message(const std::string& name,
                                    const std::vector<std::string>& matches) {
        std::string msg = "goal name '" + name + "' is ambiguous; candidates:";
        for (const auto& m : matches) msg += " " + m;
        return msg;
    }

    std::vector<std::string> matches_;
};

}  // namespace foon
