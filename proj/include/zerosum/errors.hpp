#pragma once

#include <stdexcept>
#include <string>

namespace zerosum {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateMatrix : Error {
    explicit DegenerateMatrix(const std::string& msg = "degenerate matrix: all candidate determinants below threshold")
        : Error(msg) {}
};

struct IndexOutOfRange : Error {
    explicit IndexOutOfRange(const std::string& msg = "index out of range") : Error(msg) {}
};

struct InfeasibleAnchor : Error {
    explicit InfeasibleAnchor(const std::string& msg = "anchor strategy too close to the simplex boundary for the box radius")
        : Error(msg) {}
};

struct ModeMismatch : Error {
    explicit ModeMismatch(const std::string& msg = "feedback does not match the configured mode") : Error(msg) {}
};

struct UnsampledCell : Error {
    explicit UnsampledCell(const std::string& msg = "cell has no samples") : Error(msg) {}
};

struct InconsistentObservation : Error {
    explicit InconsistentObservation(const std::string& msg = "observation inconsistent with the played strategy")
        : Error(msg) {}
};

struct RewardOutOfRange : Error {
    explicit RewardOutOfRange(const std::string& msg = "reward outside [0,1]") : Error(msg) {}
};

struct SupportMismatch : Error {
    explicit SupportMismatch(const std::string& msg = "row and column supports have different sizes") : Error(msg) {}
};

struct InvalidFamilyParams : Error {
    explicit InvalidFamilyParams(const std::string& msg) : Error(msg) {}
};

struct HorizonExhausted : Error {
    explicit HorizonExhausted(const std::string& msg = "horizon exhausted") : Error(msg) {}
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string& msg)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
          line(line_), column(column_) {}
};

}  // namespace zerosum
