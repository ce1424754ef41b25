#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collspin {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A spin (or collective pair) has degenerated to zero norm. Normalization
/// is undefined there; reaching it during a step indicates solver breakdown.
class ZeroSpinError : public Error {
  public:
    explicit ZeroSpinError(std::size_t index, const std::string& context = "")
        : Error("zero spin at index " + std::to_string(index) +
                (context.empty() ? "" : " (" + context + ")")),
          index_(index) {}

    std::size_t index() const { return index_; }

  private:
    std::size_t index_;
};

/// A neighbor gap became non-positive (particle crossing); the chain
/// potential assumes ordered particles.
class NonpositiveSeparationError : public Error {
  public:
    NonpositiveSeparationError(std::size_t bond, double gap)
        : Error("non-positive separation " + std::to_string(gap) + " at bond " +
                std::to_string(bond)),
          bond_(bond),
          gap_(gap) {}

    std::size_t bond() const { return bond_; }
    double gap() const { return gap_; }

  private:
    std::size_t bond_;
    double gap_;
};

/// The implicit solver exhausted its iteration budget.
class NoConvergenceError : public Error {
  public:
    NoConvergenceError(int iterations, double residual)
        : Error("fixed-point iteration did not converge after " +
                std::to_string(iterations) +
                " iterations (residual " + std::to_string(residual) + ")"),
          iterations_(iterations),
          residual_(residual) {}

    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

  private:
    int iterations_;
    double residual_;
};

/// Tableaux with different stage counts were combined.
class StageMismatchError : public Error {
  public:
    explicit StageMismatchError(const std::string& msg) : Error(msg) {}
};

/// A step inside a time loop failed; carries the step index.
class IntegrationError : public Error {
  public:
    IntegrationError(std::size_t step, const std::string& msg)
        : Error("step " + std::to_string(step) + ": " + msg), step_(step) {}

    std::size_t step() const { return step_; }

  private:
    std::size_t step_;
};

/// A text input (config or scheme file) failed to parse; carries the line.
class ParseError : public Error {
  public:
    ParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    int line() const { return line_; }

  private:
    int line_;
};

}  // namespace collspin
