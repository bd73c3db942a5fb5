#pragma once

#include <stdexcept>
#include <string>

namespace tfd {

// Bad input data or parameters (self-loops, out-of-range vertices,
// malformed partitions, family parameters violating their bounds).
class validation_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Text input that cannot be parsed. Carries a 1-based line number.
class parse_error : public std::runtime_error {
  public:
    parse_error(const std::string& msg, long line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    long line() const { return line_; }

  private:
    long line_;
};

// The margin parameter fails the feasibility system required by the
// decycling guarantee.
class infeasible_mu_error : public validation_error {
  public:
    explicit infeasible_mu_error(double mu)
        : validation_error("mu = " + std::to_string(mu) +
                           " does not satisfy the feasibility inequalities"),
          mu_(mu) {}

    double mu() const { return mu_; }

  private:
    double mu_;
};

} // namespace tfd
