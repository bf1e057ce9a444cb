#pragma once

#include <stdexcept>
#include <string>

namespace ncg {

/// Root of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operands of a binary vector operation have different lengths.
class dimension_error : public error {
  public:
    using error::error;
};

/// An objective (or an arithmetic result) produced NaN or Inf.
class evaluation_error : public error {
  public:
    using error::error;
};

/// A conjugate-coefficient rule hit a zero denominator.
class degenerate_direction_error : public error {
  public:
    using error::error;
};

/// A line-search routine was handed a direction with non-negative slope.
class non_descent_error : public error {
  public:
    using error::error;
};

/// The Armijo test never failed while doubling the trial step.
class unbounded_descent_error : public error {
  public:
    using error::error;
};

/// The bracket endpoint data no longer satisfies its invariants.
class bracket_corruption_error : public error {
  public:
    using error::error;
};

/// The line search ran out of iterations or bracket width.
class line_search_stall : public error {
  public:
    line_search_stall(const std::string& what, double best_alpha)
        : error(what), best_alpha_(best_alpha) {}

    /// Largest step seen that satisfies the Armijo condition (may be 0).
    [[nodiscard]] double best_alpha() const noexcept { return best_alpha_; }

  private:
    double best_alpha_;
};

/// Invalid parameter combination.
class config_error : public error {
  public:
    using error::error;
};

/// A performance profile was requested over an incomplete solver x problem grid.
class incomplete_grid_error : public error {
  public:
    using error::error;
};

class io_error : public error {
  public:
    using error::error;
};

}  // namespace ncg
