#pragma once

#include <stdexcept>

namespace matpath {

// Bad input or a violated precondition. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No feasible solution under the requested constraints. CLI exit code 3.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative scheme ran out of iterations before reaching tolerance.
// CLI exit code 4.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace matpath
