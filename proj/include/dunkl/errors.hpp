#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dunkl {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a precondition or a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure (Newton, quadrature, bisection, fit) did not converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Installs the sink for soft warnings (validity-window checks and the like).
/// Returns the previous handler. The default handler writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace dunkl
