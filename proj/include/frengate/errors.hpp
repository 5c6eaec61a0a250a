#ifndef FRENGATE_ERRORS_HPP
#define FRENGATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace frengate {

// Configuration problems (bad keys, unparsable files, invalid values).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Iterative procedures that fail to reach their stopping tolerance.
class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical-domain violations (pole proximity, undersized windows) reuse
// std::domain_error so callers can catch the standard hierarchy.

}  // namespace frengate

#endif
