#ifndef LATDIFF_ERRORS_HPP
#define LATDIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace latdiff {

// Thrown when a request would blow past a configured size ceiling
// (table limits, enumeration counts, modulus products).  The message
// always names the ceiling that was hit, so the CLI can report it.
class SizeLimitError : public std::length_error {
public:
    explicit SizeLimitError(const std::string& what) : std::length_error(what) {}
};

// Everything else uses the standard vocabulary:
//   std::domain_error      -- value outside the mathematical domain
//                             (content/visibility of 0, series at s <= 1)
//   std::invalid_argument  -- malformed call (non-coprime moduli, empty
//                             config, degenerate region, bad dimension)

}  // namespace latdiff

#endif
