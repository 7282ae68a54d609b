#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ecrl/ltlf/formula.hpp"

namespace ecrl::ltlf {

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error("syntax error at offset " + std::to_string(offset) + ": " +
              message),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Concrete syntax, loosest binding first:
//   <->   (left)    ->  (right)    |   &
//   U     (right)
//   prefix: ! X (next) N (weak next) F (eventually) G (always)
//   atoms: identifiers declared in `atoms`, true, false, last, ( ... )
Formula parse(std::string_view text, const AtomSet& atoms);

}  // namespace ecrl::ltlf
