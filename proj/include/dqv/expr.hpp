#pragma once

#include <stdexcept>
#include <string>

#include "dqv/series.hpp"

namespace dqv {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at column " + std::to_string(pos + 1) + ")"),
        position(pos) {}
  std::size_t position;
};

// Parses the scenario expression grammar: terms joined by +/-, each term a
// '*'-product of an optional rational coefficient and generators x1..xd or
// u1..ud, y1..yd, th1..thd, h, t with optional integer exponents.
// Example: "3/2*x1^2*y2*th1 - h*y1".
FormalSeries parse_series(const std::string& text, const ModelPtr& model);

}  // namespace dqv
