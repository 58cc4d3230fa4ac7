#pragma once

#include <stdexcept>

namespace lifelog {

// Lookup of an id (record, history entry) that does not exist.
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lifelog
