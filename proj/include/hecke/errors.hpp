#pragma once

#include <stdexcept>
#include <string>

namespace hecke {

// Operand/ring misuse: foreign elements, non-units, malformed descriptors.
class RingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation needed more π-adic digits than the working level carries.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Size guard tripped (tables or enumerations too large for desk scale).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructed object failed its self-check (isomorphisms, caches, tables).
class AuditError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stabilizers did not transport: the two fields are not close enough.
class TransferError : public AuditError {
 public:
  using AuditError::AuditError;
};

// Two independent computations of the same quantity disagreed.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hecke
