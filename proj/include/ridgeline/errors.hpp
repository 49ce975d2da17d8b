#pragma once

#include <stdexcept>
#include <string>

namespace ridgeline {

// Invalid values inside domain types (coordinates, distances, bandwidths).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Out-of-range or inconsistent caller-supplied parameters.
struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data that defeats an operation (coincident points, empty survivor sets).
struct DegenerateDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Base for CSV ingestion failures.
struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingFileError : IngestError {
  using IngestError::IngestError;
};

struct SchemaError : IngestError {
  using IngestError::IngestError;
};

struct HeaderError : IngestError {
  using IngestError::IngestError;
};

// A numerical sanity check failed; indicates a bug, not bad input.
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ridgeline
