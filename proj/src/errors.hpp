// Copyright 2026 The oqrw authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OQRW_ERRORS_HPP
#define OQRW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace oqrw {

// Failure categories raised by the library.  The coarse grouping mirrors the
// process exit codes of the command-line tool: document problems (Parse,
// Schema) map to "parse error", Inconsistent maps to "internal inconsistency",
// and everything else maps to "validation failure".
enum class Errc {
  NotHermitian,       // matrix expected to be Hermitian is not, beyond tolerance
  NotPsd,             // matrix has an eigenvalue below the negative tolerance
  NotStochastic,      // rows do not sum to 1 or entries are negative
  NotNormalized,      // operator family or state breaks its normalization
  DimensionMismatch,  // matrix shape inconsistent with the model dimension
  UnknownSite,        // site label not present in the model
  MissingOperator,    // a path step has no transition operator
  IndexOutOfRange,    // step/depth index beyond the computed trajectory
  BoundaryViolation,  // state support touches the truncation window edge
  Parse,              // document is not syntactically valid
  Schema,             // document parses but required fields are missing/ill-typed
  Inconsistent,       // internal cross-check failed; never silently resolved
  Unsupported,        // operation requires a model kind/shape this one lacks
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPsd: return "NotPsd";
    case Errc::NotStochastic: return "NotStochastic";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnknownSite: return "UnknownSite";
    case Errc::MissingOperator: return "MissingOperator";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::BoundaryViolation: return "BoundaryViolation";
    case Errc::Parse: return "Parse";
    case Errc::Schema: return "Schema";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace oqrw

#endif  // OQRW_ERRORS_HPP
