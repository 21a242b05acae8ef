/*
 * Copyright 2026 The qedcc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QEDCC_ERRORS_HPP
#define QEDCC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qedcc {

// Failure taxonomy. "input"-flavoured kinds map to process exit code 2,
// "numerical"-flavoured kinds to exit code 1.
enum class ErrorKind {
  structural,   // malformed model data: bad dimensions, unknown keys, bad JSON
  argument,     // out-of-range indices, invalid enum values
  configuration,// inconsistent option combinations, absent channel enabled
  capacity,     // combinatorial or index-space overflow
  domain,       // input outside a formula's domain of validity
  contract,     // a guaranteed internal relation failed to hold
  degenerate,   // vanishing energy denominator
  divergence,   // iteration failed to converge
  numerical,    // non-Hermitian input beyond tolerance, defective matrices, ...
};

const char* to_string(ErrorKind kind);

// True for kinds that indicate bad input rather than a failed computation.
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Divergence failures carry the residual-norm history of the attempted solve.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, std::vector<double> history)
      : Error(ErrorKind::divergence, message), history_(std::move(history)) {}

  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace qedcc

#endif
