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

#ifndef QEDCC_AMPLITUDES_HPP
#define QEDCC_AMPLITUDES_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <map>

namespace qedcc {

// Cluster amplitudes over global level indices. Doubles are stored once per
// canonical key (i < j, a < b within each block); accessors resolve the
// antisymmetry signs. The three doubles blocks are distinguished by the
// sector of the target levels: both positive (t2), one negative-sector target
// (t2_one_pair, key order (i, j, positive a, negative p')), both negative
// (t2_two_pair).
struct Amplitudes {
  using Key2 = std::pair<std::size_t, std::size_t>;
  using Key4 = std::array<std::size_t, 4>;

  std::map<Key2, std::complex<double>> t1;
  std::map<Key4, std::complex<double>> t2;
  std::map<Key4, std::complex<double>> t2_one_pair;
  std::map<Key4, std::complex<double>> t2_two_pair;

  int iterations = 0;
  double residual_norm = 0.0;

  bool empty() const {
    return t1.empty() && t2.empty() && t2_one_pair.empty() && t2_two_pair.empty();
  }

  // Sign-resolved doubles lookup across all three blocks; zero when the key
  // is unknown. Throws on repeated indices via sign cancellation (returns 0).
  std::complex<double> get_t2(std::size_t i, std::size_t j, std::size_t a,
                              std::size_t b) const;

  // Canonicalizing setters used by the solvers.
  void set_t2(std::size_t i, std::size_t j, std::size_t a, std::size_t b,
              std::complex<double> value);
  void set_t2_one_pair(std::size_t i, std::size_t j, std::size_t a,
                       std::size_t pprime, std::complex<double> value);
  void set_t2_two_pair(std::size_t i, std::size_t j, std::size_t pprime,
                       std::size_t qprime, std::complex<double> value);
};

}  // namespace qedcc

#endif
