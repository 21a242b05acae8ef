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

#include "qedcc/amplitudes.hpp"

#include <utility>

namespace qedcc {

namespace {

// Canonicalizes (i, j, a, b) to (i<j, a<b) and returns the sign picked up; 0
// for repeated indices.
int canonicalize(std::size_t& i, std::size_t& j, std::size_t& a, std::size_t& b) {
  if (i == j || a == b) return 0;
  int sign = 1;
  if (i > j) { std::swap(i, j); sign = -sign; }
  if (a > b) { std::swap(a, b); sign = -sign; }
  return sign;
}

}  // namespace

std::complex<double> Amplitudes::get_t2(std::size_t i, std::size_t j, std::size_t a,
                                        std::size_t b) const {
  int sign = canonicalize(i, j, a, b);
  if (sign == 0) return {0.0, 0.0};
  const Key4 key{i, j, a, b};
  for (const auto* block : {&t2, &t2_one_pair, &t2_two_pair}) {
    auto it = block->find(key);
    if (it != block->end()) return static_cast<double>(sign) * it->second;
  }
  return {0.0, 0.0};
}

void Amplitudes::set_t2(std::size_t i, std::size_t j, std::size_t a, std::size_t b,
                        std::complex<double> value) {
  int sign = canonicalize(i, j, a, b);
  if (sign == 0) return;
  t2[Key4{i, j, a, b}] = static_cast<double>(sign) * value;
}

void Amplitudes::set_t2_one_pair(std::size_t i, std::size_t j, std::size_t a,
                                 std::size_t pprime, std::complex<double> value) {
  int sign = canonicalize(i, j, a, pprime);
  if (sign == 0) return;
  t2_one_pair[Key4{i, j, a, pprime}] = static_cast<double>(sign) * value;
}

void Amplitudes::set_t2_two_pair(std::size_t i, std::size_t j, std::size_t pprime,
                                 std::size_t qprime, std::complex<double> value) {
  int sign = canonicalize(i, j, pprime, qprime);
  if (sign == 0) return;
  t2_two_pair[Key4{i, j, pprime, qprime}] = static_cast<double>(sign) * value;
}

}  // namespace qedcc
