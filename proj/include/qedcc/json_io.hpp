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

#ifndef QEDCC_JSON_IO_HPP
#define QEDCC_JSON_IO_HPP

#include <string>

#include "qedcc/types.hpp"

namespace qedcc {

// Model files are versioned JSON documents. Complex scalars are [re, im]
// pairs; tensors are nested arrays over level indices. Unknown keys are
// structural errors at every nesting depth that carries a fixed schema.
inline constexpr int kSchemaVersion = 1;

ModelSystem model_from_json_text(const std::string& text);
std::string model_to_json_text(const ModelSystem& system);

ModelSystem model_from_json_file(const std::string& path);
void model_to_json_file(const ModelSystem& system, const std::string& path);

}  // namespace qedcc

#endif
