/*
 * Copyright 2026 The mtqual Authors.
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

#pragma once

#include <string>
#include <string_view>

namespace mtqual {

/// One pass of the original Porter (1980) suffix-stripping algorithm.
/// Words that are not entirely lowercase ASCII letters, or are shorter than
/// three characters, are returned unchanged.
std::string porter_stem(std::string_view word);

/// porter_stem iterated to a fixed point, so stem(stem(w)) == stem(w).
std::string stem(std::string_view word);

}  // namespace mtqual
