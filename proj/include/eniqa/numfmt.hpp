// Copyright 2026 The ENIQA Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENIQA_NUMFMT_HPP_
#define ENIQA_NUMFMT_HPP_

#include <string>
#include <string_view>

namespace eniqa {

// Shortest decimal form that parses back to the identical double.
std::string FormatDouble(double value);

// Whole-string parse; returns false on any trailing garbage.
bool ParseDouble(std::string_view text, double& value);
bool ParseInt(std::string_view text, long long& value);

std::string_view Trim(std::string_view text);

}  // namespace eniqa

#endif  // ENIQA_NUMFMT_HPP_
