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

#ifndef ENIQA_SELFTEST_HPP_
#define ENIQA_SELFTEST_HPP_

#include <string>
#include <vector>

namespace eniqa {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Dataset-free invariant checks: entropy bounds, MI symmetry, filter DC gain,
// probability simplex and the SROCC rank oracle.
std::vector<SelftestCheck> RunSelftest();

}  // namespace eniqa

#endif  // ENIQA_SELFTEST_HPP_
