// Copyright 2026 The permkiss Authors. All Rights Reserved.
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

#include "permkiss/kissing.h"

#include <algorithm>
#include <string>

namespace permkiss {

SizeBeyondTableError::SizeBeyondTableError(std::int64_t n)
    : Error("size beyond table: n=" + std::to_string(n) +
            " exceeds the largest supported n=" +
            std::to_string(KissingTable::max_supported_n()) + " (m=" +
            std::to_string(KissingTable::kMaxDimension) + ")") {}

std::int64_t KissingTable::lower_bound(int m) {
  if (m < 1 || m > kMaxDimension) {
    throw ContractViolation("kissing table has no entry for dimension " +
                            std::to_string(m));
  }
  return kLowerBounds[static_cast<std::size_t>(m - 1)];
}

int rank_for(std::int64_t n) {
  if (n < 1) {
    throw ContractViolation("rank_for requires n >= 1, got " +
                            std::to_string(n));
  }
  const auto& bounds = KissingTable::kLowerBounds;
  // Bounds are strictly increasing, so the first qualifying entry is the
  // smallest m.
  const auto it = std::lower_bound(bounds.begin(), bounds.end(), n);
  if (it == bounds.end()) throw SizeBeyondTableError(n);
  return static_cast<int>(it - bounds.begin()) + 1;
}

}  // namespace permkiss
