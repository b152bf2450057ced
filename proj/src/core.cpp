// Copyright 2026 The Authors.
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

#include "submod/core.hpp"

#include <algorithm>

namespace submod {

void Objective::check_element(ElementId e) const {
  if (e >= ground_.size()) {
    throw InvalidInput("element " + std::to_string(e) +
                       " out of range for ground set of size " +
                       std::to_string(ground_.size()));
  }
}

double Objective::eval(std::span<const ElementId> set,
                       OracleCounter& counter) const {
  for (ElementId e : set) check_element(e);
  if (set.size() > 1) {
    std::vector<ElementId> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InvalidInput("duplicate element in evaluation set");
    }
  }
  counter.add(1);
  return eval_set(set);
}

double Objective::marginal(ElementId e, const SelectionContext& ctx) const {
  check_element(e);
  if (ctx.contains(e)) {
    throw InvalidInput("marginal of element " + std::to_string(e) +
                       " already in the selection");
  }
  ctx.counter().add(1);
  return marginal_gain(e, ctx);
}

void Objective::commit(ElementId e, SelectionContext& ctx) const {
  check_element(e);
  if (ctx.contains(e)) {
    throw InvalidInput("duplicate commit of element " + std::to_string(e));
  }
  apply_commit(e, ctx);
  ctx.record_commit(e);
}

}  // namespace submod
