// Copyright 2026 The iss-sim Authors
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

#pragma once

#include <string>
#include <vector>

#include "iss/trace.hpp"

namespace iss::check {

enum class Verdict { Pass, Fail, NotEvaluable };

std::string_view to_string(Verdict v);

struct PropertyResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;  // first violation, or why the property was not evaluable
};

struct Report {
  std::vector<PropertyResult> results;

  bool ok() const;  // no property failed
  const PropertyResult* find(std::string_view name) const;
  Verdict verdict(std::string_view name) const;
};

/// Evaluates every trace property. Pure: the same trace gives the same
/// report. Liveness properties are not evaluable on traces without a
/// run-end record or whose run ended before the network stabilized.
Report verify(const trace::Trace& trace);

/// One line per property: "<name> PASS|FAIL|NOT-EVALUABLE [detail]".
std::string format(const Report& report);

}  // namespace iss::check
