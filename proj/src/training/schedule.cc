// src/training/schedule.cc

// Copyright 2026  The SVTS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "svts/training/schedule.h"

#include <cmath>
#include <numbers>
#include <string>

#include "svts/core/error.h"

namespace svts::training {

ScheduleState ScheduleState::Make(int64_t total_steps, double peak_lr, double warmup_fraction) {
  ScheduleState s;
  s.total_steps = total_steps;
  s.warmup_steps = std::llround(warmup_fraction * static_cast<double>(total_steps));
  s.peak_lr = peak_lr;
  s.Validate();
  return s;
}

void ScheduleState::Validate() const {
  if (total_steps < 1) throw ValidationError("schedule needs at least one step");
  if (warmup_steps < 0 || warmup_steps > total_steps)
    throw ValidationError("warmup steps outside [0, total]");
  if (step < 0 || step > total_steps)
    throw ValidationError("schedule step " + std::to_string(step) + " outside [0, " +
                          std::to_string(total_steps) + "]");
  if (!(peak_lr >= 0.0)) throw ValidationError("peak learning rate must be non-negative");
}

double LrAt(const ScheduleState &s) {
  s.Validate();
  if (s.step < s.warmup_steps)
    return s.peak_lr * static_cast<double>(s.step) / static_cast<double>(s.warmup_steps);
  const int64_t span = s.total_steps - s.warmup_steps;
  if (span == 0) return s.peak_lr;
  const double progress = static_cast<double>(s.step - s.warmup_steps) / static_cast<double>(span);
  if (progress >= 1.0) return 0.0;
  return s.peak_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

}  // namespace svts::training
