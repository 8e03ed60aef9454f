// include/svts/training/schedule.h

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

#ifndef SVTS_TRAINING_SCHEDULE_H_
#define SVTS_TRAINING_SCHEDULE_H_

#include <cstdint>

namespace svts::training {

// Linear warmup from 0 to peak_lr over warmup_steps, then cosine decay to 0
// at total_steps.
struct ScheduleState {
  int64_t step = 0;
  int64_t total_steps = 1;
  int64_t warmup_steps = 0;
  double peak_lr = 1e-3;

  // warmup_steps = round(warmup_fraction * total_steps).
  static ScheduleState Make(int64_t total_steps, double peak_lr, double warmup_fraction = 0.1);
  void Validate() const;
};

double LrAt(const ScheduleState &state);

}  // namespace svts::training

#endif  // SVTS_TRAINING_SCHEDULE_H_
