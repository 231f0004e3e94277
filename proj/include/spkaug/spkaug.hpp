// spkaug/spkaug.hpp

// Copyright 2026  spkaug authors

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

#ifndef SPKAUG_SPKAUG_HPP_
#define SPKAUG_SPKAUG_HPP_

#include "spkaug/audio.hpp"
#include "spkaug/augment.hpp"
#include "spkaug/corpus.hpp"
#include "spkaug/error.hpp"
#include "spkaug/metrics.hpp"
#include "spkaug/mixer.hpp"
#include "spkaug/resample.hpp"
#include "spkaug/rng.hpp"
#include "spkaug/spectrum.hpp"
#include "spkaug/wav.hpp"
#include "spkaug/wsola.hpp"

#endif  // SPKAUG_SPKAUG_HPP_
