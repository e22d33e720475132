// SPDX-License-Identifier: Apache-2.0
//
// uavchan: air-ground channel synthesis and measurement analysis for vertical UAV flights
// Copyright (C) 2026 The uavchan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Umbrella header for the numerical core (no file-format dependencies; see io.hpp).

#ifndef UAVCHAN_UAVCHAN_HPP
#define UAVCHAN_UAVCHAN_HPP

#include "diagnostics.hpp"
#include "extraction.hpp"
#include "fitting.hpp"
#include "geometry.hpp"
#include "propagation.hpp"
#include "stochastic.hpp"
#include "synthesis.hpp"
#include "units.hpp"

#endif
