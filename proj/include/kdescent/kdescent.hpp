// Copyright 2026 The kdescent Authors
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

#include "baselines.hpp"
#include "circuit.hpp"
#include "config.hpp"
#include "descent.hpp"
#include "experiments.hpp"
#include "io.hpp"
#include "rng.hpp"
#include "selftest.hpp"
#include "simulator.hpp"
#include "surrogate.hpp"
#include "svg.hpp"
