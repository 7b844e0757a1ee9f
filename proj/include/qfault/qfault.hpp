// Copyright 2026 The qfault Authors
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


/**
 * @file qfault.hpp
 * @brief Umbrella header.
 */

#pragma once

#include "qfault/channels.hpp"
#include "qfault/circuit.hpp"
#include "qfault/circuit_io.hpp"
#include "qfault/common.hpp"
#include "qfault/contraction.hpp"
#include "qfault/faults.hpp"
#include "qfault/generators.hpp"
#include "qfault/oracle.hpp"
#include "qfault/parallel.hpp"
#include "qfault/random.hpp"
#include "qfault/simulator.hpp"
#include "qfault/sweep.hpp"
#include "qfault/tensor.hpp"
#include "qfault/tensornet.hpp"
