// Copyright 2026 The qiprune Authors
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


// Umbrella header.

#pragma once

#include "qiprune/circuit.hpp"
#include "qiprune/experiment.hpp"
#include "qiprune/gradients.hpp"
#include "qiprune/io.hpp"
#include "qiprune/linalg.hpp"
#include "qiprune/pruner.hpp"
#include "qiprune/qalgebra.hpp"
#include "qiprune/qmetric.hpp"
#include "qiprune/tasks.hpp"
#include "qiprune/verify.hpp"
