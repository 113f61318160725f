// Copyright 2026 The qfnn Authors.
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

// Convenience header pulling in the whole library.

#pragma once

#include "qfnn/bench.hpp"
#include "qfnn/checkpoint.hpp"
#include "qfnn/error.hpp"
#include "qfnn/fnn.hpp"
#include "qfnn/instance_gen.hpp"
#include "qfnn/instance_io.hpp"
#include "qfnn/oracle.hpp"
#include "qfnn/parameter_shift.hpp"
#include "qfnn/postprocess.hpp"
#include "qfnn/qced.hpp"
#include "qfnn/qubo.hpp"
#include "qfnn/rng.hpp"
#include "qfnn/rydberg.hpp"
#include "qfnn/trainer.hpp"
