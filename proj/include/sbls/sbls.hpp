// Copyright 2026 The SBLS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header for the soft-biometric leakage scoring library.

#pragma once

#include "sbls/alignment.hpp"
#include "sbls/assignment.hpp"
#include "sbls/attribute_leakage.hpp"
#include "sbls/auc.hpp"
#include "sbls/compose.hpp"
#include "sbls/config.hpp"
#include "sbls/csv.hpp"
#include "sbls/digest.hpp"
#include "sbls/error.hpp"
#include "sbls/linkage.hpp"
#include "sbls/math.hpp"
#include "sbls/pipeline.hpp"
#include "sbls/report_io.hpp"
#include "sbls/rng.hpp"
#include "sbls/schema.hpp"
#include "sbls/subgroup.hpp"
#include "sbls/synth.hpp"
#include "sbls/tables.hpp"
#include "sbls/version.hpp"
