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

#pragma once

namespace sbls {

inline constexpr const char* kToolName = "sbls";
inline constexpr const char* kToolVersion = "1.0.0";

// Version of the JSON report layout. Bumped on any incompatible change;
// `sbls explain` refuses reports written with a different version.
inline constexpr int kReportVersion = 1;

}  // namespace sbls
