// Copyright 2026 The fisherdpi Authors
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

#include "fisherdpi/bayes.hpp"
#include "fisherdpi/dpi.hpp"
#include "fisherdpi/error.hpp"
#include "fisherdpi/fisher.hpp"
#include "fisherdpi/linalg.hpp"
#include "fisherdpi/model.hpp"
#include "fisherdpi/nelder_mead.hpp"
#include "fisherdpi/optimize.hpp"
#include "fisherdpi/prior.hpp"
#include "fisherdpi/quantum.hpp"
#include "fisherdpi/random.hpp"
