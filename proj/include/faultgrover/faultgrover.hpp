// Copyright 2026 The faultgrover Authors
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

#pragma once

#include "faultgrover/density.hpp"
#include "faultgrover/ensemble.hpp"
#include "faultgrover/experiments.hpp"
#include "faultgrover/geometry.hpp"
#include "faultgrover/oracle.hpp"
#include "faultgrover/reduced_state.hpp"
#include "faultgrover/search_space.hpp"
#include "faultgrover/table.hpp"
