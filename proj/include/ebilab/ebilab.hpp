// Copyright 2026 The ebilab authors
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
//
// Umbrella header: pulls in the whole library.

#ifndef EBILAB_EBILAB_HPP
#define EBILAB_EBILAB_HPP

#include "ebilab/coalition.hpp"
#include "ebilab/common.hpp"
#include "ebilab/equilibrium.hpp"
#include "ebilab/payoff.hpp"
#include "ebilab/prodfn.hpp"
#include "ebilab/quadrature.hpp"
#include "ebilab/rational.hpp"
#include "ebilab/runner.hpp"
#include "ebilab/scenario.hpp"
#include "ebilab/stage_one.hpp"
#include "ebilab/stage_two.hpp"

#endif  // EBILAB_EBILAB_HPP
