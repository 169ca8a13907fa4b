// SPDX-License-Identifier: Apache-2.0
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


#ifndef AIRCOMP_AIRCOMP_HPP
#define AIRCOMP_AIRCOMP_HPP

#include "aircomp/analysis.hpp"
#include "aircomp/channel.hpp"
#include "aircomp/experiments.hpp"
#include "aircomp/numerics.hpp"
#include "aircomp/phase_shift.hpp"
#include "aircomp/protocol.hpp"
#include "aircomp/validation.hpp"

#endif  // AIRCOMP_AIRCOMP_HPP
