/*
 * Copyright 2026 The cylindric Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Everything except json_io.hpp, which also needs vendor/json.hpp on the include path.

#include <cylindric/atom_structure.hpp>
#include <cylindric/atomic_game.hpp>
#include <cylindric/ca_axioms.hpp>
#include <cylindric/certificate.hpp>
#include <cylindric/clique_guarded.hpp>
#include <cylindric/common.hpp>
#include <cylindric/ef_game.hpp>
#include <cylindric/formula.hpp>
#include <cylindric/graph.hpp>
#include <cylindric/iso.hpp>
#include <cylindric/loosely_guarded.hpp>
#include <cylindric/lyndon.hpp>
#include <cylindric/monk.hpp>
#include <cylindric/network.hpp>
#include <cylindric/rainbow.hpp>
#include <cylindric/rep_game.hpp>
#include <cylindric/report.hpp>
#include <cylindric/scripted.hpp>
#include <cylindric/set_algebra.hpp>
#include <cylindric/subalgebra.hpp>
