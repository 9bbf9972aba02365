/*
 * Copyright 2026 The altref Authors
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

#include "altref/arena.hpp"
#include "altref/dot.hpp"
#include "altref/error.hpp"
#include "altref/random.hpp"
#include "altref/reductions.hpp"
#include "altref/relations.hpp"
#include "altref/succ_index.hpp"
#include "altref/systems.hpp"
