// Copyright 2026 The Tactful Authors
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

// Umbrella header for the library. The command-line front end lives in
// tactful/cli.hpp and is not included here.

#pragma once

#include "tactful/channel.hpp"
#include "tactful/edit.hpp"
#include "tactful/error.hpp"
#include "tactful/eval.hpp"
#include "tactful/extract.hpp"
#include "tactful/http.hpp"
#include "tactful/lexicon.hpp"
#include "tactful/message.hpp"
#include "tactful/perception.hpp"
#include "tactful/pipeline.hpp"
#include "tactful/planner.hpp"
#include "tactful/realizer.hpp"
#include "tactful/resources.hpp"
#include "tactful/serialize.hpp"
#include "tactful/service.hpp"
#include "tactful/translator.hpp"
