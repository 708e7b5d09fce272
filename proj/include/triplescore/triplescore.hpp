// Copyright 2026 The triplescore Authors.
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

#ifndef TRIPLESCORE_TRIPLESCORE_HPP_
#define TRIPLESCORE_TRIPLESCORE_HPP_

#include "triplescore/baselines.hpp"
#include "triplescore/config.hpp"
#include "triplescore/corpus.hpp"
#include "triplescore/embedding_store.hpp"
#include "triplescore/entity_key.hpp"
#include "triplescore/error.hpp"
#include "triplescore/evaluation.hpp"
#include "triplescore/features.hpp"
#include "triplescore/lbfgs.hpp"
#include "triplescore/matrix.hpp"
#include "triplescore/ordinal_model.hpp"
#include "triplescore/pipeline.hpp"
#include "triplescore/serialization.hpp"
#include "triplescore/triple.hpp"

#endif  // TRIPLESCORE_TRIPLESCORE_HPP_
