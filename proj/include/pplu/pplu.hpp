// Copyright 2026 The PPLu Authors.
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

#ifndef PPLU_PPLU_HPP_
#define PPLU_PPLU_HPP_

#include "pplu/common.hpp"
#include "pplu/corpus.hpp"
#include "pplu/io.hpp"
#include "pplu/log_math.hpp"
#include "pplu/metrics.hpp"
#include "pplu/model.hpp"
#include "pplu/ngram.hpp"
#include "pplu/ranking.hpp"
#include "pplu/split.hpp"
#include "pplu/sweep.hpp"
#include "pplu/synthetic.hpp"
#include "pplu/unigram.hpp"
#include "pplu/vocabulary.hpp"

#endif  // PPLU_PPLU_HPP_
