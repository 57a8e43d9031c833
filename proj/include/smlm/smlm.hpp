/*
 * Copyright 2026 The SMLM Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "smlm/common.hpp"
#include "smlm/data_model.hpp"
#include "smlm/eval_harness.hpp"
#include "smlm/likelihood_model.hpp"
#include "smlm/loss_augmented_inference.hpp"
#include "smlm/multivariate_losses.hpp"
#include "smlm/sharded_gradient.hpp"
#include "smlm/sparse_fista_trainer.hpp"
#include "smlm/types.hpp"
