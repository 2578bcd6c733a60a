// Copyright 2026 The wcorr Authors
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

#ifndef WCORR_WCORR_HPP
#define WCORR_WCORR_HPP

#include "wcorr/bases.hpp"
#include "wcorr/commands.hpp"
#include "wcorr/conveyance.hpp"
#include "wcorr/error.hpp"
#include "wcorr/estimator.hpp"
#include "wcorr/io.hpp"
#include "wcorr/pointer.hpp"
#include "wcorr/qcore.hpp"

#endif  // WCORR_WCORR_HPP
