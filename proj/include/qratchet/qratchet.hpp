// Copyright 2026 The qratchet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qratchet/engine.hpp"
#include "qratchet/infotheory.hpp"
#include "qratchet/model.hpp"
#include "qratchet/philox.hpp"
#include "qratchet/qdense.hpp"
#include "qratchet/range_coder.hpp"
#include "qratchet/ratchetmc.hpp"
#include "qratchet/record_io.hpp"
