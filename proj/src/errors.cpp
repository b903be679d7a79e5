// Copyright 2026 The hydraq Authors
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

#include "hydraq/errors.hpp"

namespace hydraq {

std::string_view error_class_name(ErrorClass cls) {
    switch (cls) {
    case ErrorClass::Capacity:
        return "capacity";
    case ErrorClass::Index:
        return "index";
    case ErrorClass::Shape:
        return "shape";
    case ErrorClass::Configuration:
        return "configuration";
    case ErrorClass::Data:
        return "data";
    case ErrorClass::Schema:
        return "schema";
    case ErrorClass::Parse:
        return "parse";
    case ErrorClass::DegenerateFeature:
        return "degenerate_feature";
    case ErrorClass::UndefinedVariance:
        return "undefined_variance";
    case ErrorClass::Integrity:
        return "integrity";
    case ErrorClass::Divergence:
        return "divergence";
    }
    return "unknown";
}

} // namespace hydraq
