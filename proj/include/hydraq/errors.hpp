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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hydraq {

/// Broad failure categories. The CLI maps these onto process exit codes.
enum class ErrorClass {
    Capacity,
    Index,
    Shape,
    Configuration,
    Data,
    Schema,
    Parse,
    DegenerateFeature,
    UndefinedVariance,
    Integrity,
    Divergence,
};

std::string_view error_class_name(ErrorClass cls);

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    Error(ErrorClass cls, const std::string &message)
        : std::runtime_error(message), cls_(cls) {}

    [[nodiscard]] ErrorClass error_class() const noexcept { return cls_; }

  private:
    ErrorClass cls_;
};

#define HYDRAQ_DEFINE_ERROR(Name, Cls)                                         \
    class Name : public Error {                                                \
      public:                                                                  \
        explicit Name(const std::string &message)                              \
            : Error(ErrorClass::Cls, message) {}                               \
    }

HYDRAQ_DEFINE_ERROR(CapacityError, Capacity);
HYDRAQ_DEFINE_ERROR(IndexError, Index);
HYDRAQ_DEFINE_ERROR(ShapeError, Shape);
HYDRAQ_DEFINE_ERROR(ConfigError, Configuration);
HYDRAQ_DEFINE_ERROR(DataError, Data);
HYDRAQ_DEFINE_ERROR(SchemaError, Schema);
HYDRAQ_DEFINE_ERROR(ParseError, Parse);
HYDRAQ_DEFINE_ERROR(DegenerateFeatureError, DegenerateFeature);
HYDRAQ_DEFINE_ERROR(UndefinedVarianceError, UndefinedVariance);
HYDRAQ_DEFINE_ERROR(IntegrityError, Integrity);

#undef HYDRAQ_DEFINE_ERROR

/// Raised when training produces a non-finite loss.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string &message, int epoch)
        : Error(ErrorClass::Divergence, message), epoch_(epoch) {}

    [[nodiscard]] int epoch() const noexcept { return epoch_; }

  private:
    int epoch_;
};

} // namespace hydraq
