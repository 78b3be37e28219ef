// Copyright 2026 The wenduality Authors
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

namespace wenduality {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define WENDUALITY_DEFINE_ERROR(Name)         \
    class Name : public Error {               \
    public:                                   \
        using Error::Error;                   \
    }

WENDUALITY_DEFINE_ERROR(InvalidSpec);
WENDUALITY_DEFINE_ERROR(DegenerateLattice);
WENDUALITY_DEFINE_ERROR(SiteOutOfRange);
WENDUALITY_DEFINE_ERROR(DimensionMismatch);
WENDUALITY_DEFINE_ERROR(TooLarge);
WENDUALITY_DEFINE_ERROR(NotMappable);
WENDUALITY_DEFINE_ERROR(NumericalFailure);
WENDUALITY_DEFINE_ERROR(IndexOutOfRange);
WENDUALITY_DEFINE_ERROR(InsufficientPlateau);
WENDUALITY_DEFINE_ERROR(ConfigError);

#undef WENDUALITY_DEFINE_ERROR

/// Raised by the iterative eigensolver; carries iteration diagnostics.
class NotConverged : public Error {
public:
    NotConverged(const std::string& what, int iterations, double residual)
        : Error(what + " (iterations=" + std::to_string(iterations) +
                ", residual=" + std::to_string(residual) + ")"),
          iterations_(iterations),
          residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

}  // namespace wenduality
