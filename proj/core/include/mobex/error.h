// Copyright (c) 2026 The mobex Authors.
// All rights reserved.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mobex {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Polygon has fewer than three distinct vertices or zero area.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Input file could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Table or geometry collection violates its schema (duplicate keys, missing columns).
class SchemaError : public Error {
public:
    using Error::Error;
};

class MalformedGeocodeError : public Error {
public:
    using Error::Error;
};

/// Row-level consistency failure, e.g. category counts not summing to the total.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A weighted reduction was asked for over zero total weight.
class EmptyPopulationError : public Error {
public:
    using Error::Error;
};

class InsufficientGroupsError : public Error {
public:
    using Error::Error;
};

class InsufficientTractsError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

class DegenerateVarianceError : public Error {
public:
    using Error::Error;
};

/// Caller broke an API precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Wraps a failure with the pipeline stage that raised it.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace mobex
