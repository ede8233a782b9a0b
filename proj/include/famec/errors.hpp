// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace famec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// H^H H is singular or too ill-conditioned to invert; users are not separable.
class RankDeficientChannel : public Error {
public:
    using Error::Error;
};

class ZeroRate : public Error {
public:
    using Error::Error;
};

class ZeroFrequency : public Error {
public:
    using Error::Error;
};

class ScenarioInvalid : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace famec
