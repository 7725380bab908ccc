#pragma once

#include <stdexcept>
#include <string>

namespace ldp {

class UnsupportedError : public std::runtime_error {
public:
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

class OutOfRegimeError : public std::runtime_error {
public:
    explicit OutOfRegimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ldp
