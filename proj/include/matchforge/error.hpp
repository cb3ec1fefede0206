#pragma once

#include <stdexcept>
#include <string>

namespace matchforge {

// Malformed files, bad node ids, bad scripts: anything the caller handed us.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A search hit its configured state budget before finishing.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Broken internal invariant. Seeing one of these means a bug in this library
// or a caller that bypassed validation.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw InternalError(what);
}

}  // namespace matchforge
