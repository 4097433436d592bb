#pragma once

#include "pdfuse/error.h"

#include <optional>

/// Error code thrown by `f`, or nullopt when it returns normally.
template <class F>
std::optional<pdfuse::Errc> thrown_code(F&& f) {
    try {
        f();
    } catch (const pdfuse::Error& e) {
        return e.code();
    }
    return std::nullopt;
}
