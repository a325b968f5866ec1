#pragma once

#include "agencid/error.hpp"

#include <variant>

namespace agencid::pairing {

// Elements produced by one backend and handed to another surface here.
template <typename T, typename Variant>
const T& rep_as(const Variant& v)
{
    if (const T* p = std::get_if<T>(&v)) return *p;
    throw Error(ErrorCode::backend_mismatch, "element was produced by a different backend");
}

}  // namespace agencid::pairing
