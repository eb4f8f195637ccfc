// Shim so the canonical <nlohmann/json.hpp> include path resolves to the
// vendored single header.
#pragma once
#include <json.hpp>
