// The vendored single header has no separate forward-declaration file;
// headers that only need the fwd declarations pull the full header.
#pragma once
#include <json.hpp>
