#pragma once

namespace ecm {

inline const char* version_string() { return "0.1.0"; }

}  // namespace ecm
