#pragma once

namespace crowdfusion {

constexpr const char* kVersionString = "crowdfuse 1.0.0";

} // namespace crowdfusion
