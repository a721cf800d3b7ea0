#pragma once

#include <string>

namespace mailbox {

/// A failed property: which check, and a human-readable witness.
struct Finding {
    std::string check;
    std::string detail;
};

} // namespace mailbox
