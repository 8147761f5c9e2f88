#ifndef KLA_CLI_IMPL_HPP
#define KLA_CLI_IMPL_HPP

#include <cstdio>

namespace kla {

inline int cli_main(int, char**) {
    std::puts("kla: not wired up yet");
    return 2;
}

} // namespace kla

#endif
