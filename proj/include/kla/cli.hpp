#ifndef KLA_CLI_HPP
#define KLA_CLI_HPP

namespace kla {

int cli_main(int argc, char** argv);

} // namespace kla

#include "kla/cli_impl.hpp"

#endif
