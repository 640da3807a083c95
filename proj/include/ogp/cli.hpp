#pragma once

namespace ogp {
inline int run_cli(int, char**) { return 2; }  // placeholder
}  // namespace ogp
