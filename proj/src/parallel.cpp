// SPDX-License-Identifier: Apache-2.0
#include "momlat/parallel.hpp"

#include <cstdlib>
#include <string>

namespace momlat
{
unsigned default_threads()
{
    if (char const* env = std::getenv("MOMLAT_THREADS"))
    {
        try
        {
            int const n = std::stoi(env);
            if (n > 0)
                return static_cast<unsigned>(n);
        }
        catch (std::exception const&)
        {
        }
    }
    unsigned const hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace momlat
