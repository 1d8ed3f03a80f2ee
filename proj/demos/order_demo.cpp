// Prints the order of convergence s_k and efficiency index for small k.
#include <iostream>

#include "secantx/secantx.hpp"

using namespace secantx;

int main() {
    for (int k = 1; k <= 10; ++k) {
        OrderProfile p = make_order_profile(k);
        std::cout << "k=" << k << "  s_k=" << format(p.s_k, 10) << "  EI=" << format(p.efficiency_index, 10);
        if (p.lower_bound)
            std::cout << "  bounds=(" << format(*p.lower_bound, 6) << ", "
                      << format(*p.upper_bound, 6) << ")";
        std::cout << "\n";
    }
    return 0;
}
