// Prints the integer homology of every built-in space.

#include <iostream>

#include "identispace/topology.hpp"

int main()
{
    using namespace identispace;
    for (SpaceName space : {SpaceName::Circle, SpaceName::Sphere, SpaceName::Torus, SpaceName::KleinBottle,
                            SpaceName::ProjectivePlane}) {
        const ChainComplex complex = builtin_complex(space);
        std::cout << to_string(space) << ":";
        for (int k = 0; k <= complex.dimension(); ++k)
            std::cout << "  H_" << k << " = " << format_group(homology(complex, k));
        std::cout << '\n';
    }
}
